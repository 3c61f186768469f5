# empty init to make 'suites' a package
