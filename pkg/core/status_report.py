# core/status_report.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

log = logging.getLogger(__name__)

# crash messages are cut to this many characters in the log
_ERROR_WIDTH = 80


@dataclass(frozen=True)
class SuiteRun:
    runtime: float
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class StatusReporter:
    """Runtime and crash bookkeeping for the self-test suites."""

    _runs: Dict[str, SuiteRun] = field(default_factory=dict)

    def record(self, suite_name: str, runtime: float, error: Optional[BaseException] = None) -> None:
        message = None if error is None else f"{type(error).__name__}: {error}"
        self._runs[suite_name] = SuiteRun(runtime=runtime, error=message)

    @property
    def all_ok(self) -> bool:
        return all(run.ok for run in self._runs.values())

    def summary(self, timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        for name, run in sorted(self._runs.items()):
            entry: Dict[str, Any] = {"ok": run.ok, "error": run.error}
            if timing:
                entry["runtime_ms"] = int(run.runtime * 1000)
            out[name] = entry
        return out

    def report(self) -> None:
        if not self._runs:
            log.info("self-test status: nothing ran")
            return
        for name, run in sorted(self._runs.items()):
            ms = int(run.runtime * 1000)
            if run.ok:
                log.info("suite %s ok in %d ms", name, ms)
            else:
                log.warning("suite %s CRASHED in %d ms (%s)", name, ms, run.error[:_ERROR_WIDTH])
