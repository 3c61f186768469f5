# core/models.py
from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np

from core.fdalg import Tolerance

# failure descriptions kept per property
MAX_REASONS = 5


@dataclass
class CheckResult:
    """
    One property checked by a self-test suite, passed around the bus and
    into the aggregator.

    suite    – suite that produced the check, e.g. "comparison"
    prop     – property name, e.g. "schroeder_bernstein"
    passed   – true when every case held
    cases    – number of instances checked
    worst    – largest residual seen (0.0 for exact integer checks)
    reasons  – human-readable descriptions of the first failing cases
    extra    – any additional structured metadata
    """

    suite: str
    prop: str
    passed: bool
    cases: int
    worst: float = 0.0
    reasons: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Tally:
    """Accumulates the cases of one property before it is published."""

    suite: str
    prop: str
    cases: int = 0
    failures: int = 0
    worst: float = 0.0
    reasons: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, *, residual: float = 0.0, reason: str = "") -> bool:
        self.cases += 1
        self.worst = max(self.worst, float(residual))
        if not ok:
            self.failures += 1
            if len(self.reasons) < MAX_REASONS:
                self.reasons.append(reason or f"case {self.cases}")
        return ok

    def record_all(self, ok: np.ndarray, describe: Callable[[int], str]) -> bool:
        """Record a whole boolean array of cases; describe(i) names flat index i on failure."""
        flat = np.asarray(ok, dtype=bool).ravel()
        self.cases += int(flat.size)
        bad = np.flatnonzero(~flat)
        self.failures += int(bad.size)
        for i in bad[: max(0, MAX_REASONS - len(self.reasons))]:
            self.reasons.append(describe(int(i)))
        return not bad.size

    def result(self) -> CheckResult:
        return CheckResult(
            suite=self.suite,
            prop=self.prop,
            passed=self.failures == 0 and self.cases > 0,
            cases=self.cases,
            worst=self.worst,
            reasons=list(self.reasons),
            extra=dict(self.extra, failures=self.failures),
        )


@dataclass(frozen=True)
class SuiteContext:
    """What every suite sees besides its own sizes: tolerances and the seed."""

    tol: Tolerance
    seed: int

    def rng(self, salt: str) -> np.random.Generator:
        # crc32 instead of hash(): stable across interpreter runs
        return np.random.default_rng([self.seed, zlib.crc32(salt.encode())])
