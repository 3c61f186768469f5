# core/selftest.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from time import perf_counter
from typing import Any, Callable, Dict, List, Optional, Sequence

from core.aggregator import aggregate_checks, summarize
from core.bus import CheckBus
from core.errors import InputError
from core.models import CheckResult, SuiteContext
from core.status_report import StatusReporter

from suites.cardinal_laws import run as run_cardinal_laws
from suites.comparison import run as run_comparison
from suites.diagonalization import run as run_diagonalization
from suites.dimension import run as run_dimension
from suites.fdalg_laws import run as run_fdalg_laws
from suites.functoriality import run as run_functoriality
from suites.masa_props import run as run_masa_props

log = logging.getLogger(__name__)

SuiteFn = Callable[..., None]

SUITES: Dict[str, SuiteFn] = {
    "cardinal_laws": run_cardinal_laws,
    "comparison": run_comparison,
    "diagonalization": run_diagonalization,
    "dimension": run_dimension,
    "fdalg_laws": run_fdalg_laws,
    "functoriality": run_functoriality,
    "masa_props": run_masa_props,
}


@dataclass
class SelftestOutcome:
    checks: List[CheckResult]
    status: Dict[str, Any]
    summary: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return bool(self.summary["passed"]) and all(s["ok"] for s in self.status.values())


def suite_params(settings: Any) -> Dict[str, Dict[str, Any]]:
    """Keyword arguments for each suite, read off the settings sizes."""
    return {
        "cardinal_laws": {},
        "comparison": {
            "max_blocks": settings.comparison_max_blocks,
            "max_size": settings.comparison_max_size,
            "isometry_pairs": settings.isometry_pairs,
        },
        "diagonalization": {"instances": settings.diag_instances},
        "dimension": {
            "max_atoms": settings.dimension_max_atoms,
            "max_index": settings.dimension_max_index,
        },
        "fdalg_laws": {},
        "functoriality": {"homs": settings.functor_homs},
        "masa_props": {"divisibility_instances": settings.divisibility_instances},
    }


def _guarded(
    name: str,
    fn: SuiteFn,
    reporter: StatusReporter,
    bus: CheckBus,
    ctx: SuiteContext,
    params: Dict[str, Any],
) -> bool:
    """Run one suite; a crash is logged and recorded instead of aborting the whole self-test."""
    error: Optional[Exception] = None
    started = perf_counter()
    try:
        fn(bus, ctx, **params)
    except Exception as exc:  # noqa: BLE001
        error = exc
        log.exception("suite %s raised", name)
    finally:
        reporter.record(name, perf_counter() - started, error)
    return error is None


def run_selftest(
    ctx: SuiteContext,
    params: Dict[str, Dict[str, Any]],
    only: Optional[Sequence[str]] = None,
) -> SelftestOutcome:
    """Run the suites one after another in name order and collect their checks."""
    names = sorted(only) if only else sorted(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s): {', '.join(unknown)}")

    bus = CheckBus()
    reporter = StatusReporter()
    for name in names:
        log.info("suite %s: start %s", name, params.get(name, {}))
        if not _guarded(name, SUITES[name], reporter, bus, ctx, params.get(name, {})):
            log.warning("suite %s stopped early, its checks may be partial", name)

    checks = aggregate_checks(bus.drain())
    summary = summarize(checks)
    reporter.report()
    outcome = SelftestOutcome(checks=checks, status=reporter.summary(), summary=summary)
    if outcome.passed:
        log.info("Self-test passed: %s properties", len(checks))
    else:
        log.warning("Self-test FAILED: %s", summary["failed_properties"] or "suite crash")
    return outcome
