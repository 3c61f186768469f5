# core/aggregator.py
from __future__ import annotations

import logging
from collections import defaultdict
from typing import Any, Dict, List

from core.models import MAX_REASONS, CheckResult

log = logging.getLogger(__name__)


def aggregate_checks(results: List[CheckResult]) -> List[CheckResult]:
    """
    Merge check results that report the same property.

    - Groups results by (suite, prop)
    - Within each group:
        * passed only if every part passed
        * cases are summed, worst residual is the max
        * reasons merged (deduped, order-preserving, capped)
        * extra dicts merged (later keys overwrite earlier)
    - Output is sorted by (suite, prop) so reports do not depend on run order.
    """
    if not results:
        return []

    grouped: Dict[tuple[str, str], List[CheckResult]] = defaultdict(list)
    for res in results:
        grouped[(res.suite, res.prop)].append(res)

    final: List[CheckResult] = []
    for (suite, prop), group in sorted(grouped.items()):
        merged_reasons: List[str] = []
        for res in group:
            for r in res.reasons:
                if r not in merged_reasons and len(merged_reasons) < MAX_REASONS:
                    merged_reasons.append(r)

        merged_extra: Dict[str, Any] = {}
        for res in group:
            merged_extra.update(res.extra)
        if len(group) > 1 and "failures" in merged_extra:
            merged_extra["failures"] = sum(res.extra.get("failures", 0) for res in group)

        final.append(
            CheckResult(
                suite=suite,
                prop=prop,
                passed=all(res.passed for res in group),
                cases=sum(res.cases for res in group),
                worst=max(res.worst for res in group),
                reasons=merged_reasons,
                extra=merged_extra,
            )
        )

    log.debug("aggregate_checks: input=%d, output=%d", len(results), len(final))
    return final


def summarize(checks: List[CheckResult]) -> Dict[str, Any]:
    """Per-suite pass/fail counts plus the overall verdict."""
    suites: Dict[str, Dict[str, int]] = {}
    for check in checks:
        entry = suites.setdefault(check.suite, {"properties": 0, "failed": 0, "cases": 0})
        entry["properties"] += 1
        entry["cases"] += check.cases
        entry["failed"] += 0 if check.passed else 1
    return {
        "passed": bool(checks) and all(c.passed for c in checks),
        "failed_properties": [f"{c.suite}.{c.prop}" for c in checks if not c.passed],
        "suites": suites,
    }
