# core/bus.py
from __future__ import annotations

from typing import List, Union

from .models import CheckResult, Tally


class CheckBus:
    """Collects finished properties of one self-test run in publication order."""

    def __init__(self) -> None:
        self._results: List[CheckResult] = []

    def publish(self, *items: Union[Tally, CheckResult]) -> None:
        # tallies are frozen into results here, so later records are not seen
        for item in items:
            self._results.append(item.result() if isinstance(item, Tally) else item)

    def __len__(self) -> int:
        return len(self._results)

    def drain(self) -> List[CheckResult]:
        results, self._results = self._results, []
        return results
