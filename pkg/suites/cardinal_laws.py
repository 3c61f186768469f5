# suites/cardinal_laws.py
from __future__ import annotations

import itertools
import logging
from typing import List

from core.bus import CheckBus
from core.cardinal import Cardinal, add, aleph, finite, mul, succ, sup, sup_plus
from core.models import SuiteContext, Tally

log = logging.getLogger(__name__)

SUITE = "cardinal_laws"


def _universe(max_finite: int, max_index: int) -> List[Cardinal]:
    return [finite(v) for v in range(max_finite + 1)] + [aleph(k) for k in range(max_index + 1)]


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    max_finite: int = 5,
    max_index: int = 5,
) -> None:
    cards = _universe(max_finite, max_index)

    trichotomy = Tally(SUITE, "total_order")
    for a, b in itertools.product(cards, repeat=2):
        hits = (a < b) + (a == b) + (a > b)
        trichotomy.record(hits == 1, reason=f"{a} vs {b}: {hits} relations hold")
    bus.publish(trichotomy)

    square = Tally(SUITE, "infinite_square")
    for a in cards:
        if a.is_infinite:
            square.record(mul(a, a) == a, reason=f"{a} * {a} = {mul(a, a)}")
    bus.publish(square)

    absorb = Tally(SUITE, "absorption")
    for a, b in itertools.product(cards, repeat=2):
        if b.is_infinite and not a.is_zero and a <= b:
            ok = mul(a, b) == b and add(a, b) == b
            absorb.record(ok, reason=f"{a}, {b}: mul={mul(a, b)} add={add(a, b)}")
    bus.publish(absorb)

    # successor is the least cardinal above: nothing in the universe sits strictly between
    least_upper = Tally(SUITE, "sup_plus_is_least_strict_bound")
    for size in (1, 2, 3):
        for family in itertools.combinations(cards, size):
            top = sup_plus(family)
            above = all(s < top for s in family)
            between = [c for c in cards if sup(family) < c < top]
            least_upper.record(
                above and not between,
                reason=f"sup_plus({[str(s) for s in family]}) = {top}, between: {[str(c) for c in between]}",
            )
    bus.publish(least_upper)

    monotone = Tally(SUITE, "succ_strictly_monotone")
    for a, b in itertools.product(cards, repeat=2):
        if a < b:
            monotone.record(succ(a) < succ(b), reason=f"succ({a}) >= succ({b})")
    bus.publish(monotone)

    log.info("%s: %s cardinals checked", SUITE, len(cards))
