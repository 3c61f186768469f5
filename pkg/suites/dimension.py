# suites/dimension.py
from __future__ import annotations

import itertools
import logging
from typing import Callable, Dict, List

import numpy as np

from core.bus import CheckBus
from core.cardinal import ZERO, Cardinal, add, aleph, finite, succ
from core.dimension import (
    AtomicModel,
    CProjection,
    central_cover,
    cut,
    delta,
    dim_d,
    dim_dbar,
    dimension_function,
    equidim_decomposition,
    equivalent,
    gamma_sizes,
    halving,
    is_equidimensional,
    is_properly_infinite,
    join,
    matrix_units,
    one,
    projection,
    splits_into,
    subequiv,
)
from core.errors import AwStarError, InputError
from core.generators import all_models, all_projections
from core.models import SuiteContext, Tally

log = logging.getLogger(__name__)

SUITE = "dimension"

_ALEPH_BASE = 10**6

_SINGLE = (
    "gamma_downward_closed",
    "delta_achieved",
    "d_matches_gamma",
    "d_below_central_cuts",
    "dbar_above_central_cuts",
    "d_at_most_dbar",
    "equidimensional_decomposition",
    "rejects_finite_ranges",
)
_PAIR = (
    "subequivalence_orders_d",
    "equidimensional_strict_order",
    "equivalence_by_cover_and_d",
    "dimension_function_orders",
    "join_absorbed",
)


def _nonzero_subsets(flags) -> List[tuple]:
    idx = [i for i, f in enumerate(flags) if f]
    out = []
    for size in range(1, len(idx) + 1):
        for chosen in itertools.combinations(idx, size):
            out.append(tuple(i in chosen for i in range(len(flags))))
    return out


def _check_single(e: CProjection, t: Dict[str, Tally]) -> None:
    where = f"mu={[str(m) for m in e.mu]} on {[str(a) for a in e.model.atoms]}"
    if not is_properly_infinite(e):
        return

    sizes = gamma_sizes(e)
    top = max(sizes)
    t["gamma_downward_closed"].record(
        list(sizes) == [aleph(k) for k in range(top.value + 1)], reason=f"{where}: gamma={sizes}"
    )
    result = delta(e)
    t["delta_achieved"].record(
        result.achieved and result.value == top and not splits_into(e, succ(top)),
        reason=f"{where}: delta={result.value} achieved={result.achieved}",
    )

    d, dbar = dim_d(e), dim_dbar(e)
    t["d_matches_gamma"].record(d == succ(top), reason=f"{where}: d={d}, max gamma={top}")
    t["d_at_most_dbar"].record(d <= dbar, reason=f"{where}: d={d} dbar={dbar}")

    for z in _nonzero_subsets(central_cover(e)):
        part = cut(z, e)
        t["d_below_central_cuts"].record(d <= dim_d(part), reason=f"{where} z={z}")
    for z in _nonzero_subsets(e.model.full()):
        part = cut(z, e)
        t["dbar_above_central_cuts"].record(dim_dbar(part) <= dbar, reason=f"{where} z={z}")

    try:
        pieces = equidim_decomposition(e)
        alphas = [p.alpha for p in pieces]
        t["equidimensional_decomposition"].record(alphas == sorted(set(alphas)), reason=f"{where}: {alphas}")
    except AwStarError as exc:
        t["equidimensional_decomposition"].record(False, reason=f"{where}: {exc}")


def _check_finite_rejected(model: AtomicModel, t: Dict[str, Tally]) -> None:
    mu = [finite(1)] + [ZERO] * (len(model) - 1)
    e = projection(model, mu)
    try:
        dim_d(e)
        t["rejects_finite_ranges"].record(False, reason=f"finite range accepted on {model}")
    except InputError:
        t["rejects_finite_ranges"].record(True)


def _code(c: Cardinal) -> int:
    # order-preserving: finite n -> n, aleph_k -> _ALEPH_BASE + k
    return int(c.tag) * _ALEPH_BASE + c.value


def _masked(tally: Tally, ok: np.ndarray, mask: np.ndarray, where: Callable[[int], str]) -> None:
    idx = np.flatnonzero(mask.ravel())
    tally.record_all(ok.ravel()[idx], lambda i: where(int(idx[i])))


def _check_pairs(projections: List[CProjection], t: Dict[str, Tally]) -> None:
    """
    Every ordered pair of one model. Invariants come from the engine once per
    projection; the pair relations are then compared as arrays.
    """
    proper = [e for e in projections if is_properly_infinite(e)]
    if not proper:
        return
    mu_all = np.array([[_code(m) for m in e.mu] for e in projections])
    mu = np.array([[_code(m) for m in e.mu] for e in proper])
    dfun = np.array([[_code(x) for x in dimension_function(e)] for e in proper])
    cover = np.array([central_cover(e) for e in proper])
    d = np.array([_code(dim_d(e)) for e in proper])
    equi = np.array([is_equidimensional(e) for e in proper])

    n = len(proper)

    def where(i: int) -> str:
        e, f = proper[i // n], proper[i % n]
        return f"e={[str(m) for m in e.mu]} f={[str(m) for m in f.mu]} on {[str(a) for a in e.model.atoms]}"

    sub = (mu[:, None, :] <= mu[None, :, :]).all(-1)
    equiv = (mu[:, None, :] == mu[None, :, :]).all(-1)
    by_dim = (dfun[:, None, :] <= dfun[None, :, :]).all(-1)
    same_cover = (cover[:, None, :] == cover[None, :, :]).all(-1)
    both_equi = equi[:, None] & equi[None, :]

    t["dimension_function_orders"].record_all(by_dim == sub, where)
    _masked(t["subequivalence_orders_d"], d[:, None] <= d[None, :], same_cover & sub, where)
    _masked(t["equidimensional_strict_order"], d[:, None] < d[None, :], both_equi & same_cover & sub & ~equiv, where)
    _masked(
        t["equivalence_by_cover_and_d"],
        equiv == (same_cover & (d[:, None] == d[None, :])),
        both_equi,
        where,
    )

    for i, e in enumerate(proper):
        for j in np.flatnonzero((mu_all <= mu[i]).all(-1)):
            f = projections[j]
            t["join_absorbed"].record(
                subequiv(f, e) and equivalent(join(e, f), e),
                reason=f"e={[str(m) for m in e.mu]} f={[str(m) for m in f.mu]}",
            )


def _check_regression(t: Tally) -> None:
    model = AtomicModel((aleph(0), aleph(1)))
    small = projection(model, [ZERO, aleph(1)])
    big = projection(model, [aleph(0), aleph(1)])
    t.record(
        subequiv(small, big) and not equivalent(small, big) and dim_d(small) > dim_d(big),
        reason=f"d(0,1)={dim_d(small)} d(1,1)={dim_d(big)}",
    )
    # a projection strictly below (1, 1) with the same d but a different D
    below = projection(model, [aleph(0), aleph(0)])
    t.record(
        dim_d(below) == dim_d(big)
        and dimension_function(below) != dimension_function(big)
        and subequiv(below, big)
        and not equivalent(below, big),
        reason=f"d(1,p)={dim_d(below)} d(1,1)={dim_d(big)}",
    )


def _check_matrix_units(model: AtomicModel, t: Tally) -> None:
    h = halving(model)
    t.record(equivalent(h, one(model)), reason=f"halving on {model}")
    for n in (finite(1), finite(2), finite(3), aleph(0)):
        units = matrix_units(model, n)
        ok = all(kappa == product for kappa, product in units.certificate)
        if n.is_finite:
            ok = ok and len(units.pieces) == n.value and all(equivalent(p, one(model)) for p in units.pieces)
            for i, kappa in enumerate(model.atoms):
                total = ZERO
                for p in units.pieces:
                    total = add(total, p.mu[i])
                ok = ok and total == kappa
        t.record(ok, reason=f"{n} matrix units on {[str(a) for a in model.atoms]}")
    try:
        matrix_units(model, aleph(1))
        t.record(False, reason="aleph_1 matrix units accepted")
    except InputError:
        t.record(True)


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    max_atoms: int = 4,
    max_index: int = 4,
) -> None:
    single = {name: Tally(SUITE, name) for name in _SINGLE}
    pair = {name: Tally(SUITE, name) for name in _PAIR}
    units = Tally(SUITE, "matrix_units")
    regression = Tally(SUITE, "cover_counterexample")

    # atom order is a relabelling, so sorted models cover every case
    models = 0
    for model in all_models(max_atoms, max_index, sorted_only=True):
        models += 1
        projections = list(all_projections(model))
        for e in projections:
            _check_single(e, single)
        _check_finite_rejected(model, single)
        _check_matrix_units(model, units)
        _check_pairs(projections, pair)
    log.info("%s: %s models, %s pairs", SUITE, models, pair["dimension_function_orders"].cases)

    _check_regression(regression)

    bus.publish(*single.values(), *pair.values(), units, regression)
