# suites/masa_props.py
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from core.bus import CheckBus
from core.errors import InputError
from core.fdalg import AlgebraShape, Element, identity, matrix_unit, op_norm, sub, total
from core.generators import random_commuting_family, random_element, random_shape
from core.masa import (
    Masa,
    abelian_frame,
    commutant_expectation,
    equipartition,
    halving,
    joint_spectral,
    off_diagonal_in_frame,
    relative_commutant,
)
from core.models import SuiteContext, Tally
from core.projlat import abelian_cover_check, central_cover, complement, equivalent, is_abelian, subequiv

log = logging.getLogger(__name__)

SUITE = "masa_props"


def _worst_off_frame(m: Masa, basis: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for frame, mats in zip(m.frames, basis):
        for x in mats:
            coords = frame.conj().T @ x @ frame
            worst = max(worst, float(np.abs(coords - np.diag(np.diag(coords))).max()))
    return worst


def _outside_span(basis: Sequence[np.ndarray], x: Element) -> float:
    """Distance from x to the span of the per-block basis."""
    worst = 0.0
    for mats, block in zip(basis, x.blocks):
        v = block.reshape(-1, order="F")
        if not len(mats):
            worst = max(worst, float(np.linalg.norm(v)))
            continue
        q = np.stack([b.reshape(-1, order="F") for b in mats], axis=1)
        worst = max(worst, float(np.linalg.norm(v - q @ (q.conj().T @ v))))
    return worst


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    instances: int = 100,
    divisibility_instances: int = 50,
    max_blocks: int = 3,
    max_size: int = 3,
) -> None:
    tol = ctx.tol
    rng = ctx.rng(SUITE)

    diagonalizes = Tally(SUITE, "joint_spectral_diagonalizes")
    maximal = Tally(SUITE, "maximality")
    corner = Tally(SUITE, "corner_masa")
    frame = Tally(SUITE, "abelian_frame")
    halves = Tally(SUITE, "halving")
    type_one = Tally(SUITE, "type_I_abelian_cover")

    for _ in range(instances):
        shape = random_shape(rng, max_blocks, max_size + 1)
        family, _ = random_commuting_family(
            shape, 1, int(rng.integers(1, 4)), rng, degenerate=bool(rng.integers(0, 2))
        )
        m = joint_spectral(family, tol)
        scale = 1.0 + max(op_norm(x) for x in family)
        worst = max(off_diagonal_in_frame(m, x) for x in family)
        diagonalizes.record(worst <= tol.eps_struct * scale, residual=worst, reason=f"{shape}: residual {worst:.3e}")

        minimal = abelian_frame(m)
        one = identity(shape)
        frame.record(
            len(minimal) == sum(shape.blocks)
            and all(is_abelian(p.element, tol) for p in minimal)
            and op_norm(sub(total((p.element for p in minimal), shape), one)) <= tol.eps_struct,
            reason=f"{shape}: {len(minimal)} minimal projections",
        )

        # the commutant of the minimal projections is the masa itself, and holds the family
        commutant = relative_commutant(shape, [p.element for p in minimal])
        dims = tuple(len(b) for b in commutant)
        off = _worst_off_frame(m, commutant)
        outside = max(_outside_span(commutant, x) for x in family)
        expectation = _outside_span(commutant, commutant_expectation(m, random_element(shape, rng)))
        maximal.record(
            dims == shape.blocks
            and off <= tol.eps_struct
            and outside <= tol.eps_cluster * scale
            and expectation <= tol.eps_cluster * scale,
            residual=max(off, outside, expectation),
            reason=f"{shape}: commutant dims {dims}, off-frame {off:.3e}, family outside {outside:.3e}",
        )

        chosen = [p for p in minimal if rng.random() < 0.5] or minimal[:1]
        e = total((p.element for p in chosen), shape)
        inner = relative_commutant(shape, [p.element for p in chosen], corner=e)
        expected = tuple(sum(1 for p in chosen if p.block == k) for k in range(len(shape)))
        inner_dims = tuple(len(b) for b in inner)
        inner_off = _worst_off_frame(m, inner)
        leak = max(
            (float(np.linalg.norm(x - e.blocks[k] @ x @ e.blocks[k])) for k, b in enumerate(inner) for x in b),
            default=0.0,
        )
        corner.record(
            inner_dims == expected and inner_off <= tol.eps_struct and leak <= tol.eps_struct,
            residual=max(inner_off, leak),
            reason=f"{shape}: corner commutant dims {inner_dims}, expected {expected}",
        )

        if all(b > 1 for b in shape.blocks):
            h = halving(m, tol)
            full = tuple(True for _ in shape.blocks)
            halves.record(
                central_cover(h, tol).flags == full
                and central_cover(complement(h), tol).flags == full
                and subequiv(h, complement(h), tol),
                reason=f"{shape}: halving failed",
            )
        else:
            try:
                halving(m, tol)
                halves.record(False, reason=f"{shape}: abelian summand was halved")
            except InputError:
                halves.record(True)

        checks = abelian_cover_check(shape)
        type_one.record(all(checks.values()), reason=f"{shape}: {checks}")

    bus.publish(diagonalizes, maximal, corner, frame, halves, type_one)

    units = Tally(SUITE, "equipartition_matches_diagonal_units")
    divisible = Tally(SUITE, "divisibility")
    for _ in range(divisibility_instances):
        base = random_shape(rng, max_blocks, max_size)
        n = int(rng.integers(1, 5))
        family, _ = random_commuting_family(base, n, 2, rng)
        m = joint_spectral(family, tol)
        try:
            parts = equipartition(m, n, tol)
        except InputError as exc:
            divisible.record(False, reason=f"M_{n}({base}): {exc}")
            continue
        divisible.record(len(parts) == n)
        for j, f in enumerate(parts):
            units.record(
                equivalent(f, matrix_unit(base, n, j, j), tol),
                reason=f"M_{n}({base}): f_{j} not equivalent to e_{j}{j}",
            )

        # a block of size coprime to n > 1 blocks the partition
        if n > 1:
            odd = AlgebraShape(base.blocks + (n * int(rng.integers(1, 3)) + 1,))
            fam, _ = random_commuting_family(odd, 1, 1, rng)
            try:
                equipartition(joint_spectral(fam, tol), n, tol)
                divisible.record(False, reason=f"{odd} accepted for n={n}")
            except InputError:
                divisible.record(True)

    three = AlgebraShape((3,))
    try:
        equipartition(joint_spectral([Element(three, (np.diag([1.0, 2.0, 3.0]),))], tol), 2, tol)
        divisible.record(False, reason="shape (3) split into 2 equivalent halves")
    except InputError:
        divisible.record(True)

    bus.publish(units, divisible)
    log.info("%s: %s masas, %s divisibility cases", SUITE, instances, divisible.cases)
