# suites/fdalg_laws.py
from __future__ import annotations

import logging

import numpy as np

from core.bus import CheckBus
from core.fdalg import a_entries, add, adjoint, assemble, is_projection, matrix_algebra, mul, op_norm
from core.generators import random_element, random_orthogonal_family, random_shape
from core.models import SuiteContext, Tally

log = logging.getLogger(__name__)

SUITE = "fdalg_laws"


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    instances: int = 100,
    max_blocks: int = 3,
    max_size: int = 4,
) -> None:
    rng = ctx.rng(SUITE)

    c_star = Tally(SUITE, "c_star_identity")
    roundtrip = Tally(SUITE, "a_entry_roundtrip")
    orth_sum = Tally(SUITE, "orthogonal_sum_is_projection")

    for _ in range(instances):
        shape = random_shape(rng, max_blocks, max_size)
        x = random_element(shape, rng)
        nx = op_norm(x)
        gap = abs(op_norm(mul(adjoint(x), x)) - nx**2)
        c_star.record(gap <= 1e-6 * (1.0 + nx) ** 2, residual=gap, reason=f"{shape}: |‖x*x‖ - ‖x‖²| = {gap:.3e}")

        n = int(rng.integers(1, 4))
        big = random_element(matrix_algebra(shape, n), rng)
        rebuilt = assemble(a_entries(big, shape, n), shape)
        same = all(np.array_equal(a, b) for a, b in zip(rebuilt.blocks, big.blocks))
        roundtrip.record(same, reason=f"M_{n}({shape}) layout not reproduced")

        p, q = random_orthogonal_family(shape, rng, 2)
        orth_sum.record(is_projection(add(p, q), ctx.tol), reason=f"{shape}: p + q is not a projection")

    bus.publish(c_star, roundtrip, orth_sum)
    log.info("%s: %s random instances", SUITE, instances)
