# suites/comparison.py
from __future__ import annotations

import itertools
import logging
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from core.bus import CheckBus
from core.errors import AwStarError, InputError
from core.fdalg import AlgebraShape, Element, Tolerance, adjoint, mul, op_norm, sub
from core.generators import random_projection, random_shape, random_unitary
from core.models import SuiteContext, Tally
from core.projlat import (
    CentralProjection,
    central_cover,
    central_multiply,
    comparison_decomposition,
    comparison_failures,
    compress,
    corner_central_cover,
    equivalent,
    in_corner,
    partial_isometry,
    proj_sup,
    range_bases,
    rank_vector,
    subequiv,
)

log = logging.getLogger(__name__)

SUITE = "comparison"


def _shapes(max_blocks: int, max_size: int) -> Iterator[AlgebraShape]:
    for count in range(1, max_blocks + 1):
        for blocks in itertools.product(range(1, max_size + 1), repeat=count):
            yield AlgebraShape(blocks)


def _diagonal_projection(shape: AlgebraShape, ranks: Sequence[int]) -> Element:
    return Element(
        shape,
        tuple(np.diag([1.0] * r + [0.0] * (n - r)) for n, r in zip(shape.blocks, ranks)),
    )


def _family_with_ranks(
    shape: AlgebraShape,
    table: Sequence[Sequence[int]],
    rng: np.random.Generator,
) -> List[Element]:
    """Orthogonal family whose member j has rank table[j][k] in block k."""
    frames = [random_unitary(n, rng) for n in shape.blocks]
    family = []
    starts = [0] * len(shape)
    for ranks in table:
        blocks = []
        for k, (frame, r) in enumerate(zip(frames, ranks)):
            cols = frame[:, starts[k] : starts[k] + r]
            starts[k] += r
            blocks.append(cols @ cols.conj().T)
        family.append(Element(shape, tuple(blocks)))
    return family


def _rank_table(shape: AlgebraShape, members: int, rng: np.random.Generator) -> List[List[int]]:
    """members x blocks ranks with column sums within the block sizes."""
    table = [[0] * len(shape) for _ in range(members)]
    for k, n in enumerate(shape.blocks):
        budget = n
        for j in range(members):
            r = int(rng.integers(0, budget + 1))
            table[j][k] = r
            budget -= r
    return table


def _under(e: Element, rng: np.random.Generator, tol: Tolerance) -> Tuple[Element, Tuple[np.ndarray, ...]]:
    """Random subprojection of e, plus e's range bases."""
    bases = range_bases(e, tol)
    blocks = []
    for b in bases:
        size = b.shape[1]
        r = int(rng.integers(0, size + 1))
        cols = b @ random_unitary(size, rng)[:, :r] if size else b
        blocks.append(cols @ cols.conj().T)
    return Element(e.shape, tuple(blocks)), bases


def _corner_ranks(p: Element, bases: Sequence[np.ndarray]) -> Tuple[int, ...]:
    """Ranks of p as an element of eAe, computed in the coordinates of e's range."""
    out = []
    for b, block in zip(bases, p.blocks):
        coords = b.conj().T @ block @ b
        out.append(int(np.sum(np.linalg.svd(coords, compute_uv=False) > 0.5)) if coords.size else 0)
    return tuple(out)


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    max_blocks: int = 3,
    max_size: int = 3,
    isometry_pairs: int = 500,
    random_instances: int = 200,
) -> None:
    tol = ctx.tol
    rng = ctx.rng(SUITE)

    trichotomy = Tally(SUITE, "comparison_trichotomy")
    for shape in _shapes(max_blocks, max_size):
        vectors = list(itertools.product(*[range(n + 1) for n in shape.blocks]))
        elements = {v: _diagonal_projection(shape, v) for v in vectors}
        for ve, vf in itertools.product(vectors, repeat=2):
            e, f = elements[ve], elements[vf]
            x, y, z = comparison_decomposition(e, f, tol)
            failures = comparison_failures(ve, vf, x, y, z)
            trichotomy.record(not failures, reason=f"{shape} e={ve} f={vf}: {failures}")
    bus.publish(trichotomy)
    log.info("%s: %s exhaustive comparisons", SUITE, trichotomy.cases)

    schroeder = Tally(SUITE, "schroeder_bernstein")
    additive = Tally(SUITE, "additivity")
    central = Tally(SUITE, "central_multiplication")
    corner_eq = Tally(SUITE, "corner_equivalence")
    corner_cover = Tally(SUITE, "corner_central_cover")
    for _ in range(random_instances):
        shape = random_shape(rng, max_blocks, max_size + 1)

        table = _rank_table(shape, int(rng.integers(1, 4)), rng)
        es = _family_with_ranks(shape, table, rng)
        fs = _family_with_ranks(shape, table, rng)
        pairwise = all(equivalent(e, f, tol) for e, f in zip(es, fs))
        additive.record(
            pairwise and equivalent(proj_sup(es, tol), proj_sup(fs, tol), tol),
            reason=f"{shape} ranks {table}",
        )

        e = random_projection(shape, rng)
        f = random_projection(shape, rng, ranks=rank_vector(e, tol))
        g = random_projection(shape, rng, ranks=rank_vector(e, tol) if rng.random() < 0.5 else None)
        both_ways = subequiv(e, g, tol) and subequiv(g, e, tol)
        schroeder.record(
            not both_ways or equivalent(e, g, tol),
            reason=f"{shape}: ranks {rank_vector(e, tol)} vs {rank_vector(g, tol)}",
        )
        zc = CentralProjection(tuple(bool(b) for b in rng.integers(0, 2, size=len(shape))))
        central.record(
            equivalent(central_multiply(zc, e), central_multiply(zc, f), tol),
            reason=f"{shape} z={zc.flags} ranks {rank_vector(e, tol)}",
        )

        p, bases = _under(e, rng, tol)
        q, _ = _under(e, rng, tol)
        in_a = equivalent(p, q, tol)
        in_corner_alg = _corner_ranks(p, bases) == _corner_ranks(q, bases)
        ok = in_a == in_corner_alg
        if ok and in_a:
            v = partial_isometry(p, q, tol)
            ok = in_corner(e, v, tol)
        corner_eq.record(ok, reason=f"{shape}: ranks {rank_vector(p, tol)} vs {rank_vector(q, tol)}")

        expected = []
        for b, block in zip(bases, p.blocks):
            coords = b.conj().T @ block @ b
            alive = coords.size and np.linalg.norm(coords) > 0.5
            expected.append(b @ b.conj().T if alive else np.zeros_like(block))
        got = corner_central_cover(e, p, tol)
        defect = op_norm(sub(got, Element(shape, tuple(expected))))
        defect_vs_cover = op_norm(sub(got, compress(e, central_cover(p, tol).element(shape))))
        corner_cover.record(
            max(defect, defect_vs_cover) <= tol.eps_struct,
            residual=max(defect, defect_vs_cover),
            reason=f"{shape}: corner cover defect {defect:.3e}",
        )
    bus.publish(schroeder, additive, central, corner_eq, corner_cover)

    oracle = Tally(SUITE, "equivalence_matches_partial_isometry")
    for _ in range(isometry_pairs):
        shape = random_shape(rng, max_blocks, max_size + 1)
        p = random_projection(shape, rng)
        q = random_projection(shape, rng, ranks=rank_vector(p, tol))
        try:
            v = partial_isometry(p, q, tol)
        except AwStarError as exc:
            oracle.record(False, reason=f"{shape}: {exc}")
            continue
        vs = adjoint(v)
        defect = max(op_norm(sub(mul(vs, v), p)), op_norm(sub(mul(v, vs), q)))
        oracle.record(
            equivalent(p, q, tol) and defect <= 1e-10,
            residual=defect,
            reason=f"{shape}: defect {defect:.3e}",
        )

        r = random_projection(shape, rng)
        if rank_vector(r, tol) != rank_vector(p, tol):
            try:
                partial_isometry(p, r, tol)
                refused = False
            except InputError:
                refused = True
            oracle.record(
                refused and not equivalent(p, r, tol),
                reason=f"{shape}: inequivalent ranks {rank_vector(p, tol)} vs {rank_vector(r, tol)} accepted",
            )
    bus.publish(oracle)
