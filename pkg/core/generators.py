# core/generators.py
from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import qr

from core.cardinal import ZERO, Cardinal, aleph, finite
from core.dimension import AtomicModel, CProjection, projection
from core.fdalg import AlgebraShape, Element, assemble, matrix_algebra
from core.functor import StarHom


def crandn(size, rng: np.random.Generator) -> np.ndarray:
    """Standard complex normal samples."""
    return (rng.normal(size=size) + 1j * rng.normal(size=size)) / np.sqrt(2)


def random_unitary(size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix with the phases of R removed."""
    q, r = qr(crandn((size, size), rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_shape(rng: np.random.Generator, max_blocks: int = 3, max_size: int = 3) -> AlgebraShape:
    count = int(rng.integers(1, max_blocks + 1))
    return AlgebraShape(tuple(int(s) for s in rng.integers(1, max_size + 1, size=count)))


def random_element(shape: AlgebraShape, rng: np.random.Generator) -> Element:
    return Element(shape, tuple(crandn((n, n), rng) for n in shape.blocks))


def random_unitary_element(shape: AlgebraShape, rng: np.random.Generator) -> Element:
    return Element(shape, tuple(random_unitary(n, rng) for n in shape.blocks))


def random_projection(
    shape: AlgebraShape,
    rng: np.random.Generator,
    ranks: Optional[Sequence[int]] = None,
) -> Element:
    if ranks is None:
        ranks = [int(rng.integers(0, n + 1)) for n in shape.blocks]
    blocks = []
    for n, r in zip(shape.blocks, ranks):
        u = random_unitary(n, rng)[:, :r]
        blocks.append(u @ u.conj().T)
    return Element(shape, tuple(blocks))


def random_orthogonal_family(
    shape: AlgebraShape,
    rng: np.random.Generator,
    members: int,
) -> List[Element]:
    """Projections onto disjoint groups of columns of one random unitary per block."""
    frames = [random_unitary(n, rng) for n in shape.blocks]
    cuts = [np.sort(rng.integers(0, n + 1, size=members - 1)) for n in shape.blocks]
    family = []
    for j in range(members):
        blocks = []
        for n, frame, cut in zip(shape.blocks, frames, cuts):
            bounds = np.concatenate([[0], cut, [n]])
            cols = frame[:, bounds[j] : bounds[j + 1]]
            blocks.append(cols @ cols.conj().T)
        family.append(Element(shape, tuple(blocks)))
    return family


def random_commuting_family(
    base: AlgebraShape,
    n: int,
    members: int,
    rng: np.random.Generator,
    *,
    degenerate: bool = False,
) -> Tuple[List[Element], Element]:
    """
    x_i = w d_i w* with w a random unitary of M_n(A) and d_i scalar-diagonal
    normal elements. Returns the family and w.
    """
    shape = matrix_algebra(base, n)
    w = random_unitary_element(shape, rng)
    family = []
    for _ in range(members):
        blocks = []
        for size, wk in zip(shape.blocks, w.blocks):
            if degenerate:
                values = rng.integers(0, 3, size=size) + 1j * rng.integers(0, 2, size=size)
            else:
                values = crandn(size, rng)
            blocks.append(wk @ np.diag(values) @ wk.conj().T)
        family.append(Element(shape, tuple(blocks)))
    return family, w


def random_a_diagonal(base: AlgebraShape, n: int, rng: np.random.Generator) -> Element:
    zero = Element(base, tuple(np.zeros((b, b)) for b in base.blocks))
    grid = [[random_element(base, rng) if i == j else zero for j in range(n)] for i in range(n)]
    return assemble(grid, base)


def random_star_hom(
    domain: AlgebraShape,
    rng: np.random.Generator,
    *,
    max_codomain_blocks: int = 3,
    max_mult: int = 2,
) -> StarHom:
    """Multiplicities first, block sizes solved from unitality, Haar conjugators."""
    count = int(rng.integers(1, max_codomain_blocks + 1))
    rows = []
    for _ in range(count):
        row = rng.integers(0, max_mult + 1, size=len(domain))
        if not row.any():
            row[int(rng.integers(0, len(domain)))] = 1
        rows.append(tuple(int(c) for c in row))
    sizes = tuple(sum(c * b for c, b in zip(row, domain.blocks)) for row in rows)
    codomain = AlgebraShape(sizes)
    conjugators = tuple(random_unitary(m, rng) for m in sizes)
    return StarHom(domain, codomain, tuple(rows), conjugators)


# --------------------------------------------------------------------- #
# symbolic side
# --------------------------------------------------------------------- #


def range_options(kappa: Cardinal, *, finite_values: Sequence[int] = ()) -> List[Cardinal]:
    """Range dimensions available on an atom: 0, chosen finite values, aleph_0..kappa."""
    opts = [ZERO] + [finite(v) for v in finite_values if v > 0]
    opts += [aleph(k) for k in range(kappa.value + 1)]
    return opts


def all_models(max_atoms: int, max_index: int, *, sorted_only: bool = False) -> Iterator[AtomicModel]:
    for count in range(1, max_atoms + 1):
        if sorted_only:
            combos = itertools.combinations_with_replacement(range(max_index + 1), count)
        else:
            combos = itertools.product(range(max_index + 1), repeat=count)
        for combo in combos:
            yield AtomicModel(tuple(aleph(k) for k in combo))


def all_projections(model: AtomicModel, *, finite_values: Sequence[int] = ()) -> Iterator[CProjection]:
    """Every range-dimension assignment, with the canonical corange."""
    options = [range_options(kappa, finite_values=finite_values) for kappa in model.atoms]
    for mu in itertools.product(*options):
        yield projection(model, mu)


def random_model(rng: np.random.Generator, max_atoms: int = 4, max_index: int = 4) -> AtomicModel:
    count = int(rng.integers(1, max_atoms + 1))
    return AtomicModel(tuple(aleph(int(k)) for k in rng.integers(0, max_index + 1, size=count)))


def random_cprojection(model: AtomicModel, rng: np.random.Generator) -> CProjection:
    mu = []
    for kappa in model.atoms:
        opts = range_options(kappa)
        mu.append(opts[int(rng.integers(0, len(opts)))])
    return projection(model, mu)
