# core/fdalg.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import svdvals

from core.errors import InputError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraShape:
    """
    Finite-dimensional C*-algebra M_{n_1}(C) + ... + M_{n_r}(C).

    Block k is a factor of type I_{n_k}.
    """

    blocks: Tuple[int, ...]

    def __post_init__(self) -> None:
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks:
            raise InputError("algebra shape needs at least one block")
        if any(b < 1 for b in blocks):
            raise InputError(f"block sizes must be positive, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "+".join(f"M{b}" for b in self.blocks)


@dataclass(frozen=True)
class Tolerance:
    eps_struct: float = 1e-9
    eps_cluster: float = 1e-8

    def __post_init__(self) -> None:
        if not (self.eps_struct > 0 and self.eps_cluster > 0):
            raise InputError("tolerances must be positive")


@dataclass(frozen=True, eq=False)
class Element:
    """Block-matrix element of an AlgebraShape. Blocks are read-only copies."""

    shape: AlgebraShape
    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.blocks) != len(self.shape.blocks):
            raise InputError(
                f"expected {len(self.shape.blocks)} blocks for {self.shape}, got {len(self.blocks)}"
            )
        frozen = []
        for size, block in zip(self.shape.blocks, self.blocks):
            arr = np.array(block, dtype=complex)
            if arr.shape != (size, size):
                raise InputError(f"block of shape {arr.shape} does not fit size {size}")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    # operator sugar over the module-level functions
    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return sub(self, other)

    def __matmul__(self, other: "Element") -> "Element":
        return mul(self, other)

    def __rmul__(self, scalar: complex) -> "Element":
        return scale(self, scalar)

    @property
    def H(self) -> "Element":
        return adjoint(self)


def identity(shape: AlgebraShape) -> Element:
    return Element(shape, tuple(np.eye(n) for n in shape.blocks))


def zero(shape: AlgebraShape) -> Element:
    return Element(shape, tuple(np.zeros((n, n)) for n in shape.blocks))


def from_blocks(blocks: Sequence[np.ndarray]) -> Element:
    arrs = [np.asarray(b) for b in blocks]
    return Element(AlgebraShape(tuple(a.shape[0] for a in arrs)), tuple(arrs))


def _check_same(x: Element, y: Element) -> None:
    if x.shape != y.shape:
        raise InputError(f"shape mismatch: {x.shape} vs {y.shape}")


def mul(x: Element, y: Element) -> Element:
    _check_same(x, y)
    return Element(x.shape, tuple(a @ b for a, b in zip(x.blocks, y.blocks)))


def add(x: Element, y: Element) -> Element:
    _check_same(x, y)
    return Element(x.shape, tuple(a + b for a, b in zip(x.blocks, y.blocks)))


def sub(x: Element, y: Element) -> Element:
    _check_same(x, y)
    return Element(x.shape, tuple(a - b for a, b in zip(x.blocks, y.blocks)))


def adjoint(x: Element) -> Element:
    return Element(x.shape, tuple(b.conj().T for b in x.blocks))


def scale(x: Element, scalar: complex) -> Element:
    return Element(x.shape, tuple(scalar * b for b in x.blocks))


def total(elements: Iterable[Element], shape: AlgebraShape) -> Element:
    acc = zero(shape)
    for x in elements:
        acc = add(acc, x)
    return acc


def op_norm(x: Element) -> float:
    """Largest singular value over all blocks."""
    return max(float(svdvals(b)[0]) for b in x.blocks)


def is_projection(x: Element, tol: Tolerance = Tolerance()) -> bool:
    return (
        op_norm(sub(x, adjoint(x))) <= tol.eps_struct
        and op_norm(sub(mul(x, x), x)) <= tol.eps_struct
    )


def is_normal(x: Element, tol: Tolerance = Tolerance()) -> bool:
    xs = adjoint(x)
    defect = op_norm(sub(mul(x, xs), mul(xs, x)))
    return defect <= tol.eps_struct * (1.0 + op_norm(x)) ** 2


def commutator_norm(x: Element, y: Element) -> float:
    return op_norm(sub(mul(x, y), mul(y, x)))


def commutes(x: Element, y: Element, tol: Tolerance = Tolerance()) -> bool:
    bound = tol.eps_struct * (1.0 + max(op_norm(x), op_norm(y))) ** 2
    return commutator_norm(x, y) <= bound


def is_unitary(x: Element, tol: Tolerance = Tolerance()) -> bool:
    one = identity(x.shape)
    xs = adjoint(x)
    return (
        op_norm(sub(mul(x, xs), one)) <= tol.eps_struct
        and op_norm(sub(mul(xs, x), one)) <= tol.eps_struct
    )


# --------------------------------------------------------------------- #
# M_n(A): block k of M_n(A) is an n x n grid of n_k x n_k tiles
# --------------------------------------------------------------------- #


def matrix_algebra(shape: AlgebraShape, n: int) -> AlgebraShape:
    if n < 1:
        raise InputError(f"matrix size must be positive, got {n}")
    return AlgebraShape(tuple(n * b for b in shape.blocks))


def _check_grid(x: Element, base: AlgebraShape, n: int) -> None:
    if x.shape != matrix_algebra(base, n):
        raise InputError(f"element of {x.shape} is not over M_{n}({base})")


def a_entry(x: Element, base: AlgebraShape, n: int, i: int, j: int) -> Element:
    _check_grid(x, base, n)
    if not (0 <= i < n and 0 <= j < n):
        raise InputError(f"A-entry ({i}, {j}) out of range for n={n}")
    tiles = []
    for nk, block in zip(base.blocks, x.blocks):
        tiles.append(block[i * nk : (i + 1) * nk, j * nk : (j + 1) * nk])
    return Element(base, tuple(tiles))


def a_entries(x: Element, base: AlgebraShape, n: int) -> List[List[Element]]:
    return [[a_entry(x, base, n, i, j) for j in range(n)] for i in range(n)]


def assemble(grid: Sequence[Sequence[Element]], base: AlgebraShape) -> Element:
    """Inverse of a_entries: build an M_n(A) element from its n x n grid."""
    n = len(grid)
    if n < 1 or any(len(row) != n for row in grid):
        raise InputError("A-entry grid must be square and non-empty")
    blocks = []
    for k, _ in enumerate(base.blocks):
        rows = []
        for row in grid:
            for entry in row:
                if entry.shape != base:
                    raise InputError(f"A-entry over {entry.shape}, expected {base}")
            rows.append([entry.blocks[k] for entry in row])
        blocks.append(np.block(rows))
    return Element(matrix_algebra(base, n), tuple(blocks))


def matrix_unit(base: AlgebraShape, n: int, i: int, j: int, a: Element | None = None) -> Element:
    """e_{ij}(a): `a` (default 1) at A-entry (i, j), zero elsewhere."""
    if not (0 <= i < n and 0 <= j < n):
        raise InputError(f"A-entry ({i}, {j}) out of range for n={n}")
    entry = identity(base) if a is None else a
    null = zero(base)
    grid = [[entry if (r, c) == (i, j) else null for c in range(n)] for r in range(n)]
    return assemble(grid, base)
