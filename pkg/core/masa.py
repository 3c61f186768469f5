# core/masa.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, schur
from scipy.sparse.csgraph import connected_components

from core.errors import InputError, VerificationError
from core.fdalg import (
    AlgebraShape,
    Element,
    Tolerance,
    commutator_norm,
    commutes,
    is_normal,
    op_norm,
)
from core.projlat import rank_vector

log = logging.getLogger(__name__)

Label = Tuple[complex, ...]


@dataclass(frozen=True, eq=False)
class Masa:
    """
    Maximal abelian subalgebra given by a unitary frame per block.

    Column c of frames[k] spans the range of one minimal projection;
    labels[k][c] holds the joint eigenvalues of the generating family on it.
    Columns are stored in label order.
    """

    shape: AlgebraShape
    frames: Tuple[np.ndarray, ...]
    labels: Tuple[Tuple[Label, ...], ...]

    def __post_init__(self) -> None:
        frames = []
        for size, frame in zip(self.shape.blocks, self.frames):
            arr = np.array(frame, dtype=complex)
            if arr.shape != (size, size):
                raise InputError(f"frame of shape {arr.shape} does not fit block size {size}")
            if np.linalg.norm(arr.conj().T @ arr - np.eye(size), 2) > 1e-8:
                raise InputError("masa frame is not unitary")
            arr.setflags(write=False)
            frames.append(arr)
        if len(frames) != len(self.shape.blocks):
            raise InputError("one frame per block is required")
        object.__setattr__(self, "frames", tuple(frames))


@dataclass(frozen=True, eq=False)
class MinimalProjection:
    block: int
    column: int
    label: Label
    element: Element


def _scale(family: Sequence[Element]) -> float:
    return 1.0 + max((op_norm(x) for x in family), default=0.0)


def _check_family(family: Sequence[Element], tol: Tolerance) -> AlgebraShape:
    if not family:
        raise InputError("empty family")
    shape = family[0].shape
    for idx, x in enumerate(family):
        if x.shape != shape:
            raise InputError(f"member {idx} lives in {x.shape}, expected {shape}")
        if not is_normal(x, tol):
            raise InputError(f"not normal: member {idx}")
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if not commutes(family[i], family[j], tol):
                raise InputError(
                    f"not commuting: members {i} and {j}, "
                    f"commutator norm {commutator_norm(family[i], family[j]):.3e}"
                )
    return shape


def _clusters(eigvals: np.ndarray, gap: float) -> List[np.ndarray]:
    """Single-linkage clusters of eigenvalues closer than `gap`."""
    dist = np.abs(eigvals[:, None] - eigvals[None, :])
    count, labels = connected_components(dist <= gap, directed=False)
    groups = [np.flatnonzero(labels == c) for c in range(count)]
    # order clusters by their smallest member, real part first
    groups.sort(key=lambda g: min((eigvals[i].real, eigvals[i].imag) for i in g))
    return groups


def _refine(basis: np.ndarray, blocks: Sequence[np.ndarray], depth: int, gap: float) -> List[np.ndarray]:
    """Split span(basis) into joint eigenspaces of blocks[depth:]."""
    if depth == len(blocks) or basis.shape[1] == 1:
        return [basis]
    compressed = basis.conj().T @ blocks[depth] @ basis
    t, z = schur(compressed, output="complex")
    eigvals = np.diag(t)
    pieces: List[np.ndarray] = []
    for group in _clusters(eigvals, gap):
        pieces.extend(_refine(basis @ z[:, group], blocks, depth + 1, gap))
    return pieces


def _normalize_phase(col: np.ndarray) -> np.ndarray:
    mags = np.abs(col)
    lead = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return col * (abs(col[lead]) / col[lead])


def _label_key(label: Label) -> Tuple[float, ...]:
    key: List[float] = []
    for value in label:
        key.extend((round(value.real, 12), round(value.imag, 12)))
    return tuple(key)


def joint_spectral(family: Sequence[Element], tol: Tolerance = Tolerance()) -> Masa:
    """
    Masa containing a commuting family of normal elements.

    Each block is split into joint eigenspaces by recursive eigenspace
    refinement; a joint eigenspace left with multiplicity > 1 is completed
    with the basis it already carries.
    """
    shape = _check_family(family, tol)
    scale = _scale(family)
    gap = tol.eps_cluster * scale

    frames = []
    labels = []
    for k, size in enumerate(shape.blocks):
        member_blocks = [x.blocks[k] for x in family]
        spaces = _refine(np.eye(size, dtype=complex), member_blocks, 0, gap)
        columns = [_normalize_phase(col) for space in spaces for col in space.T]
        col_labels = [
            tuple(complex(np.vdot(col, b @ col)) for b in member_blocks) for col in columns
        ]
        order = sorted(range(size), key=lambda c: _label_key(col_labels[c]))
        frame = np.column_stack([columns[c] for c in order])
        frames.append(frame)
        labels.append(tuple(col_labels[c] for c in order))
        log.debug("joint_spectral: block %s size %s -> %s joint eigenspaces", k, size, len(spaces))

    masa = Masa(shape, tuple(frames), tuple(labels))

    residual = max(off_diagonal_in_frame(masa, x) for x in family)
    bound = tol.eps_struct * scale
    if residual > bound:
        raise VerificationError(
            f"frame does not diagonalize the family: residual {residual:.3e} > {bound:.3e}"
        )
    return masa


def frame_coordinates(m: Masa, x: Element) -> Tuple[np.ndarray, ...]:
    if x.shape != m.shape:
        raise InputError(f"element of {x.shape} is not over {m.shape}")
    return tuple(f.conj().T @ b @ f for f, b in zip(m.frames, x.blocks))


def off_diagonal_in_frame(m: Masa, x: Element) -> float:
    worst = 0.0
    for coords in frame_coordinates(m, x):
        off = coords - np.diag(np.diag(coords))
        worst = max(worst, float(np.abs(off).max()) if off.size else 0.0)
    return worst


def is_diagonal_in_frame(m: Masa, x: Element, tol: Tolerance = Tolerance()) -> bool:
    return off_diagonal_in_frame(m, x) <= tol.eps_struct * (1.0 + op_norm(x))


def commutant_expectation(m: Masa, x: Element) -> Element:
    """Sum of p x p over the minimal projections of the masa."""
    blocks = []
    for frame, coords in zip(m.frames, frame_coordinates(m, x)):
        blocks.append(frame @ np.diag(np.diag(coords)) @ frame.conj().T)
    return Element(m.shape, tuple(blocks))


def _commutator_rows(g: np.ndarray) -> np.ndarray:
    # column-major vec: vec(gX - Xg) = (I (x) g - g^T (x) I) vec(X)
    eye = np.eye(g.shape[0])
    return np.kron(eye, g) - np.kron(g.T, eye)


def relative_commutant(
    shape: AlgebraShape,
    generators: Sequence[Element],
    corner: Optional[Element] = None,
    rcond: float = 1e-8,
) -> Tuple[np.ndarray, ...]:
    """
    Orthonormal basis, per block, of {X : [X, g] = 0 for every generator},
    restricted to eX e when a corner projection e is given.

    Block k comes back as an array of shape (dim, n_k, n_k).
    """
    bases = []
    for k, size in enumerate(shape.blocks):
        rows = [_commutator_rows(np.asarray(g.blocks[k], dtype=complex)) for g in generators]
        if corner is not None:
            rest = np.eye(size) - corner.blocks[k]
            rows.append(np.kron(np.eye(size), rest))
            rows.append(np.kron(rest.T, np.eye(size)))
        if not rows:
            rows.append(np.zeros((1, size * size)))
        kernel = null_space(np.vstack(rows), rcond=rcond)
        basis = np.zeros((kernel.shape[1], size, size), dtype=complex)
        for i, v in enumerate(kernel.T):
            basis[i] = v.reshape(size, size, order="F")
        bases.append(basis)
        log.debug("relative_commutant: block %s has dimension %s", k, kernel.shape[1])
    return tuple(bases)


def _column_projection(m: Masa, k: int, cols: Sequence[int]) -> np.ndarray:
    frame = m.frames[k][:, list(cols)]
    return frame @ frame.conj().T


def _sum_of_columns(m: Masa, selection: Sequence[Sequence[int]]) -> Element:
    return Element(
        m.shape,
        tuple(_column_projection(m, k, cols) for k, cols in enumerate(selection)),
    )


def abelian_frame(m: Masa) -> List[MinimalProjection]:
    out = []
    for k, size in enumerate(m.shape.blocks):
        for c in range(size):
            selection = [[c] if j == k else [] for j in range(len(m.shape))]
            out.append(MinimalProjection(k, c, m.labels[k][c], _sum_of_columns(m, selection)))
    return out


def divisibility_check(shape: AlgebraShape, n: int) -> bool:
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    return all(b % n == 0 for b in shape.blocks)


def equipartition_columns(m: Masa, n: int) -> List[List[List[int]]]:
    """Round-robin column groups: groups[j][k] lists the columns of block k in f_j."""
    if not divisibility_check(m.shape, n):
        bad = next(b for b in m.shape.blocks if b % n)
        raise InputError(
            f"{bad} not divisible by {n}: a type I_{bad} summand holds no "
            f"{n} orthogonal equivalent projections summing to 1"
        )
    return [
        [[c for c in range(size) if c % n == j] for size in m.shape.blocks] for j in range(n)
    ]


def equipartition(m: Masa, n: int, tol: Tolerance = Tolerance()) -> List[Element]:
    """n orthogonal, pairwise equivalent projections of the masa summing to 1."""
    groups = equipartition_columns(m, n)
    parts = [_sum_of_columns(m, g) for g in groups]
    expected = tuple(b // n for b in m.shape.blocks)
    for j, p in enumerate(parts):
        ranks = rank_vector(p, tol)
        if ranks != expected:
            raise VerificationError(f"equipartition member {j} has ranks {ranks}, expected {expected}")
    return parts


def halving(m: Masa, tol: Tolerance = Tolerance()) -> Element:
    """Projection e of the masa with c(e) = c(1-e) = 1 and e <~ 1-e."""
    if any(b == 1 for b in m.shape.blocks):
        raise InputError("abelian central summand: a block of size 1 cannot be halved")
    e = _sum_of_columns(m, [list(range(b // 2)) for b in m.shape.blocks])
    ranks = rank_vector(e, tol)
    if any(r < 1 or 2 * r > b for r, b in zip(ranks, m.shape.blocks)):
        raise VerificationError(f"halving produced ranks {ranks} for {m.shape}")
    return e
