# core/functor.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from core.diag import simultaneous_diagonalize
from core.errors import InputError
from core.fdalg import (
    AlgebraShape,
    Element,
    Tolerance,
    a_entry,
    assemble,
    matrix_algebra,
    op_norm,
    sub,
)
from core.projlat import CentralProjection, is_orthogonal, proj_sup, rank_vector

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StarHom:
    """
    Unital *-homomorphism between block algebras.

    Codomain block l receives mult[l][k] copies of domain block k, laid out
    in increasing k, and is then conjugated by conjugators[l].
    """

    domain: AlgebraShape
    codomain: AlgebraShape
    mult: Tuple[Tuple[int, ...], ...]
    conjugators: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        mult = tuple(tuple(int(c) for c in row) for row in self.mult)
        if len(mult) != len(self.codomain) or any(len(row) != len(self.domain) for row in mult):
            raise InputError(
                f"multiplicity matrix must be {len(self.codomain)} x {len(self.domain)}"
            )
        if any(c < 0 for row in mult for c in row):
            raise InputError("multiplicities must be nonnegative")
        for l, (row, m) in enumerate(zip(mult, self.codomain.blocks)):
            embedded = sum(c * n for c, n in zip(row, self.domain.blocks))
            if embedded != m:
                raise InputError(f"not unital: codomain block {l} has size {m}, embedding fills {embedded}")
        if len(self.conjugators) != len(self.codomain):
            raise InputError("one conjugator per codomain block is required")
        conj = []
        for m, u in zip(self.codomain.blocks, self.conjugators):
            arr = np.array(u, dtype=complex)
            if arr.shape != (m, m) or np.linalg.norm(arr.conj().T @ arr - np.eye(m), 2) > 1e-8:
                raise InputError(f"conjugator for a block of size {m} is not a unitary of that size")
            arr.setflags(write=False)
            conj.append(arr)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "conjugators", tuple(conj))


@dataclass
class SupPreservationReport:
    members: int
    orthogonal_only: bool
    image_of_sup_ranks: Tuple[int, ...]
    sup_of_images_ranks: Tuple[int, ...]
    defect: float
    passed: bool


def identity_hom(shape: AlgebraShape) -> StarHom:
    mult = tuple(tuple(int(k == l) for k in range(len(shape))) for l in range(len(shape)))
    return StarHom(shape, shape, mult, tuple(np.eye(n) for n in shape.blocks))


def _slots(h: StarHom, l: int) -> List[int]:
    """Domain block index of each copy placed in codomain block l, in layout order."""
    return [k for k, c in enumerate(h.mult[l]) for _ in range(c)]


def apply(h: StarHom, x: Element) -> Element:
    if x.shape != h.domain:
        raise InputError(f"element of {x.shape} is not in the domain {h.domain}")
    blocks = []
    for l, u in enumerate(h.conjugators):
        inner = block_diag(*[x.blocks[k] for k in _slots(h, l)])
        blocks.append(u @ inner @ u.conj().T)
    return Element(h.codomain, tuple(blocks))


def _offsets(sizes: Sequence[int]) -> List[int]:
    return list(np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)) if sizes else []


def compose(h: StarHom, g: StarHom) -> StarHom:
    """h after g."""
    if g.codomain != h.domain:
        raise InputError(f"cannot compose: {g.codomain} is not {h.domain}")
    mult = tuple(
        tuple(
            sum(h.mult[l][j] * g.mult[j][k] for j in range(len(h.domain)))
            for k in range(len(g.domain))
        )
        for l in range(len(h.codomain))
    )
    conjugators = []
    for l, u in enumerate(h.conjugators):
        # layout produced by applying g then h: grouped by intermediate copy
        grouped = [k for j in _slots(h, l) for k in _slots(g, j)]
        canonical = sorted(range(len(grouped)), key=lambda s: (grouped[s], s))
        sizes = [g.domain.blocks[k] for k in grouped]
        g_off = _offsets(sizes)
        c_off = _offsets([sizes[s] for s in canonical])
        m = h.codomain.blocks[l]
        perm = np.zeros((m, m))
        for c_pos, s in enumerate(canonical):
            size = sizes[s]
            perm[g_off[s] : g_off[s] + size, c_off[c_pos] : c_off[c_pos] + size] = np.eye(size)
        inner = block_diag(*[g.conjugators[j] for j in _slots(h, l)])
        conjugators.append(u @ inner @ perm)
    return StarHom(g.domain, h.codomain, mult, tuple(conjugators))


def kernel_projection(h: StarHom) -> CentralProjection:
    """ker(h) = zA for the central z of domain blocks sent nowhere."""
    return CentralProjection(
        tuple(all(h.mult[l][k] == 0 for l in range(len(h.codomain))) for k in range(len(h.domain)))
    )


def lift_Mn(h: StarHom, n: int) -> StarHom:
    """M_n(h): apply h entrywise to the n x n grid of A-entries."""
    domain = matrix_algebra(h.domain, n)
    codomain = matrix_algebra(h.codomain, n)
    conjugators = []
    for l, u in enumerate(h.conjugators):
        slots = _slots(h, l)
        sizes = [h.domain.blocks[k] for k in slots]
        offs = _offsets(sizes)
        m = h.codomain.blocks[l]
        # canonical lifted layout: slot s holds an (n*size) tiled block at n*offs[s];
        # entrywise layout: tile row i holds slot s at i*m + offs[s]
        shuffle = np.zeros((n * m, n * m))
        for s, size in enumerate(sizes):
            for i in range(n):
                tile = i * m + offs[s]
                canon = n * offs[s] + i * size
                shuffle[tile : tile + size, canon : canon + size] = np.eye(size)
        conjugators.append(np.kron(np.eye(n), u) @ shuffle)
    return StarHom(domain, codomain, h.mult, tuple(conjugators))


def apply_entrywise(h: StarHom, x: Element, n: int) -> Element:
    """Reference M_n(h): h applied to each A-entry separately."""
    grid = [[apply(h, a_entry(x, h.domain, n, i, j)) for j in range(n)] for i in range(n)]
    return assemble(grid, h.codomain)


def check_sup_preservation(
    h: StarHom,
    family: Sequence[Element],
    orthogonal_only: bool = False,
    tol: Tolerance = Tolerance(),
) -> SupPreservationReport:
    if not family:
        raise InputError("empty family")
    if orthogonal_only:
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                if not is_orthogonal(family[i], family[j], tol):
                    raise InputError(f"members {i} and {j} are not orthogonal")
    image_of_sup = apply(h, proj_sup(family, tol))
    sup_of_images = proj_sup([apply(h, p) for p in family], tol)
    defect = op_norm(sub(image_of_sup, sup_of_images))
    report = SupPreservationReport(
        members=len(family),
        orthogonal_only=orthogonal_only,
        image_of_sup_ranks=rank_vector(image_of_sup, tol),
        sup_of_images_ranks=rank_vector(sup_of_images, tol),
        defect=defect,
        passed=defect <= tol.eps_struct,
    )
    log.debug("sup preservation: members=%s defect=%.2e", len(family), defect)
    return report


def entrywise_sup(family: Sequence[Element], base: AlgebraShape, n: int, tol: Tolerance = Tolerance()) -> Element:
    """Supremum of A-diagonal projections of M_n(A), taken entry by entry."""
    if not family:
        raise InputError("empty family")
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(proj_sup([a_entry(p, base, n, i, i) for p in family], tol))
            else:
                row.append(Element(base, tuple(np.zeros((b, b)) for b in base.blocks)))
        grid.append(row)
    return assemble(grid, base)


@dataclass
class DiagonalSupReport:
    """
    Supremum of an orthogonal family of M_n(A) taken through diagonalization.

    diagonal_residual – off-diagonal A-entry residual of the conjugated family
    entrywise_defect  – entrywise sup against the ordinary sup, in M_n(A)
    lifted_defect     – M_n(h) of the sup against the entrywise sup of the images
    """

    n: int
    members: int
    diagonal_residual: float
    entrywise_defect: float
    lifted_defect: float
    passed: bool


def check_diagonal_sup(
    h: StarHom,
    n: int,
    family: Sequence[Element],
    tol: Tolerance = Tolerance(),
) -> DiagonalSupReport:
    """
    Conjugate an orthogonal family of M_n(A) to A-diagonal form, take its
    supremum entry by entry, and check that M_n(h) carries it to the
    entrywise supremum of the images.
    """
    if not family:
        raise InputError("empty family")
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if not is_orthogonal(family[i], family[j], tol):
                raise InputError(f"members {i} and {j} are not orthogonal")

    result = simultaneous_diagonalize(h.domain, n, family, tol)
    diagonal = list(result.diagonalized)
    residual = max(result.report.residuals)

    sup_d = proj_sup(diagonal, tol)
    entrywise_defect = op_norm(sub(entrywise_sup(diagonal, h.domain, n, tol), sup_d))

    lifted = lift_Mn(h, n)
    images = [apply(lifted, d) for d in diagonal]
    lifted_defect = op_norm(sub(apply(lifted, sup_d), entrywise_sup(images, h.codomain, n, tol)))

    scale = result.report.scale
    report = DiagonalSupReport(
        n=n,
        members=len(family),
        diagonal_residual=residual,
        entrywise_defect=entrywise_defect,
        lifted_defect=lifted_defect,
        passed=(
            residual <= tol.eps_cluster * scale
            and entrywise_defect <= tol.eps_struct
            and lifted_defect <= tol.eps_struct
        ),
    )
    log.debug(
        "diagonal sup: n=%s members=%s entrywise=%.2e lifted=%.2e",
        n,
        len(family),
        entrywise_defect,
        lifted_defect,
    )
    return report
