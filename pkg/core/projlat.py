# core/projlat.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, qr, svd, svdvals

from core.errors import InputError, VerificationError
from core.fdalg import (
    AlgebraShape,
    Element,
    Tolerance,
    adjoint,
    identity,
    is_projection,
    mul,
    op_norm,
    sub,
    total,
)

log = logging.getLogger(__name__)

RankVector = Tuple[int, ...]

# projection spectra sit near {0, 1}
_RANK_CUT = 0.5
_SPAN_CUTOFF = 1e-8


@dataclass(frozen=True)
class CentralProjection:
    """Central projection of a block algebra: block k is 0 or the identity."""

    flags: Tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "flags", tuple(bool(f) for f in self.flags))

    @classmethod
    def full(cls, shape: AlgebraShape) -> "CentralProjection":
        return cls((True,) * len(shape))

    @classmethod
    def empty(cls, shape: AlgebraShape) -> "CentralProjection":
        return cls((False,) * len(shape))

    def element(self, shape: AlgebraShape) -> Element:
        if len(self.flags) != len(shape):
            raise InputError(f"{len(self.flags)} flags for {len(shape)} blocks")
        return Element(
            shape,
            tuple(np.eye(n) if f else np.zeros((n, n)) for n, f in zip(shape.blocks, self.flags)),
        )

    def complement(self) -> "CentralProjection":
        return CentralProjection(tuple(not f for f in self.flags))

    def __and__(self, other: "CentralProjection") -> "CentralProjection":
        return CentralProjection(tuple(a and b for a, b in zip(self.flags, other.flags)))

    def __or__(self, other: "CentralProjection") -> "CentralProjection":
        return CentralProjection(tuple(a or b for a, b in zip(self.flags, other.flags)))

    @property
    def is_zero(self) -> bool:
        return not any(self.flags)

    def to_json(self) -> List[bool]:
        return list(self.flags)


def _require_projection(p: Element, tol: Tolerance, what: str = "input") -> None:
    if not is_projection(p, tol):
        raise InputError(f"{what} is not a projection")


def _require_same(p: Element, q: Element) -> None:
    if p.shape != q.shape:
        raise InputError(f"shape mismatch: {p.shape} vs {q.shape}")


def rank_vector(p: Element, tol: Tolerance = Tolerance()) -> RankVector:
    _require_projection(p, tol)
    return tuple(int(np.sum(svdvals(b) > _RANK_CUT)) for b in p.blocks)


def equivalent(p: Element, q: Element, tol: Tolerance = Tolerance()) -> bool:
    _require_same(p, q)
    return rank_vector(p, tol) == rank_vector(q, tol)


def subequiv(p: Element, q: Element, tol: Tolerance = Tolerance()) -> bool:
    _require_same(p, q)
    return all(a <= b for a, b in zip(rank_vector(p, tol), rank_vector(q, tol)))


def _strict_ranks(rp: RankVector, rq: RankVector) -> bool:
    # 0 < 0 is allowed
    if not any(rp) and not any(rq):
        return True
    return all(a <= b for a, b in zip(rp, rq)) and rp != rq


def strict_subequiv(p: Element, q: Element, tol: Tolerance = Tolerance()) -> bool:
    _require_same(p, q)
    return _strict_ranks(rank_vector(p, tol), rank_vector(q, tol))


def _range_basis(block: np.ndarray, rank: int) -> np.ndarray:
    """
    Orthonormal basis of the range of a projection block.

    Pivoted QR picks columns deterministically; phases are fixed so that
    the diagonal of R is positive.
    """
    size = block.shape[0]
    if rank == 0:
        return np.zeros((size, 0), dtype=complex)
    q, r, _ = qr(block, pivoting=True, mode="economic")
    q = q[:, :rank]
    d = np.diag(r)[:rank]
    phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * phase


def range_bases(p: Element, tol: Tolerance = Tolerance()) -> Tuple[np.ndarray, ...]:
    ranks = rank_vector(p, tol)
    return tuple(_range_basis(b, r) for b, r in zip(p.blocks, ranks))


def partial_isometry(
    p: Element,
    q: Element,
    tol: Tolerance = Tolerance(),
    *,
    p_basis: Optional[Sequence[np.ndarray]] = None,
    q_basis: Optional[Sequence[np.ndarray]] = None,
) -> Element:
    """
    v with v*v = p and vv* = q.

    Optional bases pin down which orthonormal frame of each range is
    matched column by column; otherwise range_bases() is used.
    """
    if not equivalent(p, q, tol):
        raise InputError(
            f"projections are not equivalent: ranks {rank_vector(p, tol)} vs {rank_vector(q, tol)}"
        )
    bp = tuple(p_basis) if p_basis is not None else range_bases(p, tol)
    bq = tuple(q_basis) if q_basis is not None else range_bases(q, tol)
    v = Element(p.shape, tuple(b_q @ b_p.conj().T for b_p, b_q in zip(bp, bq)))

    vs = adjoint(v)
    defect = max(op_norm(sub(mul(vs, v), p)), op_norm(sub(mul(v, vs), q)))
    if defect > max(tol.eps_struct, tol.eps_cluster) * 10:
        raise VerificationError(f"partial isometry defect {defect:.3e}")
    return v


def central_cover(p: Element, tol: Tolerance = Tolerance()) -> CentralProjection:
    return CentralProjection(tuple(r > 0 for r in rank_vector(p, tol)))


def central_multiply(z: CentralProjection, p: Element) -> Element:
    return mul(z.element(p.shape), p)


def comparison_decomposition(
    e: Element,
    f: Element,
    tol: Tolerance = Tolerance(),
) -> Tuple[CentralProjection, CentralProjection, CentralProjection]:
    """
    Central x + y + z = 1 with xe < xf, ye ~ yf and ze > zf.
    """
    _require_same(e, f)
    re_, rf = rank_vector(e, tol), rank_vector(f, tol)
    x = CentralProjection(tuple(a < b for a, b in zip(re_, rf)))
    y = CentralProjection(tuple(a == b for a, b in zip(re_, rf)))
    z = CentralProjection(tuple(a > b for a, b in zip(re_, rf)))

    failures = comparison_failures(re_, rf, x, y, z)
    if failures:
        raise VerificationError("comparison decomposition broken: " + "; ".join(failures))

    log.debug("comparison ranks e=%s f=%s -> x=%s y=%s z=%s", re_, rf, x.flags, y.flags, z.flags)
    return x, y, z


def _cut(ranks: RankVector, c: CentralProjection) -> RankVector:
    return tuple(r if flag else 0 for r, flag in zip(ranks, c.flags))


def comparison_failures(
    re_: RankVector,
    rf: RankVector,
    x: CentralProjection,
    y: CentralProjection,
    z: CentralProjection,
) -> List[str]:
    """Clauses of the comparison theorem that do not hold, checked on rank vectors."""
    failures = []
    for k in range(len(re_)):
        if x.flags[k] + y.flags[k] + z.flags[k] != 1:
            failures.append(f"block {k} not covered exactly once")
    if not _strict_ranks(_cut(re_, x), _cut(rf, x)):
        failures.append("xe < xf fails")
    if _cut(re_, y) != _cut(rf, y):
        failures.append("ye ~ yf fails")
    if not _strict_ranks(_cut(rf, z), _cut(re_, z)):
        failures.append("ze > zf fails")
    return failures


def _projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.conj().T


def proj_sup(family: Sequence[Element], tol: Tolerance = Tolerance()) -> Element:
    """Projection onto the span of the ranges, blockwise."""
    if not family:
        raise InputError("supremum of an empty family needs a shape; pass at least one projection")
    shape = family[0].shape
    for p in family:
        _require_same(family[0], p)
        _require_projection(p, tol)
    blocks = []
    for k, size in enumerate(shape.blocks):
        stacked = np.hstack([p.blocks[k] for p in family])
        u, s, _ = svd(stacked, full_matrices=False)
        blocks.append(_projector(u[:, s > _SPAN_CUTOFF]) if s.size else np.zeros((size, size)))
    return Element(shape, tuple(blocks))


def proj_inf(p: Element, q: Element, tol: Tolerance = Tolerance()) -> Element:
    """Projection onto the intersection of the ranges, blockwise."""
    _require_same(p, q)
    _require_projection(p, tol)
    _require_projection(q, tol)
    blocks = []
    for bp, bq in zip(p.blocks, q.blocks):
        one = np.eye(bp.shape[0])
        kernel = null_space(np.vstack([one - bp, one - bq]), rcond=_SPAN_CUTOFF)
        blocks.append(_projector(kernel))
    return Element(p.shape, tuple(blocks))


def complement(p: Element) -> Element:
    return sub(identity(p.shape), p)


def is_orthogonal(p: Element, q: Element, tol: Tolerance = Tolerance()) -> bool:
    return op_norm(mul(p, q)) <= tol.eps_struct


def compress(e: Element, x: Element) -> Element:
    """Corner map a -> eae."""
    return mul(mul(e, x), e)


def in_corner(e: Element, p: Element, tol: Tolerance = Tolerance()) -> bool:
    return op_norm(sub(p, compress(e, p))) <= tol.eps_struct


is_subprojection = in_corner


def corner_central_cover(e: Element, f: Element, tol: Tolerance = Tolerance()) -> Element:
    """Central cover of f <= e computed inside eAe, which is c(f)e."""
    if not in_corner(e, f, tol):
        raise InputError("projection does not lie under the corner projection")
    # the centre of eAe is eZ(A) restricted to the blocks where e is nonzero
    corner_flags = tuple(
        re_ > 0 and rf > 0 for re_, rf in zip(rank_vector(e, tol), rank_vector(f, tol))
    )
    return compress(e, CentralProjection(corner_flags).element(e.shape))


def is_abelian(p: Element, tol: Tolerance = Tolerance()) -> bool:
    """pAp is commutative exactly when p has rank at most one in every block."""
    return all(r <= 1 for r in rank_vector(p, tol))


def type_decomposition(shape: AlgebraShape) -> Dict[int, CentralProjection]:
    """Central projection z_m selecting the type I_m summand, for each m present."""
    out: Dict[int, CentralProjection] = {}
    for m in sorted(set(shape.blocks)):
        out[m] = CentralProjection(tuple(b == m for b in shape.blocks))
    return out


def abelian_cover_check(shape: AlgebraShape) -> Dict[int, bool]:
    """
    For each type summand z_m, check that z_m is a sum of m equivalent
    abelian projections with central cover z_m.
    """
    result: Dict[int, bool] = {}
    for m, z in type_decomposition(shape).items():
        pieces = []
        for j in range(m):
            blocks = []
            for size, flag in zip(shape.blocks, z.flags):
                block = np.zeros((size, size))
                if flag:
                    block[j, j] = 1.0
                blocks.append(block)
            pieces.append(Element(shape, tuple(blocks)))
        covers = {central_cover(p).flags for p in pieces}
        ok = (
            covers == {z.flags}
            and all(is_abelian(p) for p in pieces)
            and len({rank_vector(p) for p in pieces}) == 1
            and op_norm(sub(total(pieces, shape), z.element(shape))) == 0.0
        )
        result[m] = ok
    return result


def unitary_from_equivalences(
    es: Sequence[Element],
    fs: Sequence[Element],
    tol: Tolerance = Tolerance(),
    *,
    e_bases: Optional[Sequence[Sequence[np.ndarray]]] = None,
    f_bases: Optional[Sequence[Sequence[np.ndarray]]] = None,
) -> Element:
    """
    Given orthogonal families summing to 1 with e_j ~ f_j, return u = sum v_j
    where v_j*v_j = e_j and v_j v_j* = f_j, so that u e_j u* = f_j.
    """
    if len(es) != len(fs) or not es:
        raise InputError("families must be non-empty and of equal length")
    shape = es[0].shape
    one = identity(shape)
    for fam in (es, fs):
        if op_norm(sub(total(fam, shape), one)) > tol.eps_cluster:
            raise InputError("family does not sum to 1")
    parts = []
    for j, (e, f) in enumerate(zip(es, fs)):
        if not equivalent(e, f, tol):
            raise VerificationError(
                f"member {j} is not equivalent to its partner: "
                f"{rank_vector(e, tol)} vs {rank_vector(f, tol)}"
            )
        parts.append(
            partial_isometry(
                e,
                f,
                tol,
                p_basis=None if e_bases is None else e_bases[j],
                q_basis=None if f_bases is None else f_bases[j],
            )
        )
    return total(parts, shape)
