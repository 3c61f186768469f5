# core/diag.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from core.errors import InputError, VerificationError
from core.fdalg import (
    AlgebraShape,
    Element,
    Tolerance,
    a_entry,
    adjoint,
    identity,
    matrix_algebra,
    matrix_unit,
    mul,
    op_norm,
    sub,
)
from core.masa import equipartition, equipartition_columns, joint_spectral
from core.projlat import equivalent, rank_vector, unitary_from_equivalences

log = logging.getLogger(__name__)


@dataclass
class DiagonalizationReport:
    """
    Per-member residuals of one simultaneous diagonalization.

    residuals        – max norm of an off-diagonal A-entry of u x u*
    scalar_residuals – max off-diagonal matrix entry of u x u* (full diagonal)
    roundtrip        – norm of u*(u x u*)u - x
    spectrum         – max eigenvalue displacement between x and u x u*
    """

    scale: float
    unitarity_defect: float
    residuals: List[float] = field(default_factory=list)
    scalar_residuals: List[float] = field(default_factory=list)
    roundtrip: List[float] = field(default_factory=list)
    spectrum: List[float] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class DiagonalizationResult:
    u: Element
    diagonalized: Tuple[Element, ...]
    report: DiagonalizationReport


def conjugate(u: Element, x: Element) -> Element:
    return mul(mul(u, x), adjoint(u))


def a_diagonal_residual(x: Element, base: AlgebraShape, n: int) -> float:
    worst = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                worst = max(worst, op_norm(a_entry(x, base, n, i, j)))
    return worst


def is_a_diagonal(
    x: Element,
    base: AlgebraShape,
    n: int,
    tol: Tolerance = Tolerance(),
    *,
    eps: float | None = None,
) -> Tuple[bool, float]:
    """Off-diagonal A-entries vanish, relative to 1 + ||x||."""
    residual = a_diagonal_residual(x, base, n)
    bound = (tol.eps_struct if eps is None else eps) * (1.0 + op_norm(x))
    return residual <= bound, residual


def _scalar_residual(x: Element) -> float:
    return max(
        float(np.abs(b - np.diag(np.diag(b))).max()) if b.size else 0.0 for b in x.blocks
    )


def _spectrum_shift(x: Element, y: Element) -> float:
    worst = 0.0
    for bx, by in zip(x.blocks, y.blocks):
        ex = np.linalg.eigvals(bx)
        ey = np.linalg.eigvals(by)
        cost = np.abs(ex[:, None] - ey[None, :])
        rows, cols = linear_sum_assignment(cost)
        worst = max(worst, float(cost[rows, cols].max()))
    return worst


def standard_units(base: AlgebraShape, n: int) -> List[Element]:
    """Diagonal A-units e_jj of M_n(A)."""
    return [matrix_unit(base, n, j, j) for j in range(n)]


def _unit_bases(base: AlgebraShape, n: int, j: int) -> List[np.ndarray]:
    bases = []
    for nk in base.blocks:
        cols = np.zeros((n * nk, nk), dtype=complex)
        cols[j * nk : (j + 1) * nk, :] = np.eye(nk)
        bases.append(cols)
    return bases


def simultaneous_diagonalize(
    base: AlgebraShape,
    n: int,
    family: Sequence[Element],
    tol: Tolerance = Tolerance(),
) -> DiagonalizationResult:
    """
    Unitary u of M_n(A) with u x u* diagonal in M_n(A) for every x in the family.

    Route: masa C containing the family, n equivalent projections f_j of C
    summing to 1, partial isometries v_j from f_j onto the diagonal units
    e_jj, and u = sum v_j.
    """
    shape = matrix_algebra(base, n)
    if not family:
        raise InputError("empty family")
    for idx, x in enumerate(family):
        if x.shape != shape:
            raise InputError(f"member {idx} lives in {x.shape}, expected M_{n}({base}) = {shape}")

    masa = joint_spectral(family, tol)
    fs = equipartition(masa, n, tol)
    es = standard_units(base, n)

    for j, (f, e) in enumerate(zip(fs, es)):
        if not equivalent(f, e, tol):
            raise VerificationError(
                f"f_{j} ranks {rank_vector(f, tol)} differ from e_{j}{j} ranks {rank_vector(e, tol)}"
            )

    # match frame columns to standard basis vectors so u x u* comes out fully diagonal
    groups = equipartition_columns(masa, n)
    f_bases = [[masa.frames[k][:, cols] for k, cols in enumerate(g)] for g in groups]
    e_bases = [_unit_bases(base, n, j) for j in range(n)]
    u = unitary_from_equivalences(fs, es, tol, e_bases=f_bases, f_bases=e_bases)

    one = identity(shape)
    us = adjoint(u)
    unitarity = max(op_norm(sub(mul(u, us), one)), op_norm(sub(mul(us, u), one)))
    scale = 1.0 + max(op_norm(x) for x in family)
    report = DiagonalizationReport(scale=scale, unitarity_defect=unitarity)

    diagonalized = []
    for x in family:
        d = conjugate(u, x)
        diagonalized.append(d)
        report.residuals.append(a_diagonal_residual(d, base, n))
        report.scalar_residuals.append(_scalar_residual(d))
        report.roundtrip.append(op_norm(sub(conjugate(us, d), x)))
        report.spectrum.append(_spectrum_shift(x, d))

    bound = tol.eps_cluster * scale
    if unitarity > tol.eps_cluster:
        raise VerificationError(f"u is not unitary: defect {unitarity:.3e}")
    worst = max(report.residuals)
    if worst > bound:
        raise VerificationError(f"off-diagonal A-entry residual {worst:.3e} exceeds {bound:.3e}")

    log.debug(
        "diagonalized %s members over M_%s(%s): residual=%.2e unitarity=%.2e",
        len(family),
        n,
        base,
        worst,
        unitarity,
    )
    return DiagonalizationResult(u=u, diagonalized=tuple(diagonalized), report=report)
