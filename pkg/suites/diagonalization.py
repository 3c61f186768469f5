# suites/diagonalization.py
from __future__ import annotations

import logging

from core.bus import CheckBus
from core.diag import is_a_diagonal, simultaneous_diagonalize
from core.errors import AwStarError, InputError
from core.fdalg import AlgebraShape, adjoint, commutes, matrix_algebra
from core.generators import random_commuting_family, random_element, random_shape
from core.models import SuiteContext, Tally

log = logging.getLogger(__name__)

SUITE = "diagonalization"


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    instances: int = 200,
    max_blocks: int = 3,
    max_size: int = 3,
    max_n: int = 3,
    max_members: int = 4,
) -> None:
    tol = ctx.tol
    rng = ctx.rng(SUITE)

    a_diagonal = Tally(SUITE, "a_diagonal")
    unitary = Tally(SUITE, "unitarity")
    roundtrip = Tally(SUITE, "roundtrip")
    spectrum = Tally(SUITE, "spectrum_preserved")
    commuting = Tally(SUITE, "commutativity_preserved")
    scalar = Tally(SUITE, "scalar_diagonal")

    for _ in range(instances):
        base = random_shape(rng, max_blocks, max_size)
        n = int(rng.integers(1, max_n + 1))
        members = int(rng.integers(1, max_members + 1))
        family, _ = random_commuting_family(base, n, members, rng, degenerate=bool(rng.integers(0, 2)))
        where = f"M_{n}({base}) x{members}"
        try:
            result = simultaneous_diagonalize(base, n, family, tol)
        except AwStarError as exc:
            a_diagonal.record(False, reason=f"{where}: {exc}")
            continue

        report = result.report
        scale = report.scale
        ok = all(is_a_diagonal(d, base, n, tol, eps=tol.eps_cluster)[0] for d in result.diagonalized)
        a_diagonal.record(
            ok and max(report.residuals) <= tol.eps_cluster * scale,
            residual=max(report.residuals),
            reason=f"{where}: residual {max(report.residuals):.3e}",
        )
        unitary.record(
            report.unitarity_defect <= 1e-10,
            residual=report.unitarity_defect,
            reason=f"{where}: defect {report.unitarity_defect:.3e}",
        )
        roundtrip.record(
            max(report.roundtrip) <= 1e-10 * scale,
            residual=max(report.roundtrip),
            reason=f"{where}: roundtrip {max(report.roundtrip):.3e}",
        )
        spectrum.record(
            max(report.spectrum) <= 1e-8 * scale,
            residual=max(report.spectrum),
            reason=f"{where}: spectrum shift {max(report.spectrum):.3e}",
        )
        diag = result.diagonalized
        commuting.record(
            all(commutes(diag[i], diag[j], tol) for i in range(len(diag)) for j in range(i + 1, len(diag))),
            reason=f"{where}: diagonalized family stopped commuting",
        )
        scalar.record(
            max(report.scalar_residuals) <= tol.eps_cluster * scale,
            residual=max(report.scalar_residuals),
            reason=f"{where}: scalar residual {max(report.scalar_residuals):.3e}",
        )

    bus.publish(a_diagonal, unitary, roundtrip, spectrum, commuting, scalar)

    rejects = Tally(SUITE, "rejects_non_commuting")
    base = AlgebraShape((2,))
    shape = matrix_algebra(base, 2)
    for _ in range(10):
        x = random_element(shape, rng)
        hermitian = [x + adjoint(x), random_element(shape, rng)]
        hermitian[1] = hermitian[1] + adjoint(hermitian[1])
        for bad in ([x], hermitian):
            try:
                simultaneous_diagonalize(base, 2, bad, tol)
                rejects.record(False, reason="accepted a non-normal or non-commuting family")
            except InputError:
                rejects.record(True)
    bus.publish(rejects)
    log.info("%s: %s instances", SUITE, instances)
