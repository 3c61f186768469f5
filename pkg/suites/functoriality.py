# suites/functoriality.py
from __future__ import annotations

import logging

import numpy as np

from core.bus import CheckBus
from core.errors import AwStarError
from core.fdalg import AlgebraShape, Element, a_entry, adjoint, identity, matrix_algebra, matrix_unit, mul, op_norm, sub
from core.functor import (
    StarHom,
    apply,
    apply_entrywise,
    check_diagonal_sup,
    check_sup_preservation,
    compose,
    identity_hom,
    kernel_projection,
    lift_Mn,
)
from core.generators import (
    random_element,
    random_orthogonal_family,
    random_projection,
    random_shape,
    random_star_hom,
)
from core.models import SuiteContext, Tally

log = logging.getLogger(__name__)

SUITE = "functoriality"

# algebraic identities are checked at this absolute level
_LAW_EPS = 1e-10


def _gap(x: Element, y: Element) -> float:
    return op_norm(sub(x, y))


def _kernel_ok(h: StarHom) -> bool:
    z = kernel_projection(h)
    for k, flag in enumerate(z.flags):
        unit = Element(
            h.domain,
            tuple(np.eye(n) if j == k else np.zeros((n, n)) for j, n in enumerate(h.domain.blocks)),
        )
        if (op_norm(apply(h, unit)) == 0.0) != flag:
            return False
    return True


def run(
    bus: CheckBus,
    ctx: SuiteContext,
    *,
    homs: int = 100,
    max_blocks: int = 3,
    max_size: int = 3,
    max_n: int = 3,
    max_members: int = 3,
) -> None:
    tol = ctx.tol
    rng = ctx.rng(SUITE)

    laws = Tally(SUITE, "star_hom_laws")
    ident = Tally(SUITE, "identity")
    lift = Tally(SUITE, "lift_is_entrywise")
    composition = Tally(SUITE, "composition")
    kernel = Tally(SUITE, "kernel_is_central")
    orth = Tally(SUITE, "sup_preserved_orthogonal")
    arbitrary = Tally(SUITE, "sup_preserved_arbitrary")
    agree = Tally(SUITE, "orthogonal_implies_arbitrary")
    diagonal = Tally(SUITE, "sup_via_diagonalization")

    for _ in range(homs):
        domain = random_shape(rng, max_blocks, max_size)
        h = random_star_hom(domain, rng)
        n = int(rng.integers(1, max_n + 1))
        where = f"{h.domain} -> {h.codomain}, n={n}"

        x, y = random_element(domain, rng), random_element(domain, rng)
        gap = max(
            _gap(apply(h, adjoint(x)), adjoint(apply(h, x))),
            _gap(apply(h, mul(x, y)), mul(apply(h, x), apply(h, y))),
            _gap(apply(h, identity(domain)), identity(h.codomain)),
        )
        laws.record(gap <= _LAW_EPS, residual=gap, reason=f"{where}: {gap:.3e}")

        big = matrix_algebra(domain, n)
        xn = random_element(big, rng)
        gap = max(
            _gap(apply(identity_hom(domain), x), x),
            _gap(apply(lift_Mn(identity_hom(domain), n), xn), xn),
            _gap(apply(lift_Mn(h, 1), x), apply(h, x)),
        )
        ident.record(gap <= _LAW_EPS, residual=gap, reason=f"{where}: {gap:.3e}")

        lifted = lift_Mn(h, n)
        i, j = int(rng.integers(0, n)), int(rng.integers(0, n))
        tile = a_entry(apply(lifted, matrix_unit(domain, n, i, j, x)), h.codomain, n, i, j)
        gap = max(_gap(tile, apply(h, x)), _gap(apply(lifted, xn), apply_entrywise(h, xn, n)))
        lift.record(gap <= _LAW_EPS, residual=gap, reason=f"{where}: {gap:.3e}")

        kernel.record(_kernel_ok(h), reason=f"{where}: mult {h.mult}")

        # keep the composite small: its lift lives in M_n of the second codomain
        small = random_shape(rng, 2, 2)
        g1 = random_star_hom(small, rng, max_codomain_blocks=2)
        g2 = random_star_hom(g1.codomain, rng, max_codomain_blocks=2)
        both = compose(g2, g1)
        xs = random_element(small, rng)
        xsn = random_element(matrix_algebra(small, n), rng)
        gap = max(
            _gap(apply(both, xs), apply(g2, apply(g1, xs))),
            _gap(apply(lift_Mn(both, n), xsn), apply(lift_Mn(g2, n), apply(lift_Mn(g1, n), xsn))),
        )
        composition.record(gap <= _LAW_EPS, residual=gap, reason=f"{small} -> {both.codomain}: {gap:.3e}")

        members = int(rng.integers(1, max_members + 1))
        ortho_family = random_orthogonal_family(big, rng, members)
        free_family = [random_projection(big, rng) for _ in range(members)]
        try:
            rep_o = check_sup_preservation(lifted, ortho_family, orthogonal_only=True, tol=tol)
            rep_a = check_sup_preservation(lifted, free_family, orthogonal_only=False, tol=tol)
            rep_d = check_diagonal_sup(h, n, ortho_family, tol)
        except AwStarError as exc:
            orth.record(False, reason=f"{where}: {exc}")
            continue
        orth.record(rep_o.passed, residual=rep_o.defect, reason=f"{where}: defect {rep_o.defect:.3e}")
        arbitrary.record(rep_a.passed, residual=rep_a.defect, reason=f"{where}: defect {rep_a.defect:.3e}")
        agree.record(not rep_o.passed or rep_a.passed, reason=where)
        diagonal.record(
            rep_d.passed,
            residual=max(rep_d.entrywise_defect, rep_d.lifted_defect),
            reason=f"{where}: entrywise {rep_d.entrywise_defect:.3e} lifted {rep_d.lifted_defect:.3e}",
        )

    # C + C -> C onto the first coordinate kills the second
    proj = StarHom(AlgebraShape((1, 1)), AlgebraShape((1,)), ((1, 0),), (np.eye(1),))
    kernel.record(kernel_projection(proj).flags == (False, True) and _kernel_ok(proj))

    bus.publish(laws, ident, lift, composition, kernel, orth, arbitrary, agree, diagonal)
    log.info("%s: %s random homomorphisms", SUITE, homs)
