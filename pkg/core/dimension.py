# core/dimension.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import groupby
from typing import Dict, List, Optional, Sequence, Tuple

from core.cardinal import ZERO, Cardinal, add, aleph, finite, mul, pred, succ
from core.errors import InputError, VerificationError

log = logging.getLogger(__name__)

Flags = Tuple[bool, ...]


@dataclass(frozen=True)
class AtomicModel:
    """
    Symbolic direct sum of type I factors B(H_i) with dim H_i = atoms[i].

    The atoms stand in for the points of the spectrum of the centre.
    """

    atoms: Tuple[Cardinal, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise InputError("atomic model needs at least one atom")
        if any(not a.is_infinite for a in atoms):
            raise InputError(f"atom dimensions must be infinite, got {[str(a) for a in atoms]}")
        object.__setattr__(self, "atoms", atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def full(self) -> Flags:
        return (True,) * len(self.atoms)


@dataclass(frozen=True)
class CProjection:
    """
    Projection of an AtomicModel, up to unitary equivalence inside each
    atom: mu[i] is the range dimension and nu[i] the corange dimension.
    """

    model: AtomicModel
    mu: Tuple[Cardinal, ...]
    nu: Tuple[Cardinal, ...]

    def __post_init__(self) -> None:
        mu, nu = tuple(self.mu), tuple(self.nu)
        if not (len(mu) == len(nu) == len(self.model)):
            raise InputError("mu and nu need one entry per atom")
        for i, (kappa, m, n) in enumerate(zip(self.model.atoms, mu, nu)):
            if add(m, n) != kappa:
                raise InputError(f"atom {i}: {m} + {n} != {kappa}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @property
    def is_zero(self) -> bool:
        return all(m.is_zero for m in self.mu)


@dataclass(frozen=True)
class DeltaResult:
    value: Cardinal
    achieved: bool


@dataclass(frozen=True)
class EquidimPiece:
    flags: Flags
    alpha: Cardinal


@dataclass(frozen=True)
class MatrixUnits:
    """
    Orthogonal family of `count` projections, each equivalent to 1, summing to 1.

    Finite counts list the pieces; a countable family is described only by
    its certificate, the identities count * kappa_i = kappa_i.
    """

    count: Cardinal
    pieces: Tuple[CProjection, ...]
    certificate: Tuple[Tuple[Cardinal, Cardinal], ...]


# --------------------------------------------------------------------- #
# constructors
# --------------------------------------------------------------------- #


def projection(model: AtomicModel, mu: Sequence[Cardinal], nu: Optional[Sequence[Cardinal]] = None) -> CProjection:
    """
    Build a projection; without nu, the corange is kappa when mu < kappa and
    0 when mu = kappa.
    """
    if nu is None:
        nu = [ZERO if m == kappa else kappa for m, kappa in zip(mu, model.atoms)]
    return CProjection(model, tuple(mu), tuple(nu))


def zero(model: AtomicModel) -> CProjection:
    return CProjection(model, (ZERO,) * len(model), model.atoms)


def one(model: AtomicModel) -> CProjection:
    return CProjection(model, model.atoms, (ZERO,) * len(model))


def complement(e: CProjection) -> CProjection:
    return CProjection(e.model, e.nu, e.mu)


def _same_model(e: CProjection, f: CProjection) -> None:
    if e.model != f.model:
        raise InputError("projections live in different models")


def join(e: CProjection, f: CProjection) -> CProjection:
    """e v f up to equivalence: pointwise max of the ranges, canonical corange."""
    _same_model(e, f)
    return projection(e.model, [max(a, b) for a, b in zip(e.mu, f.mu)])


# --------------------------------------------------------------------- #
# comparison
# --------------------------------------------------------------------- #


def is_properly_infinite(e: CProjection) -> bool:
    return not e.is_zero and all(m.is_zero or m.is_infinite for m in e.mu)


def equivalent(e: CProjection, f: CProjection) -> bool:
    _same_model(e, f)
    return e.mu == f.mu


def subequiv(e: CProjection, f: CProjection) -> bool:
    _same_model(e, f)
    return all(a <= b for a, b in zip(e.mu, f.mu))


def central_cover(e: CProjection) -> Flags:
    return tuple(not m.is_zero for m in e.mu)


def cut(z: Sequence[bool], e: CProjection) -> CProjection:
    """The central product ze."""
    if len(z) != len(e.model):
        raise InputError(f"{len(z)} flags for {len(e.model)} atoms")
    mu = tuple(m if flag else ZERO for m, flag in zip(e.mu, z))
    nu = tuple(n if flag else kappa for n, flag, kappa in zip(e.nu, z, e.model.atoms))
    return CProjection(e.model, mu, nu)


# --------------------------------------------------------------------- #
# dimension
# --------------------------------------------------------------------- #


def _require_dimensionable(e: CProjection) -> None:
    if not e.is_zero and not is_properly_infinite(e):
        raise InputError("not properly infinite: some atom carries a finite nonzero range")


def _cover_mus(e: CProjection) -> List[Cardinal]:
    return [m for m in e.mu if not m.is_zero]


def dim_d(e: CProjection) -> Cardinal:
    """
    d(e): successor of the smallest range dimension over the central cover.

    On one atom d = mu^+, and d(e) is the minimum of d(z_i e) over a
    central partition of the cover.
    """
    _require_dimensionable(e)
    if e.is_zero:
        return ZERO
    return succ(min(_cover_mus(e)))


def dim_dbar(e: CProjection) -> Cardinal:
    """d-bar(e): sup of d(ze) over central 0 < z <= c(e); attained on single atoms."""
    _require_dimensionable(e)
    if e.is_zero:
        return ZERO
    return succ(max(_cover_mus(e)))


def gamma_sizes(e: CProjection) -> Tuple[Cardinal, ...]:
    """Infinite cardinalities of orthogonal families of copies of e summing to e."""
    if not is_properly_infinite(e):
        raise InputError("not properly infinite")
    top = pred(dim_d(e))
    return tuple(aleph(k) for k in range(top.value + 1))


def splits_into(e: CProjection, gamma: Cardinal) -> bool:
    """True when e is a sum of gamma orthogonal copies of itself: gamma * mu_i = mu_i on the cover."""
    if not is_properly_infinite(e):
        raise InputError("not properly infinite")
    return gamma.is_infinite and all(mul(gamma, m) == m for m in _cover_mus(e))


def delta(e: CProjection) -> DeltaResult:
    value = max(gamma_sizes(e))
    return DeltaResult(value=value, achieved=splits_into(e, value))


def is_equidimensional(e: CProjection) -> bool:
    _require_dimensionable(e)
    return len(set(_cover_mus(e))) <= 1


def equidim_decomposition(e: CProjection) -> List[EquidimPiece]:
    """
    Cover of e split into the largest central z_alpha with z_alpha e
    alpha-equidimensional, in increasing alpha.
    """
    if not is_properly_infinite(e):
        raise InputError("not properly infinite")
    cover = [i for i, m in enumerate(e.mu) if not m.is_zero]
    pieces = []
    for m, idx in groupby(sorted(cover, key=lambda i: e.mu[i]), key=lambda i: e.mu[i]):
        members = set(idx)
        flags = tuple(i in members for i in range(len(e.model)))
        pieces.append(EquidimPiece(flags=flags, alpha=succ(m)))

    _verify_decomposition(e, pieces)
    return pieces


def _verify_decomposition(e: CProjection, pieces: Sequence[EquidimPiece]) -> None:
    cover = central_cover(e)
    seen = [0] * len(cover)
    for piece in pieces:
        part = cut(piece.flags, e)
        if not is_equidimensional(part) or dim_d(part) != piece.alpha:
            raise VerificationError(f"piece {piece.flags} is not {piece.alpha}-equidimensional")
        for i, flag in enumerate(piece.flags):
            seen[i] += flag
            if flag and not cover[i]:
                raise VerificationError(f"piece {piece.flags} leaves the central cover")
        for i, in_cover in enumerate(cover):
            if in_cover and not piece.flags[i]:
                grown = tuple(f or j == i for j, f in enumerate(piece.flags))
                if is_equidimensional(cut(grown, e)):
                    raise VerificationError(f"piece {piece.flags} is not maximal: atom {i} fits")
    if tuple(s == 1 for s in seen) != cover:
        raise VerificationError("pieces are not an orthogonal partition of the central cover")


def dimension_function(e: CProjection) -> Tuple[Cardinal, ...]:
    """D_e per atom: mu^+ on the central cover, 0 off it."""
    _require_dimensionable(e)
    return tuple(ZERO if m.is_zero else succ(m) for m in e.mu)


def compare_by_dimension(e: CProjection, f: CProjection) -> bool:
    _same_model(e, f)
    return all(a <= b for a, b in zip(dimension_function(e), dimension_function(f)))


# --------------------------------------------------------------------- #
# infinite matrix units
# --------------------------------------------------------------------- #


def halving(model: AtomicModel) -> CProjection:
    """e with e ~ 1 ~ 1 - e: range and corange both of dimension kappa."""
    e = CProjection(model, model.atoms, model.atoms)
    if not (equivalent(e, one(model)) and equivalent(complement(e), one(model))):
        raise VerificationError("halving projection is not equivalent to 1")
    return e


def matrix_units(model: AtomicModel, n: Cardinal) -> MatrixUnits:
    if n.is_zero:
        raise InputError("need at least one matrix unit")
    if n > aleph(0):
        raise InputError(f"beyond model certification: {n} > aleph_0")

    certificate = tuple((kappa, mul(n, kappa)) for kappa in model.atoms)
    if any(product != kappa for kappa, product in certificate):
        raise VerificationError(f"cardinal certificate fails: {certificate}")

    if n.is_infinite:
        log.debug("matrix_units: countable family certified on %s atoms", len(model))
        return MatrixUnits(count=n, pieces=(), certificate=certificate)

    if n == finite(1):
        pieces: Tuple[CProjection, ...] = (one(model),)
    else:
        pieces = tuple(CProjection(model, model.atoms, model.atoms) for _ in range(n.value))
    return MatrixUnits(count=n, pieces=pieces, certificate=certificate)


def evaluate(e: CProjection) -> Dict[str, object]:
    """Every dimension invariant of e, as used by the `dimension` command."""
    out: Dict[str, object] = {
        "properly_infinite": is_properly_infinite(e),
        "central_cover": list(central_cover(e)),
    }
    if e.is_zero or is_properly_infinite(e):
        out["d"] = dim_d(e)
        out["dbar"] = dim_dbar(e)
        out["D"] = list(dimension_function(e))
        out["equidimensional"] = is_equidimensional(e)
    if is_properly_infinite(e):
        out["gamma_sizes"] = list(gamma_sizes(e))
        result = delta(e)
        out["delta"] = result.value
        out["delta_achieved"] = result.achieved
    return out
