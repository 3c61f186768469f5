# run.py
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import Settings, get_settings
from core import __version__
from core.codec import (
    cprojection_from_json,
    dumps,
    element_from_json,
    element_to_json,
    hom_from_json,
    hom_to_json,
    loads,
    masa_to_json,
    model_to_json,
    piece_to_json,
    shape_from_json,
    tolerance_to_json,
)
from core.diag import simultaneous_diagonalize
from core.dimension import equidim_decomposition, evaluate
from core.errors import InputError, VerificationError
from core.fdalg import AlgebraShape, Tolerance, matrix_algebra
from core.functor import check_diagonal_sup, check_sup_preservation, lift_Mn
from core.generators import (
    random_commuting_family,
    random_cprojection,
    random_model,
    random_orthogonal_family,
    random_projection,
    random_star_hom,
)
from core.masa import joint_spectral
from core.models import SuiteContext
from core.projlat import comparison_decomposition, equivalent, rank_vector, strict_subequiv, subequiv
from core.selftest import SUITES, run_selftest, suite_params

log = logging.getLogger("runner")

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


def _read_input(path: str) -> Any:
    if path == "-":
        return loads(sys.stdin.read())
    try:
        return loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _parse_shape(raw: str) -> AlgebraShape:
    try:
        return AlgebraShape(tuple(int(p) for p in raw.split(",") if p.strip()))
    except ValueError as exc:
        raise InputError(f"--shape must look like '1,2', got {raw!r}") from exc


def _family(raw: Any, key: str = "family") -> List:
    items = raw.get(key) if isinstance(raw, dict) else None
    if not isinstance(items, list) or not items:
        raise InputError(f"{key!r} must be a non-empty list of elements")
    return [element_from_json(x) for x in items]


# --------------------------------------------------------------------- #
# commands
# --------------------------------------------------------------------- #


def cmd_diagonalize(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    raw = _read_input(args.input)
    base = shape_from_json(raw.get("base") if isinstance(raw, dict) else None)
    n = raw.get("n", 1)
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError(f"n must be an integer, got {n!r}")
    result = simultaneous_diagonalize(base, n, _family(raw), tol)
    return {
        "u": element_to_json(result.u),
        "diagonalized": [element_to_json(d) for d in result.diagonalized],
        "report": result.report,
    }


def cmd_compare(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    raw = _read_input(args.input)
    if not isinstance(raw, dict) or "e" not in raw or "f" not in raw:
        raise InputError("compare input needs 'e' and 'f'")
    e, f = element_from_json(raw["e"]), element_from_json(raw["f"])
    x, y, z = comparison_decomposition(e, f, tol)
    return {
        "ranks_e": list(rank_vector(e, tol)),
        "ranks_f": list(rank_vector(f, tol)),
        "equivalent": equivalent(e, f, tol),
        "e_subequiv_f": subequiv(e, f, tol),
        "f_subequiv_e": subequiv(f, e, tol),
        "e_strict_subequiv_f": strict_subequiv(e, f, tol),
        "x": x,
        "y": y,
        "z": z,
    }


def cmd_dimension(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    return evaluate(cprojection_from_json(_read_input(args.input)))


def cmd_equidecomp(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    e = cprojection_from_json(_read_input(args.input))
    return {"pieces": [piece_to_json(p) for p in equidim_decomposition(e)]}


def cmd_functor_check(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    raw = _read_input(args.input)
    if not isinstance(raw, dict) or "hom" not in raw:
        raise InputError("functor-check input needs 'hom' and 'family'")
    h = hom_from_json(raw["hom"])
    n = raw.get("n", 1)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    orthogonal_only = bool(raw.get("orthogonal_only", False))
    family = _family(raw)
    out: Dict[str, Any] = {
        "preservation": check_sup_preservation(lift_Mn(h, n), family, orthogonal_only, tol),
    }
    if orthogonal_only:
        out["diagonal"] = check_diagonal_sup(h, n, family, tol)
    passed = out["preservation"].passed and ("diagonal" not in out or out["diagonal"].passed)
    out["passed"] = passed
    return out


def cmd_gen(args: argparse.Namespace, tol: Tolerance) -> Dict[str, Any]:
    rng = np.random.default_rng(args.seed)
    shape = _parse_shape(args.shape)
    if args.n < 1 or args.members < 1:
        raise InputError(f"--n and --members must be positive, got n={args.n} members={args.members}")
    if args.kind == "commuting":
        family, _ = random_commuting_family(shape, args.n, args.members, rng, degenerate=args.degenerate)
        return {"base": list(shape.blocks), "n": args.n, "family": [element_to_json(x) for x in family]}
    if args.kind == "projections":
        big = matrix_algebra(shape, args.n)
        family = [random_projection(big, rng) for _ in range(max(args.members, 2))]
        return {
            "e": element_to_json(family[0]),
            "f": element_to_json(family[1]),
            "family": [element_to_json(p) for p in family],
        }
    if args.kind == "model":
        model = random_model(rng)
        e = random_cprojection(model, rng)
        return dict(model_to_json(model), mu=[m.to_json() for m in e.mu], nu=[v.to_json() for v in e.nu])
    if args.kind == "hom":
        h = random_star_hom(shape, rng)
        family = random_orthogonal_family(matrix_algebra(shape, args.n), rng, args.members)
        return {
            "hom": hom_to_json(h),
            "n": args.n,
            "orthogonal_only": True,
            "family": [element_to_json(p) for p in family],
        }
    if args.kind == "masa":
        family, _ = random_commuting_family(shape, 1, args.members, rng, degenerate=args.degenerate)
        return {"masa": masa_to_json(joint_spectral(family, tol))}
    raise InputError(f"unknown kind {args.kind!r}")


def cmd_selftest(args: argparse.Namespace, tol: Tolerance, settings: Settings) -> Dict[str, Any]:
    ctx = SuiteContext(tol=tol, seed=args.seed)
    outcome = run_selftest(ctx, suite_params(settings), only=args.suite)
    return {
        "passed": outcome.passed,
        "summary": outcome.summary,
        "status": outcome.status,
        "checks": outcome.checks,
    }


COMMANDS = {
    "diagonalize": cmd_diagonalize,
    "compare": cmd_compare,
    "dimension": cmd_dimension,
    "equidecomp": cmd_equidecomp,
    "functor-check": cmd_functor_check,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-struct", type=float, default=None, help="structural tolerance")
    common.add_argument("--tol-cluster", type=float, default=None, help="eigenvalue clustering tolerance")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="awstar",
        description="Finite-dimensional AW*-algebra toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("diagonalize", "simultaneously diagonalize a commuting normal family in M_n(A)"),
        ("compare", "comparison decomposition of two projections"),
        ("dimension", "dimension invariants of a projection of an atomic model"),
        ("equidecomp", "equidimensional decomposition of a projection"),
        ("functor-check", "supremum preservation under a *-homomorphism"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", help="JSON input file, or - for stdin")

    gen = sub.add_parser("gen", parents=[common], help="seeded random instance")
    gen.add_argument("--kind", choices=["commuting", "projections", "model", "hom", "masa"], required=True)
    gen.add_argument("--shape", default="1", help="base algebra block sizes, e.g. '1,2'")
    gen.add_argument("--n", type=int, default=1)
    gen.add_argument("--members", type=int, default=2)
    gen.add_argument("--degenerate", action="store_true", help="repeated eigenvalues")

    st = sub.add_parser("selftest", parents=[common], help="run the property suites")
    st.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only these suites")
    return parser


def _setup_logging(level: str, verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, level, logging.INFO),
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _emit(payload: Dict[str, Any], out: Optional[str]) -> None:
    text = dumps(payload) + "\n"
    if not out:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from exc


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except InputError as exc:
        _setup_logging("INFO", False)
        log.error("Bad configuration: %s", exc)
        return EXIT_INPUT
    _setup_logging(settings.log_level, args.verbose)

    overrides = {
        "eps_struct": args.tol_struct,
        "eps_cluster": args.tol_cluster,
        "seed": args.seed,
    }
    settings = dataclasses.replace(settings, **{k: v for k, v in overrides.items() if v is not None})
    args.seed = settings.seed

    try:
        tol = settings.tolerance()
        if args.command == "selftest":
            result = cmd_selftest(args, tol, settings)
        else:
            result = COMMANDS[args.command](args, tol)
        _emit(
            {
                "version": __version__,
                "tolerance": tolerance_to_json(tol),
                "command": args.command,
                "seed": settings.seed,
                "result": result,
            },
            args.out,
        )
    except InputError as exc:
        log.error("Bad input: %s", exc)
        return EXIT_INPUT
    except np.linalg.LinAlgError as exc:
        log.error("Bad input: linear algebra failed: %s", exc)
        return EXIT_INPUT
    except VerificationError as exc:
        log.error("Verification failed: %s", exc)
        return EXIT_VERIFICATION

    failed = isinstance(result, dict) and result.get("passed") is False
    return EXIT_VERIFICATION if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
