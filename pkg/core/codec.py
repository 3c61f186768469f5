# core/codec.py
from __future__ import annotations

import dataclasses
import json
from typing import Any, Dict, List, Optional

import numpy as np

from core.cardinal import Cardinal
from core.dimension import AtomicModel, CProjection, EquidimPiece, projection
from core.errors import InputError
from core.fdalg import AlgebraShape, Element, Tolerance
from core.functor import StarHom
from core.masa import Masa
from core.projlat import CentralProjection


def _need(raw: Dict[str, Any], key: str) -> Any:
    if not isinstance(raw, dict) or key not in raw:
        raise InputError(f"missing field {key!r}")
    return raw[key]


# --------------------------------------------------------------------- #
# matrices / elements: row-major lists of [re, im] pairs
# --------------------------------------------------------------------- #


def matrix_to_json(m: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(raw: Any) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed complex matrix: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"expected a square matrix of [re, im] pairs, got array of shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InputError("matrix entries must be finite numbers")
    return arr[..., 0] + 1j * arr[..., 1]


def shape_from_json(raw: Any) -> AlgebraShape:
    if not isinstance(raw, list) or not all(isinstance(b, int) and not isinstance(b, bool) for b in raw):
        raise InputError(f"shape must be a list of positive integers, got {raw!r}")
    return AlgebraShape(tuple(raw))


def element_to_json(x: Element) -> Dict[str, Any]:
    return {"shape": list(x.shape.blocks), "blocks": [matrix_to_json(b) for b in x.blocks]}


def element_from_json(raw: Any) -> Element:
    shape = shape_from_json(_need(raw, "shape"))
    blocks = _need(raw, "blocks")
    if not isinstance(blocks, list):
        raise InputError("blocks must be a list")
    return Element(shape, tuple(matrix_from_json(b) for b in blocks))


def masa_to_json(m: Masa) -> Dict[str, Any]:
    return {
        "shape": list(m.shape.blocks),
        "frames": [matrix_to_json(f) for f in m.frames],
        "labels": [[[[v.real, v.imag] for v in label] for label in block] for block in m.labels],
    }


def central_to_json(z: CentralProjection) -> List[bool]:
    return z.to_json()


# --------------------------------------------------------------------- #
# symbolic side
# --------------------------------------------------------------------- #


def cardinals_from_json(raw: Any, what: str) -> List[Cardinal]:
    if not isinstance(raw, list):
        raise InputError(f"{what} must be a list of cardinals")
    return [Cardinal.from_json(c) for c in raw]


def model_from_json(raw: Any) -> AtomicModel:
    return AtomicModel(tuple(cardinals_from_json(_need(raw, "atoms"), "atoms")))


def model_to_json(model: AtomicModel) -> Dict[str, Any]:
    return {"atoms": [a.to_json() for a in model.atoms]}


def cprojection_from_json(raw: Any, model: Optional[AtomicModel] = None) -> CProjection:
    """{"mu": [...], "nu": [...]?}, with the model taken from `raw` unless given."""
    if model is None:
        model = model_from_json(raw)
    mu = cardinals_from_json(_need(raw, "mu"), "mu")
    nu = cardinals_from_json(raw["nu"], "nu") if "nu" in raw else None
    if len(mu) != len(model):
        raise InputError(f"mu has {len(mu)} entries for {len(model)} atoms")
    return projection(model, mu, nu)


def cprojection_to_json(e: CProjection) -> Dict[str, Any]:
    return {"mu": [m.to_json() for m in e.mu], "nu": [n.to_json() for n in e.nu]}


def piece_to_json(piece: EquidimPiece) -> List[Any]:
    return [list(piece.flags), piece.alpha.to_json()]


# --------------------------------------------------------------------- #
# homomorphisms
# --------------------------------------------------------------------- #


def hom_to_json(h: StarHom) -> Dict[str, Any]:
    return {
        "domain": list(h.domain.blocks),
        "codomain": list(h.codomain.blocks),
        "mult": [list(row) for row in h.mult],
        "conjugators": [matrix_to_json(u) for u in h.conjugators],
    }


def hom_from_json(raw: Any) -> StarHom:
    mult = _need(raw, "mult")
    if not isinstance(mult, list) or not all(isinstance(row, list) for row in mult):
        raise InputError("mult must be a list of integer rows")
    return StarHom(
        domain=shape_from_json(_need(raw, "domain")),
        codomain=shape_from_json(_need(raw, "codomain")),
        mult=tuple(tuple(row) for row in mult),
        conjugators=tuple(matrix_from_json(u) for u in _need(raw, "conjugators")),
    )


# --------------------------------------------------------------------- #
# reports
# --------------------------------------------------------------------- #


def to_jsonable(value: Any) -> Any:
    """Recursively convert report values (dataclasses, cardinals, arrays) to JSON types."""
    if isinstance(value, Cardinal):
        return value.to_json()
    if isinstance(value, Element):
        return element_to_json(value)
    if isinstance(value, CentralProjection):
        return value.to_json()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def tolerance_to_json(tol: Tolerance) -> Dict[str, float]:
    return {"eps_struct": tol.eps_struct, "eps_cluster": tol.eps_cluster}


def dumps(payload: Any) -> str:
    """Deterministic rendering: sorted keys, fixed indentation."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
