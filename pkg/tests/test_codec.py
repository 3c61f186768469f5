import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.cardinal import ZERO, aleph
from core.codec import (
    cprojection_from_json,
    dumps,
    element_from_json,
    element_to_json,
    hom_from_json,
    hom_to_json,
    loads,
    matrix_from_json,
    model_from_json,
    shape_from_json,
    to_jsonable,
)
from core.diag import DiagonalizationReport
from core.errors import InputError
from core.fdalg import AlgebraShape, from_blocks
from core.functor import apply, identity_hom
from core.generators import random_element, random_star_hom
from core.projlat import CentralProjection


def test_element_format():
    x = from_blocks([np.array([[1.0 + 2.0j]]), np.eye(2)])
    raw = element_to_json(x)
    assert raw["shape"] == [1, 2]
    assert raw["blocks"][0] == [[[1.0, 2.0]]]
    back = element_from_json(json.loads(json.dumps(raw)))
    assert_allclose(back.blocks[1], np.eye(2))


@pytest.mark.parametrize(
    "raw",
    [
        {"blocks": []},
        {"shape": [1], "blocks": [[[1.0, 0.0]]]},
        {"shape": [2], "blocks": [[[[1, 0], [0, 0]]]]},
        {"shape": "2", "blocks": []},
        {"shape": [True], "blocks": []},
    ],
)
def test_element_rejects(raw):
    with pytest.raises(InputError):
        element_from_json(raw)


def test_matrix_rejects_ragged():
    with pytest.raises(InputError, match="malformed"):
        matrix_from_json([[[1, 0]], [[1, 0], [0, 0]]])


@pytest.mark.parametrize("bad", [float("nan"), float("inf")])
def test_matrix_rejects_non_finite(bad):
    with pytest.raises(InputError, match="finite"):
        matrix_from_json([[[bad, 0.0]]])


def test_shape():
    assert shape_from_json([1, 2]) == AlgebraShape((1, 2))


def test_model_and_projection():
    raw = {"atoms": [{"aleph": 0}, {"aleph": 1}], "mu": [{"aleph": 0}, 0]}
    model = model_from_json(raw)
    assert model.atoms == (aleph(0), aleph(1))
    e = cprojection_from_json(raw)
    assert e.mu == (aleph(0), ZERO)
    assert e.nu == (ZERO, aleph(1))
    explicit = cprojection_from_json(dict(raw, nu=[{"aleph": 0}, {"aleph": 1}]))
    assert explicit.nu == (aleph(0), aleph(1))


def test_projection_length_mismatch():
    with pytest.raises(InputError, match="2 atoms"):
        cprojection_from_json({"atoms": [{"aleph": 0}, {"aleph": 0}], "mu": [0]})


def test_hom_format_round_trips_action(rng):
    h = random_star_hom(AlgebraShape((1, 2)), rng)
    back = hom_from_json(json.loads(dumps(hom_to_json(h))))
    x = random_element(h.domain, rng)
    assert_allclose(apply(back, x).blocks[0], apply(h, x).blocks[0], atol=1e-12)
    assert back.mult == h.mult


def test_hom_rejects_bad_mult():
    raw = hom_to_json(identity_hom(AlgebraShape((1,))))
    raw["mult"] = "1"
    with pytest.raises(InputError, match="mult"):
        hom_from_json(raw)


def test_reports_become_plain_json():
    report = DiagonalizationReport(scale=2.0, unitarity_defect=np.float64(1e-16), residuals=[0.0])
    out = to_jsonable({"r": report, "z": CentralProjection((True, False)), "d": aleph(1), "c": 1 + 2j})
    assert out == {
        "r": {
            "scale": 2.0,
            "unitarity_defect": 1e-16,
            "residuals": [0.0],
            "scalar_residuals": [],
            "roundtrip": [],
            "spectrum": [],
        },
        "z": [True, False],
        "d": {"aleph": 1},
        "c": [1.0, 2.0],
    }


def test_dumps_is_deterministic():
    payload = {"b": 1, "a": [aleph(0), 3]}
    assert dumps(payload) == dumps(dict(reversed(list(payload.items()))))
    assert loads(dumps(payload)) == {"a": [{"aleph": 0}, 3], "b": 1}


def test_loads_rejects_garbage():
    with pytest.raises(InputError, match="malformed JSON"):
        loads("{not json")
