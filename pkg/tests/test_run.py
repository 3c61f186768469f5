import json

import numpy as np
import pytest

import run


def _invoke(capsys, *argv):
    code = run.main(list(argv))
    return code, capsys.readouterr().out


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_gen_then_diagonalize(tmp_path, capsys):
    code, out = _invoke(capsys, "gen", "--kind", "commuting", "--shape", "1,2", "--n", "2", "--members", "3", "--seed", "4")
    assert code == run.EXIT_OK
    instance = json.loads(out)["result"]
    assert instance["n"] == 2 and len(instance["family"]) == 3

    code, out = _invoke(capsys, "diagonalize", _write(tmp_path, "fam.json", instance))
    assert code == run.EXIT_OK
    result = json.loads(out)["result"]
    report = result["report"]
    assert report["unitarity_defect"] < 1e-10
    assert max(report["residuals"]) < 1e-8 * report["scale"]
    assert max(report["scalar_residuals"]) < 1e-8 * report["scale"]
    assert len(result["diagonalized"]) == 3


def test_output_is_deterministic(capsys):
    argv = ["gen", "--kind", "hom", "--shape", "2", "--n", "2", "--seed", "9"]
    _, first = _invoke(capsys, *argv)
    _, second = _invoke(capsys, *argv)
    assert first == second


def test_functor_check_on_generated_hom(tmp_path, capsys):
    _, out = _invoke(capsys, "gen", "--kind", "hom", "--shape", "1,2", "--n", "2", "--members", "2", "--seed", "1")
    path = _write(tmp_path, "hom.json", json.loads(out)["result"])
    code, out = _invoke(capsys, "functor-check", path)
    assert code == run.EXIT_OK
    result = json.loads(out)["result"]
    assert result["passed"] is True
    assert result["diagonal"]["passed"] is True


def test_compare_projection_with_itself(tmp_path, capsys):
    _, out = _invoke(capsys, "gen", "--kind", "projections", "--shape", "1,2", "--seed", "2")
    e = json.loads(out)["result"]["e"]
    code, out = _invoke(capsys, "compare", _write(tmp_path, "pair.json", {"e": e, "f": e}))
    assert code == run.EXIT_OK
    result = json.loads(out)["result"]
    assert result["equivalent"] is True
    assert all(result["y"]) and not any(result["x"]) and not any(result["z"])
    assert result["ranks_e"] == result["ranks_f"]


def test_dimension_command(tmp_path, capsys):
    payload = {"atoms": [{"aleph": 0}, {"aleph": 1}], "mu": [{"aleph": 0}, {"aleph": 1}]}
    code, out = _invoke(capsys, "dimension", _write(tmp_path, "e.json", payload))
    assert code == run.EXIT_OK
    doc = json.loads(out)
    assert doc["command"] == "dimension"
    assert doc["result"]["d"] == {"aleph": 1}
    assert doc["result"]["dbar"] == {"aleph": 2}


def test_equidecomp_command(tmp_path, capsys):
    payload = {"atoms": [{"aleph": 1}, {"aleph": 2}], "mu": [{"aleph": 0}, {"aleph": 1}]}
    code, out = _invoke(capsys, "equidecomp", _write(tmp_path, "e.json", payload))
    assert code == run.EXIT_OK
    assert json.loads(out)["result"]["pieces"] == [[[True, False], {"aleph": 1}], [[False, True], {"aleph": 2}]]


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "model.json"
    code, out = _invoke(capsys, "gen", "--kind", "model", "--seed", "3", "--out", str(target))
    assert code == run.EXIT_OK
    assert out == ""
    assert "atoms" in json.loads(target.read_text())["result"]


@pytest.mark.parametrize(
    "content",
    ["{broken", json.dumps({"e": {"shape": [1]}}), json.dumps({"atoms": [3], "mu": [0]})],
)
def test_bad_input_exits_with_input_code(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    command = "dimension" if "atoms" in content else "compare"
    code, out = _invoke(capsys, command, str(path))
    assert code == run.EXIT_INPUT
    assert out == ""


def test_missing_file(capsys, tmp_path):
    code, _ = _invoke(capsys, "dimension", str(tmp_path / "nope.json"))
    assert code == run.EXIT_INPUT


def test_non_commuting_family_rejected(tmp_path, capsys):
    def elem(m):
        m = np.asarray(m, dtype=complex)
        return {"shape": [2], "blocks": [[[[z.real, z.imag] for z in row] for row in m]]}

    payload = {"base": [2], "n": 1, "family": [elem([[1, 0], [0, -1]]), elem([[0, 1], [1, 0]])]}
    code, _ = _invoke(capsys, "diagonalize", _write(tmp_path, "nc.json", payload))
    assert code == run.EXIT_INPUT


def test_selftest_single_suite(capsys):
    code, out = _invoke(capsys, "selftest", "--suite", "cardinal_laws", "--seed", "1")
    assert code == run.EXIT_OK
    result = json.loads(out)["result"]
    assert result["passed"] is True
    assert list(result["status"]) == ["cardinal_laws"]


def test_gen_rejects_empty_family(capsys):
    code, out = _invoke(capsys, "gen", "--kind", "hom", "--members", "0", "--seed", "1")
    assert code == run.EXIT_INPUT
    assert out == ""


def test_unwritable_out_is_input_error(tmp_path, capsys):
    target = tmp_path / "missing_dir" / "model.json"
    code, out = _invoke(capsys, "gen", "--kind", "model", "--seed", "3", "--out", str(target))
    assert code == run.EXIT_INPUT
    assert not target.exists()


def test_nan_entries_rejected(tmp_path, capsys):
    elem = {"shape": [1], "blocks": [[[[float("nan"), 0.0]]]]}
    payload = {"base": [1], "n": 1, "family": [elem]}
    code, out = _invoke(capsys, "diagonalize", _write(tmp_path, "nan.json", payload))
    assert code == run.EXIT_INPUT
    assert out == ""
