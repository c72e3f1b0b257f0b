import io
import json
import subprocess
import sys

import jsonschema
import pytest

from sopq.cli import run
from sopq.model import load_schema


@pytest.fixture
def files(tmp_path):
    curve = tmp_path / "curve.json"
    curve.write_text(json.dumps({"genus": 2, "f": ["-1", "0", "0", "0", "0", "0", "1"]}))
    w0 = tmp_path / "w0.json"
    w0.write_text(json.dumps({"hyperbolic_twists": [1], "trivial_count": 1, "torsion_label": "0000"}))
    # p = 3: components into K^3 from K, K^{-1}, O have twists 2, 4, 3
    eta = tmp_path / "eta.json"
    eta.write_text(json.dumps({"components": [["1", "0", "2"], ["0"] * 7, ["1/2", "0", "0", "0", "-1"]]}))
    diffs = tmp_path / "diffs.json"
    diffs.write_text(json.dumps({"p": 3, "diffs": [["1", "-2", "0"], ["0", "0", "3/4", "0", "0", "0", "1"]]}))
    return {"curve": str(curve), "w0": str(w0), "eta": str(eta), "diffs": str(diffs), "dir": tmp_path}


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def check_schema(text, name):
    jsonschema.Draft202012Validator(load_schema(name)).validate(json.loads(text))


def test_atlas_count_text():
    code, out = call(["atlas", "count", "--p", "3", "--q", "5", "--genus", "2"])
    assert code == 0
    assert "total 96" in out


def test_atlas_count_json():
    code, out = call(["atlas", "count", "--p", "3", "--q", "4", "--genus", "2", "--json"])
    assert code == 0
    check_schema(out, "atlas_report.schema.json")
    assert json.loads(out)["totals"]["total"] == "101"


@pytest.mark.parametrize("q", [2, 3, 5])
def test_atlas_count_p2_json(q):
    code, out = call(["atlas", "count", "--p", "2", "--q", str(q), "--genus", "2", "--json"])
    if q == 2:
        assert code == 2
        return
    assert code == 0
    check_schema(out, "atlas_report.schema.json")


def test_atlas_dims():
    code, out = call(["atlas", "dims", "--p", "3", "--q", "3", "--genus", "2", "--json"])
    assert code == 0
    check_schema(out, "atlas_dims.schema.json")
    assert json.loads(out)["dimension"] == "15"


def test_unsupported_is_usage_error(capsys):
    code, out = call(["atlas", "count", "--p", "2", "--q", "2", "--genus", "2"])
    assert code == 2 and out == ""
    err = capsys.readouterr().err
    assert "unsupported by paper" in err and err.count("\n") == 1


def test_unknown_flag_rejected():
    assert call(["atlas", "count", "--p", "3", "--q", "5", "--genus", "2", "--bogus"])[0] == 2
    assert call([])[0] == 2
    assert call(["nope"])[0] == 2


def test_curve_basis(files):
    code, out = call(["curve", "basis", "--genus", "2", "--f", files["curve"], "--m", "3", "--json"])
    assert code == 0
    check_schema(out, "curve_basis.schema.json")
    obj = json.loads(out)
    assert obj["dimension"] == 5 == len(obj["basis"])


def test_curve_basis_genus_mismatch(files):
    assert call(["curve", "basis", "--genus", "3", "--f", files["curve"], "--m", "2"])[0] == 2


def test_curve_basis_missing_file(files):
    assert call(["curve", "basis", "--genus", "2", "--f", str(files["dir"] / "none.json"), "--m", "2"])[0] == 2


def test_hitchin_roundtrip_seed(files):
    code, out = call(["hitchin", "roundtrip", "--p", "3", "--genus", "2", "--f", files["curve"], "--seed", "7"])
    assert code == 0
    assert out.rstrip().endswith("PASS")
    code, out = call(
        ["hitchin", "roundtrip", "--p", "3", "--genus", "2", "--f", files["curve"], "--seed", "7", "--json"]
    )
    check_schema(out, "hitchin_roundtrip.schema.json")
    obj = json.loads(out)
    assert obj["input"] == obj["output"] and obj["result"] == "PASS"


def test_hitchin_roundtrip_diffs_file(files):
    code, out = call(
        ["hitchin", "roundtrip", "--p", "3", "--genus", "2", "--f", files["curve"], "--diffs", files["diffs"], "--json"]
    )
    assert code == 0
    assert json.loads(out)["input"][1][2] == "3/4"


def test_hitchin_roundtrip_needs_source(files):
    assert call(["hitchin", "roundtrip", "--p", "3", "--genus", "2", "--f", files["curve"]])[0] == 2


def build(files, out_name="model.json"):
    path = files["dir"] / out_name
    code, _ = call(
        [
            "model", "build", "--p", "3", "--q", "5", "--genus", "2", "--f", files["curve"],
            "--w0", files["w0"], "--eta-p", files["eta"], "--diffs", files["diffs"], "-o", str(path),
        ]
    )
    assert code == 0
    return path


def test_model_build_verify_charpoly(files):
    path = build(files)
    check_schema(path.read_text(), "model.schema.json")
    code, out = call(["model", "verify", str(path), "--json"])
    assert code == 0
    check_schema(out, "verify_report.schema.json")
    assert json.loads(out)["ok"] is True
    code, out = call(["model", "charpoly", str(path), "--json"])
    assert code == 0
    check_schema(out, "charpoly.schema.json")
    obj = json.loads(out)
    assert sorted(obj["coefficients"], key=int) == ["2", "4", "6", "8"]
    assert "pfaffian" in obj


def test_model_build_rank_error(files, capsys):
    code, _ = call(
        [
            "model", "build", "--p", "3", "--q", "6", "--genus", "2", "--f", files["curve"],
            "--w0", files["w0"], "--eta-p", files["eta"], "--diffs", files["diffs"],
        ]
    )
    assert code == 2
    assert "W0 rank must be q−p+1" in capsys.readouterr().err


def test_model_verify_corrupted(files, capsys):
    path = build(files)
    obj = json.loads(path.read_text())
    # zero the first raising unit of the Hitchin block: row 1, column |W0|
    obj["eta"][1][3]["a"] = []
    path.write_text(json.dumps(obj))
    code, _ = call(["model", "verify", str(path)])
    assert code == 1
    assert "raising_units" in capsys.readouterr().err


def test_model_verify_bad_json(files, capsys):
    path = files["dir"] / "broken.json"
    path.write_text("{\n  \"p\": 3,\n")
    assert call(["model", "verify", str(path)])[0] == 2
    assert "parse error at line" in capsys.readouterr().err


def test_model_verify_empty_file(files):
    path = files["dir"] / "empty.json"
    path.write_text("")
    assert call(["model", "verify", str(path)])[0] == 2


def test_repeat_runs_byte_identical(files):
    argvs = [
        ["atlas", "count", "--p", "4", "--q", "5", "--genus", "3", "--json"],
        ["hitchin", "roundtrip", "--p", "4", "--genus", "2", "--f", files["curve"], "--seed", "11"],
        ["curve", "basis", "--genus", "2", "--f", files["curve"], "--m", "4"],
    ]
    for argv in argvs:
        assert call(argv) == call(argv)
    assert build(files, "a.json").read_bytes() == build(files, "b.json").read_bytes()


def test_subprocess_determinism(files):
    cmd = [sys.executable, "-m", "sopq", "hitchin", "roundtrip", "--p", "3", "--genus", "2",
           "--f", files["curve"], "--seed", "3", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b"PASS" in first
