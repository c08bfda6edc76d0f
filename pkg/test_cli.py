import asyncio
import json
import shutil

import pytest

from batch import BatchClassifier, classify_file, exit_code
from cli import main

REGULAR_C2 = json.dumps({"galois": {"cyclic": 2}, "rank": 2, "action": [[[0, 1], [1, 0]]]})
SIGN_C2 = json.dumps({"galois": {"cyclic": 2}, "rank": 1, "action": [[[-1]]]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ─── classify ───

@pytest.mark.parametrize("name, code", [
    ("gl1_quaternion.json", 0),
    ("sl1_quaternion.json", 1),
    ("torus_regular_c2.json", 0),
    ("torus_sign_plus_split.json", 1),
    ("general_undecided.json", 2),
])
def test_classify_exit_codes(capsys, fixtures_dir, name, code):
    assert run(capsys, "classify", str(fixtures_dir / name))[0] == code


def test_classify_json(capsys, fixtures_dir):
    code, out, _ = run(capsys, "classify", str(fixtures_dir / "sl1_quaternion.json"), "--json", "--explain")
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "not_special"
    assert payload["criterion"] == "inner-type saturation"
    assert payload["witness"]["divisor"] == 2
    assert set(payload["timings_ms"]) == {"parse", "classify"}
    assert "saturated" in payload["explanation"]


def test_classify_text(capsys, fixtures_dir):
    code, out, _ = run(capsys, "classify", str(fixtures_dir / "gl1_quaternion.json"))
    assert code == 0
    assert "verdict: special" in out
    assert "criterion: inner-type saturation" in out


def test_classify_writes_report_card(capsys, fixtures_dir, tmp_path):
    card = tmp_path / "card.png"
    code, _, _ = run(capsys, "classify", str(fixtures_dir / "sl1_quaternion.json"), "--png", str(card))
    assert code == 1
    assert card.read_bytes().startswith(b"\x89PNG")


def test_classify_directory(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "classify", str(fixtures_dir), "--json")
    assert code == 2
    results = json.loads(out)
    assert len(results) == len(list(fixtures_dir.glob("*.json")))
    assert [r["path"] for r in results] == sorted(r["path"] for r in results)

    shutil.copy(fixtures_dir / "gl1_quaternion.json", tmp_path / "a.json")
    (tmp_path / "b.json").write_text("{not json")
    code, out, _ = run(capsys, "classify", str(tmp_path))
    assert code == 3
    assert "b.json: error" in out


# ─── Errors ───

def test_missing_file_is_an_error(capsys, tmp_path):
    code, _, err = run(capsys, "classify", str(tmp_path / "missing.json"))
    assert code == 3
    assert "error" in err


def test_invalid_descriptor_is_an_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"v": 1, "kind": "inner", "factors": [{"kind": "SL1", "n": 4, "d": 2}],
                                "center_orders": [3], "embedding": [[1]]}))
    code, _, err = run(capsys, "classify", str(path))
    assert code == 3
    assert "$.embedding[0][0]" in err


def test_huge_degree_is_an_error(capsys, tmp_path):
    path = tmp_path / "huge.json"
    path.write_text(json.dumps({"v": 1, "kind": "torus", "galois": {"degree": 10 ** 12, "generators": []},
                                "rank": 0, "action": []}))
    code, _, err = run(capsys, "classify", str(path))
    assert code == 3
    assert "$.galois.degree" in err


def test_usage_errors_exit_with_3(capsys):
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 3


# ─── Kernels ───

def test_snf(capsys):
    code, out, _ = run(capsys, "snf", "[[2,4],[6,8]]")
    assert code == 0 and out.strip() == "invariant factors: 2, 4"
    code, out, _ = run(capsys, "snf", "[[2,4],[6,8]]", "--json")
    assert json.loads(out)["invariant_factors"] == [2, 4]


def test_h1(capsys):
    code, out, _ = run(capsys, "h1", SIGN_C2)
    assert code == 0 and out.strip() == "H^1 = Z/2"
    code, out, _ = run(capsys, "h1", SIGN_C2, "--subgroup", "[[0, 1]]")
    assert out.strip() == "H^1 = 0"
    code, out, _ = run(capsys, "h1", SIGN_C2, "[[0, 1]]")
    assert code == 0 and out.strip() == "H^1 = 0"
    code, out, _ = run(capsys, "h1", REGULAR_C2, "--json")
    assert json.loads(out)["torsion"] == []


def test_invertible(capsys):
    code, out, _ = run(capsys, "invertible", REGULAR_C2)
    assert code == 0 and "invertible: true" in out
    plus = json.dumps({"galois": {"cyclic": 2}, "rank": 2, "action": [[[-1, 0], [0, 1]]]})
    code, out, _ = run(capsys, "invertible", plus, "--json")
    payload = json.loads(out)
    assert payload["invertible"] is False
    assert "certificate" in payload


def test_forms_check(capsys):
    spec = json.dumps({"exponents": [[1, 0], [0, 1], [1, 1]], "coefficients": [1, 1, 1]})
    code, out, _ = run(capsys, "--seed", "3", "forms", "check", spec, "--trials", "500", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["criterion"]["applicable"] is True
    assert payload["search"]["found"] is False

    hyperbolic = json.dumps({"exponents": [[0], [0]], "coefficients": [1, -1]})
    code, out, _ = run(capsys, "forms", "check", hyperbolic, "--trials", "10")
    assert "inapplicable" in out
    assert "isotropic vector: (1, 1)" in out


# ─── Batch ───

def test_batch_results(fixtures_dir, tmp_path):
    ok = classify_file(fixtures_dir / "torus_split.json")
    assert ok["ok"] and ok["report"].verdict.value == "special"
    failed = classify_file(tmp_path / "missing.json")
    assert not failed["ok"] and failed["error"]
    assert exit_code([ok]) == 0
    assert exit_code([ok, failed]) == 3
    assert exit_code([]) == 0


def test_batch_classifier_keeps_file_order(fixtures_dir):
    results = asyncio.run(BatchClassifier().classify_directory(fixtures_dir))
    assert [r["path"] for r in results] == sorted(str(p) for p in fixtures_dir.glob("*.json"))
    assert all(r["ok"] for r in results)
