import json
import subprocess
import sys

import pytest

from combmetric.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return {
        "burst": write("burst2-n4.json", {"n": 4, "sets": [[1, 2], [2, 3], [3, 4]]}),
        "block": write("block22.json", {"n": 4, "sets": [[1, 2], [3, 4]]}),
        "pairs": write("three-pairs.json", {"n": 6, "sets": [[1, 2], [3, 4], [5, 6]]}),
        "raw": write("raw.json", {"n": 3, "sets": [[1, 2, 3], [2]]}),
        "tri": write("tri.json", {"n": 3, "sets": [[1, 2], [1, 3], [2, 3]]}),
        "code": write("code.json", {"q": 3, "n": 4, "generators": [[1, 1, 0, 0]]}),
        "iso": write("iso.json", [[1, 0, 1], [1, 1, 0], [1, 0, 0]]),
        "swap": write("swap.json", {"q": 2, "rows": [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]}),
        "bad": write("bad.json", {"n": 3, "sets": [[1]]}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_weight(capsys, files):
    assert run(capsys, "weight", "--q", "2", "--covering", files["burst"], "--vector", "1,0,0,1") == (0, "2", "")


def test_distance_json(capsys, files):
    code, out, _ = run(capsys, "distance", "--q", "3", "--covering", files["burst"],
                       "--x", "1,2,0,0", "--y", "1,0,0,2", "--json")
    assert code == 0 and json.loads(out)["distance"] == 2


def test_normalize_reports_dropped(capsys, files):
    code, out, _ = run(capsys, "normalize", "--covering", files["raw"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["sets"] == [[1, 2, 3]] and doc["dropped"] == [[2]]


def test_identity_check(capsys, files):
    code, out, _ = run(capsys, "identity-check", "--q", "2", "--covering", files["block"])
    assert (code, out) == (0, "admits, k=2")
    code, out, _ = run(capsys, "identity-check", "--q", "3", "--covering", files["burst"], "--exhaustive")
    assert code == 1 and out.startswith("refuted") and "agrees: True" in out


def test_enumerator_and_dual(capsys, files):
    code, out, _ = run(capsys, "enumerator", "--covering", files["burst"], "--code", files["code"], "--json")
    assert code == 0 and json.loads(out)["coefficients"] == [1, 2, 0]
    code, out, _ = run(capsys, "dual", "--code", files["code"], "--json")
    assert code == 0 and len(json.loads(out)["generators"]) == 3


def test_axioms(capsys, files):
    code, out, _ = run(capsys, "axioms", "--covering", files["burst"], "--samples", "500", "--seed", "1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["triples"] == 500 and doc["triangle_violations"] == 0


def test_mep_check(capsys, files):
    code, out, _ = run(capsys, "mep-check", "--q", "2", "--covering", files["pairs"])
    assert code == 1 and out.startswith("fails MEP") and "->" in out
    code, out, _ = run(capsys, "mep-check", "--covering", files["block"], "--exhaustive")
    assert code == 0 and "agrees: True" in out


def test_mep_check_three_pairs_f3_reports_construction_error(capsys, files):
    code, _, err = run(capsys, "mep-check", "--q", "3", "--covering", files["pairs"])
    assert code == 2 and "ConstructionFailed" in err


def test_isometry_group(capsys, files):
    code, out, _ = run(capsys, "isometry-group", "--covering", files["block"], "--brute-force", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == doc["brute_force_order"] == 72 and doc["K_M"] == 36
    code, out, _ = run(capsys, "isometry-group", "--covering", files["tri"], "--brute-force", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["brute_force_order"] == 24 and doc["order"] == 6 and "witness" in doc


def test_decompose(capsys, files):
    code, out, _ = run(capsys, "decompose", "--covering", files["block"], "--matrix", files["swap"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["phi"] == [3, 4, 1, 2]
    code, _, _ = run(capsys, "decompose", "--covering", files["tri"], "--matrix", files["iso"])
    assert code == 1
    code, _, err = run(capsys, "decompose", "--covering", files["burst"], "--matrix", files["swap"])
    assert code == 2 and "not a linear F-isometry" in err


def test_conjecture_scan(capsys, files):
    code, out, _ = run(capsys, "conjecture-scan", "--covering", files["tri"], "--covering", files["burst"])
    lines = out.splitlines()
    recs = [json.loads(line) for line in lines[:-1]]
    assert code == 0 and len(recs) == 2 and lines[-1].endswith("0 errors")
    assert [r["prediction"] for r in recs] == [True, False]


def test_errors(capsys, files):
    code, _, err = run(capsys, "weight", "--covering", files["bad"], "--vector", "1,0,0")
    assert code == 2 and "NotACovering" in err
    code, _, err = run(capsys, "weight", "--covering", files["burst"], "--vector", "1,0")
    assert code == 2
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "combmetric", "weight", "--covering", files["burst"],
                          "--vector", "0,1,1,0"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "1"
