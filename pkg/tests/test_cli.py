import json
import subprocess
import sys
from pathlib import Path

import pytest

from hallforge.cli import main

QUIVERS = Path(__file__).resolve().parent.parent / "quivers"
JORDAN = str(QUIVERS / "jordan.json")
A2 = str(QUIVERS / "a2.json")
B = str(QUIVERS / "b.json")
TWO = str(QUIVERS / "two_loop.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cartan(capsys):
    code, out, _ = run(capsys, "cartan", B)
    assert code == 0
    rep = json.loads(out)
    assert rep["matrix"] == [[2, -1], [-1, 0]]
    assert rep["classes"] == {"i": "real", "j": "isotropic"}


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", JORDAN, "--q", "2", "--dim", "2")
    assert code == 0 and json.loads(out)["count"] == 6


def test_mult_delta_pair(capsys):
    code, out, _ = run(capsys, "mult", JORDAN, "--q", "2", "E:i:1", "E:i:1")
    assert code == 0
    assert sorted(json.loads(out)["product"].values()) == ["1", "3"]
    code, out, _ = run(capsys, "delta", JORDAN, "--q", "2", "E:i:2")
    assert "1/2" in json.loads(out)["delta"].values()
    code, out, _ = run(capsys, "pair", JORDAN, "--q", "2", "e:i:1 e:i:1", "e:i:2")
    assert json.loads(out)["pairing"] == "4"


def test_relations(capsys):
    code, out, _ = run(capsys, "serre", A2, "--q", "2")
    rep = json.loads(out)
    assert code == 0 and rep["all_zero"] and len(rep["rows"]) == 2
    code, out, _ = run(capsys, "serre", B, "--q", "3", "--ht", "5")
    assert code == 0 and all(r["value"] == "0" for r in json.loads(out)["rows"])
    code, out, _ = run(capsys, "commute", JORDAN, "--q", "2", "--ht", "4")
    assert code == 0 and json.loads(out)["all_zero"]


def test_symbolic_commands(capsys):
    code, out, _ = run(capsys, "s-gen", JORDAN)
    rows = json.loads(out)["rows"]
    assert rows[1]["element"] == {"i:2": "1", "i:1,i:1": "-1/2"}
    code, out, _ = run(capsys, "p-poly", TWO, "i:1,i:1", "i:1,i:1")
    assert json.loads(out)["P"] == "v^-2 + 1"
    code, out, _ = run(capsys, "gram", JORDAN, "--beta", "i:1,i:1")
    assert json.loads(out)["blocks"][0]["rank"] == 1
    code, out, _ = run(capsys, "gram-generic", JORDAN, "--beta", "i:1,i:1")
    assert json.loads(out)["blocks"][0]["P_matrix"] == [["2"]]


def test_radical(capsys):
    code, out, _ = run(capsys, "radical", A2, "--serre", "i,j,1")
    rep = json.loads(out)
    assert rep["generic_radical"] and rep["symbolic_radical"]
    code, out, _ = run(capsys, "radical", JORDAN, "--word", "i:1,i:2")
    rep = json.loads(out)
    assert not rep["generic_radical"] and not rep["symbolic_radical"]


def test_verify_phi(capsys):
    code, out, _ = run(capsys, "verify-phi", A2, "--ht", "3")
    rep = json.loads(out)
    assert code == 0 and rep["overall"] == "pass"
    assert all(r["verify_phi"] for r in rep["rows"])


def test_table_output(capsys):
    code, out, _ = run(capsys, "verify-phi", JORDAN, "--ht", "2", "--format", "table")
    assert code == 0 and "overall: pass" in out and "beta" in out


def test_determinism(capsys):
    a = run(capsys, "gram-generic", B, "--ht", "2")[1]
    b = run(capsys, "gram-generic", B, "--ht", "2")[1]
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["cartan", "/nonexistent.json"],
        ["classify", JORDAN, "--q", "4", "--dim", "1"],
        ["classify", JORDAN, "--dim", "1"],
        ["classify", JORDAN, "--q", "2", "--dim", "1,1"],
        ["mult", JORDAN, "--q", "2", "E:k:1", "E:i:1"],
        ["p-poly", JORDAN, "i:1", "x"],
        ["verify-phi", JORDAN, "--primes", "2,3", "--held-out", "3"],
        ["verify-phi", JORDAN, "--primes", "2,4"],
        ["radical", A2, "--serre", "j,j,1"],
        ["nosuchcommand"],
    ],
)
def test_bad_input_exit_2(capsys, argv):
    assert main(argv) == 2


def test_bad_quiver_json(tmp_path, capsys):
    p = tmp_path / "q.json"
    p.write_text('{"vertices": ["i"], "arrows": [["i", "z"]]}')
    assert main(["cartan", str(p)]) == 2
    p.write_text("not json")
    assert main(["cartan", str(p)]) == 2


def test_budget_exit_1(capsys):
    assert main(["classify", TWO, "--q", "3", "--dim", "3", "--budget", "1000"]) == 1


def test_interpolation_failure_exit_1(capsys):
    # one prime cannot pin down the two terms of v^-2 + 1
    assert main(["p-poly", TWO, "i:1,i:1", "i:1,i:1", "--primes", "2", "--held-out", "3"]) == 1


def test_cache_env_var(tmp_path):
    env = {"HALLFORGE_CACHE_DIR": str(tmp_path), "PATH": "/usr/bin:/bin"}
    cmd = [sys.executable, "-m", "hallforge.cli", "mult", A2, "--q", "2", "E:i:1", "E:j:1"]
    first = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    files = list(tmp_path.glob("hall-*.jsonl"))
    assert len(files) == 1 and files[0].read_text().strip()
    second = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    assert first == second
