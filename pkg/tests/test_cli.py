import json
import re
import shlex
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from trifi.cli import main

ROOT = Path(__file__).resolve().parents[1]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_replay_example(capsys):
    code, out, _ = run(["replay", "thm21", "--algebra", "T2", "--n", "3", "--gamma", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"]
    assert all(s["pass"] for tr in doc["traces"] for s in tr["steps"])


def test_solve_example(capsys):
    argv = ["identity", "solve", "--algebra", "T2", "--n", "2", "--text", "Psi(X^2)=g*X*Omega(X)=g*Omega(X)*X",
            "--central", "g=1", "--constrain", "Omega(1) in Z"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert json.loads(out)["dim"] == 1


def test_degree_one_rejected(capsys):
    code, _, err = run(["identity", "solve", "--algebra", "T2", "--text", "Psi(X) = Omega(X)"], capsys)
    assert code == 2
    assert "n must exceed 1" in err


def test_n_mismatch(capsys):
    code, _, err = run(["identity", "solve", "--algebra", "T2", "--n", "3", "--text", "Psi(X^2) = X*Psi(X)"], capsys)
    assert code == 2 and "degree" in err


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["lemmas", "--algebra", "T9"], "unknown algebra"),
        (["replay", "thm21", "--algebra", "M2", "--n", "2"], "triangular"),
        (["identity", "solve", "--algebra", "T2", "--shape", "centralizer_chain", "--n", "2", "--gamma", "1,0,0"], "not central"),
        (["identity", "solve", "--algebra", "T2", "--shape", "centralizer_chain", "--n", "2", "--gamma", "0"], "invertible"),
        (["identity", "solve", "--algebra", "T2", "--text", "Psi(Omega(X)) = X"], "nested"),
        (["identity", "solve", "--algebra", "T2", "--shape", "generalized", "--n", "2", "--constrain", "Omega is central"], "side constraint"),
    ],
)
def test_input_errors_exit_2(argv, needle, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert needle in err


def test_malformed_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["algebra", "info", "--algebra", str(bad)], capsys)
    assert code == 2 and "not valid JSON" in err
    bad.write_text(json.dumps({"dim": 1, "structure": [[[0.5]]]}))
    code, _, err = run(["algebra", "info", "--algebra", str(bad)], capsys)
    assert code == 2


def test_invalid_algebra_exit_1(tmp_path, capsys):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"dim": 1, "unit": ["2"], "structure": [[["1"]]]}))
    code, out, _ = run(["algebra", "build", "--spec", str(path)], capsys)
    assert code == 1
    assert not json.loads(out)["validation"]["ok"]


def test_verify_failure_exit_1(capsys):
    argv = ["identity", "verify", "--algebra", "T2", "--text", "2*Psi(X^2) = X*Omega(X) + Omega(X)*X",
            "--map", f"Omega={ROOT}/data/t2_inner_derivation.json", "--map", f"Psi={ROOT}/data/t2_inner_derivation.json"]
    code, out, _ = run(argv, capsys)
    assert code == 1
    assert json.loads(out)["checks"][0]["witness"]


def test_replay_bad_solution_exit_1(tmp_path, capsys):
    doc = json.loads((ROOT / "data/t2_generalized_solution.json").read_text())
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["replay", "thm21", "--algebra", "T2", "--n", "3", "--solution", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["traces"][0]["aborted"]


def test_inconsistent_fixed_map(capsys):
    argv = ["identity", "solve", "--algebra", "T2", "--shape", "centralizer_chain", "--n", "2", "--gamma", "1",
            "--fixed", f"Omega={ROOT}/data/t2_inner_derivation.json"]
    code, out, _ = run(argv, capsys)
    assert code == 1
    assert json.loads(out)["consistent"] is False


def test_build_then_info_roundtrip(tmp_path, capsys):
    path = tmp_path / "t3.json"
    assert run(["algebra", "build", "--kind", "T3", "--out", str(path)], capsys)[0] == 0
    code, out, _ = run(["algebra", "info", "--algebra", str(path)], capsys)
    info_file = json.loads(out)
    code2, out2, _ = run(["algebra", "info", "--algebra", "T3"], capsys)
    assert code == code2 == 0
    assert info_file == json.loads(out2)
    assert info_file["triangular"]["center_comparison"] == "equal"


def test_map_classify(capsys):
    code, out, _ = run(["map", "classify", "--algebra", "T2", "--map", str(ROOT / "data/t2_inner_derivation.json")], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["flags"]["derivation"] and not doc["flags"]["left_centralizer"]
    assert doc["l_witness"] == json.loads((ROOT / "data/t2_inner_derivation.json").read_text())["matrix"]


def test_reports_are_deterministic(capsys):
    argv = ["identity", "solve", "--algebra", "T3", "--shape", "generalized", "--n", "2",
            "--constrain", "Omega(1) in Z", "--predict", "generalized"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second
    assert run(["replay", "cor22", "--algebra", "T2", "--n", "3"], capsys) == run(
        ["replay", "cor22", "--algebra", "T2", "--n", "3"], capsys
    )


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "trifi", "lemmas", "--algebra", "T2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"]


def readme_commands():
    text = (ROOT / "README.md").read_text()
    return [m.group(1) for m in re.finditer(r"^\$ trifi (.+)$", text, re.M)]


def test_readme_has_examples():
    assert len(readme_commands()) >= 10


def test_readme_examples_exit_0(tmp_path, monkeypatch, capsys):
    shutil.copytree(ROOT / "data", tmp_path / "data")
    monkeypatch.chdir(tmp_path)
    for cmd in readme_commands():
        code, _, err = run(shlex.split(cmd), capsys)
        assert code == 0, (cmd, err)
