import json
import subprocess
import sys

import pytest

from brauertft.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_2_2(capsys):
    code, out, _ = run(capsys, "enumerate", "2", "2")
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 4 and lines[-1] == "count=3"


def test_enumerate_1_1(capsys):
    _, out, _ = run(capsys, "enumerate", "1", "1")
    assert out.strip().splitlines() == ["1;1;0;(I1-O1)", "count=1"]


def test_enumerate_0_6(capsys):
    _, out, _ = run(capsys, "enumerate", "0", "6")
    assert len(out.strip().splitlines()) == 16
    assert out.strip().endswith("count=15")


def test_enumerate_odd(capsys):
    code, _, err = run(capsys, "enumerate", "1", "2")
    assert code == 2 and "odd" in err


def test_matrix_e1(capsys):
    code, out, _ = run(capsys, "matrix", "e1")
    assert code == 0 and out.strip() == "0 1 1 -1"


def test_matrix_loop(capsys):
    _, out, _ = run(capsys, "matrix", "0;0;1;")
    assert out.strip() == "2"


def test_matrix_identity_file(capsys, tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("3\n1 0 0\n0 2 0\n0 0 1/3\n")
    _, out, _ = run(capsys, "--duality", str(p), "matrix", "id1")
    assert out.strip().splitlines() == ["1 0 0", "0 1 0", "0 0 1"]


def test_matrix_structured(capsys):
    _, out, _ = run(capsys, "--format", "structured", "matrix", "i1")
    data = json.loads(out)
    assert data == {"d": 2, "entries": [["1"], ["1"], ["1"], ["0"]], "m": 0, "n": 2}


def test_matrix_bad(capsys):
    code, _, err = run(capsys, "matrix", "2;2;0;(I1-I1)")
    assert code == 2 and "parse" in err


def test_matrix_too_large(capsys):
    code, _, _ = run(capsys, "matrix", "id14")
    assert code == 2


def test_bad_duality_file(capsys, tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("2\n1 1\n1 1\n")
    code, _, err = run(capsys, "--duality", str(p), "matrix", "e1")
    assert code == 2 and "duality" in err


def test_trunc_minimum(capsys):
    code, _, _ = run(capsys, "--trunc", "7", "enumerate", "1", "1")
    assert code == 2


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == 2


@pytest.mark.parametrize("which", ["relations", "semiring", "gluing", "disjoint", "rationality", "tensor-iso"])
def test_verify_suites_pass(capsys, which):
    code, out, _ = run(capsys, "--seed", "7", "verify", which)
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_relations_names(capsys):
    _, out, _ = run(capsys, "verify", "relations")
    for tag in ("B1", "B2", "B3", "B4", "B5"):
        assert f"PASS diagram: {tag}" in out and f"PASS matrix: {tag}" in out


def test_verify_rationality_table(capsys):
    _, out, _ = run(capsys, "verify", "rationality")
    assert "r=" in out and "beta=" in out and "s=" in out


def test_verify_semiring_matrix_keying(capsys):
    code, _, _ = run(capsys, "--keying", "matrix", "--seed", "2", "verify", "semiring")
    assert code == 0


def test_exotic_demo(capsys):
    code, out, _ = run(capsys, "exotic-demo")
    assert code == 0
    assert out.strip().endswith("verdict: distinct")
    assert "side=standard shell=identity series=1" in out


def test_options_after_subcommand(capsys):
    a = run(capsys, "--seed", "5", "verify", "gluing")[1]
    b = run(capsys, "verify", "gluing", "--seed", "5")[1]
    assert a == b


def test_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("BRAUERTFT_FORMAT", "structured")
    _, out, _ = run(capsys, "enumerate", "1", "1")
    assert json.loads(out)["count"] == 1


def test_statesum(capsys, tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("in f 2\nout g 2\nf g 2;2;1;(I1-O1)(I2-O2)\n")
    code, out, _ = run(capsys, "statesum", str(p))
    assert code == 0 and "[2;2;0;(I1-O1)(I2-O2)] q" in out
    _, out, _ = run(capsys, "--keying", "matrix", "statesum", str(p))
    assert "M:2;2;2;" in out


def test_module_entry_point_deterministic():
    cmd = [sys.executable, "-m", "brauertft", "--seed", "4", "exotic-demo"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"distinct" in a
