import json
import subprocess
import sys

import pytest

from ellwk.cli import jsonable, run


def report(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_rootsys(capsys):
    code, rep, _ = report(capsys, ["rootsys", "check"])
    assert code == 0 and rep["schema"] == 1 and rep["axioms"]["closure"]


def test_spec_file(capsys, tmp_path):
    p = tmp_path / "a2.toml"
    p.write_text('base = "A"\nrank = 2\n')
    code, rep, _ = report(capsys, ["rootsys", "--spec", str(p)])
    assert code == 0 and rep["system"]["rank"] == 2


def test_g0(capsys):
    code, rep, _ = report(capsys, ["weyl", "g0", "--budget", "6"])
    assert code == 0 and rep["g0"]["coefficient"] == "-1/1"


def test_budget_exhausted(capsys):
    code, rep, err = report(capsys, ["weyl", "g0", "--budget", "2"])
    assert code == 1 and "budget exhausted" in err and not rep["passed"]


def test_missing_file(capsys, tmp_path):
    code, rep, err = report(capsys, ["weyl", "g0", "--spec", str(tmp_path / "nope.toml")])
    assert code == 2 and rep is None and "nope.toml" in err


def test_malformed_spec(capsys, tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('base = "A"\nrank =\n')
    code, _, err = report(capsys, ["domain", "--spec", str(p)])
    assert code == 2 and "line 2" in err


def test_bad_chart(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"n": 2}')
    code, _, err = report(capsys, ["frobenius", "check", "--chart", str(p)])
    assert code == 2 and "'eta'" in err


def test_usage_errors(capsys):
    assert run(["nonsense"]) == 2
    assert run(["weyl"]) == 2
    assert run(["frobenius", "check", "--tol", "-1"]) == 2
    capsys.readouterr()


def test_residual_failure_table(capsys, tmp_path):
    from ellwk.frobenius import fixtures
    bad = fixtures.perturbed_potential(fixtures.a3_chart())
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad.to_json()))
    code, rep, err = report(capsys, ["frobenius", "check", "--chart", str(p), "--samples", "5"])
    assert code == 1 and not rep["passed"]
    assert "failing residuals" in err and "associativity" in err


@pytest.mark.parametrize("argv", [
    ["domain", "sample", "--count", "3"],
    ["tensors", "check", "--samples", "4"],
    ["invariants", "check", "--m", "2"],
    ["invariants", "dim", "--m", "2"],
    ["frobenius", "intersect"],
    ["frobenius", "deform", "--family", "kappa_t3"],
    ["frobenius", "deform", "--affine", "0,1,0"],
    ["frobenius", "sections", "--samples", "6"],
    ["weyl", "check", "--words", "10"],
])
def test_subcommands_pass(capsys, argv):
    code, rep, _ = report(capsys, argv)
    assert code == 0 and rep["passed"] and rep["schema"] == 1


def test_unknown_family(capsys):
    code, _, err = report(capsys, ["frobenius", "deform", "--family", "zzz"])
    assert code == 2 and "zzz" in err


def test_out_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["invariants", "eval", "--m", "1", "--seed", "3"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    value = json.loads(a.read_text())["value"]
    assert isinstance(value, list) and len(value) == 2  # complex as [re, im]


def test_jsonable():
    from fractions import Fraction
    import numpy as np
    assert jsonable({"z": 1 + 2j, "q": Fraction(1, 3), "a": np.array([1.5]), "inf": float("inf")}) == \
        {"z": [1.0, 2.0], "q": "1/3", "a": [1.5], "inf": "inf"}


def test_suite_subset(capsys):
    code, rep, err = report(capsys, ["suite", "--only", "2,7"])
    assert code == 0 and rep["total"] == 2 and rep["passed"] == 2
    assert "[PASS] criterion 2" in err


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "ellwk.cli", "weyl", "g0", "--budget", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 1 and "budget exhausted" in out.stderr
