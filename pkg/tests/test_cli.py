import json
import math

import pytest

from calcforge.cli import main


def test_integrate_basic(capsys):
    assert main(["integrate", "--expr", "ln(1+x^2)", "--var", "x",
                 "--from", "0", "--to", "1"]) == 0
    out = capsys.readouterr().out
    value = float(out.splitlines()[0].split(":")[1])
    assert value == pytest.approx(math.log(2) + math.pi / 2 - 2, rel=1e-9)
    assert "status: converged" in out


def test_integrate_degenerate(capsys):
    assert main(["integrate", "--expr", "x", "--var", "x",
                 "--from", "1", "--to", "1"]) == 0
    assert float(capsys.readouterr().out.splitlines()[0].split(":")[1]) == 0.0


def test_integrate_improper_routing(capsys):
    assert main(["integrate", "--expr", "1/x^2", "--from", "1",
                 "--to", "inf"]) == 0
    out = capsys.readouterr().out
    assert "status: converged" in out
    assert main(["integrate", "--expr", "1/x", "--from", "1",
                 "--to", "inf"]) == 0
    assert "divergent" in capsys.readouterr().out


def test_pfrac_output(capsys):
    assert main(["pfrac", "--num", "x^2-2*x-9",
                 "--den", "(x^2+4*x+5)*(x-1)"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("decomposition:")
    assert "antiderivative:" in out
    assert "arctan" not in out  # the arctangent coefficient vanishes here


def test_usage_errors_exit_2(capsys):
    assert main(["integrate", "--expr", "2*", "--from", "0", "--to", "1"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["nonsense"]) == 2
    capsys.readouterr()


def test_env_rel_tol(monkeypatch, capsys):
    monkeypatch.setenv("CALCFORGE_REL_TOL", "1e-6")
    assert main(["integrate", "--expr", "sin(x)", "--from", "0",
                 "--to", "pi"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("CALCFORGE_REL_TOL", "banana")
    assert main(["integrate", "--expr", "sin(x)", "--from", "0",
                 "--to", "pi"]) == 2
    capsys.readouterr()


def test_geometry_subcommands(capsys):
    assert main(["area", "--coords", "polar", "--rho", "2",
                 "--phi-from", "0", "--phi-to", "2*pi"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(4 * math.pi)
    assert main(["arclen", "--coords", "cartesian", "--y", "2*x",
                 "--a", "0", "--b", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.sqrt(5))
    assert main(["surface", "--coords", "cartesian", "--y", "1",
                 "--a", "0", "--b", "1", "--axis", "ox"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(2 * math.pi)
    assert main(["volume", "--coords", "cartesian", "--outer", "5-x",
                 "--inner", "x^2+2*x+5", "--a", "-3", "--b", "0",
                 "--axis", "ox"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(50.4 * math.pi)


def test_intersect(capsys):
    assert main(["intersect", "--f", "x^2+2*x+5", "--g", "5-x",
                 "--lo", "-10", "--hi", "10"]) == 0
    roots = [float(line) for line in capsys.readouterr().out.split()]
    assert roots == pytest.approx([-3.0, 0.0], abs=1e-8)


def test_missing_curve_flags_exit_2(capsys):
    assert main(["arclen", "--coords", "parametric", "--x", "t"]) == 2
    capsys.readouterr()


def test_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.corpus"
    good.write_text("[problem]\nid = ok\nkind = definite\nintegrand = x\n"
                    "var = x\nlower = 0\nupper = 1\nexpected = 1/2\n")
    out_json = tmp_path / "report.json"
    assert main(["verify", "--corpus", str(good), "--json", str(out_json)]) == 0
    capsys.readouterr()
    parsed = json.loads(out_json.read_text())
    assert parsed["rows"][0]["status"] == "pass"
    bad = tmp_path / "bad.corpus"
    bad.write_text("[problem]\nid = no\nkind = definite\nintegrand = x\n"
                   "var = x\nlower = 0\nupper = 1\nexpected = 2\n")
    assert main(["verify", "--corpus", str(bad)]) == 1
    capsys.readouterr()
    assert main(["verify", "--corpus", str(tmp_path / "missing.corpus")]) == 2
    capsys.readouterr()


def test_plot_emits_csv(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    assert main(["plot", "--coords", "parametric", "--x", "cos(t)",
                 "--y", "sin(t)", "--t-from", "0", "--t-to", "2*pi",
                 "--samples", "8", "--out", str(out)]) == 0
    capsys.readouterr()
    data = out.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "t,x,y"
    assert len(lines) == 9
    x0 = [float(v) for v in lines[1].split(",")]
    assert x0 == pytest.approx([0.0, 1.0, 0.0])
    assert main(["plot", "--coords", "cartesian", "--y", "x^2", "--a", "0",
                 "--b", "1", "--samples", "1", "--out", str(out)]) == 2
    capsys.readouterr()
