import json
import subprocess
import sys

import pytest

from nonint import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def rossler_spec(tmp_path, capsys):
    path = tmp_path / "rossler_a0p9.json"
    assert run(capsys, "example", "rossler", "--a", "9/10", "--out", str(path))[0] == 0
    return path


@pytest.fixture
def vdp_spec(tmp_path, capsys):
    path = tmp_path / "vdp_c2.json"
    code = run(capsys, "example", "vdp", "--c", "2", "--b1", "1/2", "--b2", "1/2", "--a1", "1", "--a2", "1",
               "--out", str(path))[0]
    assert code == 0
    return path


def test_example_rossler_files(rossler_spec):
    spec = json.loads(rossler_spec.read_text())
    assert spec["dim"] == 3 and len(spec["terms"]) == 7
    side = json.loads(rossler_spec.with_name("rossler_a0p9.closed_form.json").read_text())
    assert side["omega_squared"] == "119/100" and side["alpha_exact"][0] == "-729/2380"


def test_example_vdp_sidecar(vdp_spec):
    side = json.loads(vdp_spec.with_name("vdp_c2.closed_form.json").read_text())
    assert side["omega1_squared"] == pytest.approx((3 - 2 ** 0.5) / 2)
    assert side["omega_sq_product"] == "7/4"


def test_example_domain_error(capsys):
    code, out, err = run(capsys, "example", "rossler", "--a", "3/2")
    assert code == 1 and "ParameterDomainError" in err and out == ""


def test_analyze_rossler(capsys, rossler_spec):
    code, out, _ = run(capsys, "analyze", str(rossler_spec))
    rep = json.loads(out)
    assert code == 2 and rep["outcome"] == "Inconclusive"
    assert rep["verdict"]["rationality"]["status"] == "ExactRational"
    assert (rep["verdict"]["rationality"]["p"], rep["verdict"]["rationality"]["q"]) == (-200, 81)
    assert rep["schema"] == cli.SCHEMA and len(rep["input"]["sha256"]) == 64


def test_roundtrip_matches_sidecar(capsys, rossler_spec, vdp_spec):
    for spec, stem in ((rossler_spec, "rossler_a0p9"), (vdp_spec, "vdp_c2")):
        rep = json.loads(run(capsys, "analyze", str(spec))[1])
        side = json.loads(spec.with_name(stem + ".closed_form.json").read_text())
        got = [rep["coefficients"][f"alpha{k}"] for k in range(1, 5)]
        assert got == pytest.approx(side["alpha"], abs=1e-9)


def test_analyze_vdp_with_oracle(capsys, vdp_spec):
    code, out, _ = run(capsys, "analyze", str(vdp_spec), "--oracle", "6")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"]["fired_condition"] == "main2.ii"
    assert rep["oracle"]["confirms"] is True
    assert "not ruled out" in rep["oracle"]["statement"]
    assert rep["resonance"]["degree"] == 2


def test_analyze_not_equilibrium(capsys, tmp_path):
    path = tmp_path / "not_equilibrium.json"
    path.write_text(json.dumps({"dim": 3, "terms": [{"component": 1, "exponents": [0, 0, 0], "coeff": 1},
                                                    {"component": 2, "exponents": [1, 0, 0], "coeff": 1}]}))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 1 and json.loads(out)["error"]["code"] == "NotAnEquilibrium"


def test_analyze_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 1 and json.loads(out)["error"]["code"] == "SpecParseError"


def test_analyze_missing_file(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 1 and json.loads(out)["error"]["code"] == "FileNotFound"


def test_analyze_unsupported(capsys, tmp_path):
    path = tmp_path / "saddle.json"
    path.write_text(json.dumps({"dim": 2, "terms": [{"component": 1, "exponents": [1, 0], "coeff": 1},
                                                    {"component": 2, "exponents": [0, 1], "coeff": -1}]}))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 1 and json.loads(out)["outcome"] == "Error"


def test_byte_stable(capsys, vdp_spec):
    a = run(capsys, "analyze", str(vdp_spec), "--oracle", "4")[1]
    b = run(capsys, "analyze", str(vdp_spec), "--oracle", "4")[1]
    assert a == b


def test_json_flag(capsys, tmp_path, rossler_spec):
    out = tmp_path / "report.json"
    code, text, _ = run(capsys, "analyze", str(rossler_spec), "--json", str(out))
    assert code == 2 and text == "" and json.loads(out.read_text())["outcome"] == "Inconclusive"


def test_shift_and_find_equilibrium(capsys, tmp_path):
    from fractions import Fraction
    from nonint import families
    from nonint import vectorfield as VF
    g = VF.shift(families.rossler(Fraction(9, 10)), [-1, -2, -3])
    path = tmp_path / "shifted.json"
    VF.dump(g, path)
    assert json.loads(run(capsys, "analyze", str(path))[1])["error"]["code"] == "NotAnEquilibrium"
    rep = json.loads(run(capsys, "analyze", str(path), "--shift", "1,2,3")[1])
    assert rep["outcome"] == "Inconclusive" and rep["input"]["shift"] == ["1", "2", "3"]
    rep = json.loads(run(capsys, "analyze", str(path), "--find-equilibrium", "0.9,2.1,2.9")[1])
    assert rep["outcome"] == "Inconclusive"
    assert rep["verdict"]["rationality"]["status"] == "ExactRational"


def test_family_flag(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "rossler", "--a", "1/2")
    rep = json.loads(out)
    assert code == 2 and rep["closed_form"]["alpha4_over_alpha1"] == "-8"


def test_sweep_order(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "rossler", "--sweep", "a=1/10:1/2:1/10", "--workers", "3")
    lines = [json.loads(x) for x in out.splitlines()]
    assert [x["sweep"]["value"] for x in lines] == ["1/10", "1/5", "3/10", "2/5", "1/2"]
    assert code == 2 and all(x["outcome"] == "Inconclusive" for x in lines)


def test_sweep_domain_errors_reported(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "rossler", "--sweep", "a=13/10:16/10:1/10")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 1 and lines[-1]["error"]["code"] == "ParameterDomainError"


def test_simulate_case1_csv(capsys, tmp_path):
    path = tmp_path / "c1.csv"
    code = run(capsys, "simulate", "--case1", "1,0,1,2", "--x0", "0.1,-0.05", "--csv", str(path))[0]
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0] == "t,r,x3,Q"
    assert lines[-1].startswith("# Q relative drift max")
    drift = float(lines[-1].split()[5])
    assert drift <= 1e-6


def test_simulate_zero_initial_state(capsys):
    code, out, _ = run(capsys, "simulate", "--case1", "1,0,1,2", "--x0", "0,0", "--t-end", "1")
    rows = [r for r in out.splitlines()[1:] if not r.startswith("#")]
    assert code == 0 and rows and all(r.split(",")[1:3] == ["0.0", "0.0"] for r in rows)


def test_simulate_compare_planar(capsys, rossler_spec):
    code, out, _ = run(capsys, "simulate", str(rossler_spec), "--compare-planar", "--t-end", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,r_full,x3_full,r_planar,x3_planar"
    dev = float(lines[-1].split()[3])
    assert dev <= 1e-6


def test_simulate_bad_alpha(capsys):
    code, _, err = run(capsys, "simulate", "--case1", "1,2")
    assert code == 1 and "BadArgument" in err


def test_parse_helpers():
    assert cli.parse_sweep("a=0.1:0.3:0.1")[1] == [cli.Fraction(1, 10), cli.Fraction(1, 5), cli.Fraction(3, 10)]
    with pytest.raises(cli.CliError):
        cli.parse_number("abc")


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "nonint.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "nonint" in res.stdout
