import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from mathieu_gaussian import SeriesParams, cli, ctx_new
from mathieu_gaussian.errors import ConvergenceError
from mathieu_gaussian.oracle import reports_from_csv, reports_from_json


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_choose_method():
    assert cli.choose_method(SeriesParams(1, -1, 1, 20)) == "gamma-1"
    assert cli.choose_method(SeriesParams(0, 2, 1, 3)) == "theorem1"
    assert cli.choose_method(SeriesParams(1, 0, 1, 3)) == "theorem2"
    assert cli.choose_method(SeriesParams("1.5", 2, 1, 3)) == "theorem1"
    assert cli.choose_method(SeriesParams("1.5", -2, 1, 3)) == "algebraic"
    assert cli.choose_method(SeriesParams("1.5", 0, 1, complex(3, 1))) == "algebraic"
    assert cli.choose_method(SeriesParams(1, "0.5", 1, 3)) == "algebraic"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--mu", "1", "--gamma", "0", "--lambda", "2", "--a", "3", "--format", "json")
    assert code == 0
    rep, = reports_from_json(out)
    assert rep.method == "theorem2" and rep.target == "S_hat"
    assert rep.rel_err < 1e-14
    assert "wall_time" not in json.loads(out)[0]


def test_eval_csv_fixed_r(capsys):
    code, out, _ = run(capsys, "eval", "--mu", "1", "--gamma", "0", "--r-max", "5")
    assert code == 0
    rep, = reports_from_csv(out)
    assert abs(rep.rel_err / 7.124e-08 - 1) < 0.01
    assert rep.terms_used == 6


@pytest.mark.parametrize("argv", [
    ("--mu", "0.7", "--gamma", "0.5", "--lambda", "1", "--a", "10"),
    ("--mu", "0.5", "--gamma", "-1", "--lambda", "1", "--a", "20"),
    ("--mu", "0", "--gamma", "4", "--a", "3"),
    ("--mu", "1", "--gamma", "0", "--a", "3+1j", "--method", "theorem2"),
])
def test_eval_methods(capsys, argv):
    code, out, _ = run(capsys, "eval", "--digits", "40", *argv)
    assert code == 0
    rep, = reports_from_csv(out)
    assert rep.rel_err < 1e-12


def test_eval_warns_when_s_hat_underflows(capsys):
    code, _, err = run(capsys, "eval", "--digits", "30", "--a", "6+2j", "--method", "theorem2")
    assert code == 0
    assert err.startswith("warning: S_hat is below the working precision")


def test_eval_timings_and_output(tmp_path, capsys):
    path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "eval", "--digits", "20", "--timings", "--output", str(path))
    assert code == 0 and out == ""
    row = next(csv.DictReader(io.StringIO(path.read_text())))
    assert float(row["wall_time"]) > 0


def test_table1(capsys):
    code, out, _ = run(capsys, "table1", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["r"] for r in rows] == ["0", "1", "2", "5", "10", "15", "20", "S_hat"]
    assert rows[3]["mu=1,gamma=0"].startswith("7.12")
    assert rows[-1]["mu=0,gamma=-2"].startswith("-9.373709690")


def test_table1_warns_below_50(capsys):
    code, _, err = run(capsys, "table1", "--digits", "30")
    assert code == 0 and "below 50" in err


def test_sweep_keeps_grid_order(capsys):
    code, out, err = run(capsys, "sweep", "--digits", "30", "--mu", "1", "--gamma", "0",
                         "--a-grid", "2,3", "--lambda-grid", "2,4", "--r-grid", "0,3", "--jobs", "3")
    assert code == 0 and "warning" not in err
    reps = reports_from_csv(out)
    assert [(int(r.a), int(r.lam)) for r in reps][:4] == [(2, 2), (2, 2), (2, 4), (2, 4)]
    assert [r.terms_used for r in reps][:2] == [1, 4]
    assert len(reps) == 8


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "--family", "C", "--m", "2", "--p", "0")
    assert code == 0
    assert "C,r=3,315/2 - 189*lam + 54*lam^2 - 4*lam^3" in out
    for fam in ("c", "chat", "A", "B", "R", "sigma"):
        code, out, _ = run(capsys, "coeffs", "--family", fam, "--m", "2", "--p", "1" if fam != "R" else "0")
        assert code == 0 and out.startswith("family,index,value")


def test_coeffs_usage_errors(capsys):
    assert run(capsys, "coeffs", "--family", "A", "--m", "0")[0] == 1
    assert run(capsys, "coeffs", "--family", "R", "--q", "0")[0] == 1


def test_verify_passes(capsys):
    code, out, err = run(capsys, "verify", "--digits", "30")
    assert code == 0
    assert "checks passed" in err
    assert "fail" not in out


@pytest.mark.parametrize("family", ["C", "B", "c"])
def test_verify_inject_fails(capsys, family):
    code, out, err = run(capsys, "verify", "--digits", "30", "--inject", family)
    assert code == 2
    assert "fail" in out and "verification failed" in err


@pytest.mark.parametrize("argv", [
    ("eval", "--digits", "8"),
    ("eval", "--mu", "-1"),
    ("eval", "--lambda", "0"),
    ("eval", "--a", "3+3j"),
    ("eval", "--mu", "2", "--gamma", "-1"),
    ("eval", "--gamma", "0.5", "--method", "theorem1"),
    ("eval", "--mu", "1.5", "--method", "theorem2"),
    ("frobnicate",),
    ("sweep", "--a-grid", ","),
])
def test_usage_and_domain_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(list(argv)))
    assert exc.value.code == 1


def test_convergence_error_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("no")
    monkeypatch.setattr(cli, "evaluate", boom)
    assert run(capsys, "eval")[0] == 3


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "mathieu_gaussian.cli", "coeffs", "--family", "c", "--p", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[1:4] == ["c,j=0,1", "c,j=1,3", "c,j=2,3/4"]


@settings(max_examples=8)
@given(st.sampled_from(["2", "3", "5/2"]), st.sampled_from(["1", "2", "0.5"]), st.integers(min_value=0, max_value=6))
def test_deterministic_output(a, lam, r):
    argv = ["eval", "--digits", "20", "--a", a, "--lambda", lam, "--r-max", str(r), "--format", "json"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        old, sys.stdout = sys.stdout, buf
        try:
            assert cli.main(argv) == 0
        finally:
            sys.stdout = old
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_evaluate_api():
    c = ctx_new(20)
    rep = cli.evaluate(SeriesParams(1, 0, 2, 3), "algebraic", c)
    assert rep.method == "algebraic" and rep.target == "S"
