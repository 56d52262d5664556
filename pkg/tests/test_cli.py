import csv
import io
import json

import pytest

from repgame.cli import main, sweep_grid
from repgame.io import dumps, loads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_value_json(capsys):
    code, out, _ = run(capsys, "value", "--p", "0.75")
    assert code == 0
    d = json.loads(out)
    assert d["v"] == pytest.approx(0.35267910, abs=1e-7)
    assert d["terms"] > 0 and d["tail_bound"] < 1e-12


def test_value_half(capsys):
    code, out, _ = run(capsys, "value", "--p", "0.5")
    assert json.loads(out)["v"] == pytest.approx(0.5, abs=1e-9)


def test_value_both_discrepancy(capsys):
    code, out, _ = run(capsys, "value", "--p", "0.6667", "--method", "both")
    d = json.loads(out)
    assert d["discrepancy"] < 1e-12


def test_value_rational(capsys):
    code, out, _ = run(capsys, "value", "--p", "3/4", "--precision", "rational", "--tol", "1e-4")
    assert code == 0
    assert "/" in json.loads(out)["v_text"]


@pytest.mark.parametrize("argv", [
    ["value", "--p", "1.5"],
    ["value", "--p", "0.7", "--precision", "nope"],
    ["sweep", "--step", "0"],
    ["sweep", "--step", "-0.1"],
    ["value"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_sweep_rows(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--p-min", "0.5", "--p-max", "0.75", "--step", "0.0833333333333333",
                     "--out", str(out_file))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_file.read_text())))
    assert list(rows[0]) == ["p", "v_sigma_star", "upper_bound_p_over_4p_minus_1", "lower_bound_quarter"]
    first = {k: float(v) for k, v in rows[0].items()}
    assert first == pytest.approx({"p": 0.5, "v_sigma_star": 0.5, "upper_bound_p_over_4p_minus_1": 0.5,
                                   "lower_bound_quarter": 0.25}, abs=1e-9)
    third = {k: float(v) for k, v in rows[2].items()}
    assert third["v_sigma_star"] == pytest.approx(0.4, abs=1e-9)
    assert third["upper_bound_p_over_4p_minus_1"] == pytest.approx(0.4, abs=1e-9)
    last = {k: float(v) for k, v in rows[3].items()}
    assert last["v_sigma_star"] == pytest.approx(0.35267910, abs=1e-7)
    assert last["upper_bound_p_over_4p_minus_1"] == pytest.approx(0.375)


def test_sweep_workers_keep_order_and_bytes(capsys):
    _, a, _ = run(capsys, "sweep", "--p-min", "0.5", "--p-max", "0.7", "--step", "0.02")
    _, b, _ = run(capsys, "sweep", "--p-min", "0.5", "--p-max", "0.7", "--step", "0.02", "--workers", "3")
    assert a == b
    ps = [float(r["p"]) for r in csv.DictReader(io.StringIO(a))]
    assert ps == sorted(ps) and len(ps) == 11


def test_sweep_grid():
    assert sweep_grid(0.5, 0.6, 0.05) == [0.5, 0.55, 0.6]


def test_respond(capsys):
    code, out, _ = run(capsys, "respond", "--p", "0.70", "--grid", "300")
    assert code == 0
    d = json.loads(out)
    assert d["inequalities"]["passed"]


def test_respond_failure_exit(capsys):
    assert run(capsys, "respond", "--p", "0.76", "--grid", "300")[0] == 1
    assert run(capsys, "respond", "--p", "0.8")[0] == 1


def test_certify_range(capsys):
    code, out, _ = run(capsys, "certify", "--auto", "--p-min", "0.667", "--p-max", "0.719023", "--samples", "21")
    assert code == 0
    assert json.loads(out)["covered"]


def test_certify_gap_exit(capsys):
    code, _, err = run(capsys, "certify", "--auto", "--p-min", "0.74", "--p-max", "0.75", "--depth", "20")
    assert code == 1
    assert "uncovered" in err


def test_certify_single(capsys):
    code, out, _ = run(capsys, "certify", "--p", "0.69", "--scheme", "three")
    assert code == 0 and json.loads(out)["passed"]
    assert run(capsys, "certify", "--p", "0.75", "--scheme", "three")[0] == 2


def test_perturb(capsys):
    code, out, _ = run(capsys, "perturb", "--p", "0.75", "--k0", "7", "--eps", "0.01")
    assert code == 0
    assert json.loads(out)["margin"] > 1e-5
    assert run(capsys, "perturb", "--p", "0.75", "--k0", "7", "--eps", "0.01", "--terms", "3")[0] == 3
    assert run(capsys, "perturb", "--p", "0.75", "--k0", "1", "--eps", "0.01")[0] == 1


def test_simulate_byte_stable(capsys):
    argv = ["simulate", "--p", "0.7", "--rounds", "50000", "--seed", "3"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    assert a.startswith("seed,rounds,replicates,mean")


def test_simulate_against(capsys):
    code, out, _ = run(capsys, "simulate", "--p", "0.7", "--p2", "always_L", "--against", "always_R",
                       "--rounds", "100000", "--output", "json")
    assert code == 0
    assert json.loads(out)["indistinguishable"]


def test_json_report_round_trips(capsys):
    _, out, _ = run(capsys, "perturb", "--p", "0.75", "--k0", "7", "--eps", "0.01")
    assert dumps(loads(out)) + "\n" == out


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": "0.75", "tol": 1e-10}))
    code, out, _ = run(capsys, "--config", str(cfg), "value")
    assert code == 0
    assert json.loads(out)["v"] == pytest.approx(0.35267910, abs=1e-7)
    assert run(capsys, "--config", str(tmp_path / "missing.json"), "value")[0] == 2


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("REPGAME_PRECISION", "bigfloat:128")
    _, out, _ = run(capsys, "value", "--p", "0.75")
    assert json.loads(out)["precision"] == "bigfloat:128"


@pytest.mark.parametrize("argv", [
    ["perturb", "--p", "0.75", "--k0", "7"],
    ["perturb", "--p", "0.75", "--k0", "7", "--eps", "abc"],
    ["perturb", "--p", "0.75", "--k0", "7", "--eps-grid", "0,x"],
    ["simulate", "--p", "0.75", "--p1", "perturbed"],
])
def test_perturb_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
