'''Tests of the hoflow command line'''
import json

import numpy as np
import pandas as pd
import pytest
from io import StringIO

from hoflow.cli import main, RunConfig, build_parser, error_object
from hoflow.errors import PoleError
from hoflow.multiplicity import Multiplicity
from hoflow.rank_one import closed_form

def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out

def test_classify_text(capsys):
    code, out = run(capsys, "classify", "--mult", "4,1,-1")
    assert code == 0
    assert out == "M0 M1 M3 MC0; ell_range=[-2, 1]\n"

def test_classify_json(capsys):
    code, out = run(capsys, "classify", "--mult=-1,1,2", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["labels"] == ["M0", "M2", "MC0"]
    assert payload["m3_interior"] is False

def test_eval_at_origin(capsys):
    code, out = run(capsys, "eval", "--mult", "4,1,-1", "--lambda", "1+2i,0.5")
    assert code == 0
    assert out.startswith("value=1 ")

def test_eval_at_rho_is_one(capsys):
    code, out = run(capsys, "eval", "--mult", "2,2,1", "--lambda", "rho", "--x", "0.5,1.0", "--method", "ode", "--format", "json")
    record = json.loads(out)[0]
    assert code == 0
    assert (record["lambda_re1"], record["lambda_re2"]) == (2.0, 4.0)
    assert record["value_re"] == pytest.approx(1.0, abs=1e-7)
    assert record["method"] == "ode"

def test_eval_rank_one_matches_closed_form(capsys):
    code, out = run(capsys, "eval", "--rank", "1", "--mult", "4,3", "--lambda", "2.5", "--x", "1.0", "--format", "csv")
    df = pd.read_csv(StringIO(out))
    assert code == 0
    assert list(df.columns) == ["id", "m_s", "m_m", "m_l", "ell", "ellTilde", "lambda_re1", "lambda_im1", "x1", "value_re", "value_im", "method", "err_est"]
    assert df["value_re"][0] == pytest.approx(closed_form(Multiplicity(4, 0, 3, rank=1), 2.5, 1.0), rel=1e-7)

def test_eval_deformed_rank_one(capsys):
    code, out = run(capsys, "eval", "--rank", "1", "--mult", "4,3", "--deform", "1,0", "--lambda", "2.5", "--x", "1.0", "--format", "json")
    record = json.loads(out)[0]
    assert code == 0
    assert record["ell"] == 1.0
    expected = closed_form(Multiplicity(6, 0, 1, rank=1), 2.5, 1.0) / np.cosh(1.0)
    assert record["value_re"] == pytest.approx(expected, rel=1e-7)

def test_cfun(capsys):
    code, out = run(capsys, "cfun", "--rank", "1", "--mult", "2,0", "--lambda", "2", "--format", "json")
    record = json.loads(out)[0]
    assert code == 0
    assert record["value_re"] == pytest.approx(0.5)
    assert record["b0"] == "nonsingular"

def test_bounded(capsys):
    code, out = run(capsys, "bounded", "--mult", "2,2,1", "--lambda", "2.4,4.8")
    assert code == 0
    assert out.startswith("verdict=unbounded hull_vector=(2, 4) hypotheses_ok=True")

def test_catalog_lookup(capsys):
    code, out = run(capsys, "catalog", "--name", "sp(2,1)", "--n", "1", "--format", "json")
    records = json.loads(out)
    assert code == 0
    assert len(records) == 1
    assert records[0]["sigma_tau_mult"] == [8.0, 0.0, -1.0]
    assert records[0]["partner_ell"] == 0.0
    assert records[0]["consistent"] is True

def test_catalog_filtered_by_rank(capsys):
    code, out = run(capsys, "catalog", "--rank", "1", "--format", "csv")
    df = pd.read_csv(StringIO(out))
    assert code == 0
    assert len(df) == 6
    assert set(df["rank"]) == {1}
    assert df["consistent"].all()

def test_scan_ray(capsys, tmp_path):
    plot = tmp_path / "ray.png"
    code, out = run(capsys, "scan", "--rank", "1", "--mult", "2,0", "--lambda", "0.5", "--tmax", "2", "--points", "5",
                    "--format", "csv", "--threads", "1", "--plot", str(plot))
    df = pd.read_csv(StringIO(out))
    assert code == 0
    assert list(df.columns[:3]) == ["id", "t", "m_s"]
    np.testing.assert_allclose(df["t"], [0.0, 0.5, 1.0, 1.5, 2.0])
    t = df["t"].to_numpy()[1:]
    np.testing.assert_allclose(df["value_re"].to_numpy()[1:], np.sinh(0.5 * t) / (0.5 * np.sinh(t)), rtol=1e-7)
    assert plot.is_file()

def test_scan_box_is_reproducible(capsys, tmp_path):
    argv = ["scan", "--mult", "2,2,1", "--lambda", "0.3+1i,1.1", "--box", "0,1", "--samples", "4", "--seed", "1", "--threads", "1", "--format", "json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert len(json.loads(first)) == 4

def test_scan_writes_out_file(capsys, tmp_path):
    out_file = tmp_path / "scan.csv"
    code, out = run(capsys, "scan", "--rank", "1", "--mult", "2,0", "--lambda", "0.5", "--tmax", "1", "--points", "3",
                    "--format", "csv", "--threads", "1", "--out", str(out_file))
    assert code == 0
    assert out == ""
    assert len(pd.read_csv(out_file)) == 3

def test_verify_catalog_suite(capsys, tmp_path):
    code, out = run(capsys, "verify", "--suite", "catalog", "--samples", "1", "--threads", "1", "--out", str(tmp_path / "reports"))
    assert code == 0
    assert "all checks passed" in out
    with open(tmp_path / "reports" / "summary.json", encoding="UTF-8") as f:
        summary = json.load(f)
    assert summary["passed"] is True
    assert [c["check_name"] for c in summary["checks"]] == ["catalog_integrity"]

def test_domain_errors_exit_with_two(capsys):
    code, out = run(capsys, "eval", "--mult", "1,2", "--lambda", "1,1")
    assert code == 2
    error = json.loads(out)
    assert (error["error"], error["exit_code"]) == ("ValueError", 2)
    assert "rank" in error["message"] or "values" in error["message"]
    code, out = run(capsys, "cfun", "--rank", "1", "--mult=-1,0", "--lambda", "1")
    assert code == 2
    assert json.loads(out)["error"] == "NotRegular"
    code, out = run(capsys, "catalog", "--name", "g2(2)")
    assert code == 2
    assert json.loads(out)["error"] == "KeyError"

def test_numerical_errors_exit_with_three(capsys):
    code, out = run(capsys, "eval", "--mult", "2,2,1", "--lambda", "rho", "--x", "0.5,1.0", "--method", "series")
    assert code == 3
    assert json.loads(out)["exit_code"] == 3

def test_error_object_unwraps_key_errors():
    assert json.loads(error_object(KeyError("Unknown label"), 2))["message"] == "Unknown label"
    assert json.loads(error_object(PoleError("c has a pole"), 3))["error"] == "PoleError"

def test_run_config_canonical_round_trip():
    cfg = RunConfig(command="eval", mult=(4.0, 1.0, -1.0), deform=(0.5, 0.25), lam=(1 + 2j, 0.1 - 0.3j), x=(0.3, 1.2), tol=1e-10)
    assert RunConfig.from_canonical(cfg.canonical()) == cfg
    rho_cfg = RunConfig(command="scan", lam="rho", box=(0.0, 2.0), threads=2)
    assert RunConfig.from_canonical(rho_cfg.canonical()) == rho_cfg

def test_run_config_from_args():
    args = build_parser().parse_args(["eval", "--mult", "4,1,-1", "--lambda", "rho", "--x", "0.5,1", "--tol", "1e-9"])
    cfg = RunConfig.from_args(args)
    assert cfg.mult == (4.0, 1.0, -1.0)
    assert cfg.lam == "rho"
    assert cfg.x == (0.5, 1.0)
    assert cfg.tol == 1e-9
    assert cfg.method == "auto"

@pytest.mark.parametrize("kwargs", [
    {"method": "magic"},
    {"format": "xml"},
    {"suite": "everything"},
    {"trunc": 0},
    {"deform": (1.0,)},
    {"box": (0.0, 1.0, 2.0)},
])
def test_run_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(command="eval", **kwargs)
    with pytest.raises(ValueError):
        RunConfig(command="fly")
