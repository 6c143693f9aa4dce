'''Tests of hoflow.runners'''
import json
import math

import numpy as np
import pytest

from hoflow import config
from hoflow.errors import NumericalError
from hoflow.jobstarters import LocalJobStarter
from hoflow.runners import Check, CheckReport, flatten_params, positive_part, inequality_row, agreement_row, worst_of, json_safe, run_checks, save_reports

class SquareCheck(Check):
    '''passes iff every sampled value satisfies x**2 <= bound'''
    hypothesis = "x in [0, 1]"

    def __init__(self, bound: float = 1.0, fail_id: int = None, **kwargs):
        super().__init__(**kwargs)
        self.bound = bound
        self.fail_id = fail_id

    def __str__(self):
        return f"square_{self.bound:g}"

    def sample(self, n, seed):
        return [{"id": i, "m": (1.0, 0.0, 1.0), "lam": [complex(i, 1)], "x": [i / max(n - 1, 1)], "tag": "s"} for i in range(n)]

    def evaluate(self, params):
        if params["id"] == self.fail_id:
            raise NumericalError("no convergence")
        return inequality_row(params["x"][0] ** 2, self.bound)

def test_flatten_params():
    row = flatten_params({"id": 3, "m": (4, 0, 3), "d": (1.0, 0.5), "lam": [2.5 - 1j], "x": [1.0, 2.0], "side": "left", "skip": [1, 2]})
    assert row["m_s"] == 4 and row["ell"] == 1.0 and row["ellTilde"] == 0.5
    assert row["lambda_re1"] == 2.5 and row["lambda_im1"] == -1.0
    assert row["x2"] == 2.0
    assert row["side"] == "left"
    assert "skip" not in row

def test_inequality_row():
    assert inequality_row(1.0, 2.0)["violation"] == 0.0
    row = inequality_row(3.0, 2.0)
    assert row["margin"] == 1.0
    assert row["violation"] == 0.5
    # the error estimates widen the admissible band
    assert inequality_row(2.0 + 1e-9, 2.0, err_lhs=1e-9)["violation"] == 0.0

def test_non_finite_rows_are_violations():
    assert positive_part(-1.0) == 0.0
    assert math.isinf(positive_part(float("nan")))
    assert math.isinf(inequality_row(float("nan"), 1.0)["violation"])
    assert math.isinf(inequality_row(1.0, float("nan"))["violation"])
    assert math.isinf(inequality_row(1.0, 2.0, err_lhs=float("inf"))["violation"])
    assert inequality_row(1.0, float("inf"))["violation"] == 0.0
    assert math.isinf(agreement_row(float("nan"), 1.0)["violation"])
    assert math.isinf(agreement_row(complex(np.inf, 0.0), 1.0)["violation"])

def test_agreement_row_and_worst_of():
    row = agreement_row(1.0 + 1e-3, 1.0)
    assert row["violation"] == pytest.approx(1e-3)
    assert agreement_row(2.0, 1.0, scale=4.0)["violation"] == 0.25
    assert worst_of(row, {"violation": 0.5})["violation"] == 0.5

def test_check_passes():
    report = SquareCheck(rank=1).run(n=5, seed=0, jobstarter=LocalJobStarter(1))
    assert isinstance(report, CheckReport)
    assert report.passed
    assert report.samples_tried == 5
    assert report.worst_violation == 0.0
    assert report.witnesses == []
    assert list(report.rows["x1"]) == [0.0, 0.25, 0.5, 0.75, 1.0]

def test_check_fails_with_witnesses():
    report = SquareCheck(bound=0.25, rank=1).run(n=5, jobstarter=LocalJobStarter(1))
    assert not report.passed
    assert report.worst_violation == pytest.approx(3.0)
    assert [w["id"] for w in report.witnesses] == [4, 3]

def test_engine_errors_become_infinite_violations():
    report = SquareCheck(fail_id=2, rank=1).run(n=4, jobstarter=LocalJobStarter(1))
    assert not report.passed
    assert report.errors == 1
    assert math.isinf(report.worst_violation)
    assert report.witnesses[0]["violation"] == "inf"
    assert report.witnesses[0]["error"].startswith("NumericalError")

def test_abstract_check():
    class Unnamed(Check):
        pass

    class Named(Check):
        def __str__(self):
            return "named"

    with pytest.raises(NotImplementedError):
        str(Unnamed())
    with pytest.raises(NotImplementedError):
        Named().sample(1, 0)
    with pytest.raises(NotImplementedError):
        Named().evaluate({})

def test_json_safe():
    assert json_safe({"a": np.float64(1.5), "b": [np.int64(2), 1 + 2j], "c": float("nan")}) == {"a": 1.5, "b": [2, [1.0, 2.0]], "c": "nan"}

def test_run_checks_sorted_and_saved(tmp_path):
    checks = [SquareCheck(bound=1.0, rank=1), SquareCheck(bound=0.5, rank=1)]
    reports = run_checks(checks, n=3, seed=0, jobstarter=LocalJobStarter(1))
    assert [r.check_name for r in reports] == ["square_0.5", "square_1"]
    summary_path = save_reports(reports, str(tmp_path / "out"), "csv")
    with open(summary_path, encoding="UTF-8") as f:
        summary = json.load(f)
    assert summary["schema_version"] == config.REPORT_SCHEMA_VERSION
    assert summary["passed"] is False
    assert [c["rows_file"] for c in summary["checks"]] == ["square_0.5.csv", "square_1.csv"]
    assert (tmp_path / "out" / "square_1.csv").is_file()

def test_saved_reports_are_reproducible(tmp_path):
    for name in ("a", "b"):
        save_reports(run_checks([SquareCheck(bound=0.5, rank=1)], n=6, seed=4, jobstarter=LocalJobStarter(1)), str(tmp_path / name))
    for filename in ("summary.json", "square_0.5.csv"):
        assert (tmp_path / "a" / filename).read_text() == (tmp_path / "b" / filename).read_text()

class NanCheck(SquareCheck):
    '''an engine whose value is nan for one sample'''
    def __init__(self, row: str = "inequality", **kwargs):
        super().__init__(**kwargs)
        self.row = row

    def __str__(self):
        return f"nan_{self.row}"

    def evaluate(self, params):
        if params["id"] != 1:
            return super().evaluate(params)
        if self.row == "inequality":
            return inequality_row(float("nan"), 1.0)
        if self.row == "agreement":
            return agreement_row(float("nan"), 1.0)
        return {"violation": float("nan")}

@pytest.mark.parametrize("row", ["inequality", "agreement", "raw"])
def test_nan_results_fail_the_check(row):
    report = NanCheck(row=row, rank=1).run(n=3, jobstarter=LocalJobStarter(1))
    assert not report.passed
    assert math.isinf(report.worst_violation)
    assert [w["id"] for w in report.witnesses] == [1]
