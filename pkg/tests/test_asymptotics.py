'''Tests of hoflow.analysis.asymptotics'''
import numpy as np
import pytest

from hoflow import config
from hoflow.errors import Unsupported
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, classify, ell_range
from hoflow.analysis import asymptotics
from hoflow.jobstarters import LocalJobStarter
from hoflow.analysis.asymptotics import (default_direction, vanishing_roots, is_strictly_dominant, ratio_metrics, ray_profile,
                                         sharp_ratio, b0_probe, SharpAsymptotics, LeadingCoefficient)

# F = sinh(lambda x) / (lambda sinh x), rho = 1, c(lambda) = 1 / lambda
SINH_MULT = Multiplicity(2, 0, 0, rank=1)

def test_default_direction_is_unit_and_regular(rs2):
    direction = default_direction(2)
    assert np.linalg.norm(direction) == pytest.approx(1.0)
    assert np.all(rs2.pairings(direction) > 0)

def test_vanishing_roots(rs2):
    # lambda0 = (0, 1) is orthogonal to the short root e1 and the long root 2 e1 only
    mask = vanishing_roots(rs2, [0.0, 1.0])
    assert mask.sum() == 1
    assert rs2.root_classes[np.argmax(mask)] == "short"
    assert not is_strictly_dominant(rs2, [0.0, 1.0])
    assert is_strictly_dominant(rs2, [1.0, 2.0])

def test_ratio_metrics():
    metrics = ratio_metrics(np.log([1.0, 2.0, 2.0, 2.0]))
    assert metrics["spread"] == pytest.approx(2.0)
    assert metrics["stability"] == 0.0
    # a constant factor reached after the start of the window does not count
    metrics = ratio_metrics(np.log([1.0, 1e4, 1e4, 1e4]), t=np.array([0.0, 10.0, 20.0, 30.0]), spread_from=10.0)
    assert metrics["spread"] == pytest.approx(1.0)
    metrics = ratio_metrics(np.array([0.0, np.nan, 1.0]))
    assert np.isinf(metrics["spread"]) and np.isinf(metrics["stability"])

def test_ray_profile_columns(rs1):
    t_grid = np.array([0.0, 1.0, 2.0])
    df = ray_profile(rs1, SINH_MULT, [1.5], [0.0], [1.0], t_grid, tol=1e-10)
    assert list(df.columns) == ["t", "x1", "value_re", "value_im", "log_abs"]
    np.testing.assert_allclose(df["log_abs"], np.log(df["value_re"]), rtol=1e-12)
    np.testing.assert_allclose(df["value_re"].to_numpy()[1:], np.sinh(1.5 * t_grid[1:]) / (1.5 * np.sinh(t_grid[1:])), rtol=1e-7)
    assert df["value_re"].iloc[0] == pytest.approx(1.0)

def test_sharp_ratio_converges_to_c(rs1):
    report = sharp_ratio(rs1, SINH_MULT, [2.0], [0.0], [1.0], tol=1e-10)
    assert report.heuristic
    assert report.passed
    assert report.rows["ratio"].iloc[-1] == pytest.approx(0.5, rel=1e-6)

def test_sharp_ratio_at_zero_has_polynomial_factor(rs1):
    # F_0 = x / sinh x against (1 + x) exp(-x): the ratio tends to 2
    report = sharp_ratio(rs1, SINH_MULT, [0.0], [0.0], [1.0], tol=1e-10)
    assert report.passed
    assert report.rows["ratio"].iloc[-1] == pytest.approx(2.0 * 40.0 / 41.0, rel=1e-5)

def test_sharp_ratio_rejects_non_dominant(rs1):
    with pytest.raises(ValueError):
        sharp_ratio(rs1, SINH_MULT, [-1.0], [0.0], [1.0])

def test_sharp_ratio_fails_on_nan_engine_values(rs1, monkeypatch):
    def broken_ray(rs, m, lam, direction, t_grid, **kwargs):
        return np.where(np.asarray(t_grid) < 30.0, 1.0, np.nan).astype(complex)
    monkeypatch.setattr(asymptotics, "ray_values", broken_ray)
    report = sharp_ratio(rs1, SINH_MULT, [2.0], [0.0], [1.0])
    assert not report.passed
    assert np.isinf(report.worst_violation)

def test_deformed_sharp_ratio_rank_two(rs2):
    m, d = Multiplicity(4, 1, 3), Deformation(1.0, 0.5)
    report = sharp_ratio(rs2, m, [1.0, 2.0], [0.0, 0.0], default_direction(2), d=d, tol=1e-10)
    assert report.passed, report.witnesses
    assert np.all(np.isfinite(report.rows["log_ratio"]))
    tail = report.rows["ratio"][report.rows["t"] >= 20.0]
    assert tail.max() / tail.min() < 1.0 + config.SHARP_STABILITY

def test_deformed_sharp_sampling():
    check = SharpAsymptotics(2, deformed=True)
    assert str(check) == "sharp_ratio_deformed_r2"
    for p in check.sample(6, seed=0):
        m = Multiplicity(*p["m"])
        ell_min, ell_max = ell_range(m)
        assert ell_min <= p["d"][0] <= ell_max
        assert p["d"][1] > 0
        assert "M+" in classify(m)
        assert is_strictly_dominant(RootSystemBC(2), p["lam"])

def test_b0_probe_limit(rs1):
    report = b0_probe(rs1, SINH_MULT, [2.0], tol=1e-10)
    assert report.passed
    assert not report.heuristic
    assert report.rows["q"].iloc[-1] == pytest.approx(0.5, rel=1e-6)
    # |F_{2 + i/2}| <= F_2 along the ray
    assert np.all(report.rows["perturbed_abs"] <= report.rows["value_re"] * (1.0 + 1e-9))

def test_b0_probe_needs_regular_lambda(rs1):
    with pytest.raises(Unsupported):
        b0_probe(rs1, SINH_MULT, [0.0])

@pytest.mark.slow
def test_b0_probe_vanishing_c(rs1):
    report = b0_probe(rs1, Multiplicity(3, 0, -3, rank=1), [1.5], tol=1e-10)
    assert report.passed
    assert report.rows["q"].abs().iloc[-1] < 1e-6

@pytest.mark.slow
@pytest.mark.parametrize("check_class", [SharpAsymptotics, LeadingCoefficient])
def test_asymptotic_checks_rank_one(check_class):
    report = check_class(1, tol=1e-10).run(n=3, seed=0, jobstarter=LocalJobStarter(1))
    assert report.passed, report.witnesses

@pytest.mark.slow
@pytest.mark.parametrize("deformed", [False, True])
def test_sharp_asymptotics_rank_two(deformed):
    report = SharpAsymptotics(2, tol=1e-10, deformed=deformed).run(n=3, seed=0, jobstarter=LocalJobStarter(1))
    assert report.passed, report.witnesses
