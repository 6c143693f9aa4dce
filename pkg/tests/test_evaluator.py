'''Tests of hoflow.evaluator'''
import numpy as np
import pytest

from hoflow.errors import DomainError, SingularPoint
from hoflow.multiplicity import Multiplicity
from hoflow.evaluator import F_eval, G_ode, orbit_ray, gradient, gradient_formula, cherednik_apply, laplacian_residual

M = Multiplicity(2, 2, 1)
LAM = np.array([0.7 + 0.3j, 1.9])
X = np.array([0.6, 1.5])

def h3(lam, x):
    return np.sinh(lam * x) / (lam * np.sinh(x))

def test_value_at_origin(rs2):
    res = F_eval(rs2, M, LAM, [0.0, 0.0])
    assert res.value == 1.0
    assert res.method == "exact"
    ode = G_ode(rs2, M, LAM, [0.0, 0.0])
    np.testing.assert_array_equal(ode.orbit_values, np.ones(rs2.order))

def test_input_validation(rs2):
    with pytest.raises(DomainError):
        F_eval(rs2, Multiplicity(-2, 1, 1), LAM, X)
    with pytest.raises(KeyError):
        F_eval(rs2, M, LAM, X, method="euler")
    with pytest.raises(ValueError):
        F_eval(rs2, M, LAM, [0.1, 0.2, 0.3])

def test_rank_one_closed_form(rs1):
    m = Multiplicity(2, 0, 0, rank=1)
    for method in ("ode", "series"):
        res = F_eval(rs1, m, [1.3], [1.1], method=method, tol=1e-12)
        np.testing.assert_allclose(res.value, h3(1.3, 1.1), rtol=1e-8)

def test_product_formula_without_middle_roots(rs2):
    m = Multiplicity(2, 0, 0)
    lam, x = (0.7, 1.9), (0.6, 1.4)
    expected = 0.5 * (h3(lam[0], x[0]) * h3(lam[1], x[1]) + h3(lam[1], x[0]) * h3(lam[0], x[1]))
    res = F_eval(rs2, m, lam, x, method="ode", tol=1e-12)
    np.testing.assert_allclose(res.value, expected, rtol=1e-8)

def test_engines_agree(rs2):
    series = F_eval(rs2, M, LAM, X, method="series", tol=1e-12)
    ode = F_eval(rs2, M, LAM, X, method="ode", tol=1e-12)
    assert series.method == "series" and ode.method == "ode"
    np.testing.assert_allclose(series.value, ode.value, rtol=1e-6)

def test_rho_point(rs2):
    # lambda = rho(m) is not generic for the series; auto falls back to the ODE
    res = F_eval(rs2, M, [2.0, 4.0], [0.8, 1.7], tol=1e-11)
    assert res.method == "ode"
    assert abs(res.value - 1.0) <= 1e-7

def test_weyl_invariance(rs2):
    a = F_eval(rs2, M, LAM, X, method="ode", tol=1e-12).value
    b = F_eval(rs2, M, LAM, [-X[1], X[0]], method="ode", tol=1e-12).value
    np.testing.assert_allclose(a, b, rtol=1e-8)

def test_orbit_vector(rs2):
    res = G_ode(rs2, M, LAM, X, tol=1e-12)
    assert res.orbit_values.shape == (rs2.order,)
    assert res.value == res.orbit_values[0]
    assert res.error_estimate > 0
    np.testing.assert_allclose(np.mean(res.orbit_values), F_eval(rs2, M, LAM, X, method="ode", tol=1e-12).value)

def test_orbit_ray_matches_pointwise(rs2):
    direction = np.array([1.0, 2.0]) / np.sqrt(5.0)
    t_grid = np.array([0.0, 0.05, 0.5, 1.5, 3.0])
    rows = orbit_ray(rs2, M, LAM, direction, t_grid, tol=1e-12)
    assert rows.shape == (len(t_grid), rs2.order)
    assert rows[0].mean() == pytest.approx(1.0)
    for k in (2, 3, 4):
        pointwise = F_eval(rs2, M, LAM, t_grid[k] * direction, method="ode", tol=1e-12).value
        np.testing.assert_allclose(rows[k].mean(), pointwise, rtol=1e-8)
    with pytest.raises(ValueError):
        orbit_ray(rs2, M, LAM, direction, [1.0, 0.5])
    with pytest.raises(ValueError):
        orbit_ray(rs2, M, LAM, [0.0, 0.0], t_grid)

def test_gradient_formula(rs2):
    lam = np.array([0.4 + 0.2j, 1.1])
    res = G_ode(rs2, M, lam, X, tol=1e-12)
    formula = gradient_formula(rs2, lam, M, res.orbit_values)
    numeric = gradient(lambda y: F_eval(rs2, M, lam, y, method="ode", tol=1e-12).value, X)
    np.testing.assert_allclose(formula, numeric, rtol=1e-6, atol=1e-9)

def test_cherednik_eigenfunction(rs2):
    lam = np.array([0.4, 1.1])
    x = np.array([0.5, 1.2])
    xi = np.array([0.3, 1.0])
    g = lambda y: G_ode(rs2, M, lam, y, tol=1e-12).value
    applied = cherednik_apply(rs2, M, xi, g, x)
    expected = np.dot(lam, xi) * g(x)
    assert abs(applied - expected) <= 1e-5 * (1.0 + np.linalg.norm(lam)) * abs(g(x))
    with pytest.raises(SingularPoint):
        cherednik_apply(rs2, M, xi, g, [1.0, 1.0])

def test_laplacian_residual(rs2):
    assert laplacian_residual(rs2, M, [0.4 + 0.2j, 1.1], [0.5, 1.2], h=1e-2) <= 1e-5
