'''Tests of hoflow.rank_one'''
import numpy as np
import pytest

from hoflow.errors import DomainError
from hoflow.multiplicity import Multiplicity
from hoflow.evaluator import F_eval
from hoflow.rank_one import jacobi_parameters, closed_form, series_value, rank1_oracle

H3 = Multiplicity(2, 0, 0, rank=1)

def test_jacobi_parameters():
    params = jacobi_parameters(Multiplicity(4, 0, 3, rank=1), 2.5)
    assert params["rho"] == 5.0
    assert params["a"] == pytest.approx(3.75)
    assert params["b"] == pytest.approx(1.25)
    assert params["c"] == 4.0
    assert params["alpha"] == 3.0 and params["beta"] == 1.0
    # p = 1 doubles lambda'
    assert jacobi_parameters(Multiplicity(4, 0, 3, rank=1), 2.5, long_norm=1.0)["lam"] == 5.0

@pytest.mark.parametrize("lam", [1.3, 0.4 + 1.2j, 2.0j])
def test_series_value_hyperbolic(lam):
    np.testing.assert_allclose(series_value(H3, lam, 0.8), np.sinh(lam * 0.8) / (lam * np.sinh(0.8)), rtol=1e-12)

def test_closed_form_hyperbolic():
    np.testing.assert_allclose(closed_form(H3, 1.3, 1.7), np.sinh(1.3 * 1.7) / (1.3 * np.sinh(1.7)), rtol=1e-12)
    assert closed_form(H3, 1.3, -1.7) == closed_form(H3, 1.3, 1.7)

@pytest.mark.parametrize("values", [(4, 3), (4, -1), (1.5, 0.5), (0.7, 2.2)])
def test_oracle_matches_closed_form(values):
    m = Multiplicity.from_values(values, rank=1)
    for x in np.linspace(0.2, 3.0, 8):
        res = rank1_oracle(m, 2.5, x)
        np.testing.assert_allclose(res.value, closed_form(m, 2.5, x), rtol=1e-7)
        assert res.error_estimate <= 1e-6 * abs(res.value)

def test_oracle_matches_engines(rs1):
    m = Multiplicity(4, 0, -1, rank=1)
    lam = 1.7 + 0.6j
    for x in (0.3, 1.0, 2.5):
        oracle = rank1_oracle(m, lam, x).value
        np.testing.assert_allclose(F_eval(rs1, m, [lam], [x], method="ode", tol=1e-12).value, oracle, rtol=1e-7)
        np.testing.assert_allclose(F_eval(rs1, m, [lam], [x], method="series", tol=1e-12).value, oracle, rtol=1e-7)

def test_small_x_uses_series():
    res = rank1_oracle(H3, 1.3, 0.3)
    assert res.method == "rank1-series"
    assert rank1_oracle(H3, 1.3, 0.0).value == 1.0

def test_validation():
    with pytest.raises(ValueError):
        rank1_oracle(Multiplicity(4, 1, 3, rank=2), 1.0, 1.0)
    with pytest.raises(DomainError):
        rank1_oracle(Multiplicity(1, 0, -2, rank=1), 1.0, 1.0)
    with pytest.raises(ValueError):
        closed_form(H3, 1.0 + 1.0j, 1.0)
