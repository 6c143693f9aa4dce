'''Tests of hoflow.cfunc'''
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma

from hoflow.errors import PoleError, NotRegular, Unsupported
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, rho
from hoflow.cfunc import log_gamma, ctilde, c, is_regular, b0_nonsingular, b0_nonsingular_everywhere, in_mc0, nearest_pole

def rank_one_ctilde(ms: float, ml: float, lam: float) -> float:
    return 2.0 ** (-lam) * gamma(lam) / (gamma(lam / 2 + ms / 4 + 0.5) * gamma(lam / 2 + ms / 4 + ml / 2))

def test_log_gamma():
    assert log_gamma(5) == pytest.approx(np.log(24.0))
    assert np.exp(log_gamma(0.5 + 1j)) == pytest.approx(complex(gamma(0.5 + 1j)))
    with pytest.raises(PoleError):
        log_gamma(-2.0)

def test_nearest_pole():
    assert nearest_pole(-3.0 + 1e-13, 1e-10) == 3
    assert nearest_pole(0.5, 1e-10) == -1
    assert nearest_pole(2.0, 1e-10) == -1

@pytest.mark.parametrize("m", [Multiplicity(2, 2, 1), Multiplicity(4, 1, -1), Multiplicity(1.3, 0.4, 0.2, rank=3)])
def test_normalisation(m):
    rs = RootSystemBC(m.rank)
    assert c(rs, m, rho(rs, m)).value == pytest.approx(1.0, abs=1e-12)

def test_hyperbolic_three_space(rs1):
    # m = (2, 0, 0) in rank one: c(lambda) = 1 / lambda
    m = Multiplicity(2, 0, 0, rank=1)
    assert c(rs1, m, [2.0]).value == pytest.approx(0.5)
    assert c(rs1, m, [0.5 + 1.0j]).value == pytest.approx(1.0 / (0.5 + 1.0j))

def test_product_of_rank_one_factors(rs2):
    # without middle multiplicity the middle factors are constant
    m = Multiplicity(2, 0, 0)
    lam = np.array([0.7, 1.9])
    assert c(rs2, m, lam).value == pytest.approx(1.0 / (0.7 * 1.9))

def test_pole_and_zero_flags(rs1):
    m = Multiplicity(4, 0, 3, rank=1)
    at_zero = c(rs1, m, [0.0])
    assert at_zero.pole_flag and at_zero.order == 1
    assert np.isinf(at_zero.value.real)
    # Gamma(lambda/2 + m_s/4 + m_l/2) has a pole at lambda = 1.5
    vanishing = c(rs1, Multiplicity(3, 0, -3, rank=1), [1.5])
    assert vanishing.zero_flag
    assert vanishing.value == 0

def test_not_regular(rs1):
    m = Multiplicity(-1, 0, 0, rank=1)
    assert not is_regular(rs1, m)
    with pytest.raises(NotRegular):
        c(rs1, m, [1.0])

def test_b0(rs1, rs2):
    assert b0_nonsingular(rs2, Multiplicity(2, 2, 1), [2.0, 4.0])
    assert not b0_nonsingular(rs1, Multiplicity(3, 0, -3, rank=1), [1.5])
    with pytest.raises(Unsupported):
        b0_nonsingular(rs2, Multiplicity(0, 1, 1), [1.0, 2.0])
    assert b0_nonsingular_everywhere(Multiplicity(4, 1, -1))
    assert not b0_nonsingular_everywhere(Multiplicity(-3, 1, 4))
    with pytest.raises(Unsupported):
        b0_nonsingular_everywhere(Multiplicity(0, 1, 1))

def test_in_mc0():
    assert in_mc0(Multiplicity(4, 1, -1))
    assert not in_mc0(Multiplicity(1, 1, -2))

@given(st.floats(0.1, 6.0), st.floats(0.0, 3.0), st.floats(0.05, 4.0))
@settings(max_examples=60, deadline=None)
def test_rank_one_gamma_product(ms, ml, lam):
    rs = RootSystemBC(1)
    m = Multiplicity(ms, 0, ml, rank=1)
    expected = rank_one_ctilde(ms, ml, lam) / rank_one_ctilde(ms, ml, ms / 2 + ml)
    np.testing.assert_allclose(c(rs, m, [lam]).value, expected, rtol=1e-9)

def test_ctilde_is_complex_conjugation_symmetric(rs2):
    m = Multiplicity(2, 2, 1)
    lam = np.array([0.4 + 1.1j, 1.3 - 0.2j])
    np.testing.assert_allclose(ctilde(rs2, m, lam.conj()).value, np.conj(ctilde(rs2, m, lam).value), rtol=1e-12)
