"""
rank_one
========

Independent rank-one oracle for F_lambda(m) on BC_1.

In rank one the Laplacian reduces to the Jacobi operator. With t = p x / 2,
lambda' = 2 lambda / p and rho' = m_s/2 + m_l the function F solves

    F'' + (m_s coth t + 2 m_l coth 2t) F' = (lambda'^2 - rho'^2) F,   F(0) = 1, F'(0) = 0,

and equals the Jacobi function

    F = 2F1((rho' + lambda')/2, (rho' - lambda')/2; (m_s + m_l + 1)/2; -sinh^2 t).

Three evaluations are offered, none of which uses :mod:`hoflow.hcseries` or
:mod:`hoflow.evaluator`:

- :func:`closed_form`: ``scipy.special.hyp2f1`` (real lambda),
- :func:`series_value`: hand-summed series after the Pfaff transformation (complex lambda),
- :func:`rank1_oracle`: the scalar ODE above, started from the series at t0 = min(0.5, t)
  and integrated with DOP853; the error estimate compares two tolerances.
"""
# builtins
import logging

# dependencies
import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import hyp2f1

# custom
from hoflow import config
from hoflow.errors import DomainError, StiffnessFailure
from hoflow.multiplicity import Multiplicity
from hoflow.evaluator import EvalResult

MAX_SERIES_TERMS = 20000

def _check_rank_one(m: Multiplicity) -> None:
    if m.rank != 1:
        raise ValueError(f"The rank-one oracle needs a rank-one multiplicity, got rank {m.rank}")
    if m.ms + m.ml < 0:
        raise DomainError(f"m_s + m_l must be nonnegative for the rank-one oracle, got {m}")

def _scalar(value, dtype=complex):
    arr = np.asarray(value, dtype=dtype).reshape(-1)
    if arr.size != 1:
        raise ValueError(f"Expected a scalar or a length-1 vector, got {value!r}")
    return arr[0]

def jacobi_parameters(m: Multiplicity, lam, long_norm: float = config.DEFAULT_LONG_NORM) -> dict:
    """
    Gauss parameters of the Jacobi function equal to F_lambda(m).

    Returns
    -------
    dict
        Keys ``a``, ``b``, ``c`` (2F1 parameters), ``alpha``, ``beta`` (Jacobi indices),
        ``rho`` (rho') and ``lam`` (lambda').
    """
    _check_rank_one(m)
    lam1 = 2.0 * _scalar(lam) / long_norm
    rho1 = m.ms / 2.0 + m.ml
    return {
        "a": (rho1 + lam1) / 2.0,
        "b": (rho1 - lam1) / 2.0,
        "c": (m.ms + m.ml + 1.0) / 2.0,
        "alpha": (m.ms + m.ml - 1.0) / 2.0,
        "beta": (m.ml - 1.0) / 2.0,
        "rho": rho1,
        "lam": lam1,
    }

def closed_form(m: Multiplicity, lam, x, long_norm: float = config.DEFAULT_LONG_NORM) -> float:
    """
    F_lambda(m; x) through ``scipy.special.hyp2f1``.

    Raises
    ------
    ValueError
        If lambda is not real (hyp2f1 takes real parameters).
    """
    lam = _scalar(lam)
    if lam.imag != 0:
        raise ValueError(f"closed_form needs a real spectral parameter, got {lam}; use series_value")
    params = jacobi_parameters(m, lam.real, long_norm)
    t = long_norm * abs(float(_scalar(x, float))) / 2.0
    return float(hyp2f1(params["a"].real, params["b"].real, params["c"], -np.sinh(t) ** 2))

def _pfaff_sum(a: complex, b: complex, c: float, y: float) -> tuple[complex, complex]:
    '''2F1(a, b; c; y) and its y-derivative for 0 <= y < 1, summed term by term'''
    term = 1.0 + 0j
    total = term
    derivative = 0j
    for k in range(MAX_SERIES_TERMS):
        # term = s_k y^k, term_next = s_{k+1} y^k
        term_next = term * (a + k) * (b + k) / ((c + k) * (k + 1))
        derivative += (k + 1) * term_next
        term = term_next * y
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > 4:
            break
    else:
        logging.warning(f"2F1 series at y={y:.3g} did not converge in {MAX_SERIES_TERMS} terms")
    return total, derivative

def _series_state(m: Multiplicity, lam, t: float, long_norm: float) -> np.ndarray:
    '''(F, dF/dt) at t from the Pfaff form cosh(t)^{-2a} 2F1(a, c - b; c; tanh^2 t)'''
    params = jacobi_parameters(m, lam, long_norm)
    a, b, c = params["a"], params["b"], params["c"]
    th = np.tanh(t)
    s, ds = _pfaff_sum(a, c - b, c, th ** 2)
    prefactor = np.cosh(t) ** (-2.0 * a)
    value = prefactor * s
    slope = prefactor * (-2.0 * a * th * s + ds * 2.0 * th / np.cosh(t) ** 2)
    return np.array([value, slope], dtype=complex)

def series_value(m: Multiplicity, lam, x, long_norm: float = config.DEFAULT_LONG_NORM) -> complex:
    '''F_lambda(m; x) from the hand-summed hypergeometric series; complex lambda allowed'''
    _check_rank_one(m)
    t = long_norm * abs(float(_scalar(x, float))) / 2.0
    return complex(_series_state(m, lam, t, long_norm)[0])

def _integrate(m: Multiplicity, lam1: complex, rho1: float, state0: np.ndarray, t0: float, t1: float, tol: float):
    shift = lam1 ** 2 - rho1 ** 2

    def rhs(t, y):
        drift = m.ms / np.tanh(t) + 2.0 * m.ml / np.tanh(2.0 * t)
        return np.array([y[1], shift * y[0] - drift * y[1]])

    sol = solve_ivp(rhs, (t0, t1), state0, method="DOP853", rtol=tol, atol=config.ODE_ATOL)
    if sol.status != 0:
        raise StiffnessFailure(f"Rank-one ODE failed for m={m}, lambda'={lam1}: {sol.message}")
    return complex(sol.y[0, -1])

def rank1_oracle(m: Multiplicity, lam, x, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL) -> EvalResult:
    """
    Rank-one value of F_lambda(m; x) from the scalar Jacobi ODE.

    Parameters
    ----------
    m : Multiplicity
        Rank-one multiplicity with m_s + m_l >= 0.
    lam : complex or array_like
        Spectral parameter (e-coordinate).
    x : float or array_like
        Point (e-coordinate); F is even in x.
    long_norm : float, optional
        Norm p of the long root.
    tol : float, optional
        Relative integration tolerance; a second run at 100 * tol provides the error estimate.

    Returns
    -------
    EvalResult
        Method ``"rank1-ode"`` (or ``"rank1-series"`` when x is within the start interval).
    """
    _check_rank_one(m)
    lam = _scalar(lam)
    t = long_norm * abs(float(_scalar(x, float))) / 2.0
    if t == 0.0:
        return EvalResult(value=1.0 + 0j, method="rank1-series")

    t0 = min(0.5, t)
    state0 = _series_state(m, lam, t0, long_norm)
    if t0 == t:
        return EvalResult(value=complex(state0[0]), method="rank1-series", error_estimate=1e-15 * abs(state0[0]))

    params = jacobi_parameters(m, lam, long_norm)
    fine = _integrate(m, params["lam"], params["rho"], state0, t0, t, tol)
    coarse = _integrate(m, params["lam"], params["rho"], state0, t0, t, 100.0 * tol)
    return EvalResult(value=fine, method="rank1-ode", error_estimate=abs(fine - coarse), diagnostics={"t0": t0})
