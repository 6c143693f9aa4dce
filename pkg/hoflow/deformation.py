"""
deformation
===========

The (ell, ell_tilde)-deformed hypergeometric functions

    F_{ell, ell_tilde, lambda}(m) = u^{-ell} v^{-ell_tilde} F_lambda(m(ell, ell_tilde)),
    G_{ell, ell_tilde, lambda}(m) = u^{-ell} v^{-ell_tilde} G_lambda(m(ell, ell_tilde)),

with u = prod_j cosh(beta_j / 2) (a product over the short roots) and
v = prod_{i<j} cosh((beta_j - beta_i)/2) cosh((beta_j + beta_i)/2) (a product over the middle
roots), the deformed Cherednik operators, and the potential f_Sigma of the conjugated
Laplacian.

Examples
--------
.. code-block:: python

    from hoflow.rootsys import RootSystemBC
    from hoflow.multiplicity import Multiplicity, Deformation
    from hoflow.deformation import F_deformed

    rs = RootSystemBC(1)
    F_deformed(rs, Multiplicity(4, 0, 3, rank=1), Deformation(1, 0), [2.5], [0.7]).value
"""
# builtins
from dataclasses import dataclass, field
from typing import Callable

# dependencies
import numpy as np

# custom
from hoflow import config
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, deform, rho
from hoflow.evaluator import EvalResult, F_eval, G_ode, cherednik_apply, laplacian_apply, second_derivative, default_step, as_vector, check_singular

@dataclass
class DeformedEval:
    '''Deformed value u^{-ell} v^{-ell_tilde} times the undeformed value at m(ell, ell_tilde).'''
    m: Multiplicity
    deformation: Deformation
    lam: np.ndarray
    x: np.ndarray
    value: complex
    method: str
    error_estimate: float = 0.0
    base: EvalResult = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "m": self.m.as_tuple(),
            "ell": self.deformation.ell,
            "ell_tilde": self.deformation.ell_tilde,
            "value": self.value,
            "method": self.method,
            "error_estimate": self.error_estimate,
        }

############################################# u AND v #########################################
def log_cosh(a):
    return np.logaddexp(a, -a) - np.log(2.0)

def log_u(rs: RootSystemBC, x) -> float:
    '''log u(x) = sum_j log cosh(beta_j(x)/2)'''
    values = rs.root_values(x)[rs.class_mask("short")]
    return float(np.sum(log_cosh(values)))

def log_v(rs: RootSystemBC, x) -> float:
    '''log v(x) = sum over middle roots of log cosh(alpha(x)); 0 in rank one'''
    values = rs.root_values(x)[rs.class_mask("middle")]
    return float(np.sum(log_cosh(values)))

def u(rs: RootSystemBC, x) -> float:
    return float(np.exp(log_u(rs, x)))

def v(rs: RootSystemBC, x) -> float:
    return float(np.exp(log_v(rs, x)))

def dlog_u(rs: RootSystemBC, x, xi) -> float:
    '''u^{-1} d_xi u = sum_j (beta_j(xi)/2) tanh(beta_j(x)/2)'''
    mask = rs.class_mask("short")
    return float(np.sum((rs.positive_roots[mask] @ as_vector(rs, xi)) * np.tanh(rs.root_values(x)[mask])))

def dlog_v(rs: RootSystemBC, x, xi) -> float:
    '''v^{-1} d_xi v = sum over middle roots of alpha(xi) tanh(alpha(x))'''
    mask = rs.class_mask("middle")
    return float(np.sum((rs.positive_roots[mask] @ as_vector(rs, xi)) * np.tanh(rs.root_values(x)[mask])))

def middle_root_sum(rs: RootSystemBC) -> np.ndarray:
    '''sum_{i<j} (beta_j - beta_i) + (beta_j + beta_i), which equals sum_j 2(j-1) beta_j'''
    mask = rs.class_mask("middle")
    return 2.0 * rs.positive_roots[mask].sum(axis=0)

############################################# DEFORMED FUNCTIONS #########################################
def deformation_factor(rs: RootSystemBC, d: Deformation, x) -> float:
    '''u(x)^{-ell} v(x)^{-ell_tilde}'''
    return float(np.exp(-d.ell * log_u(rs, x) - d.ell_tilde * log_v(rs, x)))

def F_deformed(rs: RootSystemBC, m: Multiplicity, d: Deformation, lam, x, method: str = "auto", tol: float = config.DEFAULT_TOL) -> DeformedEval:
    """
    Evaluates F_{ell, ell_tilde, lambda}(m; x).

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Base multiplicity.
    d : Deformation
        (ell, ell_tilde); m(ell, ell_tilde) must lie in M0.
    lam, x : array_like
        Spectral parameter and point.
    method : str, optional
        Engine passed to :func:`hoflow.evaluator.F_eval`.
    tol : float, optional
        Relative tolerance.

    Raises
    ------
    DomainError
        If m(ell, ell_tilde) is not in M0.
    """
    x = as_vector(rs, x)
    deformed = deform(m, d, strict=True)
    base = F_eval(rs, deformed, lam, x, method=method, tol=tol)
    factor = deformation_factor(rs, d, x)
    return DeformedEval(m=m, deformation=d, lam=as_vector(rs, lam, complex), x=x, value=factor * base.value,
                        method=base.method, error_estimate=factor * base.error_estimate, base=base)

def G_deformed(rs: RootSystemBC, m: Multiplicity, d: Deformation, lam, x, tol: float = config.DEFAULT_TOL) -> DeformedEval:
    '''G_{ell, ell_tilde, lambda}(m; x) through the orbit ODE at m(ell, ell_tilde)'''
    x = as_vector(rs, x)
    deformed = deform(m, d, strict=True)
    base = G_ode(rs, deformed, lam, x, tol=tol)
    factor = deformation_factor(rs, d, x)
    return DeformedEval(m=m, deformation=d, lam=as_vector(rs, lam, complex), x=x, value=factor * base.value,
                        method=base.method, error_estimate=factor * base.error_estimate, base=base)

def deformed_orbit_values(rs: RootSystemBC, d: Deformation, x, base: EvalResult) -> np.ndarray:
    '''deformed G on the Weyl orbit of x; u and v are W-invariant so the factor is common'''
    if base.orbit_values is None:
        raise ValueError("EvalResult carries no orbit vector; evaluate with the orbit ODE first.")
    return deformation_factor(rs, d, x) * base.orbit_values

def deformed_cherednik_apply(rs: RootSystemBC, m: Multiplicity, d: Deformation, xi, f: Callable, x, h: float = None, form: str = "direct") -> complex:
    """
    Applies the deformed Cherednik operator T_{ell, ell_tilde, xi}(m).

    Parameters
    ----------
    form : str, optional
        ``"direct"``: T_xi(m(ell, ell_tilde)) f + (ell u^{-1} d_xi u + ell_tilde v^{-1} d_xi v) f.
        ``"conjugated"``: u^{-ell} v^{-ell_tilde} T_xi(m(ell, ell_tilde)) (u^{ell} v^{ell_tilde} f).

    Raises
    ------
    KeyError
        If the form is unknown.
    SingularPoint
        If x is too close to a wall.
    """
    x = as_vector(rs, x)
    deformed = deform(m, d)
    if form == "direct":
        return cherednik_apply(rs, deformed, xi, f, x, h) + (d.ell * dlog_u(rs, x, xi) + d.ell_tilde * dlog_v(rs, x, xi)) * f(x)
    if form == "conjugated":
        lifted = lambda y: f(y) / deformation_factor(rs, d, y)
        return deformation_factor(rs, d, x) * cherednik_apply(rs, deformed, xi, lifted, x, h)
    raise KeyError(f"Unknown form {form}. Must be 'direct' or 'conjugated'.")

############################################# CONJUGATED LAPLACIAN #########################################
def f_sigma(rs: RootSystemBC, m: Multiplicity, x) -> float:
    """
    Potential f_Sigma(m; x) = sum_{alpha > 0} m_alpha (2 - m_alpha - 2 m_{2 alpha}) <alpha, alpha> / (4 sinh^2 alpha(x)).

    Raises
    ------
    SingularPoint
        If x is too close to a wall.
    """
    x = as_vector(rs, x)
    check_singular(rs, x)
    mults = m.on_roots(rs)
    doubles = m.doubles_on_roots(rs)
    return float(np.sum(mults * (2.0 - mults - 2.0 * doubles) * rs.root_norms2 / (4.0 * np.sinh(rs.root_values(x)) ** 2)))

def f_sigma_shift(rs: RootSystemBC, m: Multiplicity, ell: float, x) -> float:
    '''(p^2/4) ell (ell + 1 - m_l) sum_j cosh^{-2}(beta_j(x)/2), the ell-dependent part of f_Sigma(m(ell, ell_tilde))'''
    values = rs.root_values(x)[rs.class_mask("short")]
    return float(rs.long_norm ** 2 / 4.0 * ell * (ell + 1.0 - m.ml) * np.sum(1.0 / np.cosh(values) ** 2))

def log_delta_half(rs: RootSystemBC, m: Multiplicity, x) -> float:
    '''log of delta^{1/2}(x) = prod_alpha |2 sinh alpha(x)|^{m_alpha/2}'''
    values = np.abs(rs.root_values(x))
    return float(np.sum(m.on_roots(rs) / 2.0 * np.log(2.0 * np.sinh(values))))

def conjugation_residual(rs: RootSystemBC, m: Multiplicity, phi: Callable, x, h: float = None) -> float:
    """
    Residual of delta^{1/2} (L(m) + <rho, rho>) (delta^{-1/2} phi) = (Delta + f_Sigma) phi at a regular point.

    Both sides are computed with finite differences of the same step; the result is
    |lhs - rhs| / max(1, |rhs|).
    """
    x = as_vector(rs, x)
    check_singular(rs, x)
    h = default_step(x) if h is None else h
    rho_m = rho(rs, m)
    damped = lambda y: np.exp(-log_delta_half(rs, m, y)) * phi(y)
    lhs = np.exp(log_delta_half(rs, m, x)) * laplacian_apply(rs, m, damped, x, h) + np.dot(rho_m, rho_m) * phi(x)
    eye = np.eye(rs.rank)
    phi_x = phi(x)
    rhs = sum(second_derivative(phi, x, eye[j], h, phi_x) for j in range(rs.rank)) + f_sigma(rs, m, x) * phi_x
    return float(abs(lhs - rhs) / max(1.0, abs(rhs)))
