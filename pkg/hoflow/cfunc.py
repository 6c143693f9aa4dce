"""
cfunc
=====

Harish-Chandra's c-function for BC_r, the nonsingularity test of the leading
asymptotic coefficient, and the regularity guards on multiplicities.

Overview
--------
``ctilde`` is a product over the short and middle positive roots of

    2^{-l} Gamma(l) / [Gamma(l/2 + m_a/4 + 1/2) Gamma(l/2 + m_a/4 + m_2a/2)],   l = lambda_alpha,

with m_2a = m_l for short roots and 0 for middle roots. It is evaluated in log
space with ``scipy.special.loggamma``. Gamma arguments within POLE_TOL of a
non-positive integer are replaced by their Laurent leading term, so every
result carries a net pole order: positive for a pole of ctilde, negative for a
forced zero. ``c(m; lambda) = ctilde(m; lambda) / ctilde(m; rho(m))``.

Examples
--------
.. code-block:: python

    from hoflow.rootsys import RootSystemBC
    from hoflow.multiplicity import Multiplicity, rho
    from hoflow.cfunc import c

    rs = RootSystemBC(2)
    m = Multiplicity(2, 2, 1)
    c(rs, m, rho(rs, m)).value    # (1+0j)
"""
# builtins
import logging
from dataclasses import dataclass

# dependencies
import numpy as np
from scipy.special import loggamma, gammaln

# custom
from hoflow import config
from hoflow.errors import PoleError, NotRegular, Unsupported
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, classify, rho

LOG2 = np.log(2.0)

@dataclass(frozen=True)
class CFuncValue:
    '''
    Value of a gamma product together with its Laurent data.

    ``log_value`` is the log of the leading coefficient; ``order`` is the net pole order
    (positive: pole, negative: zero, 0: regular value exp(log_value)).
    '''
    log_value: complex
    order: int = 0

    @property
    def value(self) -> complex:
        if self.order > 0:
            return complex(np.inf, 0.0)
        if self.order < 0:
            return 0j
        return complex(np.exp(self.log_value))

    @property
    def pole_flag(self) -> bool:
        return self.order > 0

    @property
    def zero_flag(self) -> bool:
        return self.order < 0

    @property
    def log_scale(self) -> float:
        '''log |value| of the leading coefficient'''
        return float(np.real(self.log_value))

    def __truediv__(self, other: "CFuncValue") -> "CFuncValue":
        return CFuncValue(self.log_value - other.log_value, self.order - other.order)

def nearest_pole(z: complex, tol: float) -> int:
    '''k >= 0 if z lies within tol of -k, else -1'''
    k = int(round(-np.real(z)))
    if k >= 0 and abs(z + k) <= tol:
        return k
    return -1

def log_gamma(z: complex) -> complex:
    """
    Principal branch of log Gamma.

    Parameters
    ----------
    z : complex
        Argument; must not be within LOG_GAMMA_POLE_TOL of a non-positive integer.

    Returns
    -------
    complex
        log Gamma(z), with exp(log_gamma(z)) == Gamma(z).

    Raises
    ------
    PoleError
        If z is (numerically) a pole of Gamma.

    Examples
    --------
    >>> log_gamma(5)
    (3.1780538303479458+0j)
    """
    z = complex(z)
    k = nearest_pole(z, config.LOG_GAMMA_POLE_TOL)
    if k >= 0:
        raise PoleError(-k, z)
    return complex(loggamma(z))

def _gamma_term(z: complex, slope: float, tol: float) -> tuple[int, complex]:
    """
    Laurent leading term of Gamma(z) for z = slope * l + const, in the variable l.

    Returns (order, log coefficient). At z = -k, Gamma(z) ~ (-1)^k / (k! (z + k)), so the
    coefficient in l is (-1)^k / (k! slope).
    """
    k = nearest_pole(z, tol)
    if k < 0:
        return 0, complex(loggamma(complex(z)))
    log_residue = complex(-gammaln(k + 1), np.pi * (k % 2))
    return 1, log_residue - np.log(slope)

def gamma_factors(rs: RootSystemBC, m: Multiplicity, lam, tol: float = None) -> list[dict]:
    """
    Root-by-root log terms of ``ctilde``.

    Returns
    -------
    list[dict]
        One dict per short or middle positive root with keys ``root``, ``class``,
        ``lambda_alpha``, ``order`` and ``log_value``.
    """
    tol = config.POLE_TOL if tol is None else tol
    lam = np.asarray(lam, dtype=complex)
    pairings = rs.pairings(lam)
    factors = []
    for idx, cls in enumerate(rs.root_classes):
        if cls == "long":
            continue
        la = complex(pairings[idx])
        m_a, m_2a = m.by_class(cls), m.double(cls)
        num_order, num_log = _gamma_term(la, 1.0, tol)
        den1_order, den1_log = _gamma_term(la / 2 + m_a / 4 + 0.5, 0.5, tol)
        den2_order, den2_log = _gamma_term(la / 2 + m_a / 4 + m_2a / 2, 0.5, tol)
        factors.append({
            "root": idx,
            "class": cls,
            "lambda_alpha": la,
            "order": num_order - den1_order - den2_order,
            "log_value": -la * LOG2 + num_log - den1_log - den2_log,
        })
    return factors

def ctilde(rs: RootSystemBC, m: Multiplicity, lam, tol: float = None) -> CFuncValue:
    """
    Unnormalised c-function, a product over the short and middle positive roots.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity.
    lam : array_like
        Complex spectral parameter in e-coordinates.
    tol : float, optional
        Pole tolerance in argument space. Defaults to config.POLE_TOL.

    Returns
    -------
    CFuncValue
        Poles are reported through ``order``; nothing is raised.
    """
    factors = gamma_factors(rs, m, lam, tol)
    order = sum(f["order"] for f in factors)
    log_value = sum((f["log_value"] for f in factors), 0j)
    return CFuncValue(log_value=complex(log_value), order=int(order))

def c(rs: RootSystemBC, m: Multiplicity, lam, tol: float = None) -> CFuncValue:
    """
    Normalised c-function ``ctilde(m; lambda) / ctilde(m; rho(m))``.

    Raises
    ------
    NotRegular
        If ctilde(m; rho(m)) has a pole or a zero.
    """
    reference = ctilde(rs, m, rho(rs, m), tol)
    if reference.order != 0:
        kind = "pole" if reference.order > 0 else "zero"
        raise NotRegular(f"ctilde(m; rho(m)) has a {kind} of order {abs(reference.order)} for m = {m}; c is not normalisable.")
    out = ctilde(rs, m, lam, tol) / reference
    if out.order:
        logging.debug(f"c(m={m}; lambda={np.asarray(lam)}) has net pole order {out.order}")
    return out

def is_regular(rs: RootSystemBC, m: Multiplicity, tol: float = None) -> bool:
    '''True if ctilde(m; rho(m)) is finite and nonzero'''
    return ctilde(rs, m, rho(rs, m), tol).order == 0

def b0_nonsingular(rs: RootSystemBC, m: Multiplicity, lam0, tol: float = None) -> bool:
    """
    Tests whether the leading coefficient of the asymptotic expansion at lam0 is nonzero.

    This holds iff none of the denominator gammas of ctilde is evaluated at a pole, i.e. none of
    Gamma(l/2 + m_s/4 + 1/2), Gamma(l/2 + m_s/4 + m_l/2) over short roots, and, for r > 1, none of
    Gamma(l/2 + m_m/4 + 1/2), Gamma(l/2 + m_m/4) over middle roots (l = (lam0)_alpha).

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity with m_s != 0.
    lam0 : array_like
        Spectral parameter with dominant real part.
    tol : float, optional
        Pole tolerance; defaults to config.POLE_TOL.

    Raises
    ------
    Unsupported
        If m_s == 0 (the criterion is stated for BC_r with nonzero short multiplicity).
    """
    if m.ms == 0:
        raise Unsupported(f"The nonsingularity criterion needs m_s != 0 (got m = {m}); it is not available for C_r.")
    tol = config.POLE_TOL if tol is None else tol
    pairings = rs.pairings(np.asarray(lam0, dtype=complex))
    for idx, cls in enumerate(rs.root_classes):
        if cls == "long":
            continue
        la = pairings[idx]
        m_a = m.by_class(cls)
        args = (la / 2 + m_a / 4 + 0.5, la / 2 + m_a / 4 + m.double(cls) / 2)
        for arg in args:
            if nearest_pole(arg, tol) >= 0:
                logging.debug(f"Denominator gamma at {arg} for root {rs.positive_roots[idx]} is singular")
                return False
    return True

def b0_nonsingular_everywhere(m: Multiplicity) -> bool:
    """
    Sufficient condition for b0_nonsingular at every lam0 with dominant real part.

    m_s > -2, m_s + 2 m_l > 0 and, for r > 1, m_m > 0 keep every denominator argument in the right
    half-plane. Holds on M1.

    Raises
    ------
    Unsupported
        If m_s == 0.
    """
    if m.ms == 0:
        raise Unsupported(f"The nonsingularity criterion needs m_s != 0 (got m = {m}).")
    ok = m.ms > -2 and m.ms + 2 * m.ml > 0
    if m.rank > 1:
        ok = ok and m.mm > 0
    return ok

def in_mc0(m: Multiplicity) -> bool:
    '''m_s + m_l >= 0 and (r > 1) m_m >= 0; sufficient for regularity of c and of the hypergeometric functions'''
    return "MC0" in classify(m)
