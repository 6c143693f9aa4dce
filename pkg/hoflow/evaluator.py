"""
evaluator
=========

Differential-reflection machinery and the orbit ODE engine.

Overview
--------
The non-symmetric function G_lambda(m) is the unique analytic solution of
T_xi G = lambda(xi) G with G(0) = 1, where

    T_xi f(x) = d_xi f(x) - rho(xi) f(x) + sum_{alpha > 0} m_alpha alpha(xi) / (1 - e^{-2 alpha(x)}) (f(x) - f(r_alpha x))

is the Cherednik operator. Along the rays t -> t w xhat (w in W) the eigen-system closes on the
orbit vector g_w(t) = G(t w xhat):

    g_w' = (lambda + rho)(w xhat) g_w + sum_alpha m_alpha a / (1 - e^{-2 t a}) (g_{r_alpha w} - g_w),   a = alpha(w xhat).

t = 0 is a regular singular point. The engine starts from a Frobenius series
``g(t) = sum_k g_k t^k`` (g_0 = 1) and continues with ``scipy.integrate.solve_ivp``
(DOP853). The symmetric function is F = (1/|W|) sum_w G(w x), so one integration returns G, the
whole orbit and F.

Usage
-----
.. code-block:: python

    from hoflow.rootsys import RootSystemBC
    from hoflow.multiplicity import Multiplicity
    from hoflow.evaluator import F_eval

    rs = RootSystemBC(2)
    res = F_eval(rs, Multiplicity(2, 2, 1), [1.37, 2.81], [0.8, 1.7])
    res.value, res.method
"""
# builtins
import logging
from dataclasses import dataclass, field
from typing import Callable

# dependencies
import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import bernoulli

# custom
from hoflow import config
from hoflow.errors import DomainError, NumericalError, NotRegular, ResonanceAtZero, StiffnessFailure, SingularPoint
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, classify, rho
from hoflow import hcseries

METHODS = ("auto", "series", "ode")

@dataclass
class EvalResult:
    '''
    Value of an engine together with its diagnostics.

    ``orbit_values[w]`` is G(w x) for the Weyl element with index w (ODE engine only).
    '''
    value: complex
    method: str
    error_estimate: float = 0.0
    orbit_values: np.ndarray = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "error_estimate": self.error_estimate, **self.diagnostics}

def as_vector(rs: RootSystemBC, v, dtype=float) -> np.ndarray:
    arr = np.asarray(v, dtype=dtype)
    if arr.shape != (rs.rank,):
        arr = arr.reshape(-1)
        if arr.shape != (rs.rank,):
            raise ValueError(f"Expected a vector of length {rs.rank}, got shape {np.shape(v)}")
    return arr

def require_m0(m: Multiplicity) -> None:
    if "M0" not in classify(m):
        raise DomainError(f"Multiplicity {m} is not in M0 (needs m_m >= 0 and m_s + m_l >= 0).")

def default_step(x) -> float:
    return config.FD_REL_STEP * (1.0 + float(np.linalg.norm(x)))

def check_singular(rs: RootSystemBC, x: np.ndarray) -> None:
    values = np.abs(rs.root_values(x))
    if values.min() < config.SINGULAR_TOL:
        raise SingularPoint(f"Point {x} lies within {config.SINGULAR_TOL} of a reflecting hyperplane (min |alpha(x)| = {values.min():.3g}).")

############################################# FINITE DIFFERENCES #########################################
def directional_derivative(f: Callable, x: np.ndarray, xi: np.ndarray, h: float) -> complex:
    '''central difference along xi with one Richardson level'''
    def central(step):
        return (f(x + step * xi) - f(x - step * xi)) / (2.0 * step)
    return (4.0 * central(h / 2.0) - central(h)) / 3.0

def second_derivative(f: Callable, x: np.ndarray, xi: np.ndarray, h: float, fx: complex = None) -> complex:
    '''second central difference along xi with one Richardson level'''
    fx = f(x) if fx is None else fx
    def central(step):
        return (f(x + step * xi) - 2.0 * fx + f(x - step * xi)) / step ** 2
    return (4.0 * central(h / 2.0) - central(h)) / 3.0

def _memoize(f: Callable) -> Callable:
    cache = {}
    def cached(y):
        key = np.asarray(y, dtype=float).tobytes()
        if key not in cache:
            cache[key] = f(y)
        return cache[key]
    return cached

def gradient(f: Callable, x, h: float = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else h
    eye = np.eye(len(x))
    return np.array([directional_derivative(f, x, eye[j], h) for j in range(len(x))])

############################################# OPERATORS #########################################
def reflection_terms(rs: RootSystemBC, m: Multiplicity, xi, f: Callable, x: np.ndarray, fx: complex) -> complex:
    '''sum_alpha m_alpha alpha(xi) / (1 - e^{-2 alpha(x)}) (f(x) - f(r_alpha x))'''
    total = 0j
    alpha_x = rs.root_values(x)
    alpha_xi = rs.positive_roots @ xi
    for a, alpha in enumerate(rs.positive_roots):
        m_a = m.by_class(rs.root_classes[a])
        if m_a == 0 or alpha_xi[a] == 0:
            continue
        reflected = rs.reflection_matrix(alpha) @ x
        total += m_a * alpha_xi[a] / (-np.expm1(-2.0 * alpha_x[a])) * (fx - f(reflected))
    return total

def cherednik_apply(rs: RootSystemBC, m: Multiplicity, xi, f: Callable, x, h: float = None) -> complex:
    """
    Applies the Cherednik operator T_xi(m) to a function at a point.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity.
    xi : array_like
        Direction.
    f : callable
        Function of a point of the Cartan subspace; evaluated on the W-orbit of x.
    x : array_like
        Regular point.
    h : float, optional
        Finite-difference step; default FD_REL_STEP * (1 + |x|).

    Returns
    -------
    complex
        d_xi f(x) - rho(xi) f(x) + reflection terms (evaluated exactly).

    Raises
    ------
    SingularPoint
        If |alpha(x)| < config.SINGULAR_TOL for some root.
    """
    x = as_vector(rs, x)
    xi = as_vector(rs, xi)
    check_singular(rs, x)
    h = default_step(x) if h is None else h
    fx = f(x)
    derivative = directional_derivative(f, x, xi, h)
    return derivative - np.dot(rho(rs, m), xi) * fx + reflection_terms(rs, m, xi, f, x, fx)

def laplacian_apply(rs: RootSystemBC, m: Multiplicity, f: Callable, x, h: float = None) -> complex:
    '''L(m) f = Delta f + sum_alpha m_alpha coth(alpha(x)) <alpha, grad f>'''
    x = as_vector(rs, x)
    check_singular(rs, x)
    h = default_step(x) if h is None else h
    f = _memoize(f)
    fx = f(x)
    eye = np.eye(rs.rank)
    laplace = sum(second_derivative(f, x, eye[j], h, fx) for j in range(rs.rank))
    grad = np.array([directional_derivative(f, x, eye[j], h) for j in range(rs.rank)])
    coth = 1.0 / np.tanh(rs.root_values(x))
    drift = np.sum(m.on_roots(rs) * coth * (rs.positive_roots @ grad))
    return laplace + drift

############################################# ORBIT ODE #########################################
def _coupling(t: float, a: np.ndarray) -> np.ndarray:
    '''a / (1 - e^{-2 t a}), with the limit 1/(2t) at a = 0'''
    denom = -np.expm1(-2.0 * t * a)
    return np.divide(a, denom, out=np.full_like(a, 1.0 / (2.0 * t)), where=denom != 0)

class OrbitSystem:
    """
    Coupled linear system of the orbit vector g_w(t) = G_lambda(t w xhat).

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity in M0.
    lam : array_like
        Complex spectral parameter.
    direction : array_like
        Unit vector xhat; it may lie on a wall.
    """
    def __init__(self, rs: RootSystemBC, m: Multiplicity, lam, direction):
        self.rs = rs
        self.m = m
        self.lam = as_vector(rs, lam, complex)
        self.direction = as_vector(rs, direction)
        self.points = rs.weyl_orbit(self.direction)                       # (|W|, r)
        self.diag = self.points @ (self.lam + rho(rs, m))                 # (lambda + rho)(w xhat)
        self.root_values = self.points @ rs.positive_roots.T                    # a[w, alpha]
        self.mults = m.on_roots(rs)
        active = self.mults != 0
        self.active_mults = self.mults[active]
        self.active_values = self.root_values[:, active].T                # (R', |W|)
        self.active_table = rs.reflection_table[active]                   # (R', |W|)

    def __call__(self, t: float, g: np.ndarray) -> np.ndarray:
        coupling = self.active_mults[:, None] * _coupling(t, self.active_values)
        return self.diag * g + np.sum(coupling * (g[self.active_table] - g[None, :]), axis=0)

    def frobenius_matrices(self, order: int) -> list[np.ndarray]:
        """
        Taylor coefficients M_0..M_order of M(t) in t g' = M(t) g.

        t a / (1 - e^{-2 t a}) = (1/2) sum_n B_n^+ (2 a t)^n / n!, with B_1^+ = +1/2.
        """
        n_w = self.rs.order
        bern = np.array(bernoulli(order), dtype=float)
        if order >= 1:
            bern[1] = 0.5
        factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, order + 1, dtype=float)]))
        eye = np.eye(n_w)
        mats = [np.zeros((n_w, n_w), dtype=complex) for _ in range(order + 1)]
        rows = np.arange(n_w)
        for slot, m_a in enumerate(self.active_mults):
            perm = np.zeros((n_w, n_w))
            perm[rows, self.active_table[slot]] = 1.0
            shift = perm - eye
            a = self.active_values[slot]
            for n in range(order + 1):
                if bern[n] == 0.0:
                    continue
                scale = 0.5 * m_a * bern[n] * (2.0 * a) ** n / factorials[n]
                mats[n] += scale[:, None] * shift
        if order >= 1:
            mats[1] += np.diag(self.diag)
        return mats

    def frobenius_series(self, order: int = config.FROBENIUS_ORDER) -> np.ndarray:
        """
        Coefficients g_0..g_order of the analytic solution with g_0 = (1, ..., 1).

        Raises
        ------
        ResonanceAtZero
            If k I - M_0 is singular for some 1 <= k <= order.
        """
        mats = self.frobenius_matrices(order)
        n_w = self.rs.order
        coeffs = [np.ones(n_w, dtype=complex)]
        eye = np.eye(n_w)
        for k in range(1, order + 1):
            rhs = sum(mats[n] @ coeffs[k - n] for n in range(1, k + 1))
            lhs = k * eye - mats[0]
            if np.linalg.cond(lhs) > 1e12:
                raise ResonanceAtZero(k)
            coeffs.append(np.linalg.solve(lhs, rhs))
        return np.array(coeffs)

    def start_time(self, norm: float) -> float:
        '''t0 = min(0.1 / s, 0.1 pi / max|a|, |x|), s = 1 + |lambda| + |rho| + sum |m|'''
        scale = 1.0 + np.linalg.norm(self.lam) + np.linalg.norm(rho(self.rs, self.m)) + np.abs(self.m.as_tuple()).sum()
        largest = np.abs(self.root_values).max()
        return float(min(0.1 / scale, 0.1 * np.pi / largest if largest > 0 else np.inf, norm))

def G_ode(rs: RootSystemBC, m: Multiplicity, lam, x, tol: float = config.DEFAULT_TOL, order: int = config.FROBENIUS_ORDER) -> EvalResult:
    """
    Evaluates G_lambda(m; x) and its Weyl orbit with the orbit ODE.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity in M0.
    lam : array_like
        Complex spectral parameter (any, also non-generic).
    x : array_like
        Real point; walls are allowed.
    tol : float, optional
        Relative tolerance of the integrator.
    order : int, optional
        Order of the Frobenius start.

    Returns
    -------
    EvalResult
        ``value`` = G(x), ``orbit_values[w]`` = G(w x), method ``"ode"``.

    Raises
    ------
    DomainError
        If m is not in M0.
    ResonanceAtZero
        If the Frobenius recursion is singular.
    StiffnessFailure
        If the integrator fails.
    """
    require_m0(m)
    x = as_vector(rs, x)
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        return EvalResult(value=1.0 + 0j, method="ode", orbit_values=np.ones(rs.order, dtype=complex))

    system = OrbitSystem(rs, m, lam, x / norm)
    coeffs = system.frobenius_series(order)
    t0 = system.start_time(norm)
    powers = t0 ** np.arange(order + 1)
    g0 = powers @ coeffs
    frobenius_error = float(np.abs(coeffs[-1]).max() * powers[-1])

    steps = 0
    g = g0
    if t0 < norm:
        sol = solve_ivp(system, (t0, norm), g0, method="DOP853", rtol=tol, atol=config.ODE_ATOL)
        if sol.status != 0:
            raise StiffnessFailure(f"Orbit ODE failed for m={m}, lambda={system.lam}, x={x}: {sol.message}")
        g = sol.y[:, -1]
        steps = int(sol.t.size)
        if steps > 2 and np.diff(sol.t[:-1]).min() < config.MIN_STEP:
            raise StiffnessFailure(f"Orbit ODE step collapsed below {config.MIN_STEP} for m={m}, lambda={system.lam}, x={x}")

    scale = float(np.abs(g).max())
    error = tol * scale + frobenius_error
    logging.debug(f"Orbit ODE: t0={t0:.3g}, |x|={norm:.3g}, {steps} steps, error estimate {error:.3g}")
    return EvalResult(value=complex(g[0]), method="ode", error_estimate=error, orbit_values=g,
                      diagnostics={"t0": t0, "steps": steps, "frobenius_error": frobenius_error})

def orbit_ray(rs: RootSystemBC, m: Multiplicity, lam, direction, t_grid, tol: float = config.DEFAULT_TOL, order: int = config.FROBENIUS_ORDER) -> np.ndarray:
    """
    Orbit vectors along a ray from a single integration.

    Parameters
    ----------
    direction : array_like
        Nonzero direction xhat (walls allowed); the ray is t -> t * xhat.
    t_grid : array_like
        Nonnegative, strictly increasing parameters t.

    Returns
    -------
    numpy.ndarray
        Array of shape (len(t_grid), |W|) with entry [k, w] = G_lambda(m; t_k w xhat).
        F along the ray is the row mean.
    """
    require_m0(m)
    direction = as_vector(rs, direction)
    norm = float(np.linalg.norm(direction))
    t_grid = np.asarray(t_grid, dtype=float).reshape(-1)
    if norm == 0.0:
        raise ValueError("Ray direction must be nonzero.")
    if t_grid.size == 0 or t_grid[0] < 0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError(f"t_grid must be nonnegative and strictly increasing, got {t_grid}")

    s = t_grid * norm
    system = OrbitSystem(rs, m, lam, direction / norm)
    coeffs = system.frobenius_series(order)
    t0 = system.start_time(s[-1]) if s[-1] > 0 else 0.0

    out = np.empty((s.size, rs.order), dtype=complex)
    near = s <= t0
    out[near] = (s[near][:, None] ** np.arange(order + 1)) @ coeffs
    far = ~near
    if far.any():
        g0 = (t0 ** np.arange(order + 1)) @ coeffs
        sol = solve_ivp(system, (t0, s[far][-1]), g0, method="DOP853", t_eval=s[far], rtol=tol, atol=config.ODE_ATOL)
        if sol.status != 0:
            raise StiffnessFailure(f"Orbit ODE failed along the ray {direction} for m={m}: {sol.message}")
        out[far] = sol.y.T
    logging.debug(f"Ray integration along {direction}: {s.size} points up to |x|={s[-1]:.3g}")
    return out

def F_eval(rs: RootSystemBC, m: Multiplicity, lam, x, method: str = "auto", tol: float = config.DEFAULT_TOL, max_height: int = config.DEFAULT_TRUNCATION) -> EvalResult:
    """
    Evaluates the hypergeometric function F_lambda(m; x).

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity in M0.
    lam : array_like
        Complex spectral parameter.
    x : array_like
        Real point.
    method : str, optional
        ``"auto"`` (default): series when lambda has a free orbit and x is at least
        config.AUTO_SERIES_MARGIN away from the walls, ODE otherwise or when the series fails;
        ``"series"`` or ``"ode"`` force an engine.
    tol : float, optional
        Target relative accuracy.
    max_height : int, optional
        Starting truncation height of the series.

    Returns
    -------
    EvalResult
        With ``orbit_values`` when the ODE engine was used.

    Raises
    ------
    DomainError
        If m is not in M0.
    KeyError
        If the method is unknown.
    """
    if method not in METHODS:
        raise KeyError(f"Unknown method {method}. Must be one of {METHODS}")
    require_m0(m)
    x = as_vector(rs, x)
    lam = as_vector(rs, lam, complex)
    if not np.any(x):
        return EvalResult(value=1.0 + 0j, method="exact")

    if method == "series" or (method == "auto" and _series_applicable(rs, lam, x)):
        try:
            series = hcseries.F_series(rs, m, lam, x, max_height=max_height, tol=tol)
            return EvalResult(value=series.value, method="series", error_estimate=series.tail_estimate,
                              diagnostics={"truncation_height": series.truncation_height, "cancellation": series.cancellation})
        except (NumericalError, NotRegular) as exc:
            if method == "series":
                raise
            logging.info(f"Series engine failed ({type(exc).__name__}: {exc}); falling back to the orbit ODE")

    res = G_ode(rs, m, lam, x, tol=tol)
    res.value = complex(np.mean(res.orbit_values))
    return res

def _series_applicable(rs: RootSystemBC, lam: np.ndarray, x: np.ndarray) -> bool:
    x_dom, _ = rs.dominant_representative(x)
    return rs.wall_margin(x_dom) >= config.AUTO_SERIES_MARGIN and hcseries.orbit_is_free(rs, lam)

def gradient_formula(rs: RootSystemBC, lam, m: Multiplicity, orbit_values: np.ndarray) -> np.ndarray:
    """
    Gradient of F from the orbit vector: grad F(x) = (1/|W|) sum_w w^{-1}(lambda - rho) G(w x).

    Parameters
    ----------
    orbit_values : numpy.ndarray
        G(w x) indexed by Weyl element, as returned in EvalResult.orbit_values.
    """
    shift = as_vector(rs, lam, complex) - rho(rs, m)
    # w^{-1} = w^T for signed permutations
    images = np.einsum("wji,j->wi", rs.weyl, shift)
    return (orbit_values[:, None] * images).mean(axis=0)

def laplacian_residual(rs: RootSystemBC, m: Multiplicity, lam, x, h: float = None, f: Callable = None, tol: float = config.CHECK_TOL) -> float:
    """
    Relative residual |L(m) F + <rho, rho> F - <lambda, lambda> F| / |F| at a regular point.

    ``f`` defaults to the ODE evaluation of F at integration tolerance ``tol``; with the
    ODE the finite-difference step should be about 1e-2.
    """
    lam = as_vector(rs, lam, complex)
    if f is None:
        f = lambda y: F_eval(rs, m, lam, y, method="ode", tol=tol).value
    rho_m = rho(rs, m)
    fx = f(as_vector(rs, x))
    lhs = laplacian_apply(rs, m, f, x, h) + (np.dot(rho_m, rho_m) - np.dot(lam, lam)) * fx
    return float(abs(lhs) / abs(fx))
