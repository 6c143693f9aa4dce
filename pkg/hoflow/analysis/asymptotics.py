"""
asymptotics
===========

Sharp growth along rays and the leading coefficient of the asymptotic expansion.

For m in the interior of M3 (and via the deformation for F_{ell, ell_tilde}) and dominant real
lambda0, F_{lambda0}(m; x) is comparable on the positive chamber to

    prod_{alpha in S0} (1 + alpha(x)) * exp((lambda0 - rho)(x)),

S0 being the short and middle positive roots orthogonal to lambda0 and rho = rho(m) (rho(m(2 ell_tilde))
when deformed). :func:`sharp_ratio` records the ratio of both sides along a ray. The comparison
constants are not known explicitly, so the pass rule (spread at most ``config.SHARP_RATIO_BOUND``
for t >= ``config.SHARP_SPREAD_FROM``, relative variation over the last third of the ray at most
``config.SHARP_STABILITY``) is a heuristic and the reports are flagged as such. Ratios are formed
in log space, so an engine value that under- or overflows fails the rule instead of vanishing.
For strictly dominant lambda0 the ratio tends to c(m; lambda0), which is compared at t = 25.

:func:`b0_probe` follows F exp(-(lambda0 - rho)(x)) at regular lambda0: it converges to c(m; lambda0),
or to 0 when the c-function vanishes at lambda0.

Examples
--------
.. code-block:: python

    import numpy as np
    from hoflow.rootsys import RootSystemBC
    from hoflow.multiplicity import Multiplicity
    from hoflow.analysis.asymptotics import sharp_ratio

    rs = RootSystemBC(2)
    report = sharp_ratio(rs, Multiplicity(4, 1, -1), [1.0, 2.0], np.zeros(2), [1.0, 2.0])
    report.rows[["t", "ratio"]].tail()
"""
# builtins
import logging

# dependencies
import numpy as np
import pandas as pd

# custom
from hoflow import config
from hoflow.errors import Unsupported
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, classify, deform, ell_range, rho, rho_2lt
from hoflow.evaluator import F_eval, as_vector
from hoflow.deformation import log_u, log_v
from hoflow.cfunc import c, b0_nonsingular
from hoflow.runners import Check, CheckReport, inequality_row, positive_part
from hoflow.samples import quasi_random, cube, sample_multiplicities
from hoflow.analysis.boundedness import ray_values

LIMIT_T = 25.0

def default_direction(rank: int) -> np.ndarray:
    '''unit vector along (1, 2, ..., r), inside the positive chamber'''
    direction = np.arange(1.0, rank + 1.0)
    return direction / np.linalg.norm(direction)

def default_grid() -> np.ndarray:
    return np.linspace(0.0, config.RAY_TMAX, 81)

def vanishing_roots(rs: RootSystemBC, lam0, tol: float = config.GENERICITY_TOL) -> np.ndarray:
    '''mask of the short and middle positive roots alpha with <lambda0, alpha> = 0'''
    pairings = rs.pairings(np.real(np.asarray(lam0, dtype=complex)))
    return (np.abs(pairings) <= tol) & ~rs.class_mask("long")

def is_strictly_dominant(rs: RootSystemBC, lam0, tol: float = config.GENERICITY_TOL) -> bool:
    return bool(np.all(rs.pairings(np.real(np.asarray(lam0, dtype=complex))) > tol))

def ray_profile(rs: RootSystemBC, m: Multiplicity, lam0, x0, direction, t_grid, d: Deformation = None, method: str = "ode", tol: float = config.CHECK_TOL) -> pd.DataFrame:
    """
    F along x = x0 + t xhat.

    With x0 = 0 and the ODE engine the whole ray comes from one integration; otherwise every
    point is evaluated with :func:`hoflow.evaluator.F_eval`. A deformed profile evaluates
    F(m(ell, ell_tilde)) and adds log u^{-ell} v^{-ell_tilde} in log space.

    Returns
    -------
    pandas.DataFrame
        Columns ``t``, ``x1..xr``, ``value_re``, ``value_im`` and ``log_abs`` (log |F|).
    """
    x0 = as_vector(rs, x0)
    direction = as_vector(rs, direction)
    t_grid = np.asarray(t_grid, dtype=float)
    points = x0[None, :] + t_grid[:, None] * direction[None, :]
    base = m if d is None else deform(m, d, strict=True)
    if method == "ode" and not np.any(x0):
        values = ray_values(rs, base, lam0, direction, t_grid, tol=tol)
    else:
        values = np.array([F_eval(rs, base, lam0, x, method=method, tol=tol).value for x in points])
    log_factor = np.zeros(len(t_grid))
    if d is not None:
        log_factor = np.array([-d.ell * log_u(rs, x) - d.ell_tilde * log_v(rs, x) for x in points])
    df = pd.DataFrame({"t": t_grid})
    for j in range(rs.rank):
        df[f"x{j + 1}"] = points[:, j]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        df["value_re"] = values.real * np.exp(log_factor)
        df["value_im"] = values.imag * np.exp(log_factor)
        df["log_abs"] = np.log(np.abs(values)) + log_factor
    return df

def ratio_metrics(log_ratios: np.ndarray, t: np.ndarray = None, spread_from: float = 0.0) -> dict:
    """
    Spread and stability of a positive ratio sequence given by its logarithms.

    The spread is max/min over t >= spread_from, the stability is max/min - 1 over the last third.
    A non-finite log ratio gives an infinite spread and stability.
    """
    log_ratios = np.asarray(log_ratios, dtype=float)
    if not np.all(np.isfinite(log_ratios)):
        return {"spread": float("inf"), "stability": float("inf")}
    window = log_ratios if t is None else log_ratios[np.asarray(t, dtype=float) >= spread_from]
    window = window if window.size else log_ratios
    tail = log_ratios[-max(2, len(log_ratios) // 3):]
    return {"spread": float(np.exp(window.max() - window.min())), "stability": float(np.expm1(tail.max() - tail.min()))}

def _value_at(df: pd.DataFrame, column: str, t: float) -> float:
    return float(df[column].iloc[int(np.argmin(np.abs(df["t"].to_numpy() - t)))])

def _probe_report(name: str, hypothesis: str, df: pd.DataFrame, summary: dict, heuristic: bool) -> CheckReport:
    violation = summary["violation"]
    passed = violation <= 0.0
    log = logging.info if passed else logging.warning
    log(f"{name}: {', '.join(f'{k}={v:.3g}' for k, v in summary.items() if isinstance(v, float))}, {'passed' if passed else 'FAILED'}")
    return CheckReport(check_name=name, hypothesis_set=hypothesis, samples_tried=len(df), worst_violation=violation,
                       witnesses=[] if passed else [summary], passed=passed, tolerance=0.0, heuristic=heuristic, rows=df)

############################################# SHARP RATIO #########################################
def sharp_ratio_summary(rs: RootSystemBC, m: Multiplicity, lam0, x0, direction, t_grid=None, d: Deformation = None, method: str = "ode", tol: float = config.CHECK_TOL) -> tuple[pd.DataFrame, dict]:
    '''ratio profile and its metrics; see :func:`sharp_ratio`'''
    lam0 = as_vector(rs, lam0)
    t_grid = default_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    d = None if d is not None and d.is_trivial() else d
    df = ray_profile(rs, m, lam0, x0, direction, t_grid, d=d, method=method, tol=tol)
    points = df[[f"x{j + 1}" for j in range(rs.rank)]].to_numpy()
    exponent_vector = lam0 - rho_2lt(rs, m, d)
    polynomial = np.prod(1.0 + points @ rs.positive_roots[vanishing_roots(rs, lam0)].T, axis=1)
    df["log_ratio"] = df["log_abs"] - np.log(polynomial) - points @ exponent_vector
    with np.errstate(over="ignore", invalid="ignore"):
        df["ratio"] = np.exp(df["log_ratio"])

    summary = ratio_metrics(df["log_ratio"].to_numpy(), df["t"].to_numpy(), config.SHARP_SPREAD_FROM)
    summary["limit_error"] = np.nan
    if d is None and is_strictly_dominant(rs, lam0):
        limit = c(rs, m, lam0).value.real
        summary["c_limit"] = float(limit)
        summary["limit_error"] = float(abs(_value_at(df, "ratio", LIMIT_T) - limit) / abs(limit))
        excess_limit = summary["limit_error"] / config.C_LIMIT_TOL - 1.0
    else:
        excess_limit = 0.0
    excess = [summary["spread"] / config.SHARP_RATIO_BOUND - 1.0, summary["stability"] / config.SHARP_STABILITY - 1.0, excess_limit]
    summary["violation"] = positive_part(np.max(excess))
    return df, summary

def sharp_ratio(rs: RootSystemBC, m: Multiplicity, lam0, x0, direction, t_grid=None, d: Deformation = None, method: str = "ode", tol: float = config.CHECK_TOL) -> CheckReport:
    """
    Ratio of F_{lambda0}(m) to its sharp growth along the ray x0 + t xhat.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity in the interior of M3, or the base multiplicity of a deformation.
    lam0 : array_like
        Dominant real spectral parameter.
    x0, direction : array_like
        Start point in the positive chamber and direction in its closure.
    t_grid : array_like, optional
        Ray parameters; defaults to 81 points on [0, config.RAY_TMAX].
    d : Deformation, optional
        Deformation; rho is then rho(m(2 ell_tilde)).
    method : str, optional
        Engine.

    Returns
    -------
    CheckReport
        Heuristic report with one row per t (column ``ratio``).
    """
    if not is_strictly_dominant(rs, lam0) and np.any(rs.pairings(np.real(np.asarray(lam0, dtype=complex))) < -config.GENERICITY_TOL):
        raise ValueError(f"lambda0 = {lam0} is not dominant")
    df, summary = sharp_ratio_summary(rs, m, lam0, x0, direction, t_grid, d, method, tol)
    labels = classify(m)
    hypothesis = "m in the interior of M3" if d is None else "m in M+, ell in ]ell_min, ell_max[; rho(m(2 ell_tilde))"
    if d is None and "M3" not in labels:
        logging.info(f"sharp_ratio: m = {m} is not in M3; the ratio has no proven limit there")
    return _probe_report(f"sharp_ratio_r{rs.rank}", hypothesis, df, summary, heuristic=True)

class SharpAsymptotics(Check):
    '''
    Sharp ratio on the default ray for dominant lambda0.

    Undeformed: m in the interior of M3; the first probes use lambda0 = 0 and (in rank > 1) a
    lambda0 orthogonal to the first short root, the others are strictly dominant with pairings at
    least 0.8 with the simple roots. Deformed: m in M+ with ell in ]ell_min, ell_max[ and
    ell_tilde > 0 (>= 0 when m_m > 0), against rho(m(2 ell_tilde)), for strictly dominant lambda0.
    '''
    tolerance = 0.0
    heuristic = True

    def __init__(self, rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL, deformed: bool = False):
        super().__init__(rank, long_norm, tol)
        self.deformed = deformed
        if deformed:
            self.hypothesis = "m in M+, ell in ]ell_min, ell_max[, ell_tilde > 0 (>= 0 if m_m > 0); lambda0 real strictly dominant"
        else:
            self.hypothesis = "m in the interior of M3; lambda0 real dominant"

    def __str__(self):
        return f"sharp_ratio{'_deformed' if self.deformed else ''}_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        rank = self.rs.rank
        mults = sample_multiplicities("M+" if self.deformed else "M3int", rank, n, seed)
        gaps = quasi_random(cube(rank, 0.8, 2.0), n, seed, stream="sharp:gaps")
        shape = quasi_random([(0.05, 0.95), (0.1, 1.0)], n, seed, stream="sharp:deform")
        unit = self.rs.long_norm / 2.0
        params = []
        for i, m in enumerate(mults):
            lam0 = unit * np.cumsum(gaps[i])
            d = Deformation(0.0, 0.0)
            if self.deformed:
                ell_min, ell_max = ell_range(m)
                d = Deformation(ell_min + shape[i, 0] * (ell_max - ell_min), shape[i, 1])
            elif i == 0:
                lam0 = np.zeros(rank)
            elif i == 1 and rank > 1:
                lam0[0] = 0.0
            params.append({"id": i, "m": m.as_tuple(), "d": d.as_tuple(), "lam": list(lam0.astype(complex)), "x": list(default_direction(rank))})
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        d = Deformation(*params.get("d", (0.0, 0.0)))
        lam0 = np.real(np.asarray(params["lam"], dtype=complex))
        _, summary = sharp_ratio_summary(self.rs, m, lam0, np.zeros(self.rs.rank), params["x"], d=d, tol=self.tol)
        return summary

############################################# B0 PROBE #########################################
def b0_summary(rs: RootSystemBC, m: Multiplicity, lam0, direction=None, t_grid=None, eta=None, tol: float = config.CHECK_TOL) -> tuple[pd.DataFrame, dict]:
    '''profile of q(t) and its verdict data; see :func:`b0_probe`'''
    lam0 = as_vector(rs, np.real(np.asarray(lam0, dtype=complex)))
    if np.abs(rs.pairings(lam0)).min() <= config.GENERICITY_TOL:
        raise Unsupported(f"b0_probe needs a regular lambda0; {lam0} lies on a root hyperplane")
    direction = default_direction(rs.rank) if direction is None else as_vector(rs, direction)
    t_grid = default_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    eta = 0.5 * np.ones(rs.rank) if eta is None else as_vector(rs, eta)

    df = ray_profile(rs, m, lam0, np.zeros(rs.rank), direction, t_grid, tol=tol)
    points = df[[f"x{j + 1}" for j in range(rs.rank)]].to_numpy()
    df["q"] = df["value_re"] * np.exp(-(points @ (lam0 - rho(rs, m))))

    c_value = c(rs, m, lam0)
    summary = {"nonsingular": b0_nonsingular(rs, m, lam0), "c_order": c_value.order}
    excess = [0.0]
    if c_value.zero_flag:
        q_first = float(abs(df["q"][df["t"] > 0].iloc[0]))
        q_last = float(abs(df["q"].iloc[-1]))
        summary.update({"q_first": q_first, "q_last": q_last})
        excess.append(0.0 if q_last <= 0.01 * q_first or q_last < 1e-6 else 1.0)
    else:
        limit = c_value.value.real
        summary["c_limit"] = float(limit)
        summary["limit_error"] = float(abs(_value_at(df, "q", LIMIT_T) - limit) / abs(limit))
        excess.append(summary["limit_error"] / config.C_LIMIT_TOL - 1.0)

    labels = classify(m)
    if "M+" in labels or "M3" in labels:
        perturbed = ray_values(rs, m, lam0 + 1j * eta, direction, t_grid, tol=tol)
        df["perturbed_abs"] = np.abs(perturbed)
        imag_violation = max(inequality_row(a, b)["violation"] for a, b in zip(np.abs(perturbed), df["value_re"]))
        summary["perturbation_violation"] = float(imag_violation)
        excess.append(imag_violation / config.VIOLATION_SLACK - 1.0)
    summary["violation"] = positive_part(np.max(excess))
    return df, summary

def b0_probe(rs: RootSystemBC, m: Multiplicity, lam0, direction=None, t_grid=None, eta=None, tol: float = config.CHECK_TOL) -> CheckReport:
    """
    Leading-coefficient probe q(t) = F_{lambda0}(m; t xhat) exp(-(lambda0 - rho(m))(t xhat)).

    If c(m; lambda0) is finite and nonzero, q(25) must match it within ``config.C_LIMIT_TOL``;
    if c vanishes at lambda0, q must decay (|q(end)| <= 0.01 |q(first t > 0)| or |q(end)| < 1e-6).
    For m in M+ or M3 the perturbation lambda0 + i eta is also checked against
    |F_{lambda0 + i eta}| <= F_{lambda0} along the ray.

    Parameters
    ----------
    lam0 : array_like
        Regular real spectral parameter (no pairing with a root vanishes).
    direction : array_like, optional
        Ray direction; defaults to the unit vector along (1, ..., r).
    t_grid : array_like, optional
        Defaults to 81 points on [0, config.RAY_TMAX].
    eta : array_like, optional
        Imaginary perturbation; defaults to (0.5, ..., 0.5).

    Raises
    ------
    Unsupported
        If lambda0 is not regular, or if m_s = 0.
    """
    df, summary = b0_summary(rs, m, lam0, direction, t_grid, eta, tol)
    return _probe_report(f"b0_probe_r{rs.rank}", "lambda0 regular real; m in M0 with m_s != 0", df, summary, heuristic=False)

class LeadingCoefficient(Check):
    '''
    b0_probe for m in M1 and strictly dominant lambda0; in rank one the last probe is the
    vanishing case m = (3, -3), lambda0 = 1.5 (coordinate).
    '''
    hypothesis = "m in M1 (and m = (3, -3) in rank one); lambda0 strictly dominant real"
    tolerance = 0.0

    def __str__(self):
        return f"b0_probe_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        rank = self.rs.rank
        mults = sample_multiplicities("M1", rank, n, seed)
        gaps = quasi_random(cube(rank, 0.8, 2.0), n, seed, stream="b0:gaps")
        unit = self.rs.long_norm / 2.0
        params = [{"id": i, "m": m.as_tuple(), "lam": list((unit * np.cumsum(gaps[i])).astype(complex))} for i, m in enumerate(mults)]
        if rank == 1 and params:
            params[-1].update({"m": (3.0, 0.0, -3.0), "lam": [1.5 * unit + 0j]})
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        _, summary = b0_summary(self.rs, m, params["lam"], tol=self.tol)
        return summary
