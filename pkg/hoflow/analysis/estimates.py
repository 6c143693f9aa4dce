"""
estimates
=========

Executable versions of the pointwise estimates for G_lambda(m) and F_lambda(m).

Every check samples parameter sets from exactly the multiplicity set and the spectral region
under which the estimate holds, evaluates both sides with the orbit ODE at ``config.CHECK_TOL``
and records the worst relative violation. The orbit ODE returns G on the whole Weyl orbit of
x, so one evaluation tests an estimate for G at |W| points and for F = mean of the orbit.

Checks
------
- :class:`Positivity`: G and F are positive for real lambda; |G_lambda| <= G_{Re lambda}, same for F (m in M+ or M3).
- :class:`ExponentialBound`: G_lambda <= G_0 exp(max_w (w lambda)(x)) for real lambda (m in M+ or M3).
- :class:`ShiftBound`: G_{lambda + mu} <= G_mu exp(max_w (w lambda)(x)) for real lambda and dominant mu.
- :class:`OrbitBound`: |G_lambda| <= sqrt|W| exp(max_w Re (w lambda)(x)) for complex lambda (m in M2 or M3).
- :class:`HarnackSandwich`: F(x + x1) exp(min_w (rho - lambda)(w x1)) <= F(x) <= F(x + x1) exp(max_w (rho - lambda)(w x1)) (m in M3).
- :class:`GradientFormula`: finite-difference gradient of F against the orbit formula.
- :class:`RayMonotonicity`: t -> exp(K t) F(x + t xi) is nondecreasing with K = max_w (rho - lambda)(w xi).
- :class:`DeformedOrbitBound`, :class:`DeformedPositivity`, :class:`DeformedHarnack`: the
  (ell, ell_tilde)-deformed versions with m in M+, m_l >= 1, ell in [ell_min - 1, ell_max] and ell_tilde >= 0.
- :class:`SphericalBound`: |u^{-ell} F_lambda(m(ell))| <= 1 for lambda in C(rho(m)) + i a*, over the
  Hermitian catalog.

Examples
--------
.. code-block:: python

    from hoflow.analysis import estimates

    reports = estimates.estimate_suite(rank=2, n=50, seed=0)
    [r.passed for r in reports]
"""
# builtins
import logging

# dependencies
import numpy as np

# custom
from hoflow import config
from hoflow.multiplicity import Multiplicity, Deformation, deform, ell_range, rho, rho_2lt
from hoflow.evaluator import G_ode, gradient, gradient_formula
from hoflow.deformation import deformation_factor
from hoflow.catalog import hermitian_catalog
from hoflow.runners import Check, CheckReport, run_checks, inequality_row, agreement_row, worst_of, positive_part
from hoflow.jobstarters import JobStarter
from hoflow.samples import quasi_random, cube, sample_union, sample_in_hull

def max_pairing(rs, lam, x) -> float:
    '''max_w Re (w lambda)(x)'''
    return float((rs.weyl_orbit(np.real(np.asarray(lam, dtype=complex))) @ np.asarray(x, dtype=float)).max())

def min_pairing(rs, lam, x) -> float:
    '''min_w (w lambda)(x) for real lambda'''
    return float((rs.weyl_orbit(np.asarray(lam, dtype=float)) @ np.asarray(x, dtype=float)).min())

def positivity_row(values: np.ndarray, err: float = 0.0) -> dict:
    '''violation when a real orbit vector has a nonpositive or non-real entry beyond err'''
    values = np.asarray(values, dtype=complex)
    real_min = float(values.real.min())
    if not np.all(np.isfinite(values)):
        return {"lhs": real_min, "rhs": 0.0, "margin": float("inf"), "violation": float("inf")}
    scale = max(float(np.abs(values).max()), np.finfo(float).tiny)
    imag = float(np.abs(values.imag).max())
    margin = max(-real_min, imag) - config.ERROR_FACTOR * err
    return {"lhs": real_min, "rhs": 0.0, "margin": margin, "violation": positive_part(margin / scale)}

def orbit_rows(lhs: np.ndarray, rhs: np.ndarray, err_lhs: float, err_rhs: float) -> dict:
    '''worst of the pointwise inequalities lhs[w] <= rhs[w] over an orbit, plus the one for the orbit means'''
    rows = [inequality_row(float(a), float(b), err_lhs, err_rhs) for a, b in zip(lhs, rhs)]
    rows.append(inequality_row(float(np.mean(lhs)), float(np.mean(rhs)), err_lhs, err_rhs))
    return worst_of(*rows)

class EstimateCheck(Check):
    '''
    Shared sampling for the estimate checks.

    ``mult_sets`` are the multiplicity sets sampled round-robin; ``spectral`` is "real" or
    "complex".
    '''
    mult_sets: tuple = ("M+", "M3")
    spectral: str = "real"
    lam_box: tuple = (-3.0, 3.0)
    x_box: tuple = (-2.0, 2.0)

    def sample(self, n: int, seed: int) -> list[dict]:
        rank = self.rs.rank
        mults = sample_union(list(self.mult_sets), rank, n, seed)
        lam_re = quasi_random(cube(rank, *self.lam_box), n, seed, stream=f"{self}:lam_re")
        lam_im = quasi_random(cube(rank, -3.0, 3.0), n, seed, stream=f"{self}:lam_im")
        xs = quasi_random(cube(rank, *self.x_box), n, seed, stream=f"{self}:x")
        params = []
        for i, (label, m) in enumerate(mults):
            lam = lam_re[i] + (1j * lam_im[i] if self.spectral == "complex" else 0.0)
            params.append({"id": i, "m": m.as_tuple(), "set": label, "lam": list(lam), "x": list(xs[i])})
        return params

    def mult(self, params: dict) -> Multiplicity:
        return Multiplicity(*params["m"], rank=self.rs.rank)

    def orbit(self, m: Multiplicity, lam, x) -> tuple[np.ndarray, float]:
        res = G_ode(self.rs, m, lam, x, tol=self.tol)
        return res.orbit_values, res.error_estimate

############################################# UNDEFORMED #########################################
class Positivity(EstimateCheck):
    hypothesis = "m in M+ or M3; lambda complex; x arbitrary"
    spectral = "complex"

    def __str__(self):
        return f"estimate_positivity_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.asarray(params["lam"], dtype=complex)
        g_lam, err_lam = self.orbit(m, lam, params["x"])
        g_re, err_re = self.orbit(m, lam.real, params["x"])
        return worst_of(positivity_row(g_re, err_re), orbit_rows(np.abs(g_lam), g_re.real, err_lam, err_re))

class ExponentialBound(EstimateCheck):
    hypothesis = "m in M+ or M3; lambda real; x arbitrary"

    def __str__(self):
        return f"estimate_exponential_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        g_lam, err_lam = self.orbit(m, params["lam"], params["x"])
        g_0, err_0 = self.orbit(m, np.zeros(self.rs.rank), params["x"])
        growth = np.exp(max_pairing(self.rs, params["lam"], params["x"]))
        return orbit_rows(g_lam.real, growth * g_0.real, err_lam, growth * err_0)

class ShiftBound(EstimateCheck):
    hypothesis = "m in M+ or M3; lambda real; mu real dominant; x arbitrary"
    lam_box = (-2.0, 2.0)

    def __str__(self):
        return f"estimate_shift_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        mus = quasi_random(cube(self.rs.rank, 0.0, 3.0), n, seed, stream=f"{self}:mu")
        for p, mu in zip(params, mus):
            dominant, _ = self.rs.dominant_representative(mu)
            p.update({f"mu{j + 1}": float(v) for j, v in enumerate(dominant)})
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.real(np.asarray(params["lam"], dtype=complex))
        mu = np.array([params[f"mu{j + 1}"] for j in range(self.rs.rank)])
        g_shift, err_shift = self.orbit(m, lam + mu, params["x"])
        g_mu, err_mu = self.orbit(m, mu, params["x"])
        growth = np.exp(max_pairing(self.rs, lam, params["x"]))
        return orbit_rows(g_shift.real, growth * g_mu.real, err_shift, growth * err_mu)

class OrbitBound(EstimateCheck):
    hypothesis = "m in M2 or M3; lambda complex; x arbitrary"
    mult_sets = ("M2", "M3")
    spectral = "complex"

    def __str__(self):
        return f"estimate_orbit_bound_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        g_lam, err = self.orbit(m, params["lam"], params["x"])
        bound = np.sqrt(self.rs.order) * np.exp(max_pairing(self.rs, params["lam"], params["x"]))
        return orbit_rows(np.abs(g_lam), np.full(self.rs.order, bound), err, 0.0)

class HarnackSandwich(EstimateCheck):
    hypothesis = "m in M3; lambda real; x, x1 arbitrary"
    mult_sets = ("M3",)
    x_box = (-1.5, 1.5)

    def __str__(self):
        return f"estimate_harnack_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        shifts = quasi_random(cube(self.rs.rank, -1.5, 1.5), n, seed, stream=f"{self}:x1")
        for p, x1 in zip(params, shifts):
            p.update({f"shift{j + 1}": float(v) for j, v in enumerate(x1)})
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.real(np.asarray(params["lam"], dtype=complex))
        x = np.asarray(params["x"])
        x1 = np.array([params[f"shift{j + 1}"] for j in range(self.rs.rank)])
        g_x, err_x = self.orbit(m, lam, x)
        g_shifted, err_shifted = self.orbit(m, lam, x + x1)
        f_x, f_shifted = float(np.mean(g_x.real)), float(np.mean(g_shifted.real))
        exponent = rho(self.rs, m) - lam
        low = np.exp(min_pairing(self.rs, exponent, x1))
        high = np.exp(max_pairing(self.rs, exponent, x1))
        return worst_of(inequality_row(f_shifted * low, f_x, err_shifted * low, err_x),
                        inequality_row(f_x, f_shifted * high, err_x, err_shifted * high))

class GradientFormula(EstimateCheck):
    '''Central differences with step 1e-4 (1 + |x|) against (1/|W|) sum_w w^{-1}(lambda - rho) G(w x).'''
    hypothesis = "m in M+ or M3; lambda complex; x arbitrary"
    spectral = "complex"
    tolerance = config.GRADIENT_TOL
    lam_box = (-2.0, 2.0)

    def __str__(self):
        return f"estimate_gradient_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.asarray(params["lam"], dtype=complex)
        x = np.asarray(params["x"])
        orbit, _ = self.orbit(m, lam, x)
        formula = gradient_formula(self.rs, lam, m, orbit)
        f = lambda y: complex(np.mean(G_ode(self.rs, m, lam, y, tol=self.tol).orbit_values))
        numeric = gradient(f, x, h=1e-4 * (1.0 + np.linalg.norm(x)))
        scale = (1.0 + float(np.linalg.norm(lam - rho(self.rs, m)))) * float(np.abs(orbit).max())
        return agreement_row(float(np.linalg.norm(numeric - formula)), 0.0, scale=scale)

class RayMonotonicity(EstimateCheck):
    '''exp(K t) F(x + t xi) at t = 0, 0.25, ..., 2 must not decrease.'''
    hypothesis = "m in M+ or M3; lambda real; x arbitrary; xi nonzero"
    x_box = (-1.5, 1.5)

    def __str__(self):
        return f"estimate_monotone_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        dirs = quasi_random(cube(self.rs.rank, -1.0, 1.0), n, seed, stream=f"{self}:xi")
        for p, xi in zip(params, dirs):
            if np.linalg.norm(xi) < 1e-3:
                xi = np.ones(self.rs.rank)
            p.update({f"xi{j + 1}": float(v) for j, v in enumerate(xi)})
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.real(np.asarray(params["lam"], dtype=complex))
        x = np.asarray(params["x"])
        xi = np.array([params[f"xi{j + 1}"] for j in range(self.rs.rank)])
        rate = max_pairing(self.rs, rho(self.rs, m) - lam, xi)
        values, errors = [], []
        for t in np.linspace(0.0, 2.0, 9):
            orbit, err = self.orbit(m, lam, x + t * xi)
            weight = np.exp(rate * t)
            values.append(weight * float(np.mean(orbit.real)))
            errors.append(weight * err)
        rows = [inequality_row(values[k], values[k + 1], errors[k], errors[k + 1]) for k in range(len(values) - 1)]
        return worst_of(*rows)

############################################# DEFORMED #########################################
DEFORMED_HYPOTHESIS = "m in M+, m_l >= 1; ell_tilde >= 0; orbit (G) rows for ell in [ell_min, ell_max], F rows only for ell in [ell_min - 1, ell_min["

class DeformedCheck(EstimateCheck):
    '''
    Deformed checks: m in M+ with m_l >= 1, ell in [ell_min - 1, ell_max], ell_tilde in [0, 1.5].

    Statements on the whole orbit vector G are tested only for ell in [ell_min, ell_max]; below
    ell_min only the orbit mean F is.
    '''
    mult_sets = ("M+ml1",)
    hypothesis = DEFORMED_HYPOTHESIS

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        shape = quasi_random([(0.0, 1.0), (0.0, 1.5)], n, seed, stream=f"{self}:deform")
        for p, (a, ell_tilde) in zip(params, shape):
            ell_min, ell_max = ell_range(self.mult(p))
            p["d"] = (ell_min - 1.0 + a * (ell_max - ell_min + 1.0), float(ell_tilde))
        return params

    def orbit_level(self, params: dict) -> bool:
        '''True if ell lies in [ell_min, ell_max], where the G-level statements hold'''
        ell_min, ell_max = ell_range(self.mult(params))
        return ell_min <= params["d"][0] <= ell_max

    def deformed_orbit(self, params: dict, lam, x) -> tuple[np.ndarray, float]:
        d = Deformation(*params["d"])
        orbit, err = self.orbit(deform(self.mult(params), d, strict=True), lam, x)
        factor = deformation_factor(self.rs, d, x)
        return factor * orbit, factor * err

class DeformedOrbitBound(DeformedCheck):
    hypothesis = DEFORMED_HYPOTHESIS + "; lambda complex"
    spectral = "complex"

    def __str__(self):
        return f"estimate_deformed_bound_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        d = Deformation(*params["d"])
        g_lam, err = self.deformed_orbit(params, params["lam"], params["x"])
        bound = np.sqrt(self.rs.order) * deformation_factor(self.rs, d, params["x"]) * np.exp(max_pairing(self.rs, params["lam"], params["x"]))
        if not self.orbit_level(params):
            return inequality_row(float(abs(np.mean(g_lam))), bound, err, 0.0)
        return orbit_rows(np.abs(g_lam), np.full(self.rs.order, bound), err, 0.0)

class DeformedPositivity(DeformedCheck):
    hypothesis = DEFORMED_HYPOTHESIS + "; lambda complex"
    spectral = "complex"

    def __str__(self):
        return f"estimate_deformed_positivity_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        lam = np.asarray(params["lam"], dtype=complex)
        x = params["x"]
        g_lam, err_lam = self.deformed_orbit(params, lam, x)
        g_re, err_re = self.deformed_orbit(params, lam.real, x)
        g_0, err_0 = self.deformed_orbit(params, np.zeros(self.rs.rank), x)
        growth = np.exp(max_pairing(self.rs, lam.real, x))
        f_lam, f_re, f_0 = float(abs(np.mean(g_lam))), float(np.mean(g_re.real)), float(np.mean(g_0.real))
        positive = g_re if self.orbit_level(params) else np.array([np.mean(g_re)])
        return worst_of(positivity_row(positive, err_re),
                        inequality_row(f_lam, f_re, err_lam, err_re),
                        inequality_row(f_re, growth * f_0, err_re, growth * err_0))

class DeformedHarnack(DeformedCheck):
    '''Sandwich with the exponent (lambda + rho(m(2 ell_tilde)))(x1) for dominant lambda and x1; F rows only.'''
    hypothesis = DEFORMED_HYPOTHESIS + "; lambda real dominant; x1 dominant"
    lam_box = (0.0, 3.0)
    x_box = (-1.5, 1.5)

    def __str__(self):
        return f"estimate_deformed_harnack_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        shifts = quasi_random(cube(self.rs.rank, 0.0, 1.5), n, seed, stream=f"{self}:x1")
        for p, x1 in zip(params, shifts):
            lam, _ = self.rs.dominant_representative(np.real(np.asarray(p["lam"], dtype=complex)))
            x1, _ = self.rs.dominant_representative(x1)
            p["lam"] = list(lam.astype(complex))
            p.update({f"shift{j + 1}": float(v) for j, v in enumerate(x1)})
        return params

    def evaluate(self, params: dict) -> dict:
        d = Deformation(*params["d"])
        lam = np.real(np.asarray(params["lam"], dtype=complex))
        x = np.asarray(params["x"])
        x1 = np.array([params[f"shift{j + 1}"] for j in range(self.rs.rank)])
        g_x, err_x = self.deformed_orbit(params, lam, x)
        g_shifted, err_shifted = self.deformed_orbit(params, lam, x + x1)
        f_x, f_shifted = float(np.mean(g_x.real)), float(np.mean(g_shifted.real))
        exponent = float((lam + rho_2lt(self.rs, self.mult(params), d)) @ x1)
        low, high = np.exp(-exponent), np.exp(exponent)
        return worst_of(inequality_row(f_shifted * low, f_x, err_shifted * low, err_x),
                        inequality_row(f_x, f_shifted * high, err_x, err_shifted * high))

############################################# SPHERICAL #########################################
class SphericalBound(Check):
    """
    |u^{-ell} F_lambda(m(ell))| <= 1 for real ell and lambda in C(rho(m)) + i a*.

    Samples the Hermitian catalog entries of the check's rank (their long multiplicity is 1),
    ell in [-ell_max, ell_max], Re lambda a random point of the hull and Im lambda in [-2, 2]^r.
    """
    hypothesis = "m Hermitian (m_l = 1); ell real; lambda in C(rho(m)) + i a*"

    def __str__(self):
        return f"estimate_spherical_r{self.rs.rank}"

    def entries(self) -> list:
        return [e for e in hermitian_catalog() if e.rank == self.rs.rank]

    def sample(self, n: int, seed: int) -> list[dict]:
        entries = self.entries()
        if not entries:
            logging.info(f"No Hermitian catalog entry of rank {self.rs.rank}; {self} has nothing to sample")
            return []
        rank = self.rs.rank
        shape = quasi_random([(-1.0, 1.0)], n, seed, stream=f"{self}:ell")
        imag = quasi_random(cube(rank, -2.0, 2.0), n, seed, stream=f"{self}:imag")
        xs = quasi_random(cube(rank, -2.0, 2.0), n, seed, stream=f"{self}:x")
        params = []
        for i in range(n):
            entry = entries[i % len(entries)]
            m = entry.base_mult
            real = sample_in_hull(self.rs.weyl_orbit(rho(self.rs, m)), 1, seed + i, stream=f"{self}:hull")[0]
            params.append({"id": i, "m": m.as_tuple(), "d": (float(shape[i, 0] * entry.ell_max), 0.0), "entry": entry.name,
                           "lam": list(real + 1j * imag[i]), "x": list(xs[i])})
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        d = Deformation(*params["d"])
        res = G_ode(self.rs, deform(m, d, strict=True), params["lam"], params["x"], tol=self.tol)
        factor = deformation_factor(self.rs, d, params["x"])
        value = factor * abs(np.mean(res.orbit_values))
        return inequality_row(value, 1.0, factor * res.error_estimate, 0.0)

############################################# SUITE #########################################
UNDEFORMED_CHECKS = (Positivity, ExponentialBound, ShiftBound, OrbitBound, HarnackSandwich, GradientFormula, RayMonotonicity)
DEFORMED_CHECKS = (DeformedOrbitBound, DeformedPositivity, DeformedHarnack)

def estimate_checks(rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL) -> list[Check]:
    '''all estimate checks of one rank; the spherical check only where the catalog has entries'''
    checks = [cls(rank, long_norm, tol) for cls in UNDEFORMED_CHECKS + DEFORMED_CHECKS]
    spherical = SphericalBound(rank, long_norm, tol)
    if spherical.entries():
        checks.append(spherical)
    return checks

def estimate_suite(rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, n: int = 200, seed: int = 0, jobstarter: JobStarter = None) -> list[CheckReport]:
    """
    Runs every estimate check.

    Parameters
    ----------
    rank : int, optional
        Rank of the root system.
    long_norm : float, optional
        Norm p of the long roots.
    n : int, optional
        Samples per check.
    seed : int, optional
        Sampling seed.
    jobstarter : JobStarter, optional
        Executes the evaluations.

    Returns
    -------
    list[CheckReport]
        Sorted by check name.
    """
    return run_checks(estimate_checks(rank, long_norm), n=n, seed=seed, jobstarter=jobstarter)
