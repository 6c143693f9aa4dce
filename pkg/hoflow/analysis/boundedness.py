"""
boundedness
===========

Convex-hull test and boundedness classifiers.

F_lambda(m) (m in M1) is bounded iff Re lambda lies in the convex hull C(rho(m)) of the Weyl orbit
of rho(m). For the (ell, ell_tilde)-deformation the hull vector is rho(m(2 ell_tilde)). The hull
test uses the dominance criterion: for dominant h, a vector xi lies in C(h) iff h - xi^+ is a
nonnegative combination of simple roots (xi^+ the dominant representative of xi). It is
co-validated against a linear-feasibility oracle over the orbit vertices
(``scipy.optimize.linprog``).

The module also holds the ray probes that witness bounded and unbounded behaviour, and the
corresponding checks.

Examples
--------
.. code-block:: python

    from hoflow.rootsys import RootSystemBC
    from hoflow.multiplicity import Multiplicity, rho
    from hoflow.analysis.boundedness import is_bounded

    rs = RootSystemBC(2)
    m = Multiplicity(2, 2, 1)
    is_bounded(rs, m, 1.2 * rho(rs, m)).verdict    # 'unbounded'
"""
# builtins
import logging
from dataclasses import dataclass, field
from typing import Optional

# dependencies
import numpy as np
from scipy.optimize import linprog

# custom
from hoflow import config
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, classify, deform, ell_range, symmetric_ell, rho, rho_2lt
from hoflow.evaluator import orbit_ray, as_vector
from hoflow.deformation import deformation_factor, log_u, log_v, middle_root_sum
from hoflow.runners import Check, agreement_row, positive_part
from hoflow.samples import quasi_random, cube, sample_multiplicities, sample_in_hull

@dataclass
class HullQuery:
    '''
    Verdict of the boundedness classifier.

    ``verdict`` is "bounded", "unbounded" or None (no verdict). ``hypotheses_ok`` is False when
    the parameters lie outside the hypothesis set of the criterion; the verdict is then advisory
    and ``advisory`` says why.
    '''
    m: Multiplicity
    deformation: Optional[Deformation]
    lam: np.ndarray
    verdict: Optional[str]
    hull_vector: np.ndarray
    hypotheses_ok: bool = True
    advisory: str = ""
    simple_margin: float = field(default=0.0, repr=False)

    def to_dict(self) -> dict:
        return {
            "m": list(self.m.as_tuple()),
            "ell": self.deformation.ell if self.deformation else None,
            "ell_tilde": self.deformation.ell_tilde if self.deformation else None,
            "lambda": [[float(v.real), float(v.imag)] for v in self.lam],
            "verdict": self.verdict,
            "hull_vector": [float(v) for v in self.hull_vector],
            "hypotheses_ok": self.hypotheses_ok,
            "advisory": self.advisory,
        }

############################################# HULL TEST #########################################
def hull_margin(rs: RootSystemBC, hull_vector, xi) -> float:
    '''smallest simple coordinate of hull_vector^+ - xi^+; nonnegative iff xi is in C(hull_vector)'''
    hull_plus, _ = rs.dominant_representative(hull_vector)
    xi_plus, _ = rs.dominant_representative(np.real(np.asarray(xi)))
    return float(rs.simple_coords(hull_plus - xi_plus).min())

def in_hull(rs: RootSystemBC, hull_vector, xi, tol: float = 1e-12) -> bool:
    """
    Tests xi in C(hull_vector) with the dominance criterion.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    hull_vector : array_like
        Real vector; a non-dominant vector is replaced by its dominant representative.
    xi : array_like
        Real vector.
    tol : float, optional
        Relative slack on the simple coordinates.

    Examples
    --------
    >>> rs = RootSystemBC(2)
    >>> in_hull(rs, [1.0, 3.0], [0.0, 0.0])
    True
    """
    scale = 1.0 + float(np.linalg.norm(hull_vector))
    return hull_margin(rs, hull_vector, xi) >= -tol * scale

def hull_oracle(rs: RootSystemBC, hull_vector, xi, residual_tol: float = config.ORACLE_TOL) -> tuple[bool, float]:
    """
    Brute-force membership test: xi is a convex combination of the 2^r r! orbit vertices.

    Solves the feasibility problem [V^T; 1] w = [xi; 1], w >= 0, as a linear program. The
    residual is recomputed from the returned weights rather than taken from the solver.

    Returns
    -------
    tuple[bool, float]
        Membership and the residual norm |A w - b| relative to 1 + |b| (inf if infeasible).

    Examples
    --------
    >>> hull_oracle(RootSystemBC(2), [1.0, 2.0], [3.0, 0.0])[0]
    False
    """
    vertices = rs.weyl_orbit(np.asarray(hull_vector, dtype=float))
    k = vertices.shape[0]
    A = np.r_[vertices.T, np.ones((1, k))]
    b = np.r_[np.asarray(xi, dtype=float), np.ones(1)]
    result = linprog(np.zeros(k), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if result.status != 0 or result.x is None:
        logging.debug(f"Hull oracle: linprog status {result.status} ({result.message}) for xi={b[:-1]}")
        return False, float("inf")
    residual = float(np.linalg.norm(A @ result.x - b) / (1.0 + np.linalg.norm(b)))
    return bool(residual <= residual_tol), residual

############################################# CLASSIFIER #########################################
def bdd_hypotheses(m: Multiplicity, d: Deformation = None) -> tuple[bool, str]:
    """
    Hypothesis set of the boundedness criterion.

    Undeformed: m in M1. Deformed: m in M+, m_l >= 1, ell in ]ell_min - 1, ell_max[ and
    ell_tilde >= 0 (> 0 if m_m = 0 in rank > 1).
    """
    if d is None:
        if "M1" in classify(m):
            return True, ""
        return False, f"m = {m} is not in M1"
    issues = []
    if "M+" not in classify(m):
        issues.append(f"m = {m} is not in M+")
    if m.ml < 1:
        issues.append(f"m_l = {m.ml:g} < 1")
    ell_min, ell_max = ell_range(m)
    if not ell_min - 1 < d.ell < ell_max:
        issues.append(f"ell = {d.ell:g} outside ]{ell_min - 1:g}, {ell_max:g}[")
    if m.rank > 1 and (d.ell_tilde < 0 or (m.mm == 0 and d.ell_tilde == 0)):
        issues.append(f"ell_tilde = {d.ell_tilde:g} not admissible for m_m = {m.mm:g}")
    return not issues, "; ".join(issues)

def is_bounded(rs: RootSystemBC, m: Multiplicity, lam, d: Deformation = None) -> HullQuery:
    """
    Classifies F_lambda(m) (or F_{ell, ell_tilde, lambda}(m)) as bounded or unbounded.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity (base multiplicity if deformed).
    lam : array_like
        Complex spectral parameter; only its real part matters.
    d : Deformation, optional
        Deformation. None or the trivial deformation gives the undeformed criterion.

    Returns
    -------
    HullQuery
        Outside the hypothesis set the verdict is advisory (``hypotheses_ok`` False). At
        ell = ell_max in rank > 1 no verdict is given.
    """
    lam = as_vector(rs, lam, complex)
    d = None if d is not None and d.is_trivial() else d
    hull_vector = rho_2lt(rs, m, d)
    ok, advisory = bdd_hypotheses(m, d)
    margin = hull_margin(rs, hull_vector, lam.real)
    verdict = "bounded" if in_hull(rs, hull_vector, lam.real) else "unbounded"
    if d is not None and rs.rank > 1 and d.ell == ell_range(m)[1]:
        verdict = None
        advisory = "boundedness at ell = ell_max is open in rank > 1; no verdict"
    if not ok:
        logging.info(f"Boundedness verdict for m={m}, d={d} is advisory: {advisory}")
    return HullQuery(m=m, deformation=d, lam=lam, verdict=verdict, hull_vector=hull_vector, hypotheses_ok=ok, advisory=advisory, simple_margin=margin)

############################################# RAY PROBES #########################################
def fundamental_coweight(rs: RootSystemBC, k: int) -> np.ndarray:
    '''omega_k (k = 1..r): coordinates x_k, ..., x_r equal to 1, the others 0'''
    if not 1 <= k <= rs.rank:
        raise ValueError(f"k must lie in 1..{rs.rank}, got {k}")
    omega = np.zeros(rs.rank)
    omega[k - 1:] = 1.0
    return omega

def growth_direction(rs: RootSystemBC, hull_vector, xi) -> tuple[np.ndarray, float]:
    """
    Unit direction along which e^{(xi^+ - hull)(t xhat)} grows fastest among the fundamental coweights.

    Returns
    -------
    tuple[numpy.ndarray, float]
        The unit direction omega_k / |omega_k| and the rate (xi^+ - hull)(xhat), which is
        positive iff xi lies outside C(hull_vector).
    """
    hull_plus, _ = rs.dominant_representative(hull_vector)
    xi_plus, _ = rs.dominant_representative(np.real(np.asarray(xi)))
    diff = xi_plus - hull_plus
    directions = [fundamental_coweight(rs, k) / np.sqrt(rs.rank - k + 1) for k in range(1, rs.rank + 1)]
    rates = [float(diff @ x) for x in directions]
    best = int(np.argmax(rates))
    return directions[best], rates[best]

def push_outside(rs: RootSystemBC, hull_vector, y, push: float) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Moves the point of the hull boundary on the ray through y^+ outwards by ``push``.

    The boundary point b = t* y^+ has a vanishing simple coordinate k of hull^+ - b; the result is
    b + push * omega_k / |omega_k|, which stays dominant and grows at rate ``push`` along that
    unit coweight.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    hull_vector : array_like
        Hull vector.
    y : array_like
        Real vector fixing the ray; y = 0 selects the vertex hull^+.
    push : float
        Positive distance moved along the unit coweight.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray, float]
        The outside point, the unit growth direction and its growth rate.
    """
    hull_plus, _ = rs.dominant_representative(hull_vector)
    y_plus, _ = rs.dominant_representative(np.real(np.asarray(y, dtype=float)))
    hull_coords, y_coords = rs.simple_coords(hull_plus), rs.simple_coords(y_plus)
    positive = y_coords > 1e-12
    if not positive.any():
        boundary, k = hull_plus, rs.rank
    else:
        ratios = np.where(positive, hull_coords / np.where(positive, y_coords, 1.0), np.inf)
        j = int(np.argmin(ratios))
        boundary, k = ratios[j] * y_plus, j + 1
    direction = fundamental_coweight(rs, k) / np.sqrt(rs.rank - k + 1)
    xi = boundary + push * direction
    return xi, direction, float((xi - hull_plus) @ direction)

def ray_values(rs: RootSystemBC, m: Multiplicity, lam, direction, t_grid, d: Deformation = None, tol: float = config.DEFAULT_TOL) -> np.ndarray:
    '''F_lambda(m; t xhat), or the deformed function, on a grid of t from one orbit integration'''
    t_grid = np.asarray(t_grid, dtype=float)
    direction = as_vector(rs, direction)
    base = m if d is None else deform(m, d, strict=True)
    values = orbit_ray(rs, base, lam, direction, t_grid, tol=tol).mean(axis=1)
    if d is not None:
        values = values * np.array([deformation_factor(rs, d, t * direction) for t in t_grid])
    return values

def deformed_envelope(rs: RootSystemBC, m: Multiplicity, d: Deformation, x) -> float:
    """
    Bound u^{-ell'} v^{-ell_tilde} exp(max_w (w delta)(x)) of |F_{ell, ell_tilde, lambda}(m; x)| for
    Re lambda in C(rho(m(2 ell_tilde))), with ell' = max(ell, -ell + m_l - 1) and
    delta = (ell'/2) sum_j beta_j + (ell_tilde/2) sum_{i<j} (beta_j +- beta_i).

    Equals 1 for the trivial deformation.
    """
    if d.is_trivial():
        return 1.0
    x = as_vector(rs, x)
    ell = max(d.ell, symmetric_ell(m, d.ell))
    long_sum = rs.positive_roots[rs.class_mask("long")].sum(axis=0)
    delta = ell / 2.0 * long_sum + d.ell_tilde / 2.0 * middle_root_sum(rs)
    exponent = float((rs.weyl_orbit(delta) @ x).max())
    return float(np.exp(-ell * log_u(rs, x) - d.ell_tilde * log_v(rs, x) + exponent))

def _unit_direction(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm < 0.1:
        vec = np.arange(1.0, len(vec) + 1.0)
        norm = np.linalg.norm(vec)
    return vec / norm

############################################# CHECKS #########################################
class HullOracleAgreement(Check):
    '''Dominance test against the vertex oracle, compared outside a boundary band.'''
    hypothesis = "hull vector rho(m), m in M1; xi real"
    tolerance = 0.0

    def __str__(self):
        return f"hull_oracle_agreement_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        mults = sample_multiplicities("M1", self.rs.rank, n, seed)
        unit = quasi_random(cube(self.rs.rank, -1.5, 1.5), n, seed, stream="hull:xi")
        params = []
        for i, m in enumerate(mults):
            hull = rho_2lt(self.rs, m)
            params.append({"id": i, "m": m.as_tuple(), "x": list(unit[i] * np.abs(hull).max())})
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        hull = rho_2lt(self.rs, m)
        xi = np.asarray(params["x"])
        fast = in_hull(self.rs, hull, xi)
        oracle, residual = hull_oracle(self.rs, hull, xi)
        margin = hull_margin(self.rs, hull, xi)
        in_band = abs(margin) <= config.HULL_BAND * (1.0 + np.linalg.norm(hull))
        return {"fast": fast, "oracle": oracle, "residual": residual, "margin": margin, "in_band": bool(in_band),
                "violation": 0.0 if in_band or fast == oracle else 1.0}

class BoundedInside(Check):
    """
    Ray probe strictly inside the hull: sup over t in [0, 20] of |F(t xhat)| / (sqrt|W| bound) <= 1.

    The bound is 1 undeformed and :func:`deformed_envelope` deformed.
    """
    def __init__(self, rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL, deformed: bool = False):
        super().__init__(rank, long_norm, tol)
        self.deformed = deformed
        self.tolerance = 1e-6
        if deformed:
            self.hypothesis = "m in M+, m_l >= 1, ell in ]ell_min - 1, ell_max[, ell_tilde > 0; Re lambda in 0.95 C(rho(m(2 ell_tilde)))"
        else:
            self.hypothesis = "m in M1; Re lambda in 0.95 C(rho(m))"

    def __str__(self):
        return f"bounded_inside{'_deformed' if self.deformed else ''}_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        rank = self.rs.rank
        mults = sample_multiplicities("M+ml1" if self.deformed else "M1", rank, n, seed)
        shape = quasi_random([(0.02, 0.98), (0.1, 1.5)], n, seed, stream="inside:deform")
        imag = quasi_random(cube(rank, -2.0, 2.0), n, seed, stream="inside:imag")
        dirs = quasi_random(cube(rank, -1.0, 1.0), n, seed, stream="inside:dir")
        params = []
        for i, m in enumerate(mults):
            d = Deformation(0.0, 0.0)
            if self.deformed:
                ell_min, ell_max = ell_range(m)
                d = Deformation(ell_min - 1 + shape[i, 0] * (ell_max - ell_min + 1), shape[i, 1])
            hull = rho_2lt(self.rs, m, d)
            real = 0.95 * sample_in_hull(self.rs.weyl_orbit(hull), 1, seed + i, stream="inside:hull")[0]
            params.append({"id": i, "m": m.as_tuple(), "d": d.as_tuple(), "lam": list(real + 1j * imag[i]), "x": list(_unit_direction(dirs[i]))})
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        d = Deformation(*params["d"])
        direction = np.asarray(params["x"])
        t_grid = np.linspace(0.0, 20.0, 41)
        values = np.abs(ray_values(self.rs, m, params["lam"], direction, t_grid, d=None if d.is_trivial() else d, tol=self.tol))
        bounds = np.sqrt(self.rs.order) * np.array([deformed_envelope(self.rs, m, d, t * direction) for t in t_grid])
        ratio = float((values / bounds).max())
        return {"sup_abs": float(values.max()), "ratio": ratio, "violation": positive_part(ratio - 1.0)}

class UnboundedOutside(Check):
    """
    Ray probe outside the hull: |F(t xhat)| exceeds BLOWUP_FACTOR before t = RAY_TMAX.

    Each lambda is a boundary point of the hull moved outwards by OUTSIDE_MARGIN |hull| along a
    fundamental coweight, with the push raised to OUTSIDE_MIN_RATE when the hull is small so the
    blow-up is visible on the ray.
    """
    tolerance = 0.0

    def __init__(self, rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL, deformed: bool = False):
        super().__init__(rank, long_norm, tol)
        self.deformed = deformed
        if deformed:
            self.hypothesis = "m in M+, m_l >= 1, ell in ]ell_min - 1, ell_max[, ell_tilde > 0; lambda real outside C(rho(m(2 ell_tilde))) with margin 0.05 |rho|"
        else:
            self.hypothesis = "m in M1; lambda real outside C(rho(m)) with margin 0.05 |rho|"

    def __str__(self):
        return f"unbounded_outside{'_deformed' if self.deformed else ''}_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        mults = sample_multiplicities("M+ml1" if self.deformed else "M1", self.rs.rank, n, seed)
        shape = quasi_random([(0.02, 0.98), (0.1, 1.5)], n, seed, stream="outside:deform")
        params = []
        for i, m in enumerate(mults):
            d = Deformation(0.0, 0.0)
            if self.deformed:
                ell_min, ell_max = ell_range(m)
                d = Deformation(ell_min - 1 + shape[i, 0] * (ell_max - ell_min + 1), shape[i, 1])
            hull = rho_2lt(self.rs, m, d)
            norm = float(np.linalg.norm(hull))
            if norm == 0.0:
                logging.debug(f"Hull vector of m={m}, d={d} vanishes; skipping sample {i}")
                continue
            y = sample_in_hull(self.rs.weyl_orbit(hull), 1, seed + i, stream="outside:ray")[0]
            push = max(config.OUTSIDE_MARGIN * norm, config.OUTSIDE_MIN_RATE)
            lam, direction, rate = push_outside(self.rs, hull, y, push)
            params.append({"id": i, "m": m.as_tuple(), "d": d.as_tuple(), "lam": list(lam.astype(complex)), "x": list(direction),
                           "rate": rate, "hull_margin": hull_margin(self.rs, hull, lam)})
        if len(params) < n:
            logging.warning(f"Check {self}: produced {len(params)} of {n} parameter sets")
        return params

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        d = Deformation(*params["d"])
        t_grid = np.linspace(0.0, config.RAY_TMAX, 81)
        values = np.abs(ray_values(self.rs, m, params["lam"], params["x"], t_grid, d=None if d.is_trivial() else d, tol=self.tol))
        if np.isnan(values).any():
            return {"sup_abs": float("nan"), "t_exceed": np.nan, "violation": float("inf")}
        exceeded = np.nonzero(values > config.BLOWUP_FACTOR)[0]
        t_exceed = float(t_grid[exceeded[0]]) if exceeded.size else np.nan
        return {"sup_abs": float(values.max()), "t_exceed": t_exceed,
                "violation": 0.0 if exceeded.size else float(1.0 - values.max() / config.BLOWUP_FACTOR)}

class HullVectorIdentity(Check):
    '''rho(m(2 ell_tilde)) = rho(m(ell, ell_tilde)) + (ell/2) sum beta_j + (ell_tilde/2) sum (beta_j +- beta_i).'''
    hypothesis = "m in M+, any (ell, ell_tilde)"
    tolerance = 1e-12

    def __str__(self):
        return f"hull_vector_identity_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        mults = sample_multiplicities("M+", self.rs.rank, n, seed)
        shape = quasi_random([(-3.0, 3.0), (0.0, 2.0)], n, seed, stream="hullvec:deform")
        return [{"id": i, "m": m.as_tuple(), "d": tuple(shape[i])} for i, m in enumerate(mults)]

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        d = Deformation(*params["d"])
        long_sum = self.rs.positive_roots[self.rs.class_mask("long")].sum(axis=0)
        other = rho(self.rs, deform(m, d)) + d.ell / 2.0 * long_sum + d.ell_tilde / 2.0 * middle_root_sum(self.rs)
        direct = rho_2lt(self.rs, m, d)
        return agreement_row(float(np.linalg.norm(direct - other)), 0.0, scale=1.0 + float(np.linalg.norm(direct)))
