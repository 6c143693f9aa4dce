"""
hcseries
========

Harish-Chandra series engine for the hypergeometric function F.

Overview
--------
For generic lambda the function Phi_lambda has the expansion

    Phi_lambda(x) = e^{(lambda - rho)(x)} sum_{nu in Lambda} Gamma_{2 nu} e^{-2 nu(x)},

where Lambda is the cone of nonnegative integer combinations of the simple roots. The
coefficients obey

    <mu, mu - 2 lambda> Gamma_mu = 2 sum_{alpha > 0} m_alpha sum_{n >= 1} Gamma_{mu - 2 n alpha} <mu - 2 n alpha + rho - lambda, alpha>

with Gamma_0 = 1; a predecessor mu - 2 n alpha enters iff its simple coordinates are
nonnegative. On the open positive chamber

    F_lambda(x) = sum_{w in W} c(m; w lambda) Phi_{w lambda}(x).

The inner sum over n is carried as a running sum along the direction of alpha, so the table
is filled shell by shell (by height) with one vectorised pass per root.

Notes
-----
The series needs generic lambda (free Weyl orbit, no resonance <mu, mu - 2 lambda> = 0) and a
point away from the walls. Failures raise NumericalError subclasses so that callers can fall
back to the orbit ODE in :mod:`hoflow.evaluator`.
"""
# builtins
import math
import logging
from dataclasses import dataclass, field

# dependencies
import numpy as np

# custom
from hoflow import config
from hoflow.errors import NonGenericSpectral, WallTooClose, DegenerateOrbit, SeriesCancellation
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, rho
from hoflow.cfunc import c

@dataclass
class GammaTable:
    '''
    Coefficients Gamma_{2 nu} for all nu in the cone up to height ``max_height``.

    ``points`` holds the simple coordinates of nu (sorted by height, then lexicographically),
    ``coeffs`` the matching coefficients. ``genericity_margin`` is the smallest |<mu, mu - 2 lambda>|
    met while filling the table.
    '''
    rs: RootSystemBC
    m: Multiplicity
    lam: np.ndarray
    max_height: int
    points: np.ndarray
    heights: np.ndarray
    coeffs: np.ndarray
    genericity_margin: float
    _sorted_keys: np.ndarray = field(repr=False, default=None)
    _key_order: np.ndarray = field(repr=False, default=None)
    _radix: np.ndarray = field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, coords) -> complex:
        idx = self.lookup(np.asarray(coords, dtype=np.int64).reshape(1, -1))
        if idx[0] < 0:
            raise KeyError(f"{tuple(coords)} is not a cone point of height <= {self.max_height}")
        return complex(self.coeffs[idx[0]])

    def lookup(self, coords: np.ndarray) -> np.ndarray:
        '''flat indices of cone points (rows of ``coords``); -1 where absent'''
        out = np.full(len(coords), -1, dtype=np.int64)
        inside = np.all(coords >= 0, axis=1) & (coords.sum(axis=1) <= self.max_height)
        if not inside.any():
            return out
        keys = coords[inside] @ self._radix
        pos = np.searchsorted(self._sorted_keys, keys)
        out[inside] = self._key_order[pos]
        return out

    def recompute(self, coords) -> complex:
        """
        Evaluates the recursion for one entry directly from the stored lower entries.

        Used to verify the table; the sum over n is done term by term.
        """
        rs, lam = self.rs, self.lam
        nu = np.asarray(coords, dtype=np.int64)
        mu = 2.0 * rs.from_simple_coords(nu.astype(float))
        rho_m = rho(rs, self.m)
        rhs = 0j
        for a, alpha in enumerate(rs.positive_roots):
            m_a = self.m.by_class(rs.root_classes[a])
            if m_a == 0:
                continue
            sc = rs.root_simple_coords[a]
            n = 1
            while np.all(nu - n * sc >= 0):
                pred = nu - n * sc
                shifted = 2.0 * rs.from_simple_coords(pred.astype(float))
                rhs += 2.0 * m_a * self[pred] * np.dot(shifted + rho_m - lam, alpha)
                n += 1
        return complex(rhs / np.dot(mu, mu - 2.0 * lam))

@dataclass
class SeriesValue:
    '''Partial sum with its truncation data.'''
    value: complex
    truncation_height: int
    tail_estimate: float
    wall_margin: float
    cancellation: float = 1.0
    shell_sums: np.ndarray = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "truncation_height": self.truncation_height,
            "tail_estimate": self.tail_estimate,
            "wall_margin": self.wall_margin,
            "cancellation": self.cancellation,
        }

def table_limit(rank: int) -> int:
    '''largest truncation height whose running-sum storage fits MAX_TABLE_ENTRIES'''
    n_roots = rank * (rank + 1)
    height = config.MAX_TRUNCATION
    while height > 0 and n_roots * math.comb(height + rank, rank) > config.MAX_TABLE_ENTRIES:
        height -= 1
    return height

def gamma_table(rs: RootSystemBC, m: Multiplicity, lam, max_height: int = config.DEFAULT_TRUNCATION) -> GammaTable:
    """
    Fills the Harish-Chandra coefficients up to a height.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity.
    lam : array_like
        Complex spectral parameter in e-coordinates.
    max_height : int, optional
        Truncation height N. Default config.DEFAULT_TRUNCATION.

    Returns
    -------
    GammaTable
        Entry 0 equals 1; every entry is computed from strictly lower shells.

    Raises
    ------
    ValueError
        If N is negative or the table exceeds config.MAX_TABLE_ENTRIES.
    NonGenericSpectral
        If |<mu, mu - 2 lambda>| < GENERICITY_TOL (1 + |mu|^2 + |mu||lambda|) for some mu = 2 nu, 0 < height(nu) <= N.
    """
    if max_height < 0:
        raise ValueError(f"Truncation height must be nonnegative, got {max_height}")
    if max_height > table_limit(rs.rank):
        raise ValueError(f"Truncation height {max_height} exceeds the table limit {table_limit(rs.rank)} for rank {rs.rank} (config.MAX_TABLE_ENTRIES = {config.MAX_TABLE_ENTRIES}).")

    lam = np.asarray(lam, dtype=complex).reshape(rs.rank)
    lam_norm = float(np.linalg.norm(lam))
    rho_m = rho(rs, m)
    mults = m.on_roots(rs)

    points = np.array([p.coords for p in rs.enumerate_cone(max_height)], dtype=np.int64).reshape(-1, rs.rank)
    heights = points.sum(axis=1)
    radix = (max_height + 1) ** np.arange(rs.rank, dtype=np.int64)
    keys = points @ radix
    key_order = np.argsort(keys, kind="stable")

    coeffs = np.zeros(len(points), dtype=complex)
    coeffs[0] = 1.0
    table = GammaTable(rs=rs, m=m, lam=lam, max_height=max_height, points=points, heights=heights, coeffs=coeffs,
                       genericity_margin=np.inf, _sorted_keys=keys[key_order], _key_order=key_order, _radix=radix)

    # running sums S_a[nu] = sum_{n >= 1} Gamma[nu - n sc_a] <2(nu - n sc_a) + rho - lambda, alpha>
    active = [a for a in range(len(mults)) if mults[a] != 0]
    running = np.zeros((len(active), len(points)), dtype=complex)
    bounds = np.searchsorted(heights, np.arange(max_height + 2))
    margin = np.inf

    for h in range(1, max_height + 1):
        start, end = bounds[h], bounds[h + 1]
        nu = points[start:end]
        mu = 2.0 * rs.from_simple_coords(nu.astype(float))
        denom = np.einsum("ij,ij->i", mu, mu - 2.0 * lam)
        mu_norm = np.linalg.norm(mu, axis=1)
        threshold = config.GENERICITY_TOL * (1.0 + mu_norm ** 2 + mu_norm * lam_norm)
        bad = np.abs(denom) < threshold
        if bad.any():
            first = int(np.argmax(bad))
            raise NonGenericSpectral(mu[first], complex(denom[first]))
        margin = min(margin, float(np.abs(denom).min()))

        rhs = np.zeros(end - start, dtype=complex)
        for slot, a in enumerate(active):
            pred = nu - rs.root_simple_coords[a]
            idx = table.lookup(pred)
            valid = idx >= 0
            if not valid.any():
                continue
            pred_idx = idx[valid]
            shifted = 2.0 * rs.from_simple_coords(points[pred_idx].astype(float))
            pairing = (shifted + rho_m - lam) @ rs.positive_roots[a]
            contribution = coeffs[pred_idx] * pairing + running[slot, pred_idx]
            block = running[slot, start:end]
            block[valid] = contribution
            rhs += 2.0 * mults[a] * block
        coeffs[start:end] = rhs / denom

    table.genericity_margin = margin
    if not np.all(np.isfinite(coeffs)):
        raise NonGenericSpectral(np.zeros(rs.rank), complex(np.nan))
    logging.debug(f"Filled Gamma table for m={m}, lambda={lam}, N={max_height}: {len(points)} entries, genericity margin {margin:.3g}")
    return table

def _check_wall(rs: RootSystemBC, x: np.ndarray, min_margin: float) -> float:
    margin = rs.wall_margin(x)
    if margin < min_margin:
        raise WallTooClose(margin, min_margin)
    return margin

def phi(rs: RootSystemBC, m: Multiplicity, lam, x, max_height: int = config.DEFAULT_TRUNCATION, table: GammaTable = None, min_margin: float = config.MIN_WALL_MARGIN) -> SeriesValue:
    """
    Partial sum of the Harish-Chandra series Phi_lambda(m; x).

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity.
    lam : array_like
        Complex spectral parameter.
    x : array_like
        Point of the open positive chamber.
    max_height : int, optional
        Truncation height N.
    table : GammaTable, optional
        Precomputed coefficients; must match (m, lambda) and have height >= N.
    min_margin : float, optional
        Smallest admissible min_k sigma_k(x). Default config.MIN_WALL_MARGIN.

    Returns
    -------
    SeriesValue
        The tail estimate is max(|S_N|, |S_{N-1}|) q / (1 - q) with q = e^{-2 margin}, times the prefactor.

    Raises
    ------
    WallTooClose
        If the wall margin of x is below ``min_margin``.
    NonGenericSpectral
        Propagated from :func:`gamma_table`.
    """
    x = np.asarray(x, dtype=float).reshape(rs.rank)
    lam = np.asarray(lam, dtype=complex).reshape(rs.rank)
    margin = _check_wall(rs, x, min_margin)
    if table is None or table.max_height < max_height:
        table = gamma_table(rs, m, lam, max_height)

    keep = table.heights <= max_height
    decay = np.exp(-2.0 * (table.points[keep] @ rs.simple_values(x)))
    terms = table.coeffs[keep] * decay
    heights = table.heights[keep]
    shells = np.bincount(heights, weights=terms.real, minlength=max_height + 1) + 1j * np.bincount(heights, weights=terms.imag, minlength=max_height + 1)

    prefactor = np.exp(np.dot(lam - rho(rs, m), x))
    q = math.exp(-2.0 * margin)
    last = np.abs(shells[-2:]).max() if max_height > 0 else abs(shells[0])
    tail = float(abs(prefactor) * last * q / (1.0 - q))
    return SeriesValue(value=complex(prefactor * shells.sum()), truncation_height=max_height, tail_estimate=tail,
                       wall_margin=margin, shell_sums=shells)

def orbit_is_free(rs: RootSystemBC, lam, tol: float = config.ORBIT_TOL) -> bool:
    '''True if w lambda != lambda for every w != 1, i.e. <lambda, alpha> != 0 for all roots'''
    lam = np.asarray(lam, dtype=complex)
    scale = tol * (1.0 + np.linalg.norm(lam))
    return bool(np.all(np.abs(rs.positive_roots @ lam) > scale))

def spectral_distance(rs: RootSystemBC, lam, max_height: int = 12) -> float:
    """
    Scaled distance of the Weyl orbit of lambda to the non-generic set.

    Minimum over w in W and mu = 2 nu (0 < height(nu) <= max_height) of
    |<mu, mu - 2 w lambda>| / (1 + |mu|^2 + |mu| |lambda|), the quantity the Gamma table
    divides by. Values of order GENERICITY_TOL or below make the series unusable.
    """
    lam = np.asarray(lam, dtype=complex).reshape(rs.rank)
    points = np.array([p.coords for p in rs.enumerate_cone(max_height)[1:]], dtype=float).reshape(-1, rs.rank)
    mu = 2.0 * np.array([rs.from_simple_coords(p) for p in points])
    mu_norm = np.linalg.norm(mu, axis=1)
    scale = 1.0 + mu_norm ** 2 + mu_norm * np.linalg.norm(lam)
    orbit = rs.weyl_orbit(lam.real) + 1j * rs.weyl_orbit(lam.imag)
    denom = np.einsum("ij,ij->i", mu, mu)[None, :] - 2.0 * orbit @ mu.T
    return float((np.abs(denom) / scale[None, :]).min())

def F_series(rs: RootSystemBC, m: Multiplicity, lam, x, max_height: int = config.DEFAULT_TRUNCATION, tol: float = None) -> SeriesValue:
    """
    Hypergeometric function F_lambda(m; x) as the c-weighted sum of Harish-Chandra series.

    Parameters
    ----------
    rs : RootSystemBC
        Root system.
    m : Multiplicity
        Multiplicity in the regularity set (c(m; rho(m)) finite and nonzero).
    lam : array_like
        Generic complex spectral parameter.
    x : array_like
        Regular point; it is rotated into the positive chamber first (F is W-invariant).
    max_height : int, optional
        Truncation height N, capped at the table limit for the rank.
    tol : float, optional
        If given, N is doubled until the tail estimate is below tol * |F|, or until
        config.MAX_TRUNCATION / the table limit is reached.

    Returns
    -------
    SeriesValue

    Raises
    ------
    NotRegular
        If c is not normalisable at m.
    DegenerateOrbit
        If the Weyl orbit of lambda is not free.
    NonGenericSpectral
        If some Gamma table or c(m; w lambda) is singular.
    WallTooClose
        If x is too close to a wall.
    SeriesCancellation
        If sum |c Phi| / |sum c Phi| exceeds config.MAX_CANCELLATION.
    """
    lam = np.asarray(lam, dtype=complex).reshape(rs.rank)
    x_dom, _ = rs.dominant_representative(x)
    margin = _check_wall(rs, x_dom, config.MIN_WALL_MARGIN)
    if not orbit_is_free(rs, lam):
        raise DegenerateOrbit(f"Weyl orbit of lambda = {lam} is not free; use the ODE engine.")

    limit = table_limit(rs.rank)
    height = min(max_height, limit)
    if height < max_height:
        logging.warning(f"Truncation height {max_height} capped at the table limit {limit} for rank {rs.rank}")

    weights = []
    for w in range(rs.order):
        wlam = rs.weyl_act(w, lam)
        cw = c(rs, m, wlam)
        if cw.pole_flag:
            raise NonGenericSpectral(wlam, complex(np.inf))
        weights.append((wlam, cw))

    while True:
        result = _orbit_sum(rs, m, weights, x_dom, height, margin)
        if tol is None or result.tail_estimate <= tol * abs(result.value) or height >= min(config.MAX_TRUNCATION, limit):
            break
        height = min(2 * height, config.MAX_TRUNCATION, limit)
        logging.info(f"Tail estimate {result.tail_estimate:.3g} above tolerance; doubling truncation height to {height}")
    return result

def _orbit_sum(rs: RootSystemBC, m: Multiplicity, weights: list, x: np.ndarray, height: int, margin: float) -> SeriesValue:
    total = 0j
    absolute = 0.0
    tail = 0.0
    for wlam, cw in weights:
        if cw.zero_flag:
            continue
        series = phi(rs, m, wlam, x, height)
        term = cw.value * series.value
        total += term
        absolute += abs(term)
        tail += abs(cw.value) * series.tail_estimate

    cancellation = absolute / abs(total) if total != 0 else np.inf
    if cancellation > config.MAX_CANCELLATION:
        raise SeriesCancellation(f"Orbit sum lost {math.log10(cancellation):.1f} digits to cancellation (|sum| = {abs(total):.3g}, sum|.| = {absolute:.3g})")
    return SeriesValue(value=complex(total), truncation_height=height, tail_estimate=float(tail), wall_margin=margin, cancellation=float(cancellation))
