"""
engines
=======

Consistency checks between the evaluation engines and of the identities they must satisfy.

- :class:`RankOneOracle`: rank-one ODE oracle, Harish-Chandra series and orbit ODE agree.
- :class:`CrossEngine`: series and orbit ODE agree in any rank at generic lambda.
- :class:`CherednikResidual`: T_xi G_lambda = lambda(xi) G_lambda, also for the deformed operators.
- :class:`LaplacianResidual`: L(m) F_lambda = (<lambda, lambda> - <rho, rho>) F_lambda.
- :class:`EllSymmetry`: F_{ell, ell_tilde} = F_{-ell + m_l - 1, ell_tilde}.
- :class:`FSigmaShift`: the ell-dependent part of the potential f_Sigma in closed form.
- :class:`ConjugationIdentity`: delta^{1/2} (L(m) + |rho|^2) delta^{-1/2} = Delta + f_Sigma on a smooth bump.
- :class:`RhoPoint`: F_{rho(m)}(m) = 1 and F_lambda(m; 0) = 1.
- :class:`CatalogIntegrity`: every catalog entry reproduces its deformed triple and its hull vector.

Generic spectral parameters are drawn with an imaginary part that pairs positively with every
simple root and are rejected while :func:`hoflow.hcseries.spectral_distance` is small.
"""
# builtins
import logging

# dependencies
import numpy as np

# custom
from hoflow import config
from hoflow.multiplicity import Multiplicity, Deformation, deform, ell_range, symmetric_ell, rho
from hoflow.evaluator import F_eval, G_ode, cherednik_apply, laplacian_residual
from hoflow.hcseries import F_series, spectral_distance
from hoflow.deformation import F_deformed, deformed_cherednik_apply, deformation_factor, f_sigma, f_sigma_shift, conjugation_residual
from hoflow.rank_one import rank1_oracle
from hoflow.catalog import catalog, check_entry
from hoflow.runners import Check, agreement_row, worst_of
from hoflow.samples import quasi_random, cube, sample_multiplicities, sample_union

MIN_SPECTRAL_DISTANCE = 1e-3

def generic_lambda(rs, real: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    '''real + i * (dominant regular imaginary part), shifted until the spectral distance is acceptable'''
    imag = rs.long_norm / 2.0 * np.cumsum(gaps)
    lam = real + 1j * imag
    for _ in range(10):
        if spectral_distance(rs, lam) >= MIN_SPECTRAL_DISTANCE:
            return lam
        lam = lam + 0.137
    logging.debug(f"Spectral parameter {lam} stays close to the non-generic set")
    return lam

def interior_point(gaps: np.ndarray) -> np.ndarray:
    '''point of the positive chamber with simple values (p/2) * gaps'''
    return np.cumsum(gaps)

class EngineCheck(Check):
    '''Sampling of (m, lambda, x) with generic lambda and x in the positive chamber.'''
    mult_sets: tuple = ("M1",)
    x_gaps: tuple = (0.3, 1.2)

    def sample(self, n: int, seed: int) -> list[dict]:
        rank = self.rs.rank
        mults = sample_union(list(self.mult_sets), rank, n, seed)
        real = quasi_random(cube(rank, -2.0, 2.0), n, seed, stream=f"{self}:lam_re")
        gaps = quasi_random(cube(rank, 0.3, 1.5), n, seed, stream=f"{self}:lam_im")
        xs = quasi_random(cube(rank, *self.x_gaps), n, seed, stream=f"{self}:x")
        return [{"id": i, "m": m.as_tuple(), "set": label, "lam": list(generic_lambda(self.rs, real[i], gaps[i])),
                 "x": list(interior_point(xs[i]))} for i, (label, m) in enumerate(mults)]

    def mult(self, params: dict) -> Multiplicity:
        return Multiplicity(*params["m"], rank=self.rs.rank)

############################################# AGREEMENT #########################################
class RankOneOracle(EngineCheck):
    '''Rank one: oracle, series and ODE on 20 points of [0.2, 3]; the first sample has m = (4, -1).'''
    hypothesis = "rank one; m in M1; lambda generic complex"
    tolerance = config.ORACLE_TOL

    def __init__(self, rank: int = 1, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL):
        if rank != 1:
            logging.debug(f"RankOneOracle ignores rank {rank}")
        super().__init__(1, long_norm, tol)

    def __str__(self):
        return "rank_one_oracle_r1"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        if params:
            params[0]["m"] = (4.0, 0.0, -1.0)
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = params["lam"][0]
        rows = []
        for x in np.linspace(0.2, 3.0, 20):
            oracle = rank1_oracle(m, lam, x, long_norm=self.rs.long_norm, tol=self.tol).value
            series = F_series(self.rs, m, [lam], [x], tol=1e-12).value
            ode = F_eval(self.rs, m, [lam], [x], method="ode", tol=self.tol).value
            rows += [agreement_row(oracle, series), agreement_row(ode, series), agreement_row(oracle, ode)]
        return worst_of(*rows)

class CrossEngine(EngineCheck):
    hypothesis = "m in M1; lambda generic complex; x in the positive chamber"
    tolerance = config.AGREEMENT_TOL

    def __str__(self):
        return f"cross_engine_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        series = F_series(self.rs, m, params["lam"], params["x"], tol=1e-12)
        ode = F_eval(self.rs, m, params["lam"], params["x"], method="ode", tol=self.tol)
        return {**agreement_row(series.value, ode.value), "truncation_height": series.truncation_height}

############################################# RESIDUALS #########################################
class CherednikResidual(EngineCheck):
    """
    |T_xi G - lambda(xi) G| / ((1 + |lambda|) max_w |G(w x)|) for a random unit xi.

    Deformed: the operator is applied in both forms to the deformed G with m in M+,
    m_l >= 1, ell in [ell_min - 1, ell_max] and ell_tilde in [0, 1.5].
    """
    mult_sets = ("M+", "M3")
    tolerance = config.RESIDUAL_TOL

    def __init__(self, rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL, deformed: bool = False):
        super().__init__(rank, long_norm, tol)
        self.deformed = deformed
        if deformed:
            self.mult_sets = ("M+ml1",)
            self.hypothesis = "m in M+, m_l >= 1; ell in [ell_min - 1, ell_max]; ell_tilde in [0, 1.5]; lambda complex"
        else:
            self.hypothesis = "m in M+ or M3; lambda complex; x regular"

    def __str__(self):
        return f"cherednik_residual{'_deformed' if self.deformed else ''}_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        dirs = quasi_random(cube(self.rs.rank, -1.0, 1.0), n, seed, stream=f"{self}:xi")
        shape = quasi_random([(0.0, 1.0), (0.0, 1.5)], n, seed, stream=f"{self}:deform")
        for p, xi, (a, ell_tilde) in zip(params, dirs, shape):
            xi = xi if np.linalg.norm(xi) > 1e-3 else np.ones(self.rs.rank)
            p.update({f"xi{j + 1}": float(v) for j, v in enumerate(xi / np.linalg.norm(xi))})
            # |lambda_j| <= 2
            p["lam"] = list(np.asarray(p["lam"]) / max(1.0, float(np.abs(p["lam"]).max()) / 2.0))
            ell_min, ell_max = ell_range(self.mult(p))
            p["d"] = (ell_min - 1.0 + a * (ell_max - ell_min + 1.0), float(ell_tilde)) if self.deformed else (0.0, 0.0)
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.asarray(params["lam"], dtype=complex)
        x = np.asarray(params["x"])
        xi = np.array([params[f"xi{j + 1}"] for j in range(self.rs.rank)])
        eigenvalue = complex(np.dot(lam, xi))
        if not self.deformed:
            orbit = G_ode(self.rs, m, lam, x, tol=self.tol).orbit_values
            f = lambda y: G_ode(self.rs, m, lam, y, tol=self.tol).value
            scale = (1.0 + float(np.linalg.norm(lam))) * float(np.abs(orbit).max())
            return agreement_row(cherednik_apply(self.rs, m, xi, f, x) - eigenvalue * orbit[0], 0.0, scale=scale)

        d = Deformation(*params["d"])
        deformed = deform(m, d, strict=True)
        orbit = deformation_factor(self.rs, d, x) * G_ode(self.rs, deformed, lam, x, tol=self.tol).orbit_values
        f = lambda y: deformation_factor(self.rs, d, y) * G_ode(self.rs, deformed, lam, y, tol=self.tol).value
        scale = (1.0 + float(np.linalg.norm(lam))) * float(np.abs(orbit).max())
        rows = [agreement_row(deformed_cherednik_apply(self.rs, m, d, xi, f, x, form=form) - eigenvalue * orbit[0], 0.0, scale=scale)
                for form in ("direct", "conjugated")]
        return worst_of(*rows)

class LaplacianResidual(EngineCheck):
    '''Relative residual of the Laplace eigen-equation with step 1e-2, real lambda (F > 0).'''
    hypothesis = "m in M1; lambda real; x regular"
    tolerance = config.RESIDUAL_TOL

    def __str__(self):
        return f"laplacian_residual_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        lam = np.real(np.asarray(params["lam"], dtype=complex))
        residual = laplacian_residual(self.rs, m, lam, params["x"], h=1e-2, tol=self.tol)
        return {"lhs": residual, "rhs": 0.0, "margin": residual, "violation": residual}

############################################# IDENTITIES #########################################
class EllSymmetry(EngineCheck):
    hypothesis = "m in M+; ell in [ell_min - 1, ell_max]; ell_tilde in [0, 1.5]; both deformations in M0"
    mult_sets = ("M+",)
    tolerance = config.SYMMETRY_TOL

    def __str__(self):
        return f"ell_symmetry_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        shape = quasi_random([(0.0, 1.0), (0.0, 1.5)], n, seed, stream=f"{self}:deform")
        for p, (a, ell_tilde) in zip(params, shape):
            ell_min, ell_max = ell_range(self.mult(p))
            p["d"] = (ell_min - 1.0 + a * (ell_max - ell_min + 1.0), float(ell_tilde))
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        d = Deformation(*params["d"])
        partner = Deformation(symmetric_ell(m, d.ell), d.ell_tilde)
        value = F_deformed(self.rs, m, d, params["lam"], params["x"], method="ode", tol=self.tol).value
        mirrored = F_deformed(self.rs, m, partner, params["lam"], params["x"], method="ode", tol=self.tol).value
        return {**agreement_row(value, mirrored), "partner_ell": partner.ell}

class FSigmaShift(EngineCheck):
    '''f_Sigma(m(ell, ell_tilde)) - f_Sigma(m(0, ell_tilde)) against its closed form.'''
    hypothesis = "m in M0; ell, ell_tilde real; x regular"
    mult_sets = ("M0",)
    tolerance = config.F_SIGMA_TOL

    def __str__(self):
        return f"f_sigma_shift_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        params = super().sample(n, seed)
        shape = quasi_random([(-3.0, 3.0), (0.0, 2.0)], n, seed, stream=f"{self}:deform")
        for p, d in zip(params, shape):
            p["d"] = tuple(float(v) for v in d)
        return params

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        d = Deformation(*params["d"])
        x = params["x"]
        full = f_sigma(self.rs, deform(m, d), x)
        base = f_sigma(self.rs, deform(m, Deformation(0.0, d.ell_tilde)), x)
        closed = f_sigma_shift(self.rs, m, d.ell, x)
        return agreement_row(full - base, closed, scale=max(1.0, abs(full) + abs(base)))

class ConjugationIdentity(EngineCheck):
    '''Residual on the Gaussian bump exp(-|y - x|^2 / 2) at x.'''
    hypothesis = "m in M+ or M3; x regular"
    mult_sets = ("M+", "M3")
    tolerance = config.CONJUGATION_TOL

    def __str__(self):
        return f"conjugation_identity_r{self.rs.rank}"

    def evaluate(self, params: dict) -> dict:
        m = self.mult(params)
        center = np.asarray(params["x"]) + 0.1
        bump = lambda y: np.exp(-0.5 * float(np.sum((np.asarray(y) - center) ** 2)))
        residual = conjugation_residual(self.rs, m, bump, params["x"])
        return {"lhs": residual, "rhs": 0.0, "margin": residual, "violation": residual}

class RhoPoint(Check):
    '''F_{rho(m)}(m; x) = 1 on a grid (5^r points up to rank two, 25 quasi-random points above) and at x = 0.'''
    hypothesis = "m in M1"
    tolerance = config.RHO_POINT_TOL

    def __str__(self):
        return f"rho_point_r{self.rs.rank}"

    def sample(self, n: int, seed: int) -> list[dict]:
        return [{"id": i, "m": m.as_tuple()} for i, m in enumerate(sample_multiplicities("M1", self.rs.rank, n, seed))]

    def grid(self, seed: int = 0) -> np.ndarray:
        if self.rs.rank <= 2:
            axis = np.linspace(-2.0, 2.0, 5)
            return np.stack(np.meshgrid(*[axis] * self.rs.rank, indexing="ij"), axis=-1).reshape(-1, self.rs.rank)
        return quasi_random(cube(self.rs.rank, -2.0, 2.0), 25, seed, stream="rho:grid")

    def evaluate(self, params: dict) -> dict:
        m = Multiplicity(*params["m"], rank=self.rs.rank)
        lam = rho(self.rs, m)
        at_zero = F_eval(self.rs, m, lam, np.zeros(self.rs.rank)).value
        rows = [agreement_row(at_zero, 1.0)]
        rows += [agreement_row(F_eval(self.rs, m, lam, x, tol=self.tol).value, 1.0) for x in self.grid()]
        return worst_of(*rows)

class CatalogIntegrity(Check):
    '''Every catalog entry, independent of the check's rank.'''
    hypothesis = "catalog entries"
    tolerance = 0.0

    def __str__(self):
        return "catalog_integrity"

    def sample(self, n: int, seed: int) -> list[dict]:
        return [{"id": i, "entry": e.name, "m": e.base_mult.as_tuple(), "d": e.deform.as_tuple()} for i, e in enumerate(catalog())]

    def evaluate(self, params: dict) -> dict:
        issues = check_entry(catalog()[params["id"]], long_norm=self.rs.long_norm)
        return {"issues": "; ".join(issues), "violation": float(len(issues))}

def engine_checks(rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL) -> list[Check]:
    '''engine checks of one rank; the rank-one oracle is included in rank one only'''
    checks = [
        CrossEngine(rank, long_norm, tol),
        CherednikResidual(rank, long_norm, tol),
        CherednikResidual(rank, long_norm, tol, deformed=True),
        LaplacianResidual(rank, long_norm, tol),
        EllSymmetry(rank, long_norm, tol),
        FSigmaShift(rank, long_norm, tol),
        ConjugationIdentity(rank, long_norm, tol),
        RhoPoint(rank, long_norm, tol),
    ]
    if rank == 1:
        checks.append(RankOneOracle(1, long_norm, tol))
    return checks
