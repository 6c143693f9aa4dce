"""
analysis
========

Executable checks of the estimates, the boundedness criteria, the asymptotics and the engines,
grouped into suites for ``hoflow verify``.

Suites
------
- ``estimates``: pointwise estimates, sharp ratios and leading-coefficient probes.
- ``engines``: agreement of the engines and the identities they satisfy.
- ``hull``: hull test against the vertex oracle and the bounded/unbounded ray probes.
- ``catalog``: consistency of the multiplicity catalog.
- ``all``: everything above.
"""
# custom
from hoflow import config
from hoflow.runners import Check
from hoflow.analysis.boundedness import HullQuery, in_hull, hull_oracle, is_bounded, ray_values, HullOracleAgreement, BoundedInside, UnboundedOutside, HullVectorIdentity
from hoflow.analysis.estimates import estimate_checks, estimate_suite
from hoflow.analysis.asymptotics import sharp_ratio, b0_probe, SharpAsymptotics, LeadingCoefficient
from hoflow.analysis.engines import engine_checks, CatalogIntegrity

SUITES = ("all", "estimates", "engines", "hull", "catalog")

def hull_checks(rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL) -> list[Check]:
    return [
        HullOracleAgreement(rank, long_norm, tol),
        HullVectorIdentity(rank, long_norm, tol),
        BoundedInside(rank, long_norm, tol),
        BoundedInside(rank, long_norm, tol, deformed=True),
        UnboundedOutside(rank, long_norm, tol),
        UnboundedOutside(rank, long_norm, tol, deformed=True),
    ]

def build_suite(name: str, ranks: tuple = (1, 2), long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL) -> list[Check]:
    """
    Instantiates the checks of a suite for every rank.

    Raises
    ------
    KeyError
        If the suite is unknown.
    """
    if name not in SUITES:
        raise KeyError(f"Unknown suite {name}. Must be one of {SUITES}")
    checks = []
    for rank in ranks:
        if name in ("all", "estimates"):
            checks += estimate_checks(rank, long_norm, tol)
            checks += [SharpAsymptotics(rank, long_norm, tol), SharpAsymptotics(rank, long_norm, tol, deformed=True), LeadingCoefficient(rank, long_norm, tol)]
        if name in ("all", "engines"):
            checks += engine_checks(rank, long_norm, tol)
        if name in ("all", "hull"):
            checks += hull_checks(rank, long_norm, tol)
    if name in ("all", "catalog"):
        checks.append(CatalogIntegrity(2, long_norm, tol))
    return sorted(checks, key=str)

__all__ = [
    "SUITES", "build_suite", "hull_checks", "estimate_checks", "estimate_suite", "engine_checks",
    "HullQuery", "in_hull", "hull_oracle", "is_bounded", "ray_values", "sharp_ratio", "b0_probe",
]
