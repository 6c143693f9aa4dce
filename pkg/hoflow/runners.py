'''
runners module
==============

This module provides the framework every verification check of hoflow is built on.

It includes classes and utility functions to:

- Define the abstract `Check` interface (sampling of parameter sets, evaluation of one set).
- Collect per-sample rows into a `CheckReport` with a verdict.
- Run several checks and store their reports deterministically.

Dependencies:
-------------

- builtins: json, logging, os
- numpy, pandas
- hoflow.samples: Samples
- hoflow.jobstarters: JobStarter

Overview:
---------

A check samples its parameter sets from seeded quasi-random boxes (:mod:`hoflow.samples`), fans
the evaluation out through a `JobStarter` and merges the rows in sample order. Every row carries
a ``violation`` (0 when the tested statement holds within the numerical error of the engines); the
check passes iff the worst violation is at most its tolerance. Evaluations that raise a
:class:`hoflow.errors.HoflowError` are kept as rows with an infinite violation, and so are
rows whose violation is nan.

Notes
-----
Parameter sets are plain dicts with the keys ``id``, ``m`` (triple), ``d`` ((ell, ell_tilde)),
``lam`` (complex list) and ``x`` (real list), plus check-specific scalar keys. They are flattened
into the fixed report columns by :func:`flatten_params`.
'''
# builtins
import os
import json
import logging
import functools
from dataclasses import dataclass, field

# dependencies
import numpy as np
import pandas as pd

# custom
from hoflow import config
from hoflow.errors import HoflowError
from hoflow.rootsys import RootSystemBC
from hoflow.samples import Samples
from hoflow.jobstarters import JobStarter, default_jobstarter

PARAM_KEYS = ("id", "m", "d", "lam", "x")

@dataclass
class CheckReport:
    '''
    Outcome of one check.

    ``passed`` is True iff ``worst_violation <= tolerance``. ``heuristic`` marks checks whose
    thresholds are engineering choices rather than proved constants.
    '''
    check_name: str
    hypothesis_set: str
    samples_tried: int
    worst_violation: float
    witnesses: list
    passed: bool
    tolerance: float
    heuristic: bool = False
    errors: int = 0
    rows: pd.DataFrame = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "hypothesis_set": self.hypothesis_set,
            "samples_tried": self.samples_tried,
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "heuristic": self.heuristic,
            "errors": self.errors,
            "witnesses": self.witnesses,
        }

def flatten_params(params: dict) -> dict:
    """
    Flattens a parameter dict into report columns.

    Examples
    --------
    >>> flatten_params({"id": 0, "m": (4, 0, 3), "d": (0, 0), "lam": [2.5], "x": [1.0]})["lambda_re1"]
    2.5
    """
    m = params.get("m") or (np.nan, np.nan, np.nan)
    d = params.get("d") or (0.0, 0.0)
    row = {"id": params.get("id"), "m_s": m[0], "m_m": m[1], "m_l": m[2], "ell": d[0], "ellTilde": d[1]}
    lam = np.asarray(params.get("lam", []), dtype=complex)
    row.update({f"lambda_re{j + 1}": float(v.real) for j, v in enumerate(lam)})
    row.update({f"lambda_im{j + 1}": float(v.imag) for j, v in enumerate(lam)})
    row.update({f"x{j + 1}": float(v) for j, v in enumerate(params.get("x", []))})
    for key, value in params.items():
        if key not in PARAM_KEYS and np.isscalar(value):
            row[key] = value
    return row

def positive_part(value: float) -> float:
    '''max(0, value), with nan (an engine that under- or overflowed) mapped to an infinite violation'''
    value = float(value)
    if np.isnan(value):
        return float("inf")
    return max(0.0, value)

def inequality_row(lhs: float, rhs: float, err_lhs: float = 0.0, err_rhs: float = 0.0) -> dict:
    """
    Row entries for a claimed inequality lhs <= rhs.

    The margin is lhs - rhs reduced by ERROR_FACTOR times the engines' error estimates; the
    violation is the positive part of the margin relative to |rhs|. A nan side or a non-finite
    error estimate gives an infinite violation.
    """
    if not np.all(np.isfinite([err_lhs, err_rhs])):
        margin = float("inf")
    else:
        margin = lhs - rhs - config.ERROR_FACTOR * (err_lhs + err_rhs)
    scale = max(abs(rhs), np.finfo(float).tiny) if np.isfinite(rhs) else 1.0
    return {"lhs": float(lhs), "rhs": float(rhs), "margin": float(margin), "violation": positive_part(margin / scale)}

def agreement_row(value: complex, reference: complex, scale: float = None) -> dict:
    '''Row entries for value == reference; the violation is |value - reference| / scale (default |reference|), inf if not finite.'''
    scale = abs(reference) if scale is None else scale
    diff = abs(value - reference)
    violation = diff / max(scale, np.finfo(float).tiny) if np.isfinite(diff) else float("inf")
    return {"lhs": float(abs(value)), "rhs": float(abs(reference)), "margin": float(diff), "violation": positive_part(violation)}

def worst_of(*rows: dict) -> dict:
    '''the row with the largest violation'''
    return max(rows, key=lambda row: row["violation"])

class Check:
    """
    Check Class
    ===========

    Abstract base for executable checks of a proved statement or an engine identity.

    To create a check, subclass `Check` and implement:

    >>> class MyCheck(Check):
    >>>     hypothesis = "m in M+"
    >>>     def __str__(self):
    >>>         return "my_check"
    >>>     def sample(self, n, seed):
    >>>         ...
    >>>     def evaluate(self, params):
    >>>         ...

    Parameters
    ----------
    rank : int, optional
        Rank of the root system the check samples on.
    long_norm : float, optional
        Norm of the long roots.
    tol : float, optional
        Integration tolerance of the engines.

    Notes
    -----
    Instances must be picklable: they are sent to worker processes by LocalJobStarter.
    """
    hypothesis: str = ""
    tolerance: float = config.VIOLATION_SLACK
    heuristic: bool = False

    def __init__(self, rank: int = 2, long_norm: float = config.DEFAULT_LONG_NORM, tol: float = config.CHECK_TOL):
        self.rs = RootSystemBC(rank, long_norm)
        self.tol = tol

    def __str__(self):
        raise NotImplementedError("Your Check needs a name! Set in your Check class: 'def __str__(self): return \"check_name\"'")

    def sample(self, n: int, seed: int) -> list[dict]:
        '''Returns ``n`` parameter dicts drawn reproducibly from ``seed``.'''
        raise NotImplementedError(f"Check {self} has no sample() method.")

    def evaluate(self, params: dict) -> dict:
        '''Evaluates one parameter set; returns a dict with at least ``violation``.'''
        raise NotImplementedError(f"Check {self} has no evaluate() method.")

    def run(self, n: int = 200, seed: int = 0, jobstarter: JobStarter = None) -> CheckReport:
        """
        Samples, evaluates and reports.

        Parameters
        ----------
        n : int, optional
            Number of parameter sets.
        seed : int, optional
            Seed of the quasi-random sampling.
        jobstarter : JobStarter, optional
            Executes the evaluations. Defaults to a LocalJobStarter sized by HOFLOW_THREADS.

        Returns
        -------
        CheckReport
        """
        jobstarter = jobstarter or default_jobstarter()
        params = self.sample(n, seed)
        rows = jobstarter.start(functools.partial(_safe_evaluate, self), params, str(self))
        return self.report(params, rows)

    def report(self, params: list[dict], rows: list[dict]) -> CheckReport:
        '''Merges parameter sets and evaluated rows into a CheckReport.'''
        records = [{**flatten_params(p), **row} for p, row in zip(params, rows)]
        df = pd.DataFrame(records)
        if df.empty:
            worst = 0.0
        else:
            df["violation"] = df["violation"].astype(float).fillna(np.inf)
            worst = float(df["violation"].max())
        failing = df[df["violation"] > self.tolerance] if not df.empty else df
        witnesses = failing.sort_values("violation", ascending=False, kind="stable").head(config.MAX_WITNESSES)
        errors = int(df["error"].notna().sum()) if "error" in df else 0
        passed = worst <= self.tolerance
        log = logging.info if passed else logging.warning
        log(f"Check {self}: {len(df)} samples, worst violation {worst:.3g} (tolerance {self.tolerance:g}), {'passed' if passed else 'FAILED'}")
        return CheckReport(
            check_name=str(self),
            hypothesis_set=self.hypothesis,
            samples_tried=len(df),
            worst_violation=worst,
            witnesses=[json_safe(rec) for rec in witnesses.to_dict(orient="records")],
            passed=passed,
            tolerance=self.tolerance,
            heuristic=self.heuristic,
            errors=errors,
            rows=df
        )

def _safe_evaluate(check: Check, params: dict) -> dict:
    try:
        return check.evaluate(params)
    except HoflowError as exc:
        logging.warning(f"Check {check}: sample {params.get('id')} raised {type(exc).__name__}: {exc}")
        return {"violation": float("inf"), "error": f"{type(exc).__name__}: {exc}"}

def json_safe(value):
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return json_safe(value.tolist())
    return value

def run_checks(checks: list[Check], n: int = 200, seed: int = 0, jobstarter: JobStarter = None) -> list[CheckReport]:
    '''Runs every check and returns the reports sorted by check name.'''
    jobstarter = jobstarter or default_jobstarter()
    return [check.run(n=n, seed=seed, jobstarter=jobstarter) for check in sorted(checks, key=str)]

def save_reports(reports: list[CheckReport], out_dir: str, out_format: str = "csv") -> str:
    """
    Writes one table per check plus a JSON summary.

    Parameters
    ----------
    reports : list[CheckReport]
        Reports to store.
    out_dir : str
        Output directory (created if missing).
    out_format : str, optional
        Storage format of the per-sample tables, one of hoflow.samples.FORMAT_STORAGE_DICT.

    Returns
    -------
    str
        Path of ``summary.json``.
    """
    os.makedirs(out_dir, exist_ok=True)
    summary = {"schema_version": config.REPORT_SCHEMA_VERSION, "passed": all(r.passed for r in reports), "checks": []}
    for report in sorted(reports, key=lambda r: r.check_name):
        entry = report.to_dict()
        if report.rows is not None:
            entry["rows_file"] = os.path.basename(Samples(df=report.rows).save_scores(os.path.join(out_dir, report.check_name), out_format))
        summary["checks"].append(entry)

    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "w", encoding="UTF-8", newline="\n") as f:
        f.write(json.dumps(json_safe(summary), indent=2))
        f.write("\n")
    logging.info(f"Reports of {len(reports)} checks written to {out_dir}")
    return summary_path
