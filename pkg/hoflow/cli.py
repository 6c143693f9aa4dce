'''
Command-line front end of hoflow.

Commands
--------
- ``eval``: F_lambda(m; x), or F_{ell, ell_tilde, lambda}(m; x) with ``--deform``.
- ``classify``: multiplicity sets containing m and (ell_min, ell_max).
- ``cfun``: c(m; lambda) and whether the leading coefficient of the expansion at lambda is nonsingular.
- ``bounded``: boundedness verdict of the hull test.
- ``catalog``: multiplicity data of symmetric spaces and small K-types.
- ``scan``: F along a ray or on quasi-random points of a box.
- ``verify``: runs a suite of checks and stores the reports.

Results go to stdout (or ``--out``), log messages to stderr. Exit codes: 0 success, 1 failed
verification, 2 invalid input or parameters outside the domain, 3 numerical failure. Errors are
printed as JSON objects ``{"error": <type>, "message": <text>, "exit_code": <n>}``.

Examples
--------
.. code-block:: bash

    hoflow eval --rank 2 --mult 2,2,1 --lambda rho --x 0.8,1.7
    hoflow classify --mult 4,1,-1
    hoflow catalog --name "sp(2,1)" --n 1 --format json
    hoflow verify --suite all --samples 200 --seed 42 --out reports
'''
# builtins
import sys
import json
import logging
import argparse
import functools
from dataclasses import dataclass, fields
from typing import Optional

# dependencies
import numpy as np
import pandas as pd

# custom
from hoflow import config
from hoflow.errors import DomainError, NumericalError, Unsupported
from hoflow.rootsys import RootSystemBC
from hoflow.multiplicity import Multiplicity, Deformation, classify, format_labels, ell_range, in_m3_interior, rho, rho_2lt
from hoflow.cfunc import c, b0_nonsingular, is_regular
from hoflow.evaluator import METHODS, F_eval
from hoflow.deformation import F_deformed
from hoflow.catalog import catalog, lookup, check_entry
from hoflow.samples import quasi_random, cube
from hoflow.jobstarters import default_jobstarter
from hoflow.runners import run_checks, save_reports, json_safe
from hoflow.analysis import SUITES, build_suite
from hoflow.analysis.boundedness import is_bounded
from hoflow.analysis.asymptotics import default_direction
from hoflow.utils.utils import parse_complex_tuple, parse_real_tuple, format_complex
from hoflow.utils.plotting import ray_plot

FORMATS = ("text", "json", "csv")
COMMANDS = ("eval", "classify", "cfun", "bounded", "catalog", "scan", "verify")
CSV_SCHEMA_VERSION = "1"

def _floats(text: str) -> tuple:
    return tuple(float(v) for v in parse_real_tuple(text))

def _ints(text: str) -> tuple:
    return tuple(int(v) for v in parse_real_tuple(text))

def _lambda(text: str):
    if text.strip().lower() == "rho":
        return "rho"
    return tuple(complex(v) for v in parse_complex_tuple(text))

def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, complex):
        return format_complex(value, digits=17)
    return repr(value)

_PARSERS = {
    "command": str, "rank": int, "long_norm": float, "mult": _floats, "deform": _floats, "lam": _lambda,
    "x": _floats, "method": str, "trunc": int, "tol": float, "seed": int, "samples": int, "suite": str,
    "ranks": _ints, "name": str, "n": int, "s": int, "case": str, "direction": _floats, "tmax": float,
    "points": int, "box": _floats, "plot": str, "out": str, "format": str, "threads": int,
}

@dataclass
class RunConfig:
    '''
    Parsed command line.

    ``canonical()`` gives a ``key=value;...`` string from which :meth:`from_canonical` rebuilds an
    equal config. ``lam`` is either a tuple of complex numbers or ``"rho"``; ``threads`` None means
    HOFLOW_THREADS or all cores.
    '''
    command: str
    rank: Optional[int] = 2
    long_norm: float = config.DEFAULT_LONG_NORM
    mult: Optional[tuple] = None
    deform: Optional[tuple] = None
    lam: object = None
    x: Optional[tuple] = None
    method: str = "auto"
    trunc: int = config.DEFAULT_TRUNCATION
    tol: float = config.DEFAULT_TOL
    seed: int = 0
    samples: int = 200
    suite: str = "all"
    ranks: tuple = (1, 2)
    name: Optional[str] = None
    n: Optional[int] = None
    s: Optional[int] = None
    case: Optional[str] = None
    direction: Optional[tuple] = None
    tmax: float = config.RAY_TMAX
    points: int = 81
    box: Optional[tuple] = None
    plot: Optional[str] = None
    out: Optional[str] = None
    format: str = "text"
    threads: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command}. Must be one of {COMMANDS}")
        if self.method not in METHODS:
            raise ValueError(f"Unknown method {self.method}. Must be one of {METHODS}")
        if self.format not in FORMATS:
            raise ValueError(f"Unknown output format {self.format}. Must be one of {FORMATS}")
        if self.suite not in SUITES:
            raise ValueError(f"Unknown suite {self.suite}. Must be one of {SUITES}")
        if self.trunc <= 0 or self.tol <= 0:
            raise ValueError(f"Truncation and tolerance must be positive, got trunc={self.trunc}, tol={self.tol}")
        if self.deform is not None and len(self.deform) != 2:
            raise ValueError(f"--deform takes two values ell,ell_tilde, got {self.deform}")
        if self.box is not None and len(self.box) != 2:
            raise ValueError(f"--box takes two values low,high, got {self.box}")

    def canonical(self) -> str:
        return ";".join(f"{f.name}={_format_value(getattr(self, f.name))}" for f in fields(self))

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        kwargs = {}
        for item in text.split(";"):
            key, _, value = item.partition("=")
            if key not in _PARSERS:
                raise ValueError(f"Unknown config key {key!r} in {text!r}")
            kwargs[key] = _PARSERS[key](value) if value != "" else None
        return cls(**kwargs)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        '''converts the raw strings of the argument parser'''
        kwargs = {"command": args.command}
        for key, parser in _PARSERS.items():
            if key == "command":
                continue
            value = getattr(args, key, None)
            if value is None:
                continue
            kwargs[key] = parser(value) if isinstance(value, str) else value
        return cls(**kwargs)

    def root_system(self) -> RootSystemBC:
        return RootSystemBC(self.rank or 2, self.long_norm)

    def multiplicity(self) -> Multiplicity:
        if self.mult is None:
            raise ValueError(f"Command {self.command} needs --mult")
        return Multiplicity.from_values(self.mult, self.rank or 2)

    def deformation(self) -> Optional[Deformation]:
        if self.deform is None:
            return None
        d = Deformation(*self.deform)
        return None if d.is_trivial() else d

    def spectral(self, rs: RootSystemBC, m: Multiplicity) -> np.ndarray:
        '''lambda, with "rho" resolved to rho(m) or, when deformed, rho(m(2 ell_tilde))'''
        if self.lam is None:
            raise ValueError(f"Command {self.command} needs --lambda")
        if self.lam == "rho":
            d = self.deformation()
            return (rho(rs, m) if d is None else rho_2lt(rs, m, d)).astype(complex)
        return np.asarray(self.lam, dtype=complex)

    def point(self, rs: RootSystemBC) -> np.ndarray:
        return np.zeros(rs.rank) if self.x is None else np.asarray(self.x, dtype=float)

############################################# OUTPUT #########################################
def canonical_row(idx: int, m: Multiplicity, d: Optional[Deformation], lam, x, value: complex, method: str, err_est: float) -> dict:
    '''one row in the fixed column order id, m_s, m_m, m_l, ell, ellTilde, lambda_re*, lambda_im*, x*, value_re, value_im, method, err_est'''
    d = d or Deformation()
    lam = np.asarray(lam, dtype=complex)
    row = {"id": idx, "m_s": m.ms, "m_m": m.mm, "m_l": m.ml, "ell": float(d.ell), "ellTilde": float(d.ell_tilde)}
    row.update({f"lambda_re{j + 1}": float(v.real) for j, v in enumerate(lam)})
    row.update({f"lambda_im{j + 1}": float(v.imag) for j, v in enumerate(lam)})
    row.update({f"x{j + 1}": float(v) for j, v in enumerate(x)})
    row.update({"value_re": float(complex(value).real), "value_im": float(complex(value).imag), "method": method, "err_est": float(err_est)})
    return row

def render(cfg: RunConfig, df: pd.DataFrame, text: str = None, payload=None) -> str:
    '''Table (and optional JSON payload / text) rendered in the requested format.'''
    if cfg.format == "csv":
        return df.to_csv(index=False, lineterminator="\n")
    if cfg.format == "json":
        payload = df.to_dict(orient="records") if payload is None else payload
        return json.dumps(json_safe(payload), indent=2) + "\n"
    return (text if text is not None else df.to_string(index=False)) + "\n"

def emit(cfg: RunConfig, output: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="UTF-8", newline="\n") as f:
            f.write(output)
        logging.info(f"Output written to {cfg.out}")
    else:
        sys.stdout.write(output)

def error_object(exc: Exception, exit_code: int) -> str:
    message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
    return json.dumps({"error": type(exc).__name__, "message": str(message), "exit_code": exit_code})

############################################# COMMANDS #########################################
def evaluate_point(rs: RootSystemBC, m: Multiplicity, d: Optional[Deformation], lam, method: str, tol: float, trunc: int, x) -> tuple:
    '''(value, method, error estimate) of F or its deformation at x'''
    if d is None:
        res = F_eval(rs, m, lam, x, method=method, tol=tol, max_height=trunc)
    else:
        res = F_deformed(rs, m, d, lam, x, method=method, tol=tol)
    return res.value, res.method, res.error_estimate

def cmd_eval(cfg: RunConfig) -> int:
    rs = cfg.root_system()
    m = cfg.multiplicity()
    d = cfg.deformation()
    lam = cfg.spectral(rs, m)
    x = cfg.point(rs)
    value, method, err = evaluate_point(rs, m, d, lam, cfg.method, cfg.tol, cfg.trunc, x)
    df = pd.DataFrame([canonical_row(0, m, d, lam, x, value, method, err)])
    emit(cfg, render(cfg, df, text=f"value={format_complex(value)} method={method} err_est={err:.3g}"))
    return 0

def cmd_classify(cfg: RunConfig) -> int:
    rs = cfg.root_system()
    m = cfg.multiplicity()
    labels = format_labels(classify(m))
    ell_min, ell_max = ell_range(m)
    payload = {
        "m": list(m.as_tuple()),
        "rank": m.rank,
        "labels": labels.split(),
        "ell_min": ell_min,
        "ell_max": ell_max,
        "m3_interior": in_m3_interior(m),
        "c_regular": is_regular(rs, m),
    }
    df = pd.DataFrame([{**payload, "labels": labels}])
    emit(cfg, render(cfg, df, text=f"{labels}; ell_range=[{ell_min:g}, {ell_max:g}]", payload=payload))
    return 0

def cmd_cfun(cfg: RunConfig) -> int:
    rs = cfg.root_system()
    m = cfg.multiplicity()
    lam = cfg.spectral(rs, m)
    cval = c(rs, m, lam)
    try:
        b0 = "nonsingular" if b0_nonsingular(rs, m, lam) else "singular"
    except Unsupported as exc:
        logging.info(str(exc))
        b0 = "unsupported"
    row = {"value_re": cval.value.real, "value_im": cval.value.imag, "order": cval.order,
           "zero_flag": cval.zero_flag, "pole_flag": cval.pole_flag, "b0": b0}
    text = f"c={format_complex(cval.value)} order={cval.order} b0={b0}"
    emit(cfg, render(cfg, pd.DataFrame([row]), text=text))
    return 0

def cmd_bounded(cfg: RunConfig) -> int:
    rs = cfg.root_system()
    m = cfg.multiplicity()
    query = is_bounded(rs, m, cfg.spectral(rs, m), cfg.deformation())
    payload = query.to_dict()
    hull = ", ".join(f"{v:g}" for v in query.hull_vector)
    text = f"verdict={query.verdict} hull_vector=({hull}) hypotheses_ok={query.hypotheses_ok}"
    if query.advisory:
        text += f" advisory={query.advisory}"
    df = pd.DataFrame([{k: v for k, v in payload.items() if k not in ("lambda", "hull_vector", "m")}])
    emit(cfg, render(cfg, df, text=text, payload=payload))
    return 0

def cmd_catalog(cfg: RunConfig) -> int:
    if cfg.name:
        entries = [lookup(cfg.name, n=cfg.n, s=cfg.s, case=cfg.case)]
    else:
        entries = [e for e in catalog() if cfg.rank is None or e.rank == cfg.rank]
    records = []
    for entry in entries:
        record = entry.to_dict()
        record["consistent"] = not check_entry(entry, cfg.long_norm)
        records.append(record)
    df = pd.DataFrame(records)
    text_columns = ["name", "rank", "base_mult", "ell", "ell_tilde", "sigma_tau_mult", "rho_coords", "ell_min", "ell_max"]
    text = df[text_columns].to_string(index=False) if not df.empty else "no entries"
    if cfg.format == "csv":
        df = df.astype({col: str for col in ("base_mult", "sigma_tau_mult", "rho_coords", "admissible")})
    emit(cfg, render(cfg, df, text=text, payload=records))
    return 0

def cmd_scan(cfg: RunConfig) -> int:
    rs = cfg.root_system()
    m = cfg.multiplicity()
    d = cfg.deformation()
    lam = cfg.spectral(rs, m)
    if cfg.box is not None:
        points = quasi_random(cube(rs.rank, *cfg.box), cfg.samples, seed=cfg.seed, stream="scan")
        t_grid = None
    else:
        direction = default_direction(rs.rank) if cfg.direction is None else np.asarray(cfg.direction, dtype=float)
        direction = direction / np.linalg.norm(direction)
        t_grid = np.linspace(0.0, cfg.tmax, cfg.points)
        points = cfg.point(rs)[None, :] + t_grid[:, None] * direction[None, :]

    jobstarter = default_jobstarter(cfg.threads)
    func = functools.partial(evaluate_point, rs, m, d, lam, cfg.method, cfg.tol, cfg.trunc)
    results = jobstarter.start(func, list(points), jobname="scan")
    df = pd.DataFrame([canonical_row(i, m, d, lam, x, *res) for i, (x, res) in enumerate(zip(points, results))])
    if t_grid is not None:
        df.insert(1, "t", t_grid)
        if cfg.plot:
            ray_plot(df, out_path=cfg.plot, title=f"F along the ray, m={m}")
    emit(cfg, render(cfg, df))
    return 0

def cmd_verify(cfg: RunConfig) -> int:
    checks = build_suite(cfg.suite, ranks=cfg.ranks, long_norm=cfg.long_norm, tol=config.CHECK_TOL)
    logging.info(f"Running {len(checks)} checks of suite {cfg.suite} with {cfg.samples} samples each (seed {cfg.seed})")
    reports = run_checks(checks, n=cfg.samples, seed=cfg.seed, jobstarter=default_jobstarter(cfg.threads))
    out_dir = cfg.out or "hoflow_reports"
    summary_path = save_reports(reports, out_dir, out_format="json" if cfg.format == "json" else "csv")
    df = pd.DataFrame([{k: v for k, v in r.to_dict().items() if k != "witnesses"} for r in reports])
    failed = [r.check_name for r in reports if not r.passed]
    text = df.to_string(index=False) + f"\n\nsummary: {summary_path}\n" + (f"FAILED: {', '.join(failed)}" if failed else "all checks passed")
    sys.stdout.write(render(cfg, df, text=text))
    return 1 if failed else 0

COMMAND_FUNCTIONS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "cfun": cmd_cfun,
    "bounded": cmd_bounded,
    "catalog": cmd_catalog,
    "scan": cmd_scan,
    "verify": cmd_verify,
}

############################################# PARSER #########################################
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--long-norm", dest="long_norm", type=float, default=None, help="Norm p of the long roots (default 2)")
    common.add_argument("--format", type=str, default=None, choices=FORMATS, help="Output format (default text)")
    common.add_argument("--out", type=str, default=None, help="Output file; output directory for verify")
    common.add_argument("--threads", type=int, default=None, help="Worker processes (default HOFLOW_THREADS or all cores)")
    common.add_argument("--verbose", action="store_true", help="Log debug messages")
    common.add_argument("--quiet", action="store_true", help="Log warnings only")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--rank", type=int, default=None, help="Rank r of the root system BC_r (default 2)")
    params.add_argument("--mult", type=str, default=None, help="Multiplicity m_s,m_m,m_l (m_s,m_l in rank one)")
    params.add_argument("--deform", type=str, default=None, help="Deformation ell,ell_tilde")
    params.add_argument("--lambda", dest="lam", type=str, default=None, help="Spectral parameter, complex entries as a+bi, or 'rho'")
    params.add_argument("--x", type=str, default=None, help="Point x1,...,xr (default 0)")
    params.add_argument("--method", type=str, default=None, choices=METHODS, help="Engine (default auto)")
    params.add_argument("--trunc", type=int, default=None, help="Starting truncation height of the series (default 60)")
    params.add_argument("--tol", type=float, default=None, help="Relative tolerance (default 1e-8)")

    parser = argparse.ArgumentParser(prog="hoflow", description="Heckman-Opdam hypergeometric functions of type BC.", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common, params], help="Evaluate F")
    sub.add_parser("classify", parents=[common, params], help="Classify a multiplicity")
    sub.add_parser("cfun", parents=[common, params], help="Evaluate the c-function")
    sub.add_parser("bounded", parents=[common, params], help="Boundedness verdict")

    cat = sub.add_parser("catalog", parents=[common], help="List or look up catalog entries")
    cat.add_argument("--rank", type=int, default=None, help="Only entries of this rank")
    cat.add_argument("--name", type=str, default=None, help="Group label, e.g. 'SU(2,3)' or 'sp(2,1)'")
    cat.add_argument("--n", type=int, default=None, help="K-type parameter of sp(p,1)")
    cat.add_argument("--s", type=int, default=None, help="K-type parameter of so(2r,1)")
    cat.add_argument("--case", type=str, default=None, choices=("i", "ii"), help="Case of so(p,q)")

    scan = sub.add_parser("scan", parents=[common, params], help="Evaluate F along a ray or in a box")
    scan.add_argument("--direction", type=str, default=None, help="Ray direction (default along (1,...,r))")
    scan.add_argument("--tmax", type=float, default=None, help="Length of the ray (default 40)")
    scan.add_argument("--points", type=int, default=None, help="Points on the ray (default 81)")
    scan.add_argument("--box", type=str, default=None, help="low,high: quasi-random points in [low, high]^r instead of a ray")
    scan.add_argument("--samples", type=int, default=None, help="Points in the box (default 200)")
    scan.add_argument("--seed", type=int, default=None, help="Seed of the box sampling")
    scan.add_argument("--plot", type=str, default=None, help="PNG file for a plot of the ray")

    verify = sub.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument("--suite", type=str, default=None, choices=SUITES, help="Suite to run (default all)")
    verify.add_argument("--ranks", type=str, default=None, help="Ranks to sample (default 1,2)")
    verify.add_argument("--samples", type=int, default=None, help="Samples per check (default 200)")
    verify.add_argument("--seed", type=int, default=None, help="Seed (default 0)")
    return parser

def set_logger(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True
    )

def main(argv: list = None) -> int:
    args = build_parser().parse_args(argv)
    set_logger(args.verbose, args.quiet)
    try:
        cfg = RunConfig.from_args(args)
        if cfg.command == "catalog" and args.rank is None:
            cfg.rank = None
        logging.debug(f"Config: {cfg.canonical()}")
        return COMMAND_FUNCTIONS[cfg.command](cfg)
    except NumericalError as exc:
        logging.error(f"{type(exc).__name__}: {exc}")
        print(error_object(exc, 3))
        return 3
    except (DomainError, ValueError, KeyError) as exc:
        logging.error(f"{type(exc).__name__}: {exc}")
        print(error_object(exc, 2))
        return 2

if __name__ == "__main__":
    sys.exit(main())
