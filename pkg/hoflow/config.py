'''
This module contains the numerical defaults of hoflow.

Every tolerance that decides a verdict (pole, genericity, wall distance,
check slack) lives here so reports can quote it. The number of worker
processes can be overridden with the environment variable HOFLOW_THREADS.
'''
import os

# root systems
DEFAULT_LONG_NORM = 2.0
MAX_RANK = 6

# gamma factors and c-function
LOG_GAMMA_POLE_TOL = 1e-12
POLE_TOL = 1e-10

# Harish-Chandra series
DEFAULT_TRUNCATION = 60
MAX_TRUNCATION = 400
MAX_TABLE_ENTRIES = 5_000_000
GENERICITY_TOL = 1e-8
ORBIT_TOL = 1e-9
MIN_WALL_MARGIN = 0.05
AUTO_SERIES_MARGIN = 0.25
MAX_CANCELLATION = 1e6

# orbit ODE
DEFAULT_TOL = 1e-8
CHECK_TOL = 1e-12
FROBENIUS_ORDER = 12
MIN_STEP = 1e-12
ODE_ATOL = 1e-300  # pure relative error control

# finite differences (step h = FD_REL_STEP * (1 + |x|), one Richardson level)
FD_REL_STEP = 1e-3
SINGULAR_TOL = 1e-6

# analysis
VIOLATION_SLACK = 1e-9
ERROR_FACTOR = 10.0
GRADIENT_TOL = 1e-6
RESIDUAL_TOL = 1e-5
CONJUGATION_TOL = 1e-4
SYMMETRY_TOL = 1e-8
F_SIGMA_TOL = 1e-10
AGREEMENT_TOL = 1e-6
ORACLE_TOL = 1e-7
RHO_POINT_TOL = 1e-8
C_LIMIT_TOL = 1e-3
HULL_BAND = 1e-6
MAX_WITNESSES = 10
SHARP_RATIO_BOUND = 50.0
SHARP_STABILITY = 0.2
SHARP_SPREAD_FROM = 10.0  # start of the spread window on the ray
BLOWUP_FACTOR = 1e3
RAY_TMAX = 40.0
OUTSIDE_MARGIN = 0.05  # relative to |hull vector|
OUTSIDE_MIN_RATE = 0.5  # log(BLOWUP_FACTOR) well below RAY_TMAX * rate
REPORT_SCHEMA_VERSION = "1.0"

# runtime
def resolve_threads(threads: int = None) -> int:
    '''Worker count: explicit value, then HOFLOW_THREADS, then all cores.'''
    if threads:
        return max(1, int(threads))
    env = os.environ.get("HOFLOW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"HOFLOW_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1

THREADS = resolve_threads()
