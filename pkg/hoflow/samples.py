"""
samples Module
==============

Tabular container for sampled parameter sets and the values computed from them.

Detailed Description
--------------------
The `Samples` class holds one row per sample (multiplicity, deformation, spectral parameter,
point, results) in a pandas DataFrame. It sets up a work directory, writes and reads the table in
one of several storage formats and configures logging for a run. The function
:func:`quasi_random` draws reproducible scrambled Halton points in a box; every check of
:mod:`hoflow.analysis` samples its parameters through it.

Usage
-----
.. code-block:: python

    from hoflow.samples import Samples, quasi_random

    points = quasi_random(box=[(0.0, 3.0), (0.0, 3.0)], n=64, seed=42)
    samples = Samples(df=pd.DataFrame(points, columns=["x1", "x2"]), work_dir="runs/scan")
    samples.save_scores()

Notes
-----
Stored tables are written without the DataFrame index and with a fixed column order, so two runs
with the same seed produce byte-identical files.
"""
# builtins
import os
import zlib
import logging

# dependencies
import numpy as np
import pandas as pd
from scipy.stats import qmc

# custom
from hoflow.multiplicity import Multiplicity

FORMAT_STORAGE_DICT = {
    "json": "to_json",
    "csv": "to_csv",
    "pickle": "to_pickle",
}

class Samples:
    """
    Samples Class
    =============

    DataFrame of sampled parameter sets together with the work directory they are stored in.

    Parameters
    ----------
    df : pandas.DataFrame, optional
        Initial table. An empty DataFrame is used if not given.
    work_dir : str, optional
        Directory for score files, plots and the log file. Created if it does not exist.
    storage_format : str, optional
        One of FORMAT_STORAGE_DICT (default "json").

    Examples
    --------
    >>> samples = Samples(pd.DataFrame({"t": [0.0, 1.0]}))
    >>> len(samples)
    2
    """
    def __init__(self, df: pd.DataFrame = None, work_dir: str = None, storage_format: str = "json"):
        self.df = df if df is not None else pd.DataFrame()
        self.set_storage_format(storage_format)
        self.set_work_dir(work_dir)

    def __iter__(self):
        for _, row in self.df.iterrows():
            yield row.to_dict()

    def __len__(self):
        return len(self.df)

    ############################################# SETUP METHODS #########################################
    def set_storage_format(self, storage_format: str) -> None:
        """
        Sets the format used by :meth:`save_scores`.

        Raises
        ------
        KeyError
            If the format is not in FORMAT_STORAGE_DICT.
        """
        if storage_format.lower() not in FORMAT_STORAGE_DICT:
            raise KeyError(f"Format {storage_format} not available. Format must be one of {list(FORMAT_STORAGE_DICT)}")
        self.storage_format = storage_format.lower()

    def set_work_dir(self, work_dir: str) -> None:
        """
        Sets up the work directory and its ``scores`` and ``plots`` subdirectories.

        Parameters
        ----------
        work_dir : str
            Directory for the run. If None, files go to the current directory.
        """
        def set_dir(dir_name: str, work_dir: str) -> str:
            if work_dir is None:
                return None
            dir_ = os.path.join(work_dir, dir_name)
            os.makedirs(dir_, exist_ok=True)
            return dir_

        if work_dir is not None and not os.path.isdir(work_dir):
            work_dir = os.path.abspath(work_dir)
            os.makedirs(work_dir, exist_ok=True)
            logging.info(f"Creating directory {work_dir}")
        self.work_dir = work_dir
        self.scores_dir = set_dir("scores", work_dir)
        self.plots_dir = set_dir("plots", work_dir)

        scorefile_path = os.path.join(work_dir, os.path.basename(work_dir.rstrip(os.sep))) if work_dir else "./samples"
        self.scorefile = f"{scorefile_path}_scores.{self.storage_format}"

    def set_logger(self) -> None:
        """
        Configures the root logger for a run.

        Messages go to the console and, if a work directory is set, to ``<work_dir>/<name>.log``.
        """
        logging.basicConfig(
            level=logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[logging.StreamHandler()]
        )
        if self.work_dir:
            logfile_path = os.path.join(self.work_dir, f"{os.path.basename(self.work_dir.rstrip(os.sep))}.log")
            file_handler = logging.FileHandler(logfile_path)
            file_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
            logging.getLogger().addHandler(file_handler)
            logging.info(f"Logging to {logfile_path}")

    ############################################ INPUT / OUTPUT #########################################
    def load_scores(self, path: str) -> "Samples":
        '''Replaces the table with the one stored at ``path`` (format from the file extension).'''
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Could not find score file at {path}")
        self.df = get_format(path)(path)
        return self

    def save_scores(self, out_path: str = None, out_format: str = None) -> str:
        """
        Saves the table.

        Parameters
        ----------
        out_path : str, optional
            Destination; defaults to the scorefile of the work directory. The format extension is
            appended if missing.
        out_format : str, optional
            Storage format; defaults to the format set on the instance.

        Returns
        -------
        str
            The path written.
        """
        out_path = out_path or self.scorefile
        out_format = (out_format or self.storage_format).lower()
        if out_format not in FORMAT_STORAGE_DICT:
            raise KeyError(f"Format {out_format} not available. Format must be one of {list(FORMAT_STORAGE_DICT)}")
        if not out_path.endswith(f".{out_format}"):
            out_path += f".{out_format}"

        save_method = getattr(self.df, FORMAT_STORAGE_DICT[out_format])
        if out_format == "csv":
            save_method(out_path, index=False, lineterminator="\n")
        elif out_format == "json":
            save_method(out_path, orient="records", indent=1)
        else:
            save_method(out_path)
        return out_path

def get_format(path: str):
    """
    Returns the pandas reader for a file based on its extension.

    Raises
    ------
    KeyError
        If the extension is not a supported storage format.
    """
    loading_function_dict = {
        "json": lambda p: pd.read_json(p, orient="records"),
        "csv": pd.read_csv,
        "pickle": pd.read_pickle,
    }
    return loading_function_dict[path.split(".")[-1]]

def quasi_random(box, n: int, seed: int = 0, stream: str = None) -> np.ndarray:
    """
    Scrambled Halton points in an axis-aligned box.

    Parameters
    ----------
    box : list of (float, float)
        Lower and upper bound per dimension. Equal bounds pin the coordinate.
    n : int
        Number of points.
    seed : int, optional
        Seed of the scrambling. Identical (seed, stream, box, n) give identical points.
    stream : str, optional
        Name of an independent stream; draws for different quantities of one sample
        (multiplicity, spectral parameter, point) use different streams so that their
        scramblings are not shared.

    Returns
    -------
    numpy.ndarray
        Array of shape (n, len(box)).
    """
    box = np.asarray(box, dtype=float).reshape(-1, 2)
    if n < 0:
        raise ValueError(f"Number of samples must be nonnegative, got {n}")
    if np.any(box[:, 1] < box[:, 0]):
        raise ValueError(f"Lower bounds must not exceed upper bounds: {box.tolist()}")
    if n == 0:
        return np.zeros((0, len(box)))
    rng = np.random.default_rng([int(seed), zlib.crc32(stream.encode())]) if stream else seed
    unit = qmc.Halton(d=len(box), scramble=True, seed=rng).random(n)
    return box[:, 0] + unit * (box[:, 1] - box[:, 0])

def cube(rank: int, low: float, high: float) -> list:
    '''box [low, high]^rank'''
    return [(low, high)] * rank

############################################ MULTIPLICITY SETS ######################################
# each set is the image of the unit cube under a map (a, b, c) -> (m_s, m_m, m_l)
MULTIPLICITY_SAMPLERS = {
    "M+": lambda a, b, c: (4.0 * a, 3.0 * b, 3.0 * c),
    "M+ml1": lambda a, b, c: (4.0 * a, 3.0 * b, 1.0 + 2.0 * c),
    "M0": lambda a, b, c: (-1.5 + 5.5 * a, 3.0 * b, (1.5 - 5.5 * a) + 4.5 * c),
    "M1": lambda a, b, c: (0.3 + 4.7 * a, 0.3 + 2.7 * b, -0.45 * (0.3 + 4.7 * a) + c * (3.0 + 0.45 * (0.3 + 4.7 * a))),
    "M2": lambda a, b, c: (-3.0 * c + a * (4.0 + 3.0 * c), 3.0 * b, 3.0 * c),
    "M3": lambda a, b, c: (0.5 + 5.5 * a, 3.0 * b, -c * (0.5 + 5.5 * a) / 2.0),
    "M3int": lambda a, b, c: (0.5 + 5.5 * a, 0.3 + 2.7 * b, -(0.05 + 0.9 * c) * (0.5 + 5.5 * a) / 2.0),
}

def sample_multiplicities(label: str, rank: int, n: int, seed: int = 0) -> list[Multiplicity]:
    """
    Quasi-random multiplicities from one of the sets of MULTIPLICITY_SAMPLERS.

    ``"M+ml1"`` is M+ restricted to m_l >= 1 and ``"M3int"`` a compact part of the interior of M3.
    In rank one the middle value is dropped.

    Raises
    ------
    KeyError
        If the label is unknown.
    """
    if label not in MULTIPLICITY_SAMPLERS:
        raise KeyError(f"No sampler for multiplicity set {label}. Available: {list(MULTIPLICITY_SAMPLERS)}")
    mapping = MULTIPLICITY_SAMPLERS[label]
    unit = quasi_random(cube(3, 0.0, 1.0), n, seed, stream=f"mult:{label}")
    return [Multiplicity(*mapping(*row), rank=rank) for row in unit]

def sample_union(labels: list[str], rank: int, n: int, seed: int = 0) -> list[tuple[str, Multiplicity]]:
    '''n multiplicities drawn round-robin from the listed sets, each tagged with its set'''
    per_label = {label: sample_multiplicities(label, rank, -(-n // len(labels)), seed) for label in labels}
    return [(labels[i % len(labels)], per_label[labels[i % len(labels)]][i // len(labels)]) for i in range(n)]

def sample_in_hull(vertices: np.ndarray, n: int, seed: int = 0, stream: str = "hull") -> np.ndarray:
    """
    Random convex combinations of the rows of ``vertices``.

    The weights are normalised exponential spacings of Halton points, which makes them
    uniformly distributed on the simplex.
    """
    vertices = np.asarray(vertices, dtype=float)
    unit = quasi_random(cube(len(vertices), 1e-12, 1.0), n, seed, stream=stream)
    weights = -np.log(unit)
    weights /= weights.sum(axis=1, keepdims=True)
    return weights @ vertices
