"""
jobstarters
===========

This module provides the classes that fan work out over local worker processes. JobStarters are
passed to Check objects in their .run() methods (and used by the CLI for scans) to execute one
function over a list of parameter sets in a standardized way.

Overview
--------
Classes
-------
- `JobStarter`: An abstract base class that defines the interface for all jobstarters.
- `LocalJobStarter`: Runs the work in-process (max_cores=1) or on a ``multiprocessing.Pool``.

Usage
-----
.. code-block:: python

    from hoflow.jobstarters import LocalJobStarter

    jobstarter = LocalJobStarter(max_cores=4)
    results = jobstarter.start(func=abs, items=[-1, -2, 3], jobname="abs")

Notes
-----
Results always come back in the order of ``items`` (``Pool.map`` preserves order), so merged
reports are deterministic regardless of the number of workers. The function and the items must
be picklable when more than one core is used.
"""
# builtins
import time
import logging
import itertools
from multiprocessing import Pool
from typing import Callable

# dependencies
import numpy as np

# custom
from hoflow import config

class JobStarter:
    """
    Abstract base class for job starters.

    Parameters
    ----------
    max_cores : int, optional
        The maximum number of worker processes. Default is None.

    Raises
    ------
    NotImplementedError
        If the 'start' method is not implemented in a subclass.
    """
    def __init__(self, max_cores: int = None):
        self.max_cores = max_cores

    def start(self, func: Callable, items: list, jobname: str) -> list:
        """
        Applies ``func`` to every element of ``items``.

        Parameters
        ----------
        func : callable
            Function of one argument.
        items : list
            Arguments.
        jobname : str
            Name of the job (used for logging).

        Returns
        -------
        list
            Results in the order of ``items``.
        """
        raise NotImplementedError("Jobstarter 'start' function was not overwritten!")

    def set_max_cores(self, cores: int) -> None:
        """
        Sets the maximum number of worker processes.

        Parameters
        ----------
        cores : int
            The maximum number of worker processes.
        """
        self.max_cores = int(cores)

class LocalJobStarter(JobStarter):
    """
    JobStarter that runs work on the local machine.

    With ``max_cores == 1`` the items are processed in the calling process, otherwise on a
    ``multiprocessing.Pool`` of ``max_cores`` workers with ``map``.

    Examples
    --------
    >>> LocalJobStarter(max_cores=1).start(func=abs, items=[-1, 2], jobname="test")
    [1, 2]
    """
    def __init__(self, max_cores: int = 1):
        super().__init__()
        self.max_cores = max(1, int(max_cores))

    def start(self, func: Callable, items: list, jobname: str = "job") -> list:
        items = list(items)
        start_time = time.time()
        if self.max_cores == 1 or len(items) <= 1:
            results = [func(item) for item in items]
        else:
            n_workers = min(self.max_cores, len(items))
            chunksize = max(1, len(items) // (4 * n_workers))
            with Pool(processes=n_workers) as pool:
                results = pool.map(func, items, chunksize=chunksize)
        logging.debug(f"Job {jobname}: {len(items)} items on {self.max_cores} core(s) in {round(time.time() - start_time, 2)} s")
        return results

def default_jobstarter(threads: int = None) -> LocalJobStarter:
    '''LocalJobStarter sized by ``threads``, HOFLOW_THREADS or the number of cores'''
    return LocalJobStarter(max_cores=config.resolve_threads(threads))

def split_list(input_list: list, element_length: int = None, n_sublists: int = None) -> list:
    """
    Splits a list into nested sublists with specified lengths or number of sublists.

    Only one of the parameters, `element_length` or `n_sublists`, should be specified at a time.

    Parameters
    ----------
    input_list : list
        The list to be split into sublists.
    element_length : int, optional
        The maximum length of each sublist.
    n_sublists : int, optional
        The desired number of sublists (at most len(input_list)).

    Returns
    -------
    list
        A nested list containing the sublists.

    Raises
    ------
    ValueError
        If both `element_length` and `n_sublists` are specified or if neither is specified.

    Examples
    --------
    >>> split_list([1, 2, 3, 4, 5, 6], element_length=4)
    [[1, 2, 3, 4], [5, 6]]
    >>> split_list([1, 2, 3, 4, 5, 6], n_sublists=3)
    [[1, 2], [3, 4], [5, 6]]
    """
    # safety
    if element_length and n_sublists:
        raise ValueError("Only either element_length or n_sublists can be specified, but not both!")
    if not element_length and not n_sublists:
        raise ValueError("At least one of arguments 'element_length or n_sublists has to be given!")

    # split by index so that items of any type (dicts, tuples) survive unchanged
    if n_sublists:
        split_n = min([n_sublists, len(input_list)])
        return [[input_list[i] for i in chunk] for chunk in np.array_split(np.arange(len(input_list)), int(split_n))]

    result = []
    iterator = iter(input_list)
    while True:
        sublist = list(itertools.islice(iterator, element_length))
        if not sublist:
            break
        result.append(sublist)
    return result
