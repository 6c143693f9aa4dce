"""
Plotting Module
===============

Standardized plots of ray scans and ratio profiles.

Both functions take the DataFrames produced by ``hoflow scan`` (:func:`hoflow.analysis.asymptotics.ray_profile`)
and :func:`hoflow.analysis.asymptotics.sharp_ratio` and write PNG files at 300 dpi.

Examples
--------
.. code-block:: python

    from hoflow.utils.plotting import ray_plot

    ray_plot(df, out_path="scan.png")
"""
# dependencies
import logging
import matplotlib
matplotlib.use("Agg")
from matplotlib import pyplot as plt
import pandas as pd
import numpy as np

def ray_plot(df: pd.DataFrame, out_path: str = None, show_fig: bool = False, title: str = "F along the ray", log_scale: bool = True) -> None:
    """
    Plots |F| (and the real part when it changes sign) against t.

    Parameters
    ----------
    df : pandas.DataFrame
        Columns ``t``, ``value_re``, ``value_im``.
    out_path : str, optional
        PNG file to write.
    show_fig : bool, optional
        Show the figure interactively.
    log_scale : bool, optional
        Logarithmic y-axis for |F|.
    """
    if df.empty:
        return logging.info("Nothing can be plotted, the scan is empty.")
    values = df["value_re"].to_numpy() + 1j * df["value_im"].to_numpy()
    fig, ax = plt.subplots(1, 1, figsize=(6, 4))
    ax.set_title(title, size=13)
    ax.set_xlabel("t", size=12)
    ax.set_ylabel("|F|", size=12)
    ax.plot(df["t"], np.abs(values), color="cornflowerblue", lw=2, label="|F|")
    if np.any(df["value_re"] < 0):
        ax.plot(df["t"], df["value_re"], color="black", lw=1, linestyle="--", label="Re F")
        log_scale = False
    if log_scale and np.all(np.abs(values) > 0):
        ax.set_yscale("log")
    ax.legend(fancybox=True, shadow=True)

    if out_path: fig.savefig(out_path, dpi=300, format="png", bbox_inches="tight")
    if show_fig: fig.show()
    plt.close(fig)
    return None

def ratio_plot(df: pd.DataFrame, out_path: str = None, show_fig: bool = False, title: str = "Sharp ratio", reference: float = None) -> None:
    '''Plots the ``ratio`` column against t, with an optional horizontal reference (e.g. c(m; lambda0)).'''
    if df.empty or "ratio" not in df:
        return logging.info("Nothing can be plotted, no ratio column.")
    fig, ax = plt.subplots(1, 1, figsize=(6, 4))
    ax.set_title(title, size=13)
    ax.set_xlabel("t", size=12)
    ax.set_ylabel("ratio", size=12)
    ax.plot(df["t"], df["ratio"], color="cornflowerblue", lw=2)
    if reference is not None:
        ax.axhline(reference, color="black", linestyle="--", lw=1)

    if out_path: fig.savefig(out_path, dpi=300, format="png", bbox_inches="tight")
    if show_fig: fig.show()
    plt.close(fig)
    return None
