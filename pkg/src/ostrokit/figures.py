"""Figure rendering for the report pipeline.

Takes the delimited outputs (scan tables, invariant series) and draws the
companion figures next to them.  Kept separate from the data-producing
commands, which stay plot-free.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .simulator import GridState, InvariantSeries
from .waves import ScanRow

plt.rcParams.update(
    {
        "figure.figsize": (6.4, 4.4),
        "figure.dpi": 130,
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "savefig.bbox": "tight",
    }
)

REGION_COLORS = {
    "Region1": "#c6dbef",
    "Region2": "#fdd0a2",
    "Region3": "#c7e9c0",
    "Region4": "#fcbba1",
    "C0": "#6a51a3",
    "C1": "#807dba",
    "C2": "#54278f",
    "C3": "#9e9ac8",
    "Origin": "#000000",
}


def plot_region_map(rows: Sequence[ScanRow], path) -> Path:
    """Color map of classified labels over the scanned (p, q) rectangle."""
    ps = sorted({r.p for r in rows})
    qs = sorted({r.q for r in rows})
    index = {lab: i for i, lab in enumerate(REGION_COLORS)}
    grid = np.zeros((len(qs), len(ps)))
    pi = {v: i for i, v in enumerate(ps)}
    qi = {v: i for i, v in enumerate(qs)}
    for r in rows:
        grid[qi[r.q], pi[r.p]] = index[r.label]
    cmap = matplotlib.colors.ListedColormap(list(REGION_COLORS.values()))
    fig, ax = plt.subplots()
    ax.pcolormesh(ps, qs, grid, cmap=cmap, vmin=-0.5,
                  vmax=len(REGION_COLORS) - 0.5, shading="nearest")
    # overlay the bounding curves: p = 0 and q^2 = 4p
    ax.axvline(0.0, color="k", lw=0.8)
    p_hi = max(ps)
    if p_hi > 0:
        pc = np.linspace(0, p_hi, 200)
        ax.plot(pc, 2 * np.sqrt(pc), "k--", lw=0.8)
        ax.plot(pc, -2 * np.sqrt(pc), "k--", lw=0.8)
    ax.set_xlim(min(ps), max(ps))
    ax.set_ylim(min(qs), max(qs))
    ax.set_xlabel("p")
    ax.set_ylabel("q")
    ax.set_title("eigenvalue regions of the traveling-wave linearization")
    handles = [
        plt.Line2D([], [], marker="s", ls="", color=c, label=lab)
        for lab, c in REGION_COLORS.items()
    ]
    ax.legend(handles=handles, fontsize=6, loc="upper left", ncol=3)
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_invariants(series: InvariantSeries, path) -> Path:
    """Semilog drift curves of the three conserved quantities."""
    t = np.asarray(series.t)
    I = np.asarray(series.I)
    P = np.asarray(series.P)
    H = np.asarray(series.H)
    p_scale = abs(P[0]) or 1.0
    h_scale = abs(H[0]) or 1.0
    floor = 1e-17
    fig, ax = plt.subplots()
    ax.semilogy(t, np.maximum(np.abs(I), floor), label="|I|")
    ax.semilogy(t, np.maximum(np.abs(P - P[0]) / p_scale, floor),
                label="|P - P0| / |P0|")
    ax.semilogy(t, np.maximum(np.abs(H - H[0]) / h_scale, floor),
                label="|H - H0| / |H0|")
    ax.set_xlabel("t")
    ax.set_ylabel("drift")
    ax.set_title("conservation drift")
    ax.legend(fontsize=8)
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_profiles(initial: GridState, final: GridState, path) -> Path:
    fig, ax = plt.subplots()
    ax.plot(initial.x, initial.values, label=f"t = {initial.t:g}", lw=1.0)
    ax.plot(final.x, final.values, label=f"t = {final.t:g}", lw=1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("field profiles")
    ax.legend(fontsize=8)
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
