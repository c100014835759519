"""Figure rendering for report directories.

Each function takes a result object and a destination path and saves one
PNG.  Rendering is presentation only: nothing here feeds back into the
numeric outputs, and the CLI skips this module entirely when figures are
turned off.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analytic import GrowthCurve
from .experiments import BinnedCounts, CorrelationMatrix, RemovalSweep, SweepResult

plt.rcParams.update(
    {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 150,
        "savefig.bbox": "tight",
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
    }
)


def _finite(xs, ys):
    pairs = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def sweep_figure(result: SweepResult, path: str) -> str:
    """Simulated mean (with spread) against both model predictions."""
    x = [p.axis_value for p in result.points]
    mean = [p.sim_mean for p in result.points]
    std = [p.sim_std for p in result.points]
    fig, ax = plt.subplots()
    ax.errorbar(x, mean, yerr=std, marker="o", capsize=3, label="simulated")
    rx, ry = _finite(x, [p.pred_recurrence for p in result.points])
    if rx:
        ax.plot(rx, ry, marker="s", linestyle="--", label="recurrence saturation")
    cx, cy = _finite(x, [p.pred_closed_form for p in result.points])
    if cx:
        ax.plot(cx, cy, marker="^", linestyle=":", label="closed form")
    top = max(mean + ry + cy) if (ry or cy) else max(mean)
    if top > 0 and top / max(min(mean), 1e-9) > 50:
        ax.set_yscale("log")
    ax.set_xlabel(
        "target mean degree" if result.axis == "avg_degree" else "nodes"
    )
    if result.axis == "n_nodes":
        ax.set_xscale("log")
    ax.set_ylabel("effective diameter (steps)")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
    return path


def removal_figure(sweep: RemovalSweep, path: str) -> str:
    """The three diameters against the removed-node fraction."""
    x = [r.fraction for r in sweep.rows]
    fig, ax = plt.subplots()
    for label, values in (
        ("effective", [r.effective for r in sweep.rows]),
        ("tau", [r.tau for r in sweep.rows]),
        ("peak", [r.peak for r in sweep.rows]),
    ):
        xs = [xi for xi, v in zip(x, values) if v is not None]
        ys = [v for v in values if v is not None]
        if xs:
            ax.plot(xs, ys, marker="o", label=label)
    ax.set_yscale("log")
    ax.set_xlabel("removed fraction")
    ax.set_ylabel("diameter (steps)")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
    return path


def histogram_figure(bins: BinnedCounts, path: str, xlabel: str) -> str:
    """Log-log binned counts; empty histograms render an annotated blank."""
    fig, ax = plt.subplots()
    keep = bins.counts > 0
    if keep.any():
        ax.loglog(bins.lower[keep], bins.counts[keep], marker="o")
    else:
        ax.text(0.5, 0.5, "no data", ha="center", va="center", transform=ax.transAxes)
    ax.set_xlabel(f"{xlabel} (steps, log2 bins)")
    ax.set_ylabel("count")
    fig.savefig(path)
    plt.close(fig)
    return path


def correlation_figure(corr: CorrelationMatrix, path: str) -> str:
    """Heatmap of the Pearson matrix; undefined cells stay blank."""
    k = len(corr.variables)
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    shown = np.ma.masked_invalid(corr.matrix)
    image = ax.imshow(shown, vmin=-1.0, vmax=1.0, cmap="RdBu_r")
    ax.set_xticks(range(k), corr.variables, rotation=45, ha="right")
    ax.set_yticks(range(k), corr.variables)
    for i in range(k):
        for j in range(k):
            value = corr.matrix[i, j]
            text = "--" if math.isnan(value) else f"{value:.2f}"
            ax.text(j, i, text, ha="center", va="center", fontsize=7)
    ax.grid(False)
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.savefig(path)
    plt.close(fig)
    return path


def growth_figure(curve: GrowthCurve, sim_counts: np.ndarray, path: str) -> str:
    """Modelled cumulative growth next to a simulated trace's cumulative."""
    fig, ax = plt.subplots()
    sim_cum = np.cumsum(sim_counts)
    ax.plot(range(len(sim_cum)), sim_cum, label="simulated cumulative")
    ax.plot(
        range(len(curve.per_step_cumulative)),
        curve.per_step_cumulative,
        linestyle="--",
        label="modelled cumulative",
    )
    ax.set_xlabel("step")
    ax.set_ylabel("nodes reached (beyond source)")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
    return path
