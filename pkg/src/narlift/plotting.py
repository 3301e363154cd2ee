"""SVG plot emission. All figures are written as text-based SVG files."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

__all__ = [
    "save_traces",
    "save_correlogram_panel",
    "save_density",
    "save_sign_map",
    "save_rho_contour",
]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    return plt


def _stem(ax, correlogram, title):
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.vlines(correlogram.lags, 0.0, correlogram.values, color="steelblue")
    ax.axhline(correlogram.band, color="darkred", linestyle="--", linewidth=0.8)
    ax.axhline(-correlogram.band, color="darkred", linestyle="--", linewidth=0.8)
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("lag", fontsize=8)
    ax.tick_params(labelsize=7)


def save_traces(path, series_by_label: dict, ylabel="value") -> Path:
    """One line plot per labelled series, arranged on a two-column grid."""
    plt = _pyplot()
    labels = list(series_by_label)
    ncols = 2 if len(labels) > 1 else 1
    nrows = math.ceil(len(labels) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.0 * ncols, 2.4 * nrows), squeeze=False)
    for k, lab in enumerate(labels):
        ax = axes[k // ncols][k % ncols]
        y = np.asarray(series_by_label[lab], dtype=float)
        ax.plot(np.arange(1, len(y) + 1), y, linewidth=0.9)
        ax.set_title(str(lab), fontsize=9)
        ax.set_ylabel(ylabel, fontsize=8)
        ax.tick_params(labelsize=7)
    for k in range(len(labels), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def save_correlogram_panel(path, labels, acfs: dict, ccfs: dict) -> Path:
    """Matrix layout: autocorrelograms on the diagonal, cross panels off it.

    For each pair (a, b) the upper panel shows the nonnegative lags of
    ccf(a, b) and the lower panel the nonpositive lags (equivalently
    ccf(b, a) at nonnegative lags).
    """
    plt = _pyplot()
    labels = list(labels)
    n = len(labels)
    fig, axes = plt.subplots(n, n, figsize=(3.2 * n, 2.4 * n), squeeze=False)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            ax = axes[i][j]
            if i == j:
                _stem(ax, acfs[a], a)
                continue
            pair = (a, b) if (a, b) in ccfs else (b, a)
            cg = ccfs[pair]
            # upper triangle: nonnegative lags of the stored pair; lower
            # triangle: the mirrored half
            sel = cg.lags >= 0 if i < j else cg.lags <= 0
            sub = type(cg)(lags=cg.lags[sel], values=cg.values[sel], n=cg.n,
                           band=cg.band, pair_counts=cg.pair_counts[sel])
            _stem(ax, sub, f"{a} & {b}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def save_density(path, comparison, labels=("raw", "detrended")) -> Path:
    """Overlayed density curves: solid for raw values, dashed for details."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(comparison.grid, comparison.raw_density, "-", color="black", label=labels[0])
    ax.plot(comparison.grid, comparison.detail_density, "--", color="black", label=labels[1])
    ax.set_xlabel("value", fontsize=8)
    ax.set_ylabel("density", fontsize=8)
    ax.legend(fontsize=8)
    ax.tick_params(labelsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def save_sign_map(path, grid) -> Path:
    """Two-colour map of where differencing reduces (blue) or increases (red)
    the absolute lag-one covariance, over the rotated stationarity square."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4.6, 4.2))
    extent = (grid.diff_axis[0], grid.diff_axis[-1], grid.sum_axis[0], grid.sum_axis[-1])
    ax.imshow(grid.reduction_sign, origin="lower", extent=extent, cmap="bwr_r",
              vmin=-1, vmax=1, interpolation="nearest", aspect="equal")
    ax.set_xlabel("alpha - beta", fontsize=8)
    ax.set_ylabel("alpha + beta", fontsize=8)
    ax.set_title("sign of |raw| - |lifted| lag-1 covariance", fontsize=9)
    ax.tick_params(labelsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def save_rho_contour(path, grid) -> Path:
    """Contour plot of the two-node cross-correlation over the same square."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    U, V = np.meshgrid(grid.diff_axis, grid.sum_axis)
    filled = ax.contourf(U, V, grid.rho, levels=21, cmap="RdBu_r", vmin=-1, vmax=1)
    ax.contour(U, V, grid.rho, levels=11, colors="black", linewidths=0.4)
    fig.colorbar(filled, ax=ax)
    ax.set_xlabel("alpha - beta", fontsize=8)
    ax.set_ylabel("alpha + beta", fontsize=8)
    ax.set_title("cross-correlation between the two nodes", fontsize=9)
    ax.tick_params(labelsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
