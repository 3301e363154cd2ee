"""Sample autocorrelation, cross-correlation and partial autocorrelation.

Estimators use the standard biased (divide-by-length) covariance
normalisation. Missing values are handled by pairwise-complete deletion with
the pair count adjusted per lag; the white-noise band is +-1.96/sqrt(n) for
n observed points.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import FittedNar

__all__ = [
    "Correlogram",
    "ResidualPanel",
    "acf",
    "ccf",
    "pacf",
    "residual_panel",
    "default_max_lag",
]

BAND_Z = 1.96


@dataclass(frozen=True)
class Correlogram:
    """Correlation values over a range of lags with a white-noise band.

    ``n`` is the number of observed points and ``band`` the +-1.96/sqrt(n)
    level; ``pair_counts`` gives the number of complete pairs per lag.
    """

    lags: np.ndarray
    values: np.ndarray
    n: int
    band: float
    pair_counts: np.ndarray


def default_max_lag(n_times: int) -> int:
    """Standard correlogram depth: 10 * log10(T), capped at T - 1."""
    return max(1, min(int(10 * math.log10(n_times)), n_times - 1))


def _prepare(x) -> tuple[np.ndarray, np.ndarray, int]:
    x = np.asarray(x, dtype=float).reshape(-1)
    obs = np.isfinite(x)
    n_obs = int(obs.sum())
    if n_obs < 2:
        raise ValueError("need at least two observed values")
    centered = np.where(obs, x - x[obs].mean(), 0.0)
    return centered, obs, n_obs


def acf(series, max_lag=None) -> Correlogram:
    """Sample autocorrelation at lags 0..max_lag.

    For a complete series this is the biased estimator
    sum_t (x_t - mean)(x_{t+lag} - mean) / sum_t (x_t - mean)^2; with
    missing cells the sums run over complete pairs and are rescaled by the
    per-lag pair count. Raises ValueError on a constant series.
    """
    x = np.asarray(series, dtype=float).reshape(-1)
    T = len(x)
    L = default_max_lag(T) if max_lag is None else int(max_lag)
    if not 1 <= L < T:
        raise ValueError(f"max_lag must satisfy 1 <= max_lag < {T}, got {L}")
    centered, obs, n_obs = _prepare(x)
    denom = float(centered @ centered)
    if denom == 0:
        raise ValueError("series has zero variance")

    values = np.empty(L + 1)
    counts = np.empty(L + 1, dtype=int)
    values[0] = 1.0
    counts[0] = n_obs
    for lag in range(1, L + 1):
        pairs = obs[: T - lag] & obs[lag:]
        n_pairs = int(pairs.sum())
        counts[lag] = n_pairs
        if n_pairs == 0:
            values[lag] = np.nan
            continue
        num = float(centered[: T - lag] @ centered[lag:])
        values[lag] = (num / denom) * ((T - lag) * n_obs) / (T * n_pairs)
    return Correlogram(lags=np.arange(L + 1), values=values, n=n_obs,
                       band=BAND_Z / math.sqrt(n_obs), pair_counts=counts)


def ccf(x, y, max_lag=None) -> Correlogram:
    """Sample cross-correlation of x against y at lags -max_lag..max_lag.

    The value at lag l estimates corr(x_t, y_{t+l}), so
    ccf(x, y) at lag l equals ccf(y, x) at lag -l.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise ValueError(f"series lengths differ: {len(x)} vs {len(y)}")
    T = len(x)
    L = default_max_lag(T) if max_lag is None else int(max_lag)
    if not 1 <= L < T:
        raise ValueError(f"max_lag must satisfy 1 <= max_lag < {T}, got {L}")
    cx, obs_x, n_x = _prepare(x)
    cy, obs_y, n_y = _prepare(y)
    sx2 = float(cx @ cx) / n_x
    sy2 = float(cy @ cy) / n_y
    if sx2 == 0 or sy2 == 0:
        raise ValueError("series has zero variance")
    scale = math.sqrt(sx2 * sy2)

    lags = np.arange(-L, L + 1)
    values = np.empty(len(lags))
    counts = np.empty(len(lags), dtype=int)
    for k, lag in enumerate(lags):
        if lag >= 0:
            a, b, pa, pb = cx[: T - lag], cy[lag:], obs_x[: T - lag], obs_y[lag:]
        else:
            a, b, pa, pb = cx[-lag:], cy[: T + lag], obs_x[-lag:], obs_y[: T + lag]
        pairs = pa & pb
        n_pairs = int(pairs.sum())
        counts[k] = n_pairs
        if n_pairs == 0:
            values[k] = np.nan
            continue
        cov = (float(a @ b) / n_pairs) * (T - abs(lag)) / T
        values[k] = cov / scale
    return Correlogram(lags=lags, values=values, n=min(n_x, n_y),
                       band=BAND_Z / math.sqrt(min(n_x, n_y)), pair_counts=counts)


def pacf(series, max_lag=None) -> Correlogram:
    """Partial autocorrelations at lags 1..max_lag via the Durbin-Levinson recursion."""
    x = np.asarray(series, dtype=float).reshape(-1)
    T = len(x)
    L = default_max_lag(T) if max_lag is None else int(max_lag)
    sample = acf(x, L)
    r = sample.values

    phi_prev = np.zeros(L + 1)
    out = np.empty(L)
    phi_prev[1] = r[1]
    out[0] = r[1]
    for ell in range(2, L + 1):
        num = r[ell] - phi_prev[1:ell] @ r[ell - 1:0:-1]
        den = 1.0 - phi_prev[1:ell] @ r[1:ell]
        phi_ll = num / den if den != 0 else np.nan
        phi = phi_prev.copy()
        phi[ell] = phi_ll
        phi[1:ell] = phi_prev[1:ell] - phi_ll * phi_prev[ell - 1:0:-1]
        phi_prev = phi
        out[ell - 1] = phi_ll
    return Correlogram(lags=np.arange(1, L + 1), values=out, n=sample.n,
                       band=sample.band, pair_counts=sample.pair_counts[1:])


@dataclass(frozen=True)
class ResidualPanel:
    """Residual traces and correlograms for a selection of nodes."""

    nodes: tuple[str, ...]
    residuals: dict[str, np.ndarray]
    acfs: dict[str, Correlogram]
    ccfs: dict[tuple[str, str], Correlogram]
    files: tuple[Path, ...] = ()


def residual_panel(fitted: FittedNar, nodes, max_lag=None, out_dir=None) -> ResidualPanel:
    """Residual series plus auto/cross-correlograms for the selected nodes.

    ``nodes`` are node labels of the fitted series. When ``out_dir`` is
    given, writes the residual traces and the correlogram matrix as SVG
    files along with CSV files mirroring the plotted data.
    """
    labels = tuple(str(n) for n in nodes)
    if not labels:
        raise ValueError("select at least one node")
    known = fitted.node_labels
    indices = {}
    for lab in labels:
        if lab not in known:
            raise ValueError(f"unknown node label {lab!r}; known: {', '.join(known)}")
        indices[lab] = known.index(lab)

    residuals = {lab: fitted.residuals[:, idx].copy() for lab, idx in indices.items()}

    def _degenerate(lags, n):
        values = np.full(len(lags), np.nan)
        if 0 in lags:
            values[list(lags).index(0)] = 1.0
        return Correlogram(lags=np.asarray(lags), values=values, n=n,
                           band=BAND_Z / math.sqrt(max(n, 1)),
                           pair_counts=np.zeros(len(lags), dtype=int))

    # an exact fit leaves zero-variance residuals; report empty correlograms
    # rather than refusing the panel
    acfs, ccfs = {}, {}
    for lab, res in residuals.items():
        L = default_max_lag(len(res)) if max_lag is None else int(max_lag)
        try:
            acfs[lab] = acf(res, max_lag)
        except ValueError:
            acfs[lab] = _degenerate(np.arange(L + 1), int(np.isfinite(res).sum()))
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            L = default_max_lag(len(residuals[a])) if max_lag is None else int(max_lag)
            try:
                ccfs[(a, b)] = ccf(residuals[a], residuals[b], max_lag)
            except ValueError:
                ccfs[(a, b)] = _degenerate(np.arange(-L, L + 1),
                                           int(np.isfinite(residuals[a]).sum()))

    files: list[Path] = []
    if out_dir is not None:
        from . import plotting

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        traces_svg = out_dir / "residual_traces.svg"
        panel_svg = out_dir / "residual_correlograms.svg"
        plotting.save_traces(traces_svg, residuals, ylabel="residual")
        plotting.save_correlogram_panel(panel_svg, labels, acfs, ccfs)
        files.extend([traces_svg, panel_svg])

        res_csv = out_dir / "residuals.csv"
        with res_csv.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", *labels])
            first_t = fitted.spec.p + 1
            for k in range(fitted.residuals.shape[0]):
                row = [str(first_t + k)]
                for lab in labels:
                    v = residuals[lab][k]
                    row.append("NA" if not np.isfinite(v) else repr(float(v)))
                writer.writerow(row)
        files.append(res_csv)
        corr_csv = out_dir / "correlograms.csv"
        with corr_csv.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pair", "lag", "value", "band"])
            for lab, cg in acfs.items():
                for lag, val in zip(cg.lags, cg.values):
                    writer.writerow([f"{lab}:{lab}", int(lag), repr(float(val)), repr(cg.band)])
            for (a, b), cg in ccfs.items():
                for lag, val in zip(cg.lags, cg.values):
                    writer.writerow([f"{a}:{b}", int(lag), repr(float(val)), repr(cg.band)])
        files.append(corr_csv)

    return ResidualPanel(nodes=labels, residuals=residuals, acfs=acfs, ccfs=ccfs,
                         files=tuple(files))
