"""Spatial detrending via one-stage network differencing.

Each node's detail at time t is its value minus a weighted prediction from
its immediate neighbours at the same time point, the graph analogue of
first differencing in time, applied independently per time point. For a
node with a single neighbour the detail is the plain difference with that
neighbour.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .model import neighbor_weights, stage_weight_matrix
from .series import NetworkTimeSeries
from .validation import ensure_series, require_graph

__all__ = [
    "LiftResult",
    "DensityComparison",
    "IsolatedNodeWarning",
    "network_difference",
    "detrend",
    "detrend_summary",
    "NetworkDifferencer",
]


class IsolatedNodeWarning(UserWarning):
    """Some details are undefined because a node had no usable neighbour."""


def _resolve_convention(convention, graph) -> str:
    if convention != "auto":
        return convention
    return "inverse_distance" if graph.has_distances else "uniform"


@dataclass(frozen=True)
class LiftResult:
    """Per-node spatial detail coefficients for every time point.

    ``details`` is T x K; cells are NaN where the input was missing or where
    no neighbour value was available. ``undefined`` lists the (time, node)
    cells of the latter kind. ``weights_used`` holds the per-(time, node)
    prediction weight maps when requested at computation time; they can
    always be recovered through :meth:`weight_map`.
    """

    details: np.ndarray
    convention: str
    undefined: tuple[tuple[int, int], ...]
    weights_used: tuple | None
    source: NetworkTimeSeries = field(repr=False)

    def weight_map(self, t, node) -> dict[int, float]:
        """Prediction weights used for ``node`` at time ``t`` (1-based)."""
        g = self.source.graph_at(t)
        base = neighbor_weights(g, node, 1, self.convention)
        miss = self.source.missing[int(t) - 1]
        present = {q: w for q, w in base.items() if not miss[q - 1]}
        total = sum(present.values())
        if total == 0:
            return {}
        return {q: w / total for q, w in present.items()}


def network_difference(series, convention="auto", keep_weights=False) -> LiftResult:
    """Subtract from each node a weighted combination of its neighbours' values.

    Weights follow the requested convention ("auto" picks inverse distance
    when the graph has distances, uniform otherwise) and are renormalised
    over the neighbours whose values are present at each time point. Nodes
    with no usable neighbour get a NaN detail and are flagged with
    :class:`IsolatedNodeWarning`. With a time-varying graph the operator is
    applied with the graph in force at each time point.
    """
    series = ensure_series(series)
    require_graph(series)
    T, K = series.n_times, series.n_nodes
    conv = _resolve_convention(convention, series.graph_at(1))

    V = series.values
    M = series.missing
    Vz = np.where(M, 0.0, V)
    details = np.empty((T, K))

    if not series.is_dynamic and not M.any():
        W = stage_weight_matrix(series.graph_at(1), 1, conv)
        details[:] = V - Vz @ W.T
        no_neighbor = np.broadcast_to(W.sum(axis=1) == 0, (T, K)).copy()
    else:
        no_neighbor = np.zeros((T, K), dtype=bool)
        cache: dict[int, np.ndarray] = {}
        for t in range(T):
            g = series.graph_at(t + 1)
            W = cache.get(id(g))
            if W is None:
                W = cache[id(g)] = stage_weight_matrix(g, 1, conv)
            Wm = W * (~M[t])[None, :]
            row_sums = Wm.sum(axis=1)
            usable = row_sums > 0
            Wm[usable] /= row_sums[usable, None]
            details[t] = V[t] - Wm @ Vz[t]
            no_neighbor[t] = ~usable
    details[no_neighbor] = np.nan
    details[M] = np.nan

    undefined = tuple(
        (int(t) + 1, int(i) + 1) for t, i in np.argwhere(no_neighbor & ~M)
    )
    if undefined:
        warnings.warn(
            f"{len(undefined)} detail cell(s) undefined: node had no usable neighbour",
            IsolatedNodeWarning,
            stacklevel=2,
        )

    weights = None
    if keep_weights:
        result_tmp = LiftResult(details, conv, undefined, None, series)
        weights = tuple(
            tuple(result_tmp.weight_map(t, i) for i in range(1, K + 1))
            for t in range(1, T + 1)
        )
    return LiftResult(details=details, convention=conv, undefined=undefined,
                      weights_used=weights, source=series)


def detrend(series, convention="auto") -> NetworkTimeSeries:
    """Detail coefficients as a series on the same graph, for further modelling."""
    series = ensure_series(series)
    lifted = network_difference(series, convention)
    return NetworkTimeSeries(lifted.details, graph=series.graph,
                             node_labels=series.node_labels)


@dataclass(frozen=True)
class DensityComparison:
    """Kernel density estimates of pooled raw values versus detail values."""

    grid: np.ndarray
    raw_density: np.ndarray
    detail_density: np.ndarray
    raw_mean_abs: float
    detail_mean_abs: float


def _kde_on_grid(data: np.ndarray, grid: np.ndarray) -> np.ndarray:
    from scipy.stats import gaussian_kde

    if np.ptp(data) == 0:
        # degenerate sample: a point mass rendered as a one-cell spike
        density = np.zeros_like(grid)
        idx = int(np.argmin(np.abs(grid - data[0])))
        step = grid[1] - grid[0] if len(grid) > 1 else 1.0
        density[idx] = 1.0 / step
        return density
    return gaussian_kde(data, bw_method="silverman")(grid)


def detrend_summary(series, lifted: LiftResult, grid_size=512) -> DensityComparison:
    """Compare the distribution of raw values against detail values.

    Uses Gaussian kernel density estimates with Silverman's bandwidth on the
    pooled (finite) raw and detail values over a shared grid, plus the mean
    absolute value of each pool.
    """
    series = ensure_series(series)
    if lifted.details.shape != series.values.shape:
        raise ValueError(
            f"detail shape {lifted.details.shape} != series shape {series.values.shape}"
        )
    raw = series.values[~series.missing].ravel()
    det = lifted.details[np.isfinite(lifted.details)].ravel()
    if raw.size == 0 or det.size == 0:
        raise ValueError("empty input: no finite raw or detail values")

    lo = min(raw.min(), det.min())
    hi = max(raw.max(), det.max())
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    grid = np.linspace(lo - pad, hi + pad, int(grid_size))
    return DensityComparison(
        grid=grid,
        raw_density=_kde_on_grid(raw, grid),
        detail_density=_kde_on_grid(det, grid),
        raw_mean_abs=float(np.mean(np.abs(raw))),
        detail_mean_abs=float(np.mean(np.abs(det))),
    )


class NetworkDifferencer(BaseEstimator, TransformerMixin):
    """Transformer wrapper around :func:`network_difference`.

    ``transform`` accepts a :class:`NetworkTimeSeries` or a (T, K) array
    (then ``graph`` must be set) and returns the T x K detail matrix with
    NaN for undefined cells. The operator is stateless, so ``fit`` only
    validates input.
    """

    def __init__(self, weights="auto", graph=None):
        self.weights = weights
        self.graph = graph

    def fit(self, X, y=None):
        series = ensure_series(X, graph=self.graph)
        require_graph(series)
        return self

    def transform(self, X) -> np.ndarray:
        series = ensure_series(X, graph=self.graph)
        require_graph(series)
        return network_difference(series, self.weights).details
