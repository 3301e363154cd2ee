"""Network autoregressive models: model classes, least-squares fitting, forecasts.

The model of temporal order p regresses each node's value on its own last p
values and, per lag j, on weighted sums over neighbour stages up to s_j:

    value[i, t] = sum_j ( alpha_j * value[i, t-j]
                          + sum_{r<=s_j} beta_{j,r} * sum_{q in stage_r(i)} w_q(i) * value[q, t-j] )
                  + noise[i, t]

Coefficients are shared across nodes (spatial homogeneity); the weights
w_q(i) sum to one over each stage set and encode distance information.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .graph import Graph
from .series import NetworkTimeSeries
from .validation import broadcast_stages, check_positive_int, ensure_series, require_graph

__all__ = [
    "WEIGHT_CONVENTIONS",
    "NarSpec",
    "NarParams",
    "FittedNar",
    "Design",
    "AnovaTable",
    "RankDeficientError",
    "neighbor_weights",
    "stage_weight_matrix",
    "build_design",
    "fit_nar",
    "forecast",
    "predict_nar",
    "anova",
    "NarModel",
]

#: Recognised neighbour-weight conventions. ``inverse_distance`` weights a
#: neighbour proportionally to 1/d (closer neighbours weigh more);
#: ``distance_proportional`` weights proportionally to d (farther neighbours
#: weigh more); ``uniform`` ignores distances.
WEIGHT_CONVENTIONS = ("inverse_distance", "distance_proportional", "uniform")


class RankDeficientError(ValueError):
    """Least-squares system is singular; carries the collinear column names."""

    def __init__(self, columns, message=None):
        self.columns = tuple(columns)
        super().__init__(
            message
            or "design matrix is rank deficient; collinear columns: " + ", ".join(self.columns)
        )


@dataclass(frozen=True)
class NarSpec:
    """Model order ``p``, neighbourhood order vector ``s`` and weight choices.

    ``s`` has one nonnegative entry per lag: the deepest neighbour stage that
    contributes at that lag (0 = own past value only). With
    ``per_stage_beta`` each (lag, stage) pair gets its own coefficient;
    otherwise stages within a lag share one coefficient.
    """

    p: int
    s: tuple[int, ...]
    weight_convention: str = "inverse_distance"
    per_stage_beta: bool = True

    def __post_init__(self):
        object.__setattr__(self, "p", check_positive_int(self.p, "p"))
        s = tuple(int(v) for v in self.s)
        if len(s) != self.p:
            raise ValueError(f"s has length {len(s)}, expected p={self.p}")
        if any(v < 0 for v in s):
            raise ValueError("entries of s must be nonnegative")
        object.__setattr__(self, "s", s)
        if self.weight_convention not in WEIGHT_CONVENTIONS:
            raise ValueError(
                f"unknown weight convention {self.weight_convention!r}; "
                f"choose from {WEIGHT_CONVENTIONS}"
            )

    @property
    def max_stage(self) -> int:
        return max(self.s)

    @property
    def n_params(self) -> int:
        if self.per_stage_beta:
            return self.p + sum(self.s)
        return self.p + sum(1 for v in self.s if v > 0)

    def beta_lengths(self) -> tuple[int, ...]:
        """Number of neighbour coefficients per lag."""
        if self.per_stage_beta:
            return self.s
        return tuple(1 if v > 0 else 0 for v in self.s)

    def label(self) -> str:
        if self.p == 1:
            return f"NAR(1,{self.s[0]})"
        return f"NAR({self.p},[{','.join(str(v) for v in self.s)}])"


@dataclass(frozen=True)
class NarParams:
    """Model coefficients: ``alpha`` per lag, ``beta`` per (lag, stage), noise variance."""

    alpha: tuple[float, ...]
    beta: tuple[tuple[float, ...], ...]
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(tuple(float(b) for b in row) for row in self.beta))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if len(self.beta) != len(self.alpha):
            raise ValueError("beta must have one row per lag")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")

    def matches(self, spec: NarSpec) -> bool:
        if len(self.alpha) != spec.p:
            return False
        return tuple(len(row) for row in self.beta) == spec.beta_lengths()

    def require_match(self, spec: NarSpec) -> None:
        if not self.matches(spec):
            raise ValueError(
                f"parameter dimensions {[len(r) for r in self.beta]} do not match "
                f"spec {spec.label()} (expected beta lengths {spec.beta_lengths()})"
            )


@dataclass(frozen=True)
class Design:
    """Stacked regression problem: one row per retained (time, node) cell."""

    response: np.ndarray
    matrix: np.ndarray
    rows: tuple[tuple[int, int], ...]
    columns: tuple[str, ...]


@dataclass(frozen=True)
class FittedNar:
    """Least-squares fit: coefficients, residual matrix and fit summary.

    ``residuals`` has one row per time point p+1..T and one column per node;
    cells that never entered the regression (missing data, restricted
    sample) are NaN. ``rss`` sums the squared non-NaN entries.
    """

    spec: NarSpec
    params: NarParams
    residuals: np.ndarray
    rss: float
    n_obs: int
    node_labels: tuple[str, ...]
    columns: tuple[str, ...]
    rows: tuple[tuple[int, int], ...] = field(repr=False)


@dataclass(frozen=True)
class AnovaTable:
    """Residual-sum-of-squares comparison across fitted models."""

    entries: tuple[tuple[str, float], ...]
    n_obs: int

    def to_text(self, precision: int = 3) -> str:
        width = max(len(lab) for lab, _ in self.entries)
        lines = [f"{'Model'.ljust(width)}  Residual Sum of Squares"]
        for lab, rss in self.entries:
            lines.append(f"{lab.ljust(width)}  {rss:.{precision}f}")
        lines.append(f"(n_obs = {self.n_obs})")
        return "\n".join(lines)

    def csv_rows(self, precision: int = 3) -> list[list[str]]:
        out = [["model", "rss"]]
        for lab, rss in self.entries:
            out.append([lab, f"{rss:.{precision}f}"])
        return out


# -- neighbour weights ---------------------------------------------------------


def neighbor_weights(graph: Graph, node, stage=1, convention="inverse_distance") -> dict[int, float]:
    """Normalised prediction weights over the stage-``stage`` neighbours of ``node``.

    Returns an empty mapping when the stage set is empty (the node then
    contributes a zero regressor, which is not an error). Distance-based
    conventions need edge distances; for stage >= 2 the distance to a
    neighbour is the composite route distance of
    :meth:`Graph.stage_distances`.
    """
    if convention not in WEIGHT_CONVENTIONS:
        raise ValueError(f"unknown weight convention {convention!r}")
    members = graph.stage_neighbors(node, stage).members
    if not members:
        return {}
    if convention == "uniform":
        w = 1.0 / len(members)
        return {q: w for q in sorted(members)}
    if not graph.has_distances:
        raise ValueError(f"weight convention {convention!r} requires edge distances")
    if stage == 1:
        dists = {q: graph.distance(node, q) for q in members}
    else:
        dists = graph.stage_distances(node, stage)
    if convention == "inverse_distance":
        raw = {q: 1.0 / d for q, d in dists.items()}
    else:
        raw = dict(dists)
    total = sum(raw.values())
    return {q: raw[q] / total for q in sorted(raw)}


def stage_weight_matrix(graph: Graph, stage, convention="inverse_distance") -> np.ndarray:
    """K x K matrix W with W[i-1, q-1] = weight of neighbour q for node i."""
    n = graph.node_count
    W = np.zeros((n, n))
    for i in graph.nodes:
        for q, w in neighbor_weights(graph, i, stage, convention).items():
            W[i - 1, q - 1] = w
    return W


# -- design matrix ---------------------------------------------------------------


def _column_plan(spec: NarSpec) -> list[tuple[str, int, int]]:
    plan = []
    for j in range(1, spec.p + 1):
        plan.append(("alpha", j, 0))
        sj = spec.s[j - 1]
        if spec.per_stage_beta:
            for r in range(1, sj + 1):
                plan.append(("beta", j, r))
        elif sj >= 1:
            plan.append(("beta_sum", j, sj))
    return plan


def _column_name(item) -> str:
    kind, j, r = item
    if kind == "alpha":
        return f"lag{j}"
    if kind == "beta":
        return f"lag{j}_stage{r}"
    return f"lag{j}_nbhd"


class _WeightCache:
    """Per-call cache of stage weight matrices keyed by graph identity."""

    def __init__(self, convention):
        self.convention = convention
        self._store: dict[tuple[int, int], np.ndarray] = {}

    def get(self, graph: Graph, stage: int) -> np.ndarray:
        key = (id(graph), stage)
        if key not in self._store:
            self._store[key] = stage_weight_matrix(graph, stage, self.convention)
        return self._store[key]


def build_design(series: NetworkTimeSeries, spec: NarSpec, t_start=None, sample=None) -> Design:
    """Assemble the stacked regression for ``spec`` on ``series``.

    Rows correspond to (time, node) cells with t from ``t_start`` (default
    p+1) through T. A row is dropped when its response or any required
    regressor cell is missing. With a time-varying graph, the neighbour
    weights for lag j are taken from the graph in force at time t-j.
    ``sample`` optionally restricts rows to a given set of (t, node) cells.
    """
    require_graph(series)
    T, K = series.n_times, series.n_nodes
    p = spec.p
    t0 = p + 1 if t_start is None else int(t_start)
    if t0 < p + 1:
        raise ValueError(f"t_start must be at least p+1={p + 1}")
    if t0 > T:
        raise ValueError(f"series has {T} time points; need more than {t0 - 1} for order p={p}")

    plan = _column_plan(spec)
    names = tuple(_column_name(it) for it in plan)
    n_t = T - t0 + 1
    V = series.values
    M = series.missing
    Vz = np.where(M, 0.0, V)
    cache = _WeightCache(spec.weight_convention)
    dynamic = series.is_dynamic

    blocks = []
    for kind, j, r in plan:
        lag = slice(t0 - 1 - j, T - j)
        if kind == "alpha":
            blocks.append(V[lag].copy())
            continue
        stages = range(1, r + 1) if kind == "beta_sum" else (r,)
        acc = np.zeros((n_t, K))
        contaminated = np.zeros((n_t, K), dtype=bool)
        if not dynamic:
            g = series.graph_at(1)
            for st in stages:
                W = cache.get(g, st)
                acc += Vz[lag] @ W.T
                contaminated |= (M[lag].astype(float) @ (W.T > 0).astype(float)) > 0
        else:
            for idx in range(n_t):
                tau = t0 + idx - j
                g = series.graph_at(tau)
                for st in stages:
                    W = cache.get(g, st)
                    acc[idx] += W @ Vz[tau - 1]
                    contaminated[idx] |= ((W > 0).astype(float) @ M[tau - 1].astype(float)) > 0
        acc[contaminated] = np.nan
        blocks.append(acc)

    X = np.stack(blocks, axis=2).reshape(n_t * K, len(plan))
    y = V[t0 - 1:T].reshape(-1)
    times = np.repeat(np.arange(t0, T + 1), K)
    nodes = np.tile(np.arange(1, K + 1), n_t)

    keep = np.isfinite(y) & np.isfinite(X).all(axis=1)
    if sample is not None:
        wanted = {(int(t), int(i)) for t, i in sample}
        keep &= np.fromiter(
            ((t, i) in wanted for t, i in zip(times, nodes)), dtype=bool, count=len(times)
        )
    rows = tuple(zip(times[keep].tolist(), nodes[keep].tolist()))
    return Design(response=y[keep], matrix=X[keep], rows=rows, columns=names)


# -- fitting ---------------------------------------------------------------------


def _gram_rank(gram: np.ndarray) -> tuple[int, np.ndarray]:
    """Rank of a Gram matrix via pivoted Cholesky; returns (rank, dropped cols)."""
    from scipy.linalg.lapack import dpstrf

    _, piv, rank, info = dpstrf(gram, lower=1)
    if info < 0:
        raise np.linalg.LinAlgError(f"pivoted Cholesky failed (info={info})")
    return int(rank), np.asarray(piv[rank:], dtype=int) - 1


def fit_nar(series, spec: NarSpec, t_start=None, sample=None) -> FittedNar:
    """Ordinary least-squares fit of ``spec`` on ``series``.

    Solves the normal equations after a pivoted-factorization rank check.
    Raises :class:`RankDeficientError` naming the collinear columns when the
    design is singular, and ValueError when there are no more rows than
    parameters. The noise variance estimate divides the residual sum of
    squares by (rows - parameters).
    """
    series = ensure_series(series)
    design = build_design(series, spec, t_start=t_start, sample=sample)
    n, k = design.matrix.shape
    if n <= k:
        raise ValueError(f"too few observations: {n} usable rows for {k} parameters")
    Z = design.matrix
    gram = Z.T @ Z
    rank, dropped = _gram_rank(gram)
    if rank < k:
        raise RankDeficientError([design.columns[j] for j in sorted(dropped)])
    coef = np.linalg.solve(gram, Z.T @ design.response)
    resid = design.response - Z @ coef
    rss = float(resid @ resid)
    sigma2 = rss / (n - k)

    alpha, beta = _unpack_coefficients(spec, coef)
    params = NarParams(alpha=alpha, beta=beta, sigma2=sigma2)

    res_mat = np.full((series.n_times - spec.p, series.n_nodes), np.nan)
    t_idx = np.fromiter((t for t, _ in design.rows), dtype=int, count=n)
    i_idx = np.fromiter((i for _, i in design.rows), dtype=int, count=n)
    res_mat[t_idx - spec.p - 1, i_idx - 1] = resid
    return FittedNar(
        spec=spec,
        params=params,
        residuals=res_mat,
        rss=rss,
        n_obs=n,
        node_labels=series.node_labels,
        columns=design.columns,
        rows=design.rows,
    )


def _unpack_coefficients(spec: NarSpec, coef: np.ndarray) -> tuple[tuple, tuple]:
    alpha = []
    beta: list[list[float]] = []
    pos = 0
    for kind, j, r in _column_plan(spec):
        if kind == "alpha":
            alpha.append(float(coef[pos]))
            beta.append([])
        else:
            beta[j - 1].append(float(coef[pos]))
        pos += 1
    return tuple(alpha), tuple(tuple(row) for row in beta)


# -- forecasting -----------------------------------------------------------------


def _renormalized_apply(W: np.ndarray, values_zeroed: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Weighted neighbour sums with weights renormalised over present nodes."""
    if not missing.any():
        return W @ values_zeroed
    Wm = W * (~missing)[None, :]
    row_sums = Wm.sum(axis=1)
    nz = row_sums > 0
    Wm[nz] /= row_sums[nz, None]
    return Wm @ values_zeroed


def forecast(spec: NarSpec, params: NarParams, series, horizon) -> np.ndarray:
    """Iterated one-step forecasts with the noise term set to zero.

    Returns a (horizon, K) matrix of predictions for times T+1..T+horizon.
    Missing nodes in the conditioning window contribute zero, with neighbour
    weights renormalised over the nodes that are present. With a time-varying
    graph the last observed graph is carried forward.
    """
    params.require_match(spec)
    horizon = check_positive_int(horizon, "horizon")
    series = ensure_series(series)
    require_graph(series)
    if series.n_times < spec.p:
        raise ValueError(f"series has {series.n_times} time points; need at least p={spec.p}")
    K = series.n_nodes
    g = series.graph_at(series.n_times)
    mats = {r: stage_weight_matrix(g, r, spec.weight_convention)
            for r in range(1, spec.max_stage + 1)}

    window = [series.values[t] for t in range(series.n_times - spec.p, series.n_times)]
    out = np.empty((horizon, K))
    for h in range(horizon):
        x = np.zeros(K)
        for j in range(1, spec.p + 1):
            v = window[-j]
            miss = np.isnan(v)
            vz = np.where(miss, 0.0, v)
            x += params.alpha[j - 1] * vz
            sj = spec.s[j - 1]
            if sj == 0:
                continue
            if spec.per_stage_beta:
                for r in range(1, sj + 1):
                    x += params.beta[j - 1][r - 1] * _renormalized_apply(mats[r], vz, miss)
            else:
                total = np.zeros(K)
                for r in range(1, sj + 1):
                    total += _renormalized_apply(mats[r], vz, miss)
                x += params.beta[j - 1][0] * total
        out[h] = x
        window.append(x)
        window.pop(0)
    return out


def predict_nar(fitted: FittedNar, series, horizon) -> np.ndarray:
    """Forecast ``horizon`` steps ahead from the end of ``series``."""
    return forecast(fitted.spec, fitted.params, series, horizon)


# -- model comparison -------------------------------------------------------------


def anova(fits: Sequence[FittedNar], labels: Iterable[str] | None = None) -> AnovaTable:
    """Residual-sum-of-squares table for fits sharing the same observation rows.

    Fits must come from the same data restricted to identical (time, node)
    cells, otherwise the comparison is meaningless and a ValueError is
    raised. Rows keep the order given.
    """
    fits = list(fits)
    if not fits:
        raise ValueError("no fits to compare")
    base = set(fits[0].rows)
    for f in fits[1:]:
        if set(f.rows) != base:
            raise ValueError(
                "mismatched observation sets: fits use different (time, node) rows; "
                "refit with a common t_start/sample"
            )
    if labels is None:
        labels = [f.spec.label() for f in fits]
    labels = list(labels)
    if len(labels) != len(fits):
        raise ValueError(f"{len(labels)} labels for {len(fits)} fits")
    return AnovaTable(entries=tuple((lab, f.rss) for lab, f in zip(labels, fits)),
                      n_obs=fits[0].n_obs)


# -- sklearn-style estimator --------------------------------------------------------


class NarModel(BaseEstimator):
    """Network autoregressive model with a scikit-learn estimator surface.

    Parameters
    ----------
    p : int
        Autoregressive order.
    s : int or sequence of int
        Neighbourhood order per lag; a scalar is broadcast to every lag.
    weights : str
        One of ``inverse_distance``, ``distance_proportional``, ``uniform``.
    per_stage_beta : bool
        One neighbour coefficient per (lag, stage) when True, one per lag
        otherwise.
    graph : Graph, optional
        Used when ``fit``/``predict`` receive a bare array instead of a
        :class:`NetworkTimeSeries`.

    After ``fit`` the estimated coefficients are available as ``alpha_``,
    ``beta_`` and ``sigma2_``, the residual matrix as ``residuals_`` and the
    full fit object as ``result_``.
    """

    def __init__(self, p=1, s=(1,), weights="inverse_distance", per_stage_beta=True, graph=None):
        self.p = p
        self.s = s
        self.weights = weights
        self.per_stage_beta = per_stage_beta
        self.graph = graph

    def _spec(self) -> NarSpec:
        p = check_positive_int(self.p, "p")
        return NarSpec(p=p, s=broadcast_stages(self.s, p),
                       weight_convention=self.weights, per_stage_beta=self.per_stage_beta)

    def fit(self, X, y=None):
        series = ensure_series(X, graph=self.graph)
        require_graph(series)
        spec = self._spec()
        result = fit_nar(series, spec)
        self.spec_ = spec
        self.result_ = result
        self.series_ = series
        self.alpha_ = np.asarray(result.params.alpha)
        self.beta_ = result.params.beta
        self.sigma2_ = result.params.sigma2
        self.residuals_ = result.residuals
        self.rss_ = result.rss
        self.n_obs_ = result.n_obs
        return self

    def predict(self, X=None, horizon=1) -> np.ndarray:
        if not hasattr(self, "result_"):
            raise ValueError("this NarModel instance is not fitted yet; call fit first")
        series = self.series_ if X is None else ensure_series(X, graph=self.graph)
        return predict_nar(self.result_, series, horizon)
