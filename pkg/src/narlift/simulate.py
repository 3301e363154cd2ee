"""Synthetic trajectories: network autoregressions and the two-node VAR(1)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, pair_graph
from .model import NarParams, NarSpec, stage_weight_matrix
from .series import NetworkTimeSeries

__all__ = [
    "SimConfig",
    "ExplosiveSeriesWarning",
    "simulate_nar",
    "simulate_var1_pair",
    "transition_matrices",
    "companion_spectral_radius",
]


class ExplosiveSeriesWarning(UserWarning):
    """The implied transition system has spectral radius >= 1."""


@dataclass(frozen=True)
class SimConfig:
    """Settings for a forward-recursion simulation.

    ``graph`` is one static graph or a length-``n_times`` sequence for a
    time-varying network. The recursion starts from zeros and discards
    ``burn_in`` initial steps; innovations are i.i.d. Gaussian with variance
    ``params.sigma2``.
    """

    spec: NarSpec
    params: NarParams
    graph: Graph | Sequence[Graph]
    n_times: int
    burn_in: int = 500
    seed: int = 0
    innovation: str = "gaussian"

    def __post_init__(self):
        self.params.require_match(self.spec)
        if self.n_times < 1:
            raise ValueError("n_times must be a positive integer")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.innovation != "gaussian":
            raise ValueError(f"unsupported innovation family {self.innovation!r}")

    @property
    def graphs(self) -> tuple[Graph, ...]:
        if isinstance(self.graph, Graph):
            return (self.graph,)
        return tuple(self.graph)


def transition_matrices(spec: NarSpec, params: NarParams, graph: Graph) -> list[np.ndarray]:
    """Per-lag K x K transition matrices implied by the model on ``graph``."""
    params.require_match(spec)
    K = graph.node_count
    mats = []
    for j in range(1, spec.p + 1):
        phi = params.alpha[j - 1] * np.eye(K)
        sj = spec.s[j - 1]
        if spec.per_stage_beta:
            for r in range(1, sj + 1):
                phi += params.beta[j - 1][r - 1] * stage_weight_matrix(graph, r, spec.weight_convention)
        elif sj >= 1:
            acc = np.zeros((K, K))
            for r in range(1, sj + 1):
                acc += stage_weight_matrix(graph, r, spec.weight_convention)
            phi += params.beta[j - 1][0] * acc
        mats.append(phi)
    return mats


def companion_spectral_radius(spec: NarSpec, params: NarParams, graph: Graph) -> float:
    """Spectral radius of the stacked companion matrix; < 1 suggests stability."""
    mats = transition_matrices(spec, params, graph)
    K = graph.node_count
    p = spec.p
    if p == 1:
        return float(np.max(np.abs(np.linalg.eigvals(mats[0]))))
    comp = np.zeros((p * K, p * K))
    comp[:K] = np.hstack(mats)
    comp[K:, : (p - 1) * K] = np.eye((p - 1) * K)
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


def simulate_nar(config: SimConfig) -> NetworkTimeSeries:
    """Simulate a network autoregression by forward recursion.

    The lag-j contribution at time t uses the graph in force at time t-j
    (clamped to the first graph during burn-in). Unstable parameter choices
    are simulated anyway but flagged with :class:`ExplosiveSeriesWarning`.
    Output is reproducible given the seed.
    """
    spec, params = config.spec, config.params
    graphs = config.graphs
    K = graphs[0].node_count
    if not isinstance(config.graph, Graph) and len(graphs) != config.n_times:
        raise ValueError(
            f"graph sequence length {len(graphs)} != n_times {config.n_times}"
        )

    radius = max(
        companion_spectral_radius(spec, params, g) for g in {id(g): g for g in graphs}.values()
    )
    if radius >= 1.0:
        warnings.warn(
            f"companion spectral radius {radius:.4f} >= 1; series may be explosive",
            ExplosiveSeriesWarning,
            stacklevel=2,
        )

    rng = np.random.default_rng(config.seed)
    p = spec.p
    total = config.burn_in + config.n_times
    scale = np.sqrt(params.sigma2)
    eps = rng.normal(0.0, scale, size=(total, K)) if scale > 0 else np.zeros((total, K))

    def graph_for(t_model: int) -> Graph:
        if isinstance(config.graph, Graph):
            return config.graph
        return graphs[max(t_model, 1) - 1]

    cache: dict[tuple[int, int], list[np.ndarray]] = {}

    def mats_for(g: Graph) -> list[np.ndarray]:
        key = (id(g), 0)
        if key not in cache:
            cache[key] = transition_matrices(spec, params, g)
        return cache[key]

    X = np.zeros((p + total, K))
    for m in range(total):
        row = p + m
        t_model = m + 1 - config.burn_in
        x = eps[m].copy()
        for j in range(1, p + 1):
            phi = mats_for(graph_for(t_model - j))[j - 1]
            x += phi @ X[row - j]
        X[row] = x
    return NetworkTimeSeries(X[p + config.burn_in:], graph=config.graph)


def simulate_var1_pair(alpha, beta, sigma2=1.0, n_times=1000, seed=0,
                       allow_nonstationary=False) -> NetworkTimeSeries:
    """Exact two-node first-order vector autoregression.

    The transition matrix couples the nodes symmetrically: each node loads
    ``alpha`` on its own past and ``beta`` on the other node's past, driven
    by bivariate white noise with variance ``sigma2 * I``. For stationary
    parameters (|alpha+beta| < 1 and |alpha-beta| < 1) the initial state is
    drawn from the exact stationary law, so no burn-in is needed; otherwise
    the simulation starts at zero and requires ``allow_nonstationary``.
    """
    from .var1 import Var1Params, stationary_covariance

    alpha, beta, sigma2 = float(alpha), float(beta), float(sigma2)
    n_times = int(n_times)
    if n_times < 1:
        raise ValueError("n_times must be a positive integer")
    stationary = abs(alpha + beta) < 1 and abs(alpha - beta) < 1
    rng = np.random.default_rng(seed)
    if stationary and sigma2 > 0:
        cov = stationary_covariance(Var1Params(alpha, beta, sigma2))
        state = np.linalg.cholesky(cov) @ rng.standard_normal(2)
    elif stationary:
        state = np.zeros(2)
    elif allow_nonstationary:
        state = np.zeros(2)
    else:
        raise ValueError(
            f"(alpha, beta)=({alpha}, {beta}) is nonstationary; need |alpha+beta| < 1 "
            "and |alpha-beta| < 1, or pass allow_nonstationary=True"
        )

    pi1 = np.array([[alpha, beta], [beta, alpha]])
    scale = np.sqrt(sigma2)
    eps = rng.normal(0.0, scale, size=(n_times, 2)) if scale > 0 else np.zeros((n_times, 2))
    out = np.empty((n_times, 2))
    for t in range(n_times):
        state = pi1 @ state + eps[t]
        out[t] = state
    return NetworkTimeSeries(out, graph=pair_graph())
