"""Closed-form theory for the symmetric two-node VAR(1).

The process couples two nodes through the transition matrix
[[alpha, beta], [beta, alpha]] driven by white noise with variance
sigma2 * I. Everything here is exact: the stationarity region, the
stationary covariance, the cross-correlation between the nodes, and the
lag-one covariances of the raw series versus its spatially differenced
(lifted) version, whose comparison tells when differencing reduces temporal
correlation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Var1Params",
    "Var1Derived",
    "Lag1Covariances",
    "RegionGrid",
    "is_stationary",
    "stationary_covariance",
    "cross_correlation",
    "lag1_covariances",
    "abs_cov_reduction",
    "var1_summary",
    "region_grid",
]


def is_stationary(alpha, beta) -> bool:
    """The eigenvalues alpha+beta and alpha-beta must both lie inside the unit circle."""
    return abs(alpha + beta) < 1 and abs(alpha - beta) < 1


@dataclass(frozen=True)
class Var1Params:
    """Two-node VAR(1) parameters: own-lag alpha, cross-lag beta, noise variance."""

    alpha: float
    beta: float
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be strictly positive")

    @property
    def is_stationary(self) -> bool:
        return is_stationary(self.alpha, self.beta)

    @property
    def transition(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.beta, self.alpha]])


def _require_stationary(alpha, beta) -> None:
    if not is_stationary(alpha, beta):
        raise ValueError(
            f"(alpha, beta)=({alpha}, {beta}) is nonstationary; need "
            "|alpha+beta| < 1 and |alpha-beta| < 1"
        )


def stationary_covariance(params: Var1Params) -> np.ndarray:
    """Stationary covariance sigma2 * (I - Pi^2)^{-1} of the two-node state.

    Pi is the transition matrix; the matrix equals the sum over k of
    sigma2 * Pi^{2k}. Diagonal entries are the node variance, off-diagonal
    the cross-covariance between the nodes.
    """
    a, b, s2 = params.alpha, params.beta, params.sigma2
    _require_stationary(a, b)
    det = (1.0 - (a + b) ** 2) * (1.0 - (a - b) ** 2)
    var = s2 * (1.0 - a * a - b * b) / det
    cov = s2 * 2.0 * a * b / det
    return np.array([[var, cov], [cov, var]])


def cross_correlation(alpha, beta) -> float:
    """Contemporaneous correlation between the two nodes: 2ab / (1 - a^2 - b^2).

    Free of the noise variance.
    """
    _require_stationary(alpha, beta)
    return 2.0 * alpha * beta / (1.0 - alpha * alpha - beta * beta)


@dataclass(frozen=True)
class Lag1Covariances:
    """Lag-one covariances of the raw and lifted (node-differenced) series.

    ``raw`` is cov(X_{i,t}, X_{i,t-1}) = alpha * var + beta * crosscov;
    ``lifted`` is the same for d_t = X_{i,t} - X_{q,t}, equal to
    2 (alpha - beta)(var - crosscov). The ``*_scaled`` fields divide by the
    node variance, giving alpha + beta * rho and 2 (alpha - beta)(1 - rho).
    """

    raw: float
    lifted: float
    raw_scaled: float
    lifted_scaled: float


def lag1_covariances(params: Var1Params) -> Lag1Covariances:
    cov = stationary_covariance(params)
    var, crosscov = cov[0, 0], cov[0, 1]
    rho = cross_correlation(params.alpha, params.beta)
    raw = params.alpha * var + params.beta * crosscov
    lifted = 2.0 * (params.alpha - params.beta) * (var - crosscov)
    return Lag1Covariances(
        raw=raw,
        lifted=lifted,
        raw_scaled=params.alpha + params.beta * rho,
        lifted_scaled=2.0 * (params.alpha - params.beta) * (1.0 - rho),
    )


def abs_cov_reduction(alpha, beta, sigma2=1.0) -> float:
    """|raw lag-1 covariance| - |lifted lag-1 covariance|.

    Positive when spatial differencing reduces the absolute lag-one temporal
    covariance, negative when it increases it.
    """
    c = lag1_covariances(Var1Params(alpha, beta, sigma2))
    return abs(c.raw) - abs(c.lifted)


@dataclass(frozen=True)
class Var1Derived:
    """All stationary second-order quantities for one parameter point."""

    node_variance: float
    cross_covariance: float
    cross_correlation: float
    lag1_raw: float
    lag1_lifted: float
    lag1_raw_scaled: float
    lag1_lifted_scaled: float
    cov_reduction: float


def var1_summary(params: Var1Params) -> Var1Derived:
    cov = stationary_covariance(params)
    lag1 = lag1_covariances(params)
    return Var1Derived(
        node_variance=float(cov[0, 0]),
        cross_covariance=float(cov[0, 1]),
        cross_correlation=cross_correlation(params.alpha, params.beta),
        lag1_raw=lag1.raw,
        lag1_lifted=lag1.lifted,
        lag1_raw_scaled=lag1.raw_scaled,
        lag1_lifted_scaled=lag1.lifted_scaled,
        cov_reduction=abs(lag1.raw) - abs(lag1.lifted),
    )


@dataclass(frozen=True)
class RegionGrid:
    """Grid over the stationarity square in rotated coordinates.

    The horizontal axis is alpha - beta, the vertical axis alpha + beta;
    both run over (-1, 1), which maps the stationary region onto a square.
    2-d arrays are indexed [vertical, horizontal]. ``cov_reduction`` uses
    unit noise variance; its sign is variance-free.
    """

    diff_axis: np.ndarray
    sum_axis: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    rho: np.ndarray
    cov_reduction: np.ndarray

    @property
    def reduction_sign(self) -> np.ndarray:
        return np.sign(self.cov_reduction)

    def csv_rows(self):
        """Rows (header first) flattening the grid for file output."""
        yield ["alpha_minus_beta", "alpha_plus_beta", "alpha", "beta",
               "cross_correlation", "cov_reduction", "reduction_sign"]
        n = len(self.diff_axis)
        for iv in range(n):
            for iu in range(n):
                yield [
                    repr(float(self.diff_axis[iu])),
                    repr(float(self.sum_axis[iv])),
                    repr(float(self.alpha[iv, iu])),
                    repr(float(self.beta[iv, iu])),
                    repr(float(self.rho[iv, iu])),
                    repr(float(self.cov_reduction[iv, iu])),
                    str(int(np.sign(self.cov_reduction[iv, iu]))),
                ]


def region_grid(n, margin=1e-6) -> RegionGrid:
    """Evaluate rho and the covariance reduction on an n x n stationarity grid.

    ``margin`` keeps grid points off the stationarity boundary, where the
    covariance diverges.
    """
    n = int(n)
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    u = np.linspace(-1.0 + margin, 1.0 - margin, n)
    v = np.linspace(-1.0 + margin, 1.0 - margin, n)
    U, V = np.meshgrid(u, v)
    A = (U + V) / 2.0
    B = (V - U) / 2.0

    det = (1.0 - V * V) * (1.0 - U * U)
    var = (1.0 - A * A - B * B) / det
    cov = 2.0 * A * B / det
    rho = 2.0 * A * B / (1.0 - A * A - B * B)
    raw = A * var + B * cov
    lifted = 2.0 * (A - B) * (var - cov)
    return RegionGrid(
        diff_axis=u,
        sum_axis=v,
        alpha=A,
        beta=B,
        rho=rho,
        cov_reduction=np.abs(raw) - np.abs(lifted),
    )
