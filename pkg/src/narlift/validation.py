"""Input validation helpers shared by estimators and module functions."""

from __future__ import annotations

import numpy as np

from .series import NetworkTimeSeries

__all__ = ["ensure_series", "require_graph", "check_positive_int", "broadcast_stages"]


def ensure_series(X, graph=None, node_labels=None) -> NetworkTimeSeries:
    """Coerce ``X`` into a :class:`NetworkTimeSeries`.

    Arrays become series bound to ``graph``; an existing series is returned
    as-is, gaining ``graph`` only if it has none.
    """
    if isinstance(X, NetworkTimeSeries):
        if X.graph is None and graph is not None:
            return X.with_graph(graph)
        return X
    return NetworkTimeSeries(np.asarray(X, dtype=float), graph=graph, node_labels=node_labels)


def require_graph(series: NetworkTimeSeries) -> None:
    if series.graph is None:
        raise ValueError("series has no graph attached; bind one with with_graph() or graph=")


def check_positive_int(value, name) -> int:
    v = int(value)
    if v < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return v


def broadcast_stages(s, p) -> tuple[int, ...]:
    """Expand a scalar neighbourhood order to one entry per lag."""
    if np.isscalar(s):
        return (int(s),) * p
    out = tuple(int(v) for v in s)
    if len(out) != p:
        raise ValueError(f"neighbourhood order vector has length {len(out)}, expected {p}")
    return out
