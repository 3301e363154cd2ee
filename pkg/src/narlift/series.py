"""Network time series container, value transforms, and file formats.

A series is a T x K matrix of node values bound to a graph (or to one graph
per time point when the network itself changes). Node dropout is carried as
an explicit missing mask, never as a sentinel value.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import Graph

__all__ = [
    "NetworkTimeSeries",
    "FormatError",
    "log1_transform",
    "population_correct",
    "center_nodes",
    "load_series",
    "save_series",
    "load_graph",
    "save_graph",
    "load_graph_sequence",
    "save_graph_sequence",
    "load_graph_or_sequence",
]

MISSING_TOKEN = "NA"


class FormatError(ValueError):
    """Raised for malformed series or graph files."""


class NetworkTimeSeries:
    """T x K node values over time, bound to a static or per-time graph.

    Parameters
    ----------
    values : array-like, shape (T, K)
        Row = time point t (an integer grid 1..T), column = node. A 1-d
        array is treated as a single-node series. NaN cells are missing.
    graph : Graph or sequence of Graph, optional
        One static graph, or exactly T graphs for a time-varying network.
        All graphs must have K nodes.
    node_labels : sequence of str, optional
        K unique labels; defaults to "1".."K".
    missing : array-like of bool, shape (T, K), optional
        Dropout mask; merged with NaN cells found in ``values``.
    """

    def __init__(self, values, graph=None, node_labels=None, missing=None):
        v = np.array(values, dtype=float, copy=True)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValueError(f"values must be a 2-d matrix, got ndim={v.ndim}")
        n_times, n_nodes = v.shape
        if n_times < 1 or n_nodes < 1:
            raise ValueError("values must have at least one row and one column")

        mask = np.isnan(v)
        if missing is not None:
            m = np.array(missing, dtype=bool, copy=True)
            if m.shape != v.shape:
                raise ValueError(f"missing mask shape {m.shape} != values shape {v.shape}")
            mask |= m
        if not np.isfinite(v[~mask]).all():
            raise ValueError("non-missing values must be finite")
        v[mask] = np.nan

        if node_labels is None:
            labels = tuple(str(k) for k in range(1, n_nodes + 1))
        else:
            labels = tuple(str(lab) for lab in node_labels)
            if len(labels) != n_nodes:
                raise ValueError(f"{len(labels)} labels for {n_nodes} nodes")
            if len(set(labels)) != n_nodes:
                raise ValueError("node labels must be unique")

        if graph is None:
            g = None
        elif isinstance(graph, Graph):
            if graph.node_count != n_nodes:
                raise ValueError(
                    f"graph has {graph.node_count} nodes but values have {n_nodes} columns"
                )
            g = graph
        else:
            seq = tuple(graph)
            if len(seq) != n_times:
                raise ValueError(f"graph sequence length {len(seq)} != {n_times} time points")
            for k, gr in enumerate(seq, start=1):
                if not isinstance(gr, Graph):
                    raise TypeError(f"graph sequence entry {k} is not a Graph")
                if gr.node_count != n_nodes:
                    raise ValueError(f"graph at t={k} has {gr.node_count} nodes, expected {n_nodes}")
            g = seq

        v.setflags(write=False)
        mask.setflags(write=False)
        self._values = v
        self._missing = mask
        self._labels = labels
        self._graph = g

    # -- accessors -----------------------------------------------------------

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def missing(self) -> np.ndarray:
        return self._missing

    @property
    def node_labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def graph(self):
        return self._graph

    @property
    def is_dynamic(self) -> bool:
        return isinstance(self._graph, tuple)

    @property
    def n_times(self) -> int:
        return self._values.shape[0]

    @property
    def n_nodes(self) -> int:
        return self._values.shape[1]

    def graph_at(self, t) -> Graph:
        """Graph in force at time ``t`` (1-based)."""
        if self._graph is None:
            raise ValueError("series has no graph attached")
        if isinstance(self._graph, Graph):
            return self._graph
        t = int(t)
        if not 1 <= t <= self.n_times:
            raise ValueError(f"time {t} out of range 1..{self.n_times}")
        return self._graph[t - 1]

    def label_index(self, label) -> int:
        """1-based node index for a label."""
        try:
            return self._labels.index(str(label)) + 1
        except ValueError:
            raise ValueError(f"unknown node label {label!r}; known: {', '.join(self._labels)}") from None

    def with_graph(self, graph) -> "NetworkTimeSeries":
        return NetworkTimeSeries(self._values, graph=graph, node_labels=self._labels,
                                 missing=self._missing)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NetworkTimeSeries):
            return NotImplemented
        return (
            self._values.shape == other._values.shape
            and np.array_equal(self._values, other._values, equal_nan=True)
            and np.array_equal(self._missing, other._missing)
            and self._labels == other._labels
            and self._graph == other._graph
        )

    def __repr__(self) -> str:
        kind = "dynamic" if self.is_dynamic else ("static" if self._graph else "unbound")
        return f"NetworkTimeSeries(T={self.n_times}, K={self.n_nodes}, {kind} graph)"


# -- transforms ---------------------------------------------------------------


def log1_transform(x: NetworkTimeSeries) -> NetworkTimeSeries:
    """Variance-stabilising transform ``log(1 + value)`` applied cellwise.

    Graph, labels and missing mask are unchanged. Raises ValueError if any
    non-missing value is negative.
    """
    v = x.values
    bad = np.zeros(v.shape, dtype=bool)
    np.less(v, 0.0, out=bad, where=~x.missing)
    if bad.any():
        t, i = np.argwhere(bad)[0]
        raise ValueError(f"negative value {v[t, i]} at t={t + 1}, node {x.node_labels[i]}")
    return NetworkTimeSeries(np.log1p(v), graph=x.graph, node_labels=x.node_labels,
                             missing=x.missing)


def population_correct(x: NetworkTimeSeries, populations) -> NetworkTimeSeries:
    """Divide each node column by its population size."""
    pop = np.asarray(populations, dtype=float).reshape(-1)
    if pop.shape[0] != x.n_nodes:
        raise ValueError(f"{pop.shape[0]} population values for {x.n_nodes} nodes")
    if not (pop > 0).all():
        raise ValueError("population sizes must be strictly positive")
    return NetworkTimeSeries(x.values / pop[None, :], graph=x.graph,
                             node_labels=x.node_labels, missing=x.missing)


def center_nodes(x: NetworkTimeSeries) -> NetworkTimeSeries:
    """Subtract each node's mean over its non-missing values."""
    with np.errstate(invalid="ignore"):
        means = np.nanmean(x.values, axis=0)
    return NetworkTimeSeries(x.values - means[None, :], graph=x.graph,
                             node_labels=x.node_labels, missing=x.missing)


# -- series CSV ----------------------------------------------------------------


def save_series(x: NetworkTimeSeries, path) -> None:
    """Write a series as CSV: header ``t,<labels...>``, one row per time point.

    Missing cells are written as the token ``NA``. Values use full-precision
    decimal text so that ``load_series`` restores them exactly.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", *x.node_labels])
        for t in range(x.n_times):
            row = [str(t + 1)]
            for i in range(x.n_nodes):
                row.append(MISSING_TOKEN if x.missing[t, i] else repr(float(x.values[t, i])))
            writer.writerow(row)


def load_series(path, graph=None) -> NetworkTimeSeries:
    """Read a series CSV written by :func:`save_series`.

    Malformed files raise :class:`FormatError` with line/column diagnostics.
    """
    path = Path(path)
    with path.open("r", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = rows[0]
    if not header or header[0] != "t":
        raise FormatError(f"{path}: line 1: first column of the header must be 't'")
    labels = header[1:]
    if not labels:
        raise FormatError(f"{path}: line 1: no node columns in header")
    if len(set(labels)) != len(labels):
        raise FormatError(f"{path}: line 1: duplicate node labels in header")
    if len(rows) < 2:
        raise FormatError(f"{path}: no data rows")

    n_nodes = len(labels)
    values = np.empty((len(rows) - 1, n_nodes))
    mask = np.zeros_like(values, dtype=bool)
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != n_nodes + 1:
            raise FormatError(
                f"{path}: line {ln}: expected {n_nodes + 1} columns, found {len(row)}"
            )
        try:
            t = int(row[0])
        except ValueError:
            raise FormatError(f"{path}: line {ln}, column 1: time index is not an integer: {row[0]!r}") from None
        if t != ln - 1:
            raise FormatError(f"{path}: line {ln}, column 1: expected t={ln - 1}, found {t}")
        for c, cell in enumerate(row[1:]):
            if cell == MISSING_TOKEN:
                mask[ln - 2, c] = True
                values[ln - 2, c] = np.nan
                continue
            try:
                values[ln - 2, c] = float(cell)
            except ValueError:
                raise FormatError(
                    f"{path}: line {ln}, column {c + 2}: not a number: {cell!r}"
                ) from None
    try:
        return NetworkTimeSeries(values, graph=graph, node_labels=labels, missing=mask)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


# -- graph files ----------------------------------------------------------------


def save_graph(g: Graph, path) -> None:
    """Write a graph as JSON: ``{"nodes": K, "edges": [[i, j(, d)] ...]}``."""
    path = Path(path)
    edges = []
    for i, j in sorted(g.edges):
        if g.has_distances:
            edges.append([i, j, g.distance(i, j)])
        else:
            edges.append([i, j])
    path.write_text(json.dumps({"nodes": g.node_count, "edges": edges}, indent=2) + "\n")


def _read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top-level value must be an object")
    return doc


def load_graph(path) -> Graph:
    """Read a graph JSON file written by :func:`save_graph`."""
    path = Path(path)
    doc = _read_json(path)
    if "nodes" not in doc or "edges" not in doc:
        raise FormatError(f"{path}: graph file needs 'nodes' and 'edges' fields")
    nodes = doc["nodes"]
    edges = doc["edges"]
    if not isinstance(nodes, int):
        raise FormatError(f"{path}: 'nodes' must be an integer, got {nodes!r}")
    if not isinstance(edges, list):
        raise FormatError(f"{path}: 'edges' must be a list")
    arities = {len(e) if isinstance(e, list) else -1 for e in edges}
    if arities - {2, 3}:
        raise FormatError(f"{path}: each edge must be [i, j] or [i, j, distance]")
    if arities == {2, 3}:
        raise FormatError(f"{path}: mix of weighted and unweighted edges")
    pairs = [(e[0], e[1]) for e in edges]
    distances = {(e[0], e[1]): e[2] for e in edges} if arities == {3} else None
    try:
        return Graph(nodes, pairs, distances)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_graph_sequence(graphs: Sequence[Graph], directory, manifest_name="manifest.json") -> Path:
    """Write per-time graph files plus a manifest mapping time -> file.

    Returns the manifest path. File names are ``graph_<t>.json`` relative to
    ``directory``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    times = {}
    for t, g in enumerate(graphs, start=1):
        name = f"graph_{t}.json"
        save_graph(g, directory / name)
        times[str(t)] = name
    manifest = directory / manifest_name
    manifest.write_text(json.dumps({"times": times}, indent=2) + "\n")
    return manifest


def load_graph_sequence(path) -> list[Graph]:
    """Read a manifest ``{"times": {"1": file, ...}}`` into a graph list.

    Paths in the manifest are resolved relative to the manifest file. Times
    must form the contiguous range 1..T.
    """
    path = Path(path)
    doc = _read_json(path)
    if "times" not in doc or not isinstance(doc["times"], dict):
        raise FormatError(f"{path}: manifest needs a 'times' object mapping time -> file")
    entries = {}
    for key, rel in doc["times"].items():
        try:
            t = int(key)
        except ValueError:
            raise FormatError(f"{path}: manifest time key {key!r} is not an integer") from None
        entries[t] = rel
    if not entries:
        raise FormatError(f"{path}: manifest lists no time points")
    expected = set(range(1, max(entries) + 1))
    if set(entries) != expected:
        raise FormatError(f"{path}: manifest times must cover 1..{max(entries)} without gaps")
    graphs = []
    for t in range(1, max(entries) + 1):
        graphs.append(load_graph(path.parent / entries[t]))
    counts = {g.node_count for g in graphs}
    if len(counts) != 1:
        raise FormatError(f"{path}: graphs in a sequence must share the node set, got sizes {sorted(counts)}")
    return graphs


def load_graph_or_sequence(path):
    """Dispatch on file contents: a single graph or a manifest of graphs."""
    doc = _read_json(path)
    if "times" in doc:
        return load_graph_sequence(path)
    return load_graph(path)
