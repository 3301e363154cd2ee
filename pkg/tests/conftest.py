import numpy as np
import pytest

from narlift import Graph


@pytest.fixture
def path3():
    """Path 1-2-3 with d(1,2)=1, d(2,3)=2."""
    return Graph(3, [(1, 2), (2, 3)], {(1, 2): 1.0, (2, 3): 2.0})


@pytest.fixture
def path3_plain():
    """Path 1-2-3 without distances."""
    return Graph(3, [(1, 2), (2, 3)])


@pytest.fixture
def k4():
    edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    return Graph(4, edges)


@pytest.fixture
def star4():
    """Center 1, leaves 2..4, unit distances."""
    edges = [(1, 2), (1, 3), (1, 4)]
    return Graph(4, edges, {e: 1.0 for e in edges})


@pytest.fixture
def diamond():
    """1 connected to 3 via 2 (total 4) and via 4 (total 3)."""
    edges = [(1, 2), (2, 3), (1, 4), (4, 3)]
    dists = {(1, 2): 1.0, (2, 3): 3.0, (1, 4): 1.0, (4, 3): 2.0}
    return Graph(4, edges, dists)


def random_geometric_graph(n_nodes, radius, seed):
    """Connect points in the unit square closer than ``radius``; euclidean distances."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n_nodes, 2))
    edges, dists = [], {}
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            d = float(np.hypot(*(pts[i] - pts[j])))
            if d < radius:
                edges.append((i + 1, j + 1))
                dists[(i + 1, j + 1)] = d
    return Graph(n_nodes, edges, dists)


def random_graph(n_nodes, edge_prob, seed, weighted=False):
    rng = np.random.default_rng(seed)
    edges, dists = [], {}
    for i in range(1, n_nodes + 1):
        for j in range(i + 1, n_nodes + 1):
            if rng.random() < edge_prob:
                edges.append((i, j))
                dists[(i, j)] = float(rng.uniform(0.1, 5.0))
    return Graph(n_nodes, edges, dists if weighted else None)


def ring_with_chords(n_nodes, n_chords, seed):
    """Cycle plus random chords: connected, no isolated nodes, and (for small
    chord counts) second-stage neighbourhood structure survives."""
    rng = np.random.default_rng(seed)
    edges = {(i, i + 1) for i in range(1, n_nodes)} | {(1, n_nodes)}
    attempts = 0
    while n_chords > 0 and attempts < 50:
        attempts += 1
        i, j = sorted(rng.integers(1, n_nodes + 1, size=2).tolist())
        if i == j or (i, j) in edges:
            continue
        candidate = edges | {(i, j)}
        g = Graph(n_nodes, candidate)
        if any(g.stage_neighbors(v, 2).members for v in g.nodes):
            edges = candidate
            n_chords -= 1
    dists = {e: float(rng.uniform(0.5, 2.0)) for e in sorted(edges)}
    return Graph(n_nodes, edges, dists)
