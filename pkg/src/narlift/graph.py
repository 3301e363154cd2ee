"""Undirected graphs with staged neighbourhood structure.

Nodes are labelled 1..K. Edges are unordered pairs of distinct nodes and may
carry strictly positive distances. Graphs are immutable after construction
and therefore safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Graph", "NeighborSet", "pair_graph"]


@dataclass(frozen=True)
class NeighborSet:
    """Nodes first reachable from an origin node at exactly ``stage`` hops."""

    stage: int
    members: frozenset[int]

    def __post_init__(self):
        if self.stage < 1:
            raise ValueError("stage must be a positive integer")
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, node) -> bool:
        return node in self.members


class Graph:
    """Undirected graph on nodes ``1..node_count`` with optional edge distances.

    Parameters
    ----------
    node_count : int
        Number of nodes; nodes are the integers ``1..node_count``.
    edges : iterable of (i, j)
        Unordered pairs of distinct nodes. Self-loops and duplicates are
        rejected.
    distances : mapping (i, j) -> float, optional
        Strictly positive distance per edge. When given, there must be
        exactly one distance for every edge and none for non-edges.
    """

    def __init__(self, node_count, edges=(), distances=None):
        n = int(node_count)
        if n < 1:
            raise ValueError("node_count must be a positive integer")
        canon: set[tuple[int, int]] = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) has an endpoint outside 1..{n}")
            key = (min(i, j), max(i, j))
            if key in canon:
                raise ValueError(f"duplicate edge {key}")
            canon.add(key)
        self._n = n
        self._edges = frozenset(canon)

        dist: dict[tuple[int, int], float] | None = None
        if distances is not None:
            dist = {}
            for (i, j), d in dict(distances).items():
                key = (min(int(i), int(j)), max(int(i), int(j)))
                if key not in self._edges:
                    raise ValueError(f"distance given for non-edge {key}")
                if key in dist:
                    raise ValueError(f"duplicate distance for edge {key}")
                d = float(d)
                if not d > 0:
                    raise ValueError(f"distance for edge {key} must be strictly positive, got {d}")
                dist[key] = d
            if set(dist) != self._edges:
                missing = sorted(self._edges - set(dist))
                raise ValueError(f"missing distances for edges {missing}")
        self._dist = dist

        adj: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
        for i, j in self._edges:
            adj[i].add(j)
            adj[j].add(i)
        self._adj = {i: frozenset(v) for i, v in adj.items()}

    # -- basic accessors ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def nodes(self) -> range:
        return range(1, self._n + 1)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def has_distances(self) -> bool:
        return self._dist is not None

    @property
    def distances(self) -> dict[tuple[int, int], float] | None:
        return dict(self._dist) if self._dist is not None else None

    def _check_node(self, i) -> int:
        i = int(i)
        if not 1 <= i <= self._n:
            raise ValueError(f"node index {i} out of range 1..{self._n}")
        return i

    def adjacent(self, i) -> frozenset[int]:
        """Immediate neighbours of node ``i``."""
        return self._adj[self._check_node(i)]

    def degree(self, i) -> int:
        return len(self.adjacent(i))

    def distance(self, i, j) -> float:
        if self._dist is None:
            raise ValueError("graph has no edge distances")
        key = (min(int(i), int(j)), max(int(i), int(j)))
        if key not in self._dist:
            raise ValueError(f"no edge between {i} and {j}")
        return self._dist[key]

    # -- neighbourhood structure -------------------------------------------

    def neighbors(self, nodes) -> set[int]:
        """Nodes outside ``nodes`` adjacent to at least one node inside it."""
        if isinstance(nodes, (int,)) or hasattr(nodes, "__index__"):
            base = {self._check_node(nodes)}
        else:
            base = {self._check_node(v) for v in nodes}
        out: set[int] = set()
        for v in base:
            out |= self._adj[v]
        return out - base

    def stage_neighbors(self, i, r) -> NeighborSet:
        """The stage-``r`` neighbour set of node ``i``.

        Stage r holds the nodes at shortest-path hop distance exactly r
        from ``i``; stages of the same origin are pairwise disjoint.
        """
        i = self._check_node(i)
        r = int(r)
        if r < 1:
            raise ValueError("stage must be a positive integer")
        seen = {i}
        frontier = {i}
        for _ in range(r):
            frontier = set().union(*(self._adj[v] for v in frontier)) - seen
            seen |= frontier
        return NeighborSet(stage=r, members=frozenset(frontier))

    def stage_distances(self, i, r) -> dict[int, float]:
        """Composite distances from ``i`` to each stage-``r`` neighbour.

        For r=1 these are the edge distances. For r>=2 each stage-r node
        gets the minimum over predecessors q in stage r-1 of
        ``dist(i, q) + d(q, node)``; with r=2 that is the smallest two-hop
        route through any shared neighbour.
        """
        if self._dist is None:
            raise ValueError("graph has no edge distances")
        i = self._check_node(i)
        r = int(r)
        if r < 1:
            raise ValueError("stage must be a positive integer")
        cur = {q: self.distance(i, q) for q in self._adj[i]}
        seen = {i} | set(cur)
        for _ in range(r - 1):
            members = set().union(*(self._adj[q] for q in cur)) - seen
            nxt: dict[int, float] = {}
            for q, dq in cur.items():
                for w in self._adj[q]:
                    if w in members:
                        cand = dq + self.distance(q, w)
                        if w not in nxt or cand < nxt[w]:
                            nxt[w] = cand
            seen |= members
            cur = nxt
        return cur

    def two_hop_distance(self, i, target, via=None) -> float:
        """Distance from ``i`` to a second-stage neighbour ``target``.

        With ``via`` given, returns ``d(i, via) + d(via, target)`` for that
        specific intermediate. Otherwise the minimum over all first-stage
        neighbours of ``i`` adjacent to ``target``.
        """
        if self._dist is None:
            raise ValueError("graph has no edge distances")
        i = self._check_node(i)
        target = self._check_node(target)
        stage2 = self.stage_neighbors(i, 2).members
        if target not in stage2:
            raise ValueError(f"node {target} is not a second-stage neighbour of {i}")
        if via is not None:
            via = self._check_node(via)
            if via not in self._adj[i]:
                raise ValueError(f"node {via} is not adjacent to {i}")
            if target not in self._adj[via]:
                raise ValueError(f"node {target} is not adjacent to {via}")
            return self.distance(i, via) + self.distance(via, target)
        return min(
            self.distance(i, q) + self.distance(q, target)
            for q in self._adj[i]
            if target in self._adj[q]
        )

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._n == other._n
            and self._edges == other._edges
            and self._dist == other._dist
        )

    def __hash__(self) -> int:
        d = None if self._dist is None else frozenset(self._dist.items())
        return hash((self._n, self._edges, d))

    def __repr__(self) -> str:
        tag = "weighted, " if self.has_distances else ""
        return f"Graph({self._n} nodes, {len(self._edges)} edges, {tag}undirected)"


def pair_graph(distance=1.0) -> Graph:
    """The two-node graph with a single (optionally weighted) edge."""
    dist = None if distance is None else {(1, 2): float(distance)}
    return Graph(2, [(1, 2)], dist)
