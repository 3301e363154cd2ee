import networkx as nx
import pytest

from narlift import Graph, NeighborSet, pair_graph

from conftest import random_graph


def to_networkx(g):
    H = nx.Graph()
    H.add_nodes_from(g.nodes)
    H.add_edges_from(g.edges)
    return H


class TestConstruction:
    def test_basic(self, path3):
        assert path3.node_count == 3
        assert path3.edges == frozenset({(1, 2), (2, 3)})
        assert path3.has_distances

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(3, [(1, 1)])

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(3, [(1, 2), (2, 1)])

    def test_out_of_range_endpoint(self):
        with pytest.raises(ValueError, match="outside"):
            Graph(3, [(1, 4)])

    def test_distance_for_non_edge(self):
        with pytest.raises(ValueError, match="non-edge"):
            Graph(3, [(1, 2)], {(2, 3): 1.0})

    def test_missing_distance(self):
        with pytest.raises(ValueError, match="missing distances"):
            Graph(3, [(1, 2), (2, 3)], {(1, 2): 1.0})

    def test_nonpositive_distance(self):
        with pytest.raises(ValueError, match="strictly positive"):
            Graph(2, [(1, 2)], {(1, 2): 0.0})

    def test_distance_lookup_either_orientation(self, path3):
        assert path3.distance(1, 2) == path3.distance(2, 1) == 1.0

    def test_equality_and_hash(self, path3):
        other = Graph(3, [(2, 3), (1, 2)], {(2, 3): 2.0, (1, 2): 1.0})
        assert path3 == other
        assert hash(path3) == hash(other)

    def test_pair_graph(self):
        g = pair_graph(2.5)
        assert g.node_count == 2
        assert g.distance(1, 2) == 2.5


class TestNeighbors:
    def test_path_single(self, path3):
        assert path3.neighbors({1}) == {2}

    def test_path_whole_set(self, path3):
        assert path3.neighbors({1, 2, 3}) == set()

    def test_complete_graph(self, k4):
        assert k4.neighbors({1}) == {2, 3, 4}

    def test_scalar_argument(self, path3):
        assert path3.neighbors(2) == {1, 3}

    def test_out_of_range(self, path3):
        with pytest.raises(ValueError, match="out of range"):
            path3.neighbors({9})


class TestStageNeighbors:
    def test_path_stage_two(self, path3):
        ns = path3.stage_neighbors(1, 2)
        assert isinstance(ns, NeighborSet)
        assert ns.stage == 2
        assert ns.members == {3}

    def test_complete_k3_stage_two_empty(self):
        g = Graph(3, [(1, 2), (1, 3), (2, 3)])
        assert g.stage_neighbors(1, 2).members == set()

    def test_star_leaf_stage_two(self, star4):
        assert star4.stage_neighbors(2, 2).members == {3, 4}

    def test_stage_one_is_adjacency(self, k4):
        for i in k4.nodes:
            assert k4.stage_neighbors(i, 1).members == k4.adjacent(i)

    def test_invalid_stage(self, path3):
        with pytest.raises(ValueError, match="positive"):
            path3.stage_neighbors(1, 0)

    @pytest.mark.parametrize("seed", range(12))
    def test_bfs_hop_distance_oracle(self, seed):
        g = random_graph(n_nodes=30, edge_prob=0.08, seed=seed)
        H = to_networkx(g)
        for i in (1, 7, 23):
            hops = nx.single_source_shortest_path_length(H, i)
            for r in range(1, 8):
                expect = {j for j, d in hops.items() if d == r}
                assert g.stage_neighbors(i, r).members == expect

    @pytest.mark.parametrize("seed", range(6))
    def test_stages_pairwise_disjoint(self, seed):
        g = random_graph(n_nodes=25, edge_prob=0.1, seed=100 + seed)
        for i in (1, 13):
            seen = {i}
            for r in range(1, 10):
                members = g.stage_neighbors(i, r).members
                assert not (members & seen)
                seen |= members

    @pytest.mark.parametrize("seed", range(6))
    def test_union_of_stages_is_component(self, seed):
        g = random_graph(n_nodes=20, edge_prob=0.1, seed=200 + seed)
        H = to_networkx(g)
        for i in (1, 11):
            union = {i}
            for r in range(1, g.node_count):
                union |= g.stage_neighbors(i, r).members
            assert union == nx.node_connected_component(H, i)

    def test_disconnected_graph_stages_empty_beyond_component(self):
        g = Graph(4, [(1, 2)])
        assert g.stage_neighbors(1, 1).members == {2}
        assert g.stage_neighbors(1, 2).members == set()
        assert g.stage_neighbors(3, 1).members == set()


class TestTwoHopDistance:
    def test_path_simple(self, path3):
        assert path3.two_hop_distance(1, 3) == 3.0

    def test_path_halves(self):
        g = Graph(3, [(1, 2), (2, 3)], {(1, 2): 0.5, (2, 3): 0.5})
        assert g.two_hop_distance(1, 3) == 1.0

    def test_diamond_takes_minimum(self, diamond):
        assert diamond.two_hop_distance(1, 3) == 3.0

    def test_explicit_intermediate(self, diamond):
        assert diamond.two_hop_distance(1, 3, via=2) == 4.0
        assert diamond.two_hop_distance(1, 3, via=4) == 3.0

    def test_target_not_stage_two(self, path3):
        with pytest.raises(ValueError, match="second-stage"):
            path3.two_hop_distance(1, 2)

    def test_bad_intermediate(self, diamond):
        with pytest.raises(ValueError, match="adjacent"):
            diamond.two_hop_distance(1, 3, via=3)

    def test_requires_distances(self, path3_plain):
        with pytest.raises(ValueError, match="distances"):
            path3_plain.two_hop_distance(1, 3)


class TestStageDistances:
    def test_stage_one_matches_edges(self, diamond):
        assert diamond.stage_distances(1, 1) == {2: 1.0, 4: 1.0}

    def test_stage_two_matches_two_hop(self, diamond):
        assert diamond.stage_distances(1, 2) == {3: 3.0}

    @pytest.mark.parametrize("seed", range(5))
    def test_layered_route_oracle(self, seed):
        # brute force: minimise edge-weight totals over chains that step
        # through successive stages
        g = random_graph(n_nodes=8, edge_prob=0.35, seed=300 + seed, weighted=True)

        def oracle(i, r):
            layers = [g.stage_neighbors(i, q).members for q in range(1, r + 1)]
            best = {}

            def walk(node, depth, total):
                if depth == r:
                    if node not in best or total < best[node]:
                        best[node] = total
                    return
                for nxt in g.adjacent(node):
                    if nxt in layers[depth]:
                        walk(nxt, depth + 1, total + g.distance(node, nxt))

            walk(i, 0, 0.0)
            return best

        for i in (1, 5):
            for r in (1, 2, 3):
                got = g.stage_distances(i, r)
                want = oracle(i, r)
                assert got.keys() == want.keys()
                for k in got:
                    assert got[k] == pytest.approx(want[k], abs=1e-12)
