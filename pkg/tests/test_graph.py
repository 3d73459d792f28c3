"""Core multigraph operations: deletion, contraction, connectivity, Menger."""

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from apexkit.graph import (CutCertificate, Graph, GraphInputError, Linkage,
                           complete_bipartite, complete_graph, cycle_graph,
                           disjoint_paths, is_k_connected,
                           max_disjoint_paths, min_vertex_cut_between,
                           path_graph)
from conftest import brute_force_min_cut, random_graph


def to_nx(g: Graph) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


class TestBasics:
    def test_build_rejects_out_of_range_edge(self):
        with pytest.raises(GraphInputError):
            Graph.build(3, [(0, 3)])

    def test_isolated_vertices_representable(self):
        g = Graph.build(5, [(0, 1)])
        assert g.n == 5 and g.m == 1
        assert {4} in g.components()

    def test_loops_and_parallel_edges_kept_until_simplify(self):
        g = Graph.build(3, [(0, 0), (1, 2), (1, 2)])
        assert g.m == 3 and not g.is_simple()
        s = g.simplify()
        assert s.edges == ((1, 2),) and s.is_simple()


class TestDeleteVertices:
    def test_complete_graph_drops_to_smaller_complete(self):
        g = complete_graph(6).delete_vertices({0})
        assert g.n == 5 and g.m == 10
        assert nx.is_isomorphic(to_nx(g), to_nx(complete_graph(5)))

    def test_empty_deletion_is_identity(self):
        t = complete_graph(3)
        assert t.delete_vertices(set()).edges == t.edges

    def test_unknown_vertex_rejected(self):
        with pytest.raises(GraphInputError):
            complete_graph(3).delete_vertices({7})

    def test_labels_track_survivors(self):
        g = Graph.build(3, [(0, 1)], labels=["a", "b", "c"])
        assert g.delete_vertices({1}).labels == ("a", "c")


class TestContractEdge:
    def test_path_contracts_to_shorter_path(self):
        g = path_graph(3).contract_edge((0, 1))
        assert g.n == 2 and g.edges == ((0, 1),)

    def test_triangle_contracts_to_doubled_edge(self):
        g = complete_graph(3).contract_edge((0, 1))
        assert g.n == 2
        assert sorted(g.edges) == [(0, 1), (0, 1)]

    def test_k4_contracts_to_triangle_plus_parallel(self):
        g = complete_graph(4).contract_edge((0, 1))
        assert g.n == 3
        assert sorted(g.edge_multiset().values()) == [1, 2, 2]
        assert g.simplify().m == 3

    def test_missing_edge_rejected(self):
        with pytest.raises(GraphInputError):
            path_graph(3).contract_edge((0, 2))

    def test_loop_contraction_deletes_the_loop(self):
        g = Graph.build(2, [(0, 0), (0, 1)]).contract_edge((0, 0))
        assert g.n == 2 and g.edges == ((0, 1),)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_delete_and_contract_commute_with_relabeling(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 7)
        g = random_graph(rng, n, 0.5)
        if not g.edges:
            return
        perm = list(range(n))
        rng.shuffle(perm)
        h = Graph.build(n, [(perm[u], perm[v]) for (u, v) in g.edges])
        e = rng.choice(g.edges)
        ge = g.contract_edge(e)
        he = h.contract_edge((perm[e[0]], perm[e[1]]))
        assert nx.is_isomorphic(to_nx(ge), to_nx(he))
        v = rng.randrange(n)
        assert nx.is_isomorphic(to_nx(g.delete_vertices({v})),
                                to_nx(h.delete_vertices({perm[v]})))


class TestConnectivity:
    def test_complete_graph_is_highly_connected(self):
        assert is_k_connected(complete_graph(6), 5)
        assert not is_k_connected(complete_graph(6), 6)

    def test_path_has_a_cut_vertex(self):
        assert not is_k_connected(path_graph(3), 2)
        assert is_k_connected(path_graph(3), 1)

    def test_monotone_in_k(self):
        rng = random.Random(5)
        for _ in range(30):
            g = random_graph(rng, rng.randint(3, 8), 0.6)
            for k in range(2, 5):
                if is_k_connected(g, k):
                    assert is_k_connected(g, k - 1)

    def test_matches_brute_force_on_cylinder_gadget(self):
        from apexkit.gadgets import linked_cylinder
        g = linked_cylinder(4, 6).simplify()
        adj = g.adjacency()

        def brute(k: int) -> bool:
            if g.n <= k:
                return False
            for cut in itertools.combinations(range(g.n), k - 1):
                h = g.delete_vertices(set(cut))
                if h.n and len(h.components()) > 1:
                    return False
            return True

        for k in (3, 4, 5):
            assert is_k_connected(g, k) == brute(k), k


class TestDisjointPaths:
    def test_bipartite_sides_fully_linked(self):
        g = complete_bipartite(3, 3)
        res = disjoint_paths(g, {0, 1, 2}, {3, 4, 5}, 3)
        assert isinstance(res, Linkage) and len(res) == 3
        assert res.is_valid(g)
        assert {p[0] for p in res.paths} == {0, 1, 2}
        assert {p[-1] for p in res.paths} == {3, 4, 5}

    def test_shared_vertex_is_the_forced_cut(self):
        # two triangles glued at vertex 2
        g = Graph.build(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
        res = disjoint_paths(g, {0}, {4}, 2)
        assert isinstance(res, CutCertificate)
        assert res.vertices == frozenset({2})
        assert res.is_valid(g, {0}, {4})

    def test_zero_k_rejected(self):
        with pytest.raises(GraphInputError):
            disjoint_paths(complete_graph(3), {0}, {1}, 0)

    def test_branch_agrees_with_exhaustive_cut_search(self):
        rng = random.Random(77)
        for _ in range(150):
            n = rng.randint(3, 9)
            g = random_graph(rng, n, rng.uniform(0.2, 0.7))
            a = {rng.randrange(n) for _ in range(rng.randint(1, 3))}
            b = {rng.randrange(n) for _ in range(rng.randint(1, 3))}
            if a & b:
                continue
            k = rng.randint(1, 4)
            res = disjoint_paths(g, a, b, k)
            mincut = brute_force_min_cut(g, a, b)
            if isinstance(res, Linkage):
                assert mincut >= k
                assert res.is_valid(g)
                assert len(res) == k
                assert all(p[0] in a and p[-1] in b for p in res.paths)
            else:
                assert len(res.vertices) < k
                assert len(res.vertices) == mincut
                assert res.is_valid(g, a, b)

    def test_max_linkage_size_equals_min_cut(self):
        rng = random.Random(3)
        for _ in range(60):
            n = rng.randint(3, 8)
            g = random_graph(rng, n, 0.5)
            a, b = {0}, {n - 1}
            link = max_disjoint_paths(g, a, b)
            assert link.is_valid(g)
            assert len(link) == brute_force_min_cut(g, a, b)

    def test_min_cut_between_nonadjacent_pair(self):
        g = cycle_graph(6)
        cut = min_vertex_cut_between(g, 0, 3)
        assert len(cut) == 2 and not cut & {0, 3}
        with pytest.raises(GraphInputError):
            min_vertex_cut_between(g, 0, 1)
