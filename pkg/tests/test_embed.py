"""Planarity, apex vertices, societies, crosses, disk and cylinder drawings."""

import itertools
import random

import pytest

from apexkit.graph import (Graph, GraphInputError, complete_bipartite,
                           complete_graph, cycle_graph, disjoint_paths,
                           CutCertificate)
from apexkit.embed import (Cross, Society, embed_in_cylinder,
                           find_apex_vertex, find_cross,
                           is_4_connected_society, is_planar, is_rural)
from conftest import random_graph


class TestPlanarity:
    def test_small_complete_graph_embeds(self):
        emb = is_planar(complete_graph(4))
        assert emb is not None and emb.verify(complete_graph(4))

    def test_k5_and_k33_do_not(self):
        assert is_planar(complete_graph(5)) is None
        assert is_planar(complete_bipartite(3, 3)) is None

    def test_gadget_minus_hub_is_planar(self):
        from apexkit.gadgets import pinwheel
        g = pinwheel(4)
        hub = g.labels.index("x")
        emb = is_planar(g.delete_vertices({hub}))
        assert emb is not None and emb.verify(g.delete_vertices({hub}))

    def test_embedding_face_count_matches_euler(self):
        rng = random.Random(8)
        for _ in range(50):
            g = random_graph(rng, rng.randint(1, 9), 0.4)
            emb = is_planar(g)
            if emb is not None:
                assert emb.verify(g)


class TestApexVertex:
    def test_hub_removal_makes_gadget_planar(self):
        from apexkit.gadgets import pinwheel
        g = pinwheel(6)
        v = find_apex_vertex(g)
        assert v is not None
        assert is_planar(g.delete_vertices({v})) is not None

    def test_complete_six_has_none(self):
        assert find_apex_vertex(complete_graph(6)) is None

    def test_planar_graph_yields_lowest_vertex(self):
        assert find_apex_vertex(cycle_graph(5)) == 0


class TestRural:
    def test_plain_cycle_is_rural(self):
        s = Society(cycle_graph(5), (0, 1, 2, 3, 4))
        assert is_rural(s) is not None

    def test_crossing_diagonals_are_not(self):
        s = Society(complete_graph(4), (0, 1, 2, 3))
        assert is_rural(s) is None

    def test_boundary_order_matters(self):
        # the same K4 is rural when the boundary follows a planar face order
        s = Society(complete_graph(4), (0, 1, 3, 2))
        assert is_rural(s) is None or is_rural(s)
        g = cycle_graph(4).add_edges([(0, 2)])
        assert is_rural(Society(g, (0, 1, 2, 3))) is not None
        assert is_rural(Society(g, (0, 1, 3, 2))) is None

    def test_rural_societies_have_no_cross(self):
        rng = random.Random(21)
        checked = 0
        while checked < 120:
            n = rng.randint(4, 8)
            g = random_graph(rng, n, 0.45)
            k = rng.randint(4, min(6, n))
            omega = tuple(rng.sample(range(n), k))
            if is_rural(Society(g, omega)) is not None:
                assert find_cross(Society(g, omega)) is None
                checked += 1

    def test_cross_free_4_connected_societies_are_rural(self):
        rng = random.Random(34)
        checked = 0
        while checked < 60:
            n = rng.randint(4, 8)
            g = random_graph(rng, n, 0.5)
            k = rng.randint(4, min(6, n))
            omega = tuple(rng.sample(range(n), k))
            s = Society(g, omega)
            if not is_4_connected_society(s):
                continue
            if find_cross(s) is not None:
                continue
            assert is_rural(s) is not None
            checked += 1


class TestFindCross:
    def test_diagonals_of_a_wheel_boundary(self):
        s = Society(complete_graph(4), (0, 1, 2, 3))
        c = find_cross(s)
        assert isinstance(c, Cross) and c.is_valid(s)

    def test_long_paths_through_the_interior(self):
        # two interior vertices carrying the crossing pair
        g = Graph.build(6, [(0, 1), (1, 2), (2, 3), (0, 3),
                            (0, 4), (4, 2), (1, 5), (5, 3)])
        s = Society(g, (0, 1, 2, 3))
        c = find_cross(s)
        assert isinstance(c, Cross) and c.is_valid(s)
        assert {len(c.path1), len(c.path2)} == {3}

    def test_matches_brute_force_on_small_societies(self):
        rng = random.Random(55)
        for _ in range(80):
            n = rng.randint(4, 7)
            g = random_graph(rng, n, 0.5)
            k = rng.randint(4, n)
            omega = tuple(rng.sample(range(n), k))
            s = Society(g, omega)
            got = find_cross(s)
            expect = brute_force_cross_exists(g, omega)
            if expect:
                assert isinstance(got, Cross) and got.is_valid(s)
            else:
                assert got is None


def brute_force_cross_exists(g: Graph, omega) -> bool:
    simple = g.simplify()
    adj = simple.adjacency()
    boundary = set(omega)
    pos = {v: i for i, v in enumerate(omega)}

    paths = []

    def extend(path, used):
        v = path[-1]
        for w in adj[v]:
            if w in used:
                continue
            if w in boundary:
                if w != path[0]:
                    paths.append(tuple(path) + (w,))
            else:
                extend(path + [w], used | {w})

    for start in boundary:
        extend([start], {start})
    for p1, p2 in itertools.combinations(paths, 2):
        if set(p1) & set(p2):
            continue
        a, b = sorted((pos[p1[0]], pos[p1[-1]]))
        if (a < pos[p2[0]] < b) != (a < pos[p2[-1]] < b):
            return True
    return False


class TestCylinder:
    def test_prism_spans_the_two_boundaries(self):
        prism = Graph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5),
                                (3, 5), (0, 3), (1, 4), (2, 5)])
        assert embed_in_cylinder(prism, (0, 1, 2), (3, 4, 5)) is not None

    def test_nonplanar_graph_never_embeds(self):
        assert embed_in_cylinder(complete_graph(5), (0, 1), (2, 3)) is None

    def test_misordered_boundary_rejected_without_reflection_flag(self):
        cube = Graph.build(8, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5),
                               (5, 6), (6, 7), (4, 7), (0, 4), (1, 5),
                               (2, 6), (3, 7)])
        assert embed_in_cylinder(cube, (0, 1, 2, 3), (4, 5, 6, 7)) is not None
        assert embed_in_cylinder(cube, (0, 1, 2, 3), (7, 6, 5, 4)) is None
        assert embed_in_cylinder(cube, (0, 1, 2, 3), (7, 6, 5, 4),
                                 allow_reflection=True) is not None
        assert embed_in_cylinder(cube, (0, 1, 2, 3), (4, 6, 5, 7)) is None

    def test_overlapping_boundaries_rejected(self):
        with pytest.raises(GraphInputError):
            embed_in_cylinder(complete_graph(4), (0, 1), (1, 2))

    def test_empty_second_boundary_degenerates_to_disk(self):
        g = cycle_graph(4).add_edges([(0, 2)])
        assert embed_in_cylinder(g, (0, 1, 2, 3), ()) is not None
        assert embed_in_cylinder(g, (0, 1, 3, 2), ()) is None


class TestSocietyConnectivity:
    def test_pure_boundary_cycle_is_vacuously_connected(self):
        s = Society(cycle_graph(5), (0, 1, 2, 3, 4))
        assert is_4_connected_society(s)

    def test_low_degree_interior_hub_breaks_it(self):
        # hub 3 attached to a triangle boundary by three edges
        g = Graph.build(4, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)])
        assert not is_4_connected_society(Society(g, (0, 1, 2)))

    def test_matches_brute_force_separations(self):
        rng = random.Random(71)
        for _ in range(80):
            n = rng.randint(4, 8)
            g = random_graph(rng, n, 0.55)
            k = rng.randint(3, n - 1)
            omega = tuple(rng.sample(range(n), k))
            s = Society(g, omega)
            assert is_4_connected_society(s) == brute_force_4_connected(g, omega)


def brute_force_4_connected(g: Graph, omega) -> bool:
    simple = g.simplify()
    boundary = set(omega)
    outside = [v for v in range(g.n) if v not in boundary]
    adj = simple.adjacency()
    for size in range(4):
        for cut in itertools.combinations(range(g.n), size):
            cset = set(cut)
            hidden = [v for v in outside if v not in cset]
            for v in hidden:
                seen = {v}
                stack = [v]
                reached_boundary = v in boundary
                while stack and not reached_boundary:
                    x = stack.pop()
                    for y in adj[x]:
                        if y in cset or y in seen:
                            continue
                        if y in boundary:
                            reached_boundary = True
                            break
                        seen.add(y)
                        stack.append(y)
                if not reached_boundary:
                    return False
    return True
