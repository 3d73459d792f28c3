"""Bridges, segments, stabilizing reroutes, and strip classification."""

import random

import pytest

from apexkit.bridges import (Bridge, BridgeDecomposition, CutSet, DiskDrawing,
                             Segment, StripOutcome, compute_bridges, segments,
                             stabilize, strip_outcome, verify_strip_outcome)
from apexkit.graph import (Graph, GraphInputError, Linkage, complete_graph,
                           cycle_graph, is_k_connected, path_graph)
from apexkit.outcome import Indeterminate
from conftest import random_graph


def linkage(*paths) -> Linkage:
    return Linkage(tuple(tuple(p) for p in paths))


def drawing_checks_out(g: Graph, r: DiskDrawing) -> bool:
    aug = g.simplify()
    extra = []
    for b in r.boundaries:
        if len(b) >= 2:
            extra += [(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]
    return r.embedding.verify(aug.add_edges(extra).simplify())


def cut_hides_something(g: Graph, r: CutSet, ends: set[int]) -> bool:
    h = g.simplify().delete_vertices(sorted(r.vertices))
    keep = [v for v in range(g.n) if v not in r.vertices]
    return any(not ({keep[i] for i in c} & ends) for c in h.components())


class TestSegments:
    def test_single_path_is_one_segment(self):
        assert segments(path_graph(5)) == [Segment((0, 1, 2, 3, 4))]

    def test_star_splits_at_the_center(self):
        star = Graph.build(4, [(0, 1), (0, 2), (0, 3)])
        assert [s.path for s in segments(star)] == [(0, 1), (0, 2), (0, 3)]

    def test_disjoint_paths_stay_separate(self):
        s = Graph.build(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        assert [sg.path for sg in segments(s)] == [(0, 1, 2), (3, 4, 5)]

    def test_cycle_block_rejected(self):
        with pytest.raises(GraphInputError):
            segments(cycle_graph(5))

    def test_marked_isolated_vertex_is_trivial(self):
        s = Graph.build(4, [(0, 1)])
        assert [sg.path for sg in segments(s, vertices=[3])] == [(0, 1), (3,)]


class TestComputeBridges:
    def test_no_leftover_edges_means_no_bridges(self):
        g = cycle_graph(6).add_edges([(0, 3)])
        assert compute_bridges(g, g).bridges == ()

    def test_single_chord_is_one_bridge(self):
        g = cycle_graph(6).add_edges([(0, 3)])
        dec = compute_bridges(g, cycle_graph(6))
        assert len(dec.bridges) == 1
        b = dec.bridges[0]
        assert b.edges == frozenset({(0, 3)})
        assert b.attachments == frozenset({0, 3})
        assert b.stable  # a cycle has no segment able to hold them

    def test_chords_within_one_path_are_unstable(self):
        g = cycle_graph(6).add_edges([(0, 3)])
        s = path_graph(6)  # the cycle opened into a path 0..5
        dec = compute_bridges(g, s)
        flags = sorted((sorted(b.attachments), b.stable) for b in dec.bridges)
        assert flags == [([0, 3], False), ([0, 5], False)]

    def test_component_bridge_collects_all_incident_edges(self):
        g = Graph.build(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (2, 5),
                            (1, 4)])
        s = Graph.build(6, [(0, 1), (1, 2)])
        dec = compute_bridges(g, s)
        assert len(dec.bridges) == 1
        b = dec.bridges[0]
        assert b.interior == frozenset({3, 4, 5})
        assert b.attachments == frozenset({0, 1, 2})

    def test_non_subgraph_rejected(self):
        with pytest.raises(GraphInputError):
            compute_bridges(cycle_graph(6), Graph.build(6, [(0, 2)]))

    def test_bridges_partition_the_leftover_edges(self):
        rng = random.Random(17)
        for _ in range(150):
            n = rng.randint(3, 9)
            g = random_graph(rng, n, 0.5)
            keep = [e for e in g.edges if rng.random() < 0.5]
            s = Graph.build(n, keep)
            dec = compute_bridges(g, s)
            leftover = sorted(set(g.edges) - set(s.edges))
            union = sorted(e for b in dec.bridges for e in b.edges)
            assert union == leftover
            for b in dec.bridges:
                assert b.attachments == b.vertices & dec.s_vertices


class TestStabilize:
    def test_already_stable_input_returned_unchanged(self):
        oct_edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 5),
                     (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
        g = Graph.build(6, oct_edges)
        s = Graph.build(6, [(0, 2), (1, 3)])
        assert stabilize(g, s).edges == s.edges

    def test_prism_reroutes_to_stability(self):
        prism = Graph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5),
                                (3, 5), (0, 3), (1, 4), (2, 5)])
        s = Graph.build(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        dec0 = compute_bridges(prism, s)
        assert any(not b.stable for b in dec0.bridges)
        out = stabilize(prism, s)
        dec = compute_bridges(prism, out)
        assert all(b.stable for b in dec.bridges)

    def test_host_connectivity_precondition(self):
        g = path_graph(6)
        s = Graph.build(6, [(0, 1), (2, 3)])
        with pytest.raises(GraphInputError):
            stabilize(g, s)

    def test_two_segment_precondition(self):
        g = complete_graph(5)
        s = Graph.build(5, [(0, 1), (1, 2)])
        with pytest.raises(GraphInputError):
            stabilize(g, s)

    def test_random_hosts_always_reach_stability(self):
        rng = random.Random(9)
        done = 0
        while done < 80:
            n = rng.randint(5, 10)
            g = random_graph(rng, n, 0.55)
            if not (g.is_simple() and is_k_connected(g, 3)):
                continue
            adj = g.adjacency()
            v0 = rng.randrange(n)
            path = [v0]
            while len(path) < 4:
                cands = [w for w in adj[path[-1]] if w not in path]
                if not cands:
                    break
                path.append(rng.choice(cands))
            if len(path) < 3:
                continue
            extra = [w for w in adj[path[1]] if w not in path]
            if not extra:
                continue
            s = Graph.build(n, list(zip(path, path[1:]))
                            + [(path[1], extra[0])])
            try:
                if len(segments(s)) < 2:
                    continue
            except GraphInputError:
                continue
            out = stabilize(g, s)
            dec = compute_bridges(g, out)
            assert all(b.stable for b in dec.bridges)
            host_edges = {tuple(sorted(e)) for e in g.simplify().edges}
            assert {tuple(sorted(e)) for e in out.edges} <= host_edges
            done += 1


class TestStripOutcomeBasics:
    def test_bridgeless_paths_draw_in_a_disk(self):
        g = Graph.build(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        r = strip_outcome(g, linkage([0, 1, 2], [3, 4, 5]))
        assert isinstance(r, DiskDrawing) and drawing_checks_out(g, r)

    def test_ladder_draws_in_a_disk(self):
        g = Graph.build(6, [(0, 1), (1, 2), (3, 4), (4, 5),
                            (0, 3), (1, 4), (2, 5)])
        r = strip_outcome(g, linkage([0, 1, 2], [3, 4, 5]))
        assert isinstance(r, DiskDrawing) and drawing_checks_out(g, r)

    def test_connection_between_distant_paths_is_a_jump(self):
        g = Graph.build(6, [(0, 1), (2, 3), (4, 5), (0, 4)])
        p = linkage([0, 1], [2, 3], [4, 5])
        r = strip_outcome(g, p)
        assert isinstance(r, StripOutcome) and r.kind == "jump"
        assert r.indices == (0, 2)
        assert verify_strip_outcome(g, p, r)

    def test_crossing_pair_is_a_twist(self):
        g = Graph.build(4, [(0, 1), (2, 3), (0, 3), (1, 2)])
        p = linkage([0, 1], [2, 3])
        r = strip_outcome(g, p)
        assert isinstance(r, StripOutcome) and r.kind == "twist"
        assert verify_strip_outcome(g, p, r)

    def test_hidden_vertex_yields_a_small_cut(self):
        g = Graph.build(5, [(0, 1), (2, 3), (0, 3), (1, 2), (4, 0), (4, 2)])
        p = linkage([0, 1], [2, 3])
        r = strip_outcome(g, p)
        assert isinstance(r, CutSet)
        assert cut_hides_something(g, r, {0, 1, 2, 3})

    def test_arch_with_two_feet_is_a_tunnel(self):
        # an arch over the middle path with feet reaching both neighbours,
        # padded so no small cut hides anything and nothing jumps or twists
        edges = [(0, 1), (2, 3), (3, 4), (4, 5), (5, 6), (7, 8),
                 (3, 0), (3, 7), (5, 8), (5, 7),
                 (9, 0), (9, 2), (9, 3), (9, 6),
                 (10, 0), (10, 2), (10, 3), (10, 4),
                 (11, 3), (11, 4), (11, 5), (11, 7)]
        g = Graph.build(12, edges)
        p = linkage([0, 1], [2, 3, 4, 5, 6], [7, 8])
        r = strip_outcome(g, p)
        assert isinstance(r, StripOutcome) and r.kind == "tunnel"
        assert r.indices == (0, 1, 2)
        assert verify_strip_outcome(g, p, r)

    def test_unstable_bridge_rejected(self):
        g = Graph.build(5, [(0, 1), (2, 3), (4, 0), (4, 1)])
        with pytest.raises(GraphInputError):
            strip_outcome(g, linkage([0, 1], [2, 3]))

    def test_trivial_path_rejected(self):
        g = Graph.build(3, [(0, 1)])
        with pytest.raises(GraphInputError):
            strip_outcome(g, linkage([0, 1], [2]))

    def test_unknown_mode_rejected(self):
        g = Graph.build(4, [(0, 1), (2, 3)])
        with pytest.raises(GraphInputError):
            strip_outcome(g, linkage([0, 1], [2, 3]), mode="torus")


CUBE = Graph.build(8, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6),
                       (6, 7), (4, 7), (0, 4), (1, 5), (2, 6), (3, 7)])
CUBE_PATHS = linkage([0, 4], [1, 5], [2, 6], [3, 7])


class TestStripOutcomeCylinder:
    def test_cube_rungs_draw_on_the_cylinder(self):
        r = strip_outcome(CUBE, CUBE_PATHS, mode="cylinder")
        assert isinstance(r, DiskDrawing) and drawing_checks_out(CUBE, r)

    def test_chord_across_the_cylinder_is_a_jump(self):
        g = CUBE.add_edges([(0, 6)])
        r = strip_outcome(g, CUBE_PATHS, mode="cylinder")
        assert isinstance(r, StripOutcome) and r.kind == "jump"
        assert verify_strip_outcome(g, CUBE_PATHS, r, "cylinder")

    def test_crossed_rung_neighbours_are_a_twist(self):
        g = CUBE.add_edges([(0, 5), (4, 1)])
        r = strip_outcome(g, CUBE_PATHS, mode="cylinder")
        assert isinstance(r, StripOutcome) and r.kind == "twist"
        assert verify_strip_outcome(g, CUBE_PATHS, r, "cylinder")

    def test_wrap_pair_twist_is_detected(self):
        # the crossing pair lives between the last and first paths, which
        # are neighbours on the cylinder even though their indices are not
        # consecutive
        g = Graph.build(6, [(0, 3), (0, 4), (1, 2), (1, 3), (1, 5),
                            (2, 3), (2, 4), (2, 5), (3, 4)])
        p = linkage([5, 2], [0, 4], [3, 1])
        r = strip_outcome(g, p, mode="cylinder")
        assert isinstance(r, StripOutcome) and r.kind == "twist"
        assert r.indices == (2, 0)
        assert verify_strip_outcome(g, p, r, "cylinder")

    def test_too_few_paths_rejected(self):
        g = Graph.build(4, [(0, 1), (2, 3)])
        with pytest.raises(GraphInputError):
            strip_outcome(g, linkage([0, 1], [2, 3]), mode="cylinder")

    def test_bridge_on_all_three_paths_rejected(self):
        g = Graph.build(7, [(0, 1), (2, 3), (4, 5), (6, 0), (6, 2), (6, 4)])
        with pytest.raises(GraphInputError):
            strip_outcome(g, linkage([0, 1], [2, 3], [4, 5]), mode="cylinder")


def random_stable_instance(rng, n_range, path_count_range, plen_range, p):
    n = rng.randint(*n_range)
    g = random_graph(rng, n, p)
    adj = g.adjacency()
    avail = set(range(n))
    paths = []
    for _ in range(rng.randint(*path_count_range)):
        cand = sorted(avail)
        if not cand:
            break
        rng.shuffle(cand)
        path = [cand[0]]
        target = rng.randint(*plen_range)
        while len(path) <= target:
            nxts = [w for w in adj[path[-1]] if w in avail and w not in path]
            if not nxts:
                break
            path.append(rng.choice(nxts))
        if len(path) >= 2:
            paths.append(path)
            avail -= set(path)
    if len(paths) < path_count_range[0]:
        return None
    p_link = linkage(*paths)
    s = Graph.build(n, [e for pa in paths for e in zip(pa, pa[1:])])
    dec = compute_bridges(g, s, vertices=p_link.vertex_set())
    if not all(b.stable for b in dec.bridges):
        return None
    return g, p_link, dec


class TestStripOutcomeDisjunction:
    """On small instances the classification must always decide, and every
    returned alternative must pass its independent checker."""

    def check(self, g, p, r, mode):
        assert not isinstance(r, Indeterminate)
        ends = {pa[0] for pa in p.paths} | {pa[-1] for pa in p.paths}
        if isinstance(r, StripOutcome):
            assert verify_strip_outcome(g, p, r, mode)
        elif isinstance(r, DiskDrawing):
            assert drawing_checks_out(g, r)
        else:
            assert isinstance(r, CutSet) and len(r.vertices) <= 3
            assert cut_hides_something(g, r, ends)

    def test_disk_mode_always_decides(self):
        rng = random.Random(4)
        done = 0
        while done < 200:
            inst = random_stable_instance(rng, (4, 10), (2, 3), (1, 3), 0.35)
            if inst is None:
                continue
            g, p, _ = inst
            self.check(g, p, strip_outcome(g, p), "disk")
            done += 1

    def test_cylinder_mode_always_decides(self):
        rng = random.Random(11)
        done = 0
        while done < 150:
            inst = random_stable_instance(rng, (6, 10), (3, 4), (1, 2), 0.4)
            if inst is None:
                continue
            g, p, dec = inst
            where = {}
            for i, pa in enumerate(p.paths):
                for v in pa:
                    where[v] = i
            if len(p.paths) == 3 and any(
                    len({where[v] for v in b.attachments}) == 3
                    for b in dec.bridges):
                continue
            self.check(g, p, strip_outcome(g, p, mode="cylinder"), "cylinder")
            done += 1
