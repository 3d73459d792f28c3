"""Auxiliary graph, cores, sections, flatness, twists, tunnels, detectors."""

import itertools

import pytest

from apexkit import auxgraph
from apexkit.auxgraph import (AuxiliaryGraph, Core, Indeterminate,
                              ThresholdReport, Tunnel, Twist,
                              build_auxiliary, check_flat, cores,
                              find_tunnels, find_twists, reroute_along,
                              section, threshold_detectors)
from apexkit.decomp import (FoundationalState, LinearDecomposition,
                            foundational_linkage, validate_linear)
from apexkit.embed import Society, find_cross
from apexkit.gadgets import linked_cylinder
from apexkit.graph import Graph, GraphInputError, Linkage
from conftest import (column_bags, hub_path_state, ladder_strip, strip_state,
                      wide_bags)


def cylinder_state(k: int = 3, l: int = 12):
    """The linked cylinder without its two linking edges, column bags."""
    g = linked_cylinder(k, l, q1=(0, 0), q2=(1, 1))
    links = {(0, l - 1), (l, 2 * l - 1)}
    g = g.subgraph_edges([e for e in g.edges
                          if tuple(sorted(e)) not in links])
    return g, strip_state(g, column_bags(k, l))


def brute_adjacency(g: Graph, st: FoundationalState, i: int) -> set:
    """Naive bridge adjacency in bag i: components of the bag minus the
    linkage, plus direct non-linkage edges between linkage vertices."""
    bag = st.decomposition.bags[i]
    paths = st.linkage.paths
    owner = {v: pi for pi, p in enumerate(paths) for v in p}
    pedges = {tuple(sorted(e)) for p in paths for e in zip(p, p[1:])}
    adj = g.adjacency()
    inside = {v for v in bag if v not in owner}
    pairs = set()
    seen: set[int] = set()
    for start in inside:
        if start in seen:
            continue
        comp, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in inside and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        touched = {owner[y] for x in comp for y in adj[x]
                   if y in bag and y in owner}
        pairs |= {tuple(sorted(t)) for t in
                  itertools.combinations(sorted(touched), 2)}
    for (u, v) in g.edges:
        if u in bag and v in bag and u in owner and v in owner \
                and tuple(sorted((u, v))) not in pedges \
                and owner[u] != owner[v]:
            pairs.add(tuple(sorted((owner[u], owner[v]))))
    return pairs


class TestBuildAuxiliary:
    def test_ladder_rows_form_a_path_of_adjacencies(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        aux = build_auxiliary(g, st)
        assert aux.uniform and aux.witness is None
        norm = {tuple(sorted(e)) for e in aux.edges}
        # rows are adjacent exactly when vertically consecutive
        by_first = sorted(aux.nontrivial, key=lambda pi: aux.paths[pi][0])
        assert norm == {tuple(sorted((by_first[0], by_first[1]))),
                        tuple(sorted((by_first[1], by_first[2])))}

    def test_unrelated_rows_give_no_edges(self):
        g = Graph.build(12, [(i, i + 1) for i in range(5)]
                        + [(6 + i, 7 + i) for i in range(5)])
        st = strip_state(g, [{c, c + 1, c + 6, c + 7} for c in range(5)])
        aux = build_auxiliary(g, st)
        assert aux.edges == frozenset() and aux.uniform

    def test_hub_contributes_a_trivial_adjacency(self):
        g, st = hub_path_state(8)
        aux = build_auxiliary(g, st)
        trivial = [pi for pi in range(2) if pi not in aux.nontrivial]
        assert len(aux.nontrivial) == 1 and len(trivial) == 1
        assert {tuple(sorted(e)) for e in aux.edges} == {
            tuple(sorted((aux.nontrivial[0], trivial[0])))}

    def test_vanishing_rung_reported_as_nonuniform(self):
        g = Graph.build(12, [(i, i + 1) for i in range(5)]
                        + [(6 + i, 7 + i) for i in range(5)] + [(1, 7)])
        st = strip_state(g, [{c, c + 1, c + 6, c + 7} for c in range(5)])
        aux = build_auxiliary(g, st)
        assert not aux.uniform
        pair, i1, i2 = aux.witness
        assert tuple(sorted(pair)) == (0, 1)

    def test_matches_naive_per_bag_adjacency(self):
        for g, st in (cylinder_state(),
                      (ladder_strip(3, 12),
                       strip_state(ladder_strip(3, 12), column_bags(3, 12))),
                      hub_path_state(8)):
            aux = build_auxiliary(g, st)
            first = 1
            assert {tuple(sorted(e)) for e in aux.edges} == \
                brute_adjacency(g, st, first)

    def test_unspanned_linkage_rejected(self):
        g = ladder_strip(2, 6)
        dec = LinearDecomposition.build(column_bags(2, 6))
        st = FoundationalState(dec, Linkage(((1, 2), (6, 7))))
        with pytest.raises(GraphInputError):
            build_auxiliary(g, st)


class TestCores:
    def test_ladder_single_path_core(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        aux = build_auxiliary(g, st)
        cs = cores(aux)
        assert len(cs) == 1 and cs[0].shape == "path"
        order = cs[0].member_paths
        assert set(order) == set(aux.nontrivial)
        # deterministic orientation: least first-separator endpoint first
        assert aux.paths[order[0]][0] == min(aux.paths[pi][0]
                                             for pi in order)

    def test_cylinder_cycle_core(self):
        g, st = cylinder_state()
        cs = cores(build_auxiliary(g, st))
        assert len(cs) == 1 and cs[0].shape == "cycle"
        assert len(cs[0].member_paths) == 3

    def test_star_of_rows_is_invalid(self):
        # row 0 rung-adjacent to rows 1, 2, 3 and to nothing else
        cols = 6
        edges = []
        for r in range(4):
            for c in range(cols - 1):
                edges.append((r * cols + c, r * cols + c + 1))
        for r in (1, 2, 3):
            for c in range(cols):
                edges.append((c, r * cols + c))
        g = Graph.build(4 * cols, edges)
        st = strip_state(g, column_bags(4, cols))
        cs = cores(build_auxiliary(g, st))
        assert len(cs) == 1 and cs[0].shape == "invalid"

    def test_isolated_rows_are_singleton_path_cores(self):
        g = Graph.build(12, [(i, i + 1) for i in range(5)]
                        + [(6 + i, 7 + i) for i in range(5)])
        st = strip_state(g, [{c, c + 1, c + 6, c + 7} for c in range(5)])
        cs = cores(build_auxiliary(g, st))
        assert len(cs) == 2
        assert all(c.shape == "path" and len(c.member_paths) == 1
                   for c in cs)

    def test_trivial_paths_never_join_a_core(self):
        g, st = hub_path_state(8)
        cs = cores(build_auxiliary(g, st))
        assert len(cs) == 1 and len(cs[0].member_paths) == 1


class TestSection:
    def test_ladder_section_carries_rows_and_rungs(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        core = cores(build_auxiliary(g, st))[0]
        sec = section(g, st, core, 4)
        assert sec.graph.n == 6
        assert sec.graph.m == 3 + 4  # three row edges, four rungs
        # boundary markers are the separator crossings, in member order
        paths = build_auxiliary(g, st).paths
        entry = [sec.vertices[u] for u in sec.us]
        exit_ = [sec.vertices[v] for v in sec.vs]
        for j, pi in enumerate(core.member_paths):
            assert {entry[j]} == st.decomposition.separator(4) \
                & set(paths[pi])
            assert {exit_[j]} == st.decomposition.separator(5) \
                & set(paths[pi])

    def test_trivial_path_vertices_are_deleted(self):
        g, st = hub_path_state(8)
        core = cores(build_auxiliary(g, st))[0]
        sec = section(g, st, core, 3)
        z = 8
        assert z not in sec.vertices
        assert sec.graph.m == 1  # just the row edge inside the bag

    def test_bag_index_range_enforced(self):
        g = ladder_strip(2, 6)
        st = strip_state(g, column_bags(2, 6))
        core = cores(build_auxiliary(g, st))[0]
        with pytest.raises(GraphInputError):
            section(g, st, core, 0)
        with pytest.raises(GraphInputError):
            section(g, st, core, st.decomposition.length)


class TestCheckFlat:
    def test_ladder_flat_in_every_interior_bag(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        core = cores(build_auxiliary(g, st))[0]
        for i in range(1, st.decomposition.length):
            assert check_flat(g, st, core, i) is not None

    def test_cylinder_flat_as_cycle_core(self):
        g, st = cylinder_state()
        core = cores(build_auxiliary(g, st))[0]
        for i in range(1, st.decomposition.length):
            assert check_flat(g, st, core, i) is not None

    def test_twist_gadget_breaks_flatness_and_yields_a_cross(self):
        g, st, bag = twist_fixture()
        core = cores(build_auxiliary(g, st))[0]
        assert check_flat(g, st, core, bag) is None
        assert check_flat(g, st, core, bag - 1) is not None
        # the non-flat path-core section carries a cross on its boundary
        sec = section(g, st, core, bag)
        first, last = sec.restrictions[0], sec.restrictions[-1]
        omega = (sec.us[:-1] + last + tuple(sec.vs[1:-1][::-1])
                 + tuple(reversed(first))[:-1])
        assert find_cross(Society(sec.graph, omega)) is not None

    def test_invalid_core_rejected(self):
        with pytest.raises(GraphInputError):
            check_flat(ladder_strip(2, 6),
                       strip_state(ladder_strip(2, 6), column_bags(2, 6)),
                       Core((0, 1), "invalid"), 1)


def twist_fixture():
    """Three rows with a crossing pair of connectors in one wide bag."""
    cols = 13
    t1, t2 = 3 * cols, 3 * cols + 1
    v = lambda r, c: r * cols + c
    g = ladder_strip(3, cols, 2, [(v(0, 5), t1), (t1, v(1, 6)),
                                  (v(0, 6), t2), (t2, v(1, 5))])
    st = strip_state(g, wide_bags(3, cols, {2: [t1, t2]}))
    return g, st, 2


def tunnel_fixture():
    """Arch over row 0 with two feet reaching rows 1 and 2."""
    cols = 13
    a = 3 * cols
    v = lambda r, c: r * cols + c
    g = ladder_strip(3, cols, 1, [(v(0, 4), a), (a, v(0, 6)),
                                  (v(0, 5), v(2, 5))])
    st = strip_state(g, wide_bags(3, cols, {2: [a]}))
    return g, st, 2


class TestFindTwists:
    def test_gadget_twist_found_once_in_its_bag(self):
        g, st, bag = twist_fixture()
        tws = [t for t in find_twists(g, st) if isinstance(t, Twist)]
        assert len(tws) == 1
        tw = tws[0]
        assert tw.i == bag and tw.p < tw.p_prime
        paths = build_auxiliary(g, st).paths
        pos_p = {v: j for j, v in enumerate(paths[tw.p])}
        pos_q = {v: j for j, v in enumerate(paths[tw.p_prime])}
        assert pos_p[tw.q1[0]] < pos_p[tw.q2[0]]
        assert pos_q[tw.q2[-1]] < pos_q[tw.q1[-1]]
        assert not set(tw.q1) & set(tw.q2)

    def test_plain_ladder_has_no_twists(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        assert find_twists(g, st) == []

    def test_exhausted_budget_yields_indeterminate_entries(self):
        g, st, _ = twist_fixture()
        out = find_twists(g, st, budget=1)
        assert out and all(isinstance(t, Indeterminate) for t in out)

    def test_agrees_with_strip_classification_in_the_twist_bag(self):
        # crossing edges (no hidable interior): both detectors say twist
        from apexkit.bridges import StripOutcome, strip_outcome
        cols = 13
        v = lambda r, c: r * cols + c
        g = ladder_strip(2, cols, 0, [(v(0, 5), v(1, 6)),
                                      (v(0, 6), v(1, 5))])
        st = strip_state(g, wide_bags(2, cols))
        tws = [t for t in find_twists(g, st) if isinstance(t, Twist)]
        assert tws and tws[0].i == 2
        keep = sorted(st.decomposition.bags[2])
        idx = {x: j for j, x in enumerate(keep)}
        gi = g.induced(keep)
        local = tuple(tuple(idx[x] for x in p if x in idx)
                      for p in st.linkage.paths)
        out = strip_outcome(gi, Linkage(local), mode="disk")
        assert isinstance(out, StripOutcome) and out.kind == "twist"


class TestFindTunnels:
    def test_gadget_tunnel_found_in_its_bag(self):
        g, st, bag = tunnel_fixture()
        tns = [t for t in find_tunnels(g, st) if isinstance(t, Tunnel)]
        assert tns and all(t.i == bag for t in tns)
        t = tns[0]
        paths = build_auxiliary(g, st).paths
        p1 = paths[t.targets[0]]
        pos = {v: j for j, v in enumerate(p1)}
        assert t.arch[0] in pos and t.arch[-1] in pos
        assert pos[t.arch[0]] < pos[t.q2[0]] < pos[t.arch[-1]]
        assert pos[t.arch[0]] < pos[t.q3[0]] < pos[t.arch[-1]]
        assert len(set(t.targets)) == 3

    def test_plain_ladder_has_no_tunnels(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        assert find_tunnels(g, st) == []

    def test_feet_to_the_same_path_do_not_count(self):
        # both feet run to row 1: no third distinct target
        cols = 13
        a = 3 * cols
        v = lambda r, c: r * cols + c
        g = ladder_strip(3, cols, 1, [(v(0, 4), a), (a, v(0, 6))])
        st = strip_state(g, wide_bags(3, cols, {2: [a]}))
        assert [t for t in find_tunnels(g, st)
                if isinstance(t, Tunnel)] == []


class TestThresholdDetectors:
    def test_quiet_ladder_reports_zero_counts(self):
        g = ladder_strip(3, 12)
        st = strip_state(g, column_bags(3, 12))
        det = threshold_detectors(g, st)
        assert all(r.count == 0 for r in det.values())
        assert det["bridge_on_three_nontrivial"].threshold == 48
        assert det["twisting_pair_bags"].threshold == 36
        assert det["tunnel_bags"].threshold == 48
        assert det["nontrivial_bridge_on_trivial_bags"].threshold == 40
        # C(3, 6) = 0: the accumulation lemma is void, never exceeded
        r = det["nontrivial_bridge_only_trivial"]
        assert r.threshold == 0 and not r.exceeded

    def test_twist_and_tunnel_bags_counted(self):
        g, st, _ = twist_fixture()
        assert threshold_detectors(g, st)["twisting_pair_bags"].count == 1
        g2, st2, _ = tunnel_fixture()
        assert threshold_detectors(g2, st2)["tunnel_bags"].count == 1

    def test_bridge_spanning_three_rows_counted_per_bag(self):
        cols = 12
        b = 3 * cols
        v = lambda r, c: r * cols + c
        g = ladder_strip(3, cols, 1,
                         [(v(0, 4), b), (v(1, 4), b), (v(2, 4), b)])
        st = strip_state(g, column_bags(3, cols, {4: [b]}))
        det = threshold_detectors(g, st)
        assert det["bridge_on_three_nontrivial"].count == 1
        assert det["bridge_on_three_nontrivial"].witnesses[0][0] == 4

    def test_bridge_touching_a_hub_signals_the_apex_detector(self):
        g, st = hub_path_state(8)
        z = 8
        g2 = Graph.build(g.n + 1, list(g.edges) + [(3, 9), (9, z)])
        bags = [set(b) for b in st.decomposition.bags]
        bags[3].add(9)
        st2 = strip_state(g2, bags, p=3)
        det = threshold_detectors(g2, st2)
        assert det["nontrivial_bridge_on_trivial_bags"].count == 1
        assert det["nontrivial_bridge_only_trivial"].count == 0

    def test_chord_makes_a_path_non_induced(self):
        # pin the linkage to the full rows so the chord stays a chord
        cols = 13
        v = lambda r, c: r * cols + c
        g = ladder_strip(2, cols, 0, [(v(0, 4), v(0, 6))])
        dec = LinearDecomposition.build(wide_bags(2, cols))
        # paths run separator to separator: columns 2 through 10
        rows = (tuple(range(2, 11)), tuple(range(cols + 2, cols + 11)))
        st = FoundationalState(dec, Linkage(rows))
        det = threshold_detectors(g, st)
        assert det["non_induced_path"].count == 1
        assert det["non_induced_path"].threshold == 1

    def test_trivial_neighbor_counts(self):
        # a row flanked by three hubs, each adjacent to every column
        cols = 8
        hubs = [cols, cols + 1, cols + 2]
        edges = [(i, i + 1) for i in range(cols - 1)]
        edges += [(i, z) for i in range(cols) for z in hubs]
        g = Graph.build(cols + 3, edges)
        st = strip_state(g, [{i, i + 1, *hubs} for i in range(cols - 1)],
                         p=3)
        det = threshold_detectors(g, st)
        assert det["path_with_three_trivial_neighbors"].count == 1
        assert det["path_with_three_trivial_neighbors"].exceeded
        assert det["path_with_four_trivial_neighbors"].count == 0


class TestReroute:
    def detour_state(self):
        cols = 13
        d = 3 * cols
        v = lambda r, c: r * cols + c
        g = ladder_strip(3, cols, 1, [(v(0, 4), d), (d, v(0, 6))])
        st = strip_state(g, wide_bags(3, cols, {2: [d]}))
        return g, st, d, v

    def test_detour_splices_into_the_path(self):
        g, st, d, v = self.detour_state()
        pid = next(pi for pi, p in enumerate(st.linkage.paths)
                   if v(0, 4) in p)
        out = reroute_along(g, st, 2, pid, (v(0, 4), d, v(0, 6)))
        new = out.linkage.paths[pid]
        assert d in new and v(0, 5) not in new
        assert {"L1", "L2", "L3", "L4", "L5"} <= out.satisfied
        rep = validate_linear(g, out, ("L5",))
        assert rep["L5"].passed

    def test_end_linkage_flag_is_carried(self):
        g, st, d, v = self.detour_state()
        pid = next(pi for pi, p in enumerate(st.linkage.paths)
                   if v(0, 4) in p)
        out = reroute_along(g, st.with_flags(["L9"]), 2, pid,
                            (v(0, 4), d, v(0, 6)))
        assert "L9" in out.satisfied

    def test_replacement_must_stay_inside_the_bag(self):
        g, st, d, v = self.detour_state()
        pid = next(pi for pi, p in enumerate(st.linkage.paths)
                   if v(0, 4) in p)
        with pytest.raises(GraphInputError):
            reroute_along(g, st, 1, pid, (v(0, 4), d, v(0, 6)))

    def test_replacement_must_avoid_other_linkage_paths(self):
        g, st, d, v = self.detour_state()
        pid = next(pi for pi, p in enumerate(st.linkage.paths)
                   if v(0, 4) in p)
        with pytest.raises(GraphInputError):
            reroute_along(g, st, 2, pid,
                          (v(0, 4), v(1, 4), v(1, 5), v(1, 6), v(0, 6)))

    def test_replacement_must_be_a_real_path(self):
        g, st, d, v = self.detour_state()
        pid = next(pi for pi, p in enumerate(st.linkage.paths)
                   if v(0, 4) in p)
        with pytest.raises(GraphInputError):
            reroute_along(g, st, 2, pid, (v(0, 4), v(0, 6)))
