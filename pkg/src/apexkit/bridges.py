"""Bridges of a subgraph, segment structure, rerouting, and strip outcomes.

Given a subgraph S of a graph G, the S-bridges partition the edges of G
outside S: each chord with both ends on S is its own bridge, and each
component C of G minus V(S) spawns one bridge holding every edge with an
end in C.  A segment of S is a maximal subpath whose internal vertices
have degree two in S; a bridge is stable when no single segment carries
all of its attachments.

`stabilize` makes every bridge stable in a 3-connected host by repeatedly
rerouting a segment along a bridge path, greedily improving the pair
(#vertices in stable bridges, -|V(S)|); a local optimum of that measure
has stable bridges only.

`strip_outcome` classifies a linkage drawn as a strip: either a disk (or
cylinder) drawing with the path ends on the boundary, a cutset of size at
most three hiding a component from the ends, or one of three structural
outcomes (a jump between non-neighbouring paths, a twisting pair between
neighbouring paths, or a tunnel triple through a path).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

from .graph import (Graph, GraphInputError, Linkage, CutCertificate,
                    disjoint_paths, is_k_connected)
from .embed import PlaneEmbedding, Society, is_rural, embed_in_cylinder
from .outcome import Indeterminate, Budget, BudgetExceeded


# -- bridges and segments --------------------------------------------------

@dataclass(frozen=True)
class Bridge:
    """One bridge of a subgraph: its edges, attachments, stability flag."""

    edges: frozenset[tuple[int, int]]
    attachments: frozenset[int]
    stable: bool

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e) | self.attachments

    @property
    def interior(self) -> frozenset[int]:
        return self.vertices - self.attachments


@dataclass(frozen=True)
class Segment:
    """A maximal subpath of S whose internal vertices have S-degree two."""

    path: tuple[int, ...]

    @property
    def ends(self) -> tuple[int, int]:
        return (self.path[0], self.path[-1])

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.path)


@dataclass(frozen=True)
class BridgeDecomposition:
    """All bridges of a subgraph, plus the subgraph's marked vertex set."""

    subgraph: Graph
    s_vertices: frozenset[int]
    bridges: tuple[Bridge, ...]


def _subgraph_vertices(s: Graph, extra: Iterable[int]) -> frozenset[int]:
    verts = {v for e in s.edges for v in e}
    verts.update(extra)
    return frozenset(verts)


def _check_subgraph(g: Graph, s: Graph) -> None:
    if g.n != s.n:
        raise GraphInputError("subgraph must share the host's vertex range")
    ge = {tuple(sorted(e)) for e in g.simplify().edges}
    se = {tuple(sorted(e)) for e in s.simplify().edges}
    if not se <= ge:
        raise GraphInputError("given graph is not a subgraph of the host")


def segments(s: Graph, vertices: Iterable[int] = ()) -> list[Segment]:
    """The unique maximal-subpath cover of S.

    Marked isolated vertices become trivial one-vertex segments.  A block
    of S that is a cycle has no such cover and is rejected.
    """
    simple = s.simplify()
    sv = _subgraph_vertices(simple, vertices)
    nxg = nx.Graph()
    nxg.add_nodes_from(sv)
    nxg.add_edges_from(simple.edges)
    for block in nx.biconnected_components(nxg):
        if len(block) >= 3:
            sub = nxg.subgraph(block)
            if all(d == 2 for _, d in sub.degree()):
                raise GraphInputError(
                    f"subgraph has a cycle block on {sorted(block)}")
    adj = simple.adjacency()
    deg = {v: len(adj[v] & sv) for v in sv}
    branch = {v for v in sv if deg[v] != 2}
    found: set[tuple[int, ...]] = set()
    for b in sorted(branch):
        if deg[b] == 0:
            found.add((b,))
            continue
        for w in sorted(adj[b] & sv):
            path = [b, w]
            while path[-1] not in branch:
                nxts = [x for x in adj[path[-1]] & sv if x != path[-2]]
                path.append(nxts[0])
            t = tuple(path)
            found.add(min(t, tuple(reversed(t))))
    return [Segment(t) for t in sorted(found)]


def compute_bridges(g: Graph, s: Graph,
                    vertices: Iterable[int] = ()) -> BridgeDecomposition:
    """All S-bridges of g, with stability computed from S's segments.

    `vertices` marks vertices of S that carry no S-edge (one-vertex paths
    of a linkage, for instance).
    """
    _check_subgraph(g, s)
    simple = g.simplify()
    ssimple = s.simplify()
    sv = _subgraph_vertices(ssimple, vertices)
    try:
        segs = segments(ssimple, vertices)
        seg_sets = [sg.vertex_set() for sg in segs]
    except GraphInputError:
        # stability is only meaningful when no block of S is a cycle;
        # with a cycle block present no segment cover exists, so no
        # segment can carry all attachments and every bridge is stable
        seg_sets = []
    se = {tuple(sorted(e)) for e in ssimple.edges}
    adj = simple.adjacency()

    def make(edges: Iterable[tuple[int, int]],
             attachments: Iterable[int]) -> Bridge:
        att = frozenset(attachments)
        stable = not any(att <= ss for ss in seg_sets)
        return Bridge(frozenset(tuple(sorted(e)) for e in edges), att, stable)

    bridges: list[Bridge] = []
    for (u, v) in simple.edges:
        if u in sv and v in sv and (min(u, v), max(u, v)) not in se:
            bridges.append(make([(u, v)], [u, v]))
    seen: set[int] = set()
    for start in range(simple.n):
        if start in sv or start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in sv and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        edges = [(u, v) for (u, v) in simple.edges
                 if u in comp or v in comp]
        att = {w for (u, v) in edges for w in (u, v) if w in sv}
        bridges.append(make(edges, att))
    return BridgeDecomposition(ssimple, sv, tuple(bridges))


# -- rerouting to stability ------------------------------------------------

def _stable_vertex_count(dec: BridgeDecomposition) -> int:
    stable_vs: set[int] = set()
    for b in dec.bridges:
        if b.stable:
            stable_vs |= b.vertices
    return len(stable_vs)


def _bridge_path(g: Graph, bridge: Bridge, x: int,
                 y: int) -> Optional[tuple[int, ...]]:
    """Shortest path from x to y through the bridge's interior (or the
    direct bridge edge), otherwise disjoint from S."""
    if not bridge.interior:
        if (min(x, y), max(x, y)) in bridge.edges:
            return (x, y)
        return None
    interior = bridge.interior
    adj = g.simplify().adjacency()
    prev: dict[int, Optional[int]] = {x: None}
    frontier = [x]
    while frontier:
        nxt = []
        for u in frontier:
            if u != x and y in adj[u]:
                path = [y, u]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return tuple(reversed(path))
            for w in sorted(adj[u]):
                if w in interior and w not in prev:
                    prev[w] = u
                    nxt.append(w)
        frontier = nxt
    return None


def stabilize(g: Graph, s: Graph) -> Graph:
    """Reroute segments of s inside g until every bridge is stable.

    Each step replaces the stretch of a segment between two attachments of
    an unstable bridge by a path through that bridge; steps are accepted
    only when they strictly improve (#vertices in stable bridges, -|V(S)|)
    lexicographically, which bounds the number of steps, and a local
    optimum of that measure has no unstable bridge in a 3-connected host.
    """
    simple = g.simplify()
    if not g.is_simple():
        raise GraphInputError("host graph must be simple")
    if not is_k_connected(simple, 3):
        raise GraphInputError("host graph must be 3-connected")
    _check_subgraph(simple, s)
    segs = segments(s)
    if len(segs) < 2:
        raise GraphInputError("subgraph must have at least two segments")

    current = s.simplify()
    while True:
        dec = compute_bridges(simple, current)
        segs = segments(current)
        if all(b.stable for b in dec.bridges):
            return current
        base = (_stable_vertex_count(dec), -len(dec.s_vertices))
        best_key = None
        best_graph = None
        for bridge in dec.bridges:
            if bridge.stable or len(bridge.attachments) < 2:
                continue
            for seg in segs:
                if seg.length < 2 or not bridge.attachments <= seg.vertex_set():
                    continue
                pos = {v: i for i, v in enumerate(seg.path)}
                att = sorted(bridge.attachments, key=lambda v: pos[v])
                for ai in range(len(att)):
                    for bi in range(ai + 1, len(att)):
                        x, y = att[ai], att[bi]
                        q = _bridge_path(simple, bridge, x, y)
                        if q is None:
                            continue
                        stretch = seg.path[pos[x]:pos[y] + 1]
                        drop = {tuple(sorted(e))
                                for e in zip(stretch, stretch[1:])}
                        new_edges = [e for e in current.edges
                                     if tuple(sorted(e)) not in drop]
                        new_edges += list(zip(q, q[1:]))
                        cand = Graph.build(simple.n, new_edges,
                                           simple.labels)
                        cdec = compute_bridges(simple, cand)
                        score = (_stable_vertex_count(cdec),
                                 -len(cdec.s_vertices))
                        if score <= base:
                            continue
                        key = (x, y, q)
                        if best_key is None or key < best_key:
                            best_key, best_graph = key, cand
        if best_graph is None:
            raise RuntimeError(
                "unstable bridge remains but no rerouting improves the "
                "measure; host preconditions are likely violated")
        current = best_graph


# -- strip outcomes --------------------------------------------------------

@dataclass(frozen=True)
class DiskDrawing:
    """A planar witness with the linkage boundary on the outer face.

    The embedding is of the host plus the listed rim cycles (one rim for a
    disk, two for a cylinder), as produced by the drawing engine; verify it
    against the host augmented with those cycles.
    """

    embedding: PlaneEmbedding
    boundaries: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CutSet:
    """At most three vertices hiding some component from the path ends."""

    vertices: frozenset[int]


@dataclass(frozen=True)
class StripOutcome:
    """One of the three structural outcomes of the strip classification.

    kind "jump": one connecting path between non-neighbouring linkage
    paths (indices = (i, j), q_paths = (Q,)).
    kind "twist": two disjoint connecting paths between neighbouring
    linkage paths whose ends cross (indices = (i, i+1),
    q_paths = (Q1, Q2), each oriented from path i to path i+1).
    kind "tunnel": a path Q0 with both ends on path i, plus paths Q1, Q2
    leaving the interior of Q0's stretch toward the two neighbouring
    linkage paths (indices = (i-1, i, i+1), q_paths = (Q0, Q1, Q2)).
    """

    kind: str
    indices: tuple[int, ...]
    q_paths: tuple[tuple[int, ...], ...]


def _linkage_positions(p: Linkage) -> dict[int, tuple[int, int]]:
    where: dict[int, tuple[int, int]] = {}
    for i, path in enumerate(p.paths):
        for j, v in enumerate(path):
            where[v] = (i, j)
    return where


def verify_strip_outcome(g: Graph, p: Linkage, out: StripOutcome,
                         mode: str = "disk") -> bool:
    """Order-condition checker for a claimed strip outcome."""
    where = _linkage_positions(p)
    pv = p.vertex_set()
    adj = g.simplify().adjacency()
    k = len(p.paths)

    def is_p_path(q: Sequence[int]) -> bool:
        if len(q) < 2 or len(set(q)) != len(q):
            return False
        if q[0] not in pv or q[-1] not in pv:
            return False
        if any(v in pv for v in q[1:-1]):
            return False
        return all(b in adj[a] for a, b in zip(q, q[1:]))

    if not all(is_p_path(q) for q in out.q_paths):
        return False
    if out.kind == "jump":
        (i, j), (q,) = out.indices, out.q_paths
        if where[q[0]][0] != i or where[q[-1]][0] != j:
            return False
        if abs(i - j) <= 1:
            return False
        if mode == "cylinder" and {i, j} == {0, k - 1}:
            return False
        return True
    if out.kind == "twist":
        i, j = out.indices
        if mode == "cylinder":
            if j != (i + 1) % k or not (0 <= i < k):
                return False
        else:
            if j != i + 1 or not (0 <= i < k - 1):
                return False
        q1, q2 = out.q_paths
        if set(q1) & set(q2):
            return False
        for q in (q1, q2):
            if where[q[0]][0] != i or where[q[-1]][0] != j:
                return False
        x1, x2 = where[q1[0]][1], where[q2[0]][1]
        y1, y2 = where[q1[-1]][1], where[q2[-1]][1]
        return x1 < x2 and y2 < y1
    if out.kind == "tunnel":
        il, i, ir = out.indices
        if mode == "cylinder":
            if il != (i - 1) % k or ir != (i + 1) % k:
                return False
        else:
            if il != i - 1 or ir != i + 1 or not (1 <= i <= k - 2):
                return False
        q0, q1, q2 = out.q_paths
        if where[q0[0]][0] != i or where[q0[-1]][0] != i:
            return False
        a, b = sorted((where[q0[0]][1], where[q0[-1]][1]))
        for q, side in ((q1, il), (q2, ir)):
            if where[q[0]][0] != i or where[q[-1]][0] != side:
                return False
            if not (a < where[q[0]][1] < b):
                return False
        sets = [set(q0), set(q1), set(q2)]
        shared_ok = {q1[0]} if q1[0] == q2[0] else set()
        if sets[0] & sets[1] or sets[0] & sets[2]:
            return False
        if (sets[1] & sets[2]) - shared_ok:
            return False
        return True
    return False


def _enumerate_p_paths(g: Graph, dec: BridgeDecomposition,
                       budget: Budget, cap: int
                       ) -> tuple[list[tuple[int, ...]], bool]:
    """All simple paths between two S-vertices through one bridge interior
    (plus single bridge edges); truncated flag set when cap or budget
    stopped the enumeration."""
    simple = g.simplify()
    adj = simple.adjacency()
    pool: list[tuple[int, ...]] = []
    truncated = False
    for bridge in dec.bridges:
        interior = bridge.interior
        for (u, v) in sorted(bridge.edges):
            if u in dec.s_vertices and v in dec.s_vertices:
                pool.append((u, v))
        if not interior:
            continue
        for x in sorted(bridge.attachments):

            def walk(path: list[int]):
                nonlocal truncated
                budget.spend()
                if len(pool) >= cap:
                    truncated = True
                    return
                v = path[-1]
                for w in sorted(adj[v]):
                    if w in dec.s_vertices:
                        if w != x and len(path) > 1:
                            pool.append(tuple(path) + (w,))
                    elif w in interior and w not in path:
                        path.append(w)
                        walk(path)
                        path.pop()

            walk([x])
    return pool, truncated


def strip_outcome(g: Graph, p: Linkage, mode: str = "disk",
                  budget: int = 200000):
    """Classify a stable-bridge linkage strip.

    Tries, in order: a drawing with the path ends on the boundary (disk or
    cylinder according to mode), a cutset of size at most three hiding a
    component from the path ends, then the jump / twist / tunnel outcomes.
    Returns the first success; Indeterminate only when the connecting-path
    enumeration was truncated by the budget.
    """
    if mode not in ("disk", "cylinder"):
        raise GraphInputError("mode must be 'disk' or 'cylinder'")
    simple = g.simplify()
    if not p.is_valid(simple):
        raise GraphInputError("linkage is not valid in the host")
    if any(len(path) < 2 for path in p.paths):
        raise GraphInputError("every linkage path needs two distinct ends")
    k = len(p.paths)
    if mode == "cylinder" and k < 3:
        raise GraphInputError("cylinder mode needs at least three paths")
    s = Graph.build(simple.n,
                    [e for path in p.paths for e in zip(path, path[1:])],
                    simple.labels)
    dec = compute_bridges(simple, s, vertices=p.vertex_set())
    unstable = [b for b in dec.bridges if not b.stable]
    if unstable:
        raise GraphInputError(
            f"unstable bridge with attachments "
            f"{sorted(unstable[0].attachments)}")
    where = _linkage_positions(p)
    if mode == "cylinder" and k == 3:
        for b in dec.bridges:
            if len({where[v][0] for v in b.attachments}) == 3:
                raise GraphInputError(
                    "a bridge attaches to all three paths")

    us = [path[0] for path in p.paths]
    vs = [path[-1] for path in p.paths]

    # 1: drawing
    if mode == "disk":
        if k == 1:
            omega = list(p.paths[0])
        else:
            omega = (us[:-1] + list(p.paths[-1])
                     + vs[1:-1][::-1]
                     + list(reversed(p.paths[0]))[:-1])
        emb = is_rural(Society(simple, tuple(omega)))
        rims = (tuple(omega),)
    else:
        # the two boundary orders are stated clockwise per end cap, which
        # is the same rotational sense once both live on one annulus
        emb = embed_in_cylinder(simple, tuple(us), tuple(vs))
        rims = (tuple(us), tuple(vs))
    if emb is not None:
        return DiskDrawing(emb, rims)

    # 2: small cutset hiding a component from the ends
    ends = set(us) | set(vs)
    adj = simple.adjacency()
    for w in range(simple.n):
        if w in ends:
            continue
        nbrs = sorted(adj[w])
        if len(nbrs) <= 3:
            return CutSet(frozenset(nbrs))
        keep = [x for x in range(simple.n) if x != w]
        remap = {x: i for i, x in enumerate(keep)}
        h = simple.delete_vertices([w])
        res = disjoint_paths(h, [remap[x] for x in nbrs],
                             [remap[x] for x in ends], 4)
        if isinstance(res, CutCertificate):
            return CutSet(frozenset(keep[i] for i in res.vertices))

    # 3: structural outcomes from the connecting-path pool
    b = Budget(budget)
    try:
        pool, truncated = _enumerate_p_paths(simple, dec, b, cap=5000)
    except BudgetExceeded as exc:
        return Indeterminate("connecting-path enumeration exhausted "
                             "its budget", exc.states)

    def ends_of(q):
        return where[q[0]], where[q[-1]]

    # jump
    for q in pool:
        (i, _), (j, _) = ends_of(q)
        if i > j:
            i, j = j, i
            q = tuple(reversed(q))
        if j - i > 1 and not (mode == "cylinder" and (i, j) == (0, k - 1)):
            return StripOutcome("jump", (i, j), (q,))

    # twist (on a cylinder every neighbouring pair is cyclic, including
    # the wrap pair: rotating the path labels around the cylinder is a
    # symmetry, so the last and first paths are neighbours too)
    for i in range(k if mode == "cylinder" else k - 1):
        j = (i + 1) % k
        between = []
        for q in pool:
            (a, _), (bb, _) = ends_of(q)
            if {a, bb} == {i, j}:
                between.append(q if a == i else tuple(reversed(q)))
        for q1 in between:
            for q2 in between:
                if set(q1) & set(q2):
                    continue
                if (where[q1[0]][1] < where[q2[0]][1]
                        and where[q2[-1]][1] < where[q1[-1]][1]):
                    return StripOutcome("twist", (i, j), (q1, q2))

    # tunnel
    irange = range(k) if mode == "cylinder" else range(1, k - 1)
    for i in irange:
        il = (i - 1) % k if mode == "cylinder" else i - 1
        ir = (i + 1) % k if mode == "cylinder" else i + 1
        loops = [q for q in pool
                 if ends_of(q)[0][0] == i and ends_of(q)[1][0] == i]
        side1 = [q if ends_of(q)[0][0] == i else tuple(reversed(q))
                 for q in pool if {ends_of(q)[0][0], ends_of(q)[1][0]}
                 == ({i, il} if il != i else {i})]
        side2 = [q if ends_of(q)[0][0] == i else tuple(reversed(q))
                 for q in pool if {ends_of(q)[0][0], ends_of(q)[1][0]}
                 == ({i, ir} if ir != i else {i})]
        for q0 in loops:
            a, bb = sorted((where[q0[0]][1], where[q0[-1]][1]))
            for q1 in side1:
                if not (a < where[q1[0]][1] < bb):
                    continue
                if set(q0) & set(q1):
                    continue
                for q2 in side2:
                    if not (a < where[q2[0]][1] < bb):
                        continue
                    if set(q0) & set(q2):
                        continue
                    shared = set(q1) & set(q2)
                    if shared and not (shared == {q1[0]}
                                       and q1[0] == q2[0]):
                        continue
                    out = StripOutcome("tunnel", (il, i, ir),
                                       (q0, q1, q2))
                    if verify_strip_outcome(simple, p, out, mode):
                        return out

    if truncated:
        return Indeterminate("connecting-path pool truncated before any "
                             "outcome was found", b.used)
    return Indeterminate(
        "exhaustive search found no drawing, cutset, or outcome", b.used)
