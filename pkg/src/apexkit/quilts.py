"""Counting bounds for triangulated disks with small interior deficiency.

A quilt is a simple plane graph whose infinite region is bounded by a
cycle, whose finite regions are all triangles, and whose deficiency --
the total shortfall below degree six over the vertices not on the outer
cycle -- is at most five.  This module validates quilts, locates their
convenient graphs (the outer cycle or one of its subpaths pinned down by
degree conditions), and checks the vertex-count bounds these structures
imply, both for quilts and for arbitrary disk drawings.

An exhaustive generator of small triangulated disks (and a randomized
variant) backs the bound checks with independently produced instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .embed import (PlaneEmbedding, Society, cyclic_orientation, is_rural)
from .graph import Graph, GraphInputError, _norm


def _interior_deficiency(g: Graph, boundary: frozenset[int]) -> int:
    adj = g.simplify().adjacency()
    return sum(max(6 - len(adj[v]), 0)
               for v in range(g.n) if v not in boundary)


@dataclass(frozen=True)
class Quilt:
    """Simple plane graph: infinite region bounded by `outer_cycle`, every
    finite region a triangle, deficiency at most five.

    `embedding` is the verified drawing witness; its outer face reads the
    outer cycle exactly.  Use `build` to validate; the raw constructor
    performs no checks.
    """

    graph: Graph
    outer_cycle: tuple[int, ...]
    embedding: PlaneEmbedding

    @property
    def cycle_length(self) -> int:
        return len(self.outer_cycle)

    @property
    def interior(self) -> frozenset[int]:
        return frozenset(range(self.graph.n)) - frozenset(self.outer_cycle)

    @classmethod
    def build(cls, g: Graph, outer_cycle: Iterable[int]) -> "Quilt":
        c = tuple(outer_cycle)
        if len(c) < 3 or len(set(c)) != len(c):
            raise GraphInputError(
                "outer cycle needs at least three distinct vertices")
        for v in c:
            if not (0 <= v < g.n):
                raise GraphInputError(f"outer cycle vertex {v} not in graph")
        simple = g.simplify()
        if sorted(simple.edges) != sorted(_norm(u, v) for u, v in g.edges):
            raise GraphInputError("quilt graph must be simple")
        eset = set(simple.edges)
        for i in range(len(c)):
            if _norm(c[i], c[(i + 1) % len(c)]) not in eset:
                raise GraphInputError("outer cycle is not a cycle of the graph")
        if len(simple.components()) != 1:
            raise GraphInputError("quilt graph must be connected")
        emb = is_rural(Society(simple, c))
        if emb is None:
            raise GraphInputError(
                "graph has no disk drawing with the outer cycle outside")
        faces = emb.faces()
        outer = faces[emb.outer_face]
        if len(outer) != len(c) or cyclic_orientation(outer, c) == 0:
            raise GraphInputError(
                "infinite region is not bounded by the outer cycle")
        for i, face in enumerate(faces):
            if i != emb.outer_face and (len(face) != 3
                                        or len(set(face)) != 3):
                raise GraphInputError(
                    "finite region is not bounded by a triangle")
        if _interior_deficiency(simple, frozenset(c)) > 5:
            raise GraphInputError("deficiency exceeds five")
        return cls(simple, c, emb)


def deficiency(q: Quilt) -> int:
    """Sum of max(6 - degree, 0) over vertices not on the outer cycle."""
    return _interior_deficiency(q.graph, frozenset(q.outer_cycle))


@dataclass(frozen=True)
class ConvenientGraph:
    """The outer cycle, or one of its subpaths with at least one edge,
    whose end vertices have degree exactly three and internal vertices
    degree exactly four (for the full cycle: exactly one vertex of degree
    three, all others degree exactly four)."""

    vertices: tuple[int, ...]
    is_cycle: bool

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - (0 if self.is_cycle else 1)


def find_convenient(q: Quilt) -> Optional[ConvenientGraph]:
    """A convenient graph with the fewest edges, or None if none exists.

    When exactly one outer-cycle vertex has degree three and every other
    one degree exactly four, the whole cycle qualifies (and no subpath
    can); otherwise subpaths are scanned shortest-first.
    """
    c = q.outer_cycle
    k = len(c)
    adj = q.graph.adjacency()
    deg = {v: len(adj[v]) for v in c}
    three = [v for v in c if deg[v] == 3]
    if len(three) == 1 and all(deg[v] == 4 for v in c if v != three[0]):
        return ConvenientGraph(c, True)
    for length in range(1, k):
        for s in range(k):
            verts = tuple(c[(s + i) % k] for i in range(length + 1))
            if (deg[verts[0]] == 3 and deg[verts[-1]] == 3
                    and all(deg[v] == 4 for v in verts[1:-1])):
                return ConvenientGraph(verts, False)
    return None


def mu(q: Quilt) -> int:
    """Minimum edge count of a convenient graph; any vertex of degree two
    anywhere in the quilt overrides the value to 1."""
    adj = q.graph.adjacency()
    if any(len(adj[v]) == 2 for v in range(q.graph.n)):
        return 1
    cg = find_convenient(q)
    if cg is None:
        raise GraphInputError(
            "quilt has neither a degree-two vertex nor a convenient graph")
    return cg.edge_count


@dataclass(frozen=True)
class QuiltBoundReport:
    """Evaluation of |V| <= k^2/2 + k/2 + mu + deficiency - 6."""

    vertex_count: int
    cycle_length: int
    mu: int
    deficiency: int
    bound: Fraction
    holds: bool

    @property
    def slack(self) -> Fraction:
        return self.bound - self.vertex_count


def check_quilt_bound(q: Quilt) -> QuiltBoundReport:
    """Exact evaluation of the quilt vertex bound (needs >= 4 vertices)."""
    n = q.graph.n
    if n < 4:
        raise GraphInputError("vertex bound requires at least four vertices")
    k = q.cycle_length
    m = mu(q)
    d = deficiency(q)
    bound = Fraction(k * k, 2) + Fraction(k, 2) + m + d - 6
    return QuiltBoundReport(n, k, m, d, bound, n <= bound)


@dataclass(frozen=True)
class DegreeSumReport:
    """Boundary degree sum against 4k - 6 + deficiency (k = cycle length).

    `majority_holds` records whether the outer cycle has strictly more
    degree-three vertices than vertices of degree five or more; it is None
    when a degree-two vertex voids that consequence.
    """

    boundary_degree_sum: int
    bound: int
    holds: bool
    degree_three: int
    degree_five_plus: int
    majority_holds: Optional[bool]


def degree_sum_identity(q: Quilt) -> DegreeSumReport:
    """Capping the disk with a hub bounds the outer-cycle degree sum."""
    adj = q.graph.adjacency()
    c = q.outer_cycle
    total = sum(len(adj[v]) for v in c)
    bound = 4 * len(c) - 6 + deficiency(q)
    d3 = sum(1 for v in c if len(adj[v]) == 3)
    d5 = sum(1 for v in c if len(adj[v]) >= 5)
    has_two = any(len(adj[v]) == 2 for v in range(q.graph.n))
    majority = None if has_two else d3 > d5
    return DegreeSumReport(total, bound, total <= bound, d3, d5, majority)


@dataclass(frozen=True)
class DiskBoundReport:
    """Evaluation of |V| <= |X|^2/2 + 3|X|/2 - 1 for a disk drawing with X
    on the boundary circle; the hypothesis is |X| >= 3 and interior
    deficiency at most five."""

    vertex_count: int
    boundary_size: int
    interior_deficiency: int
    hypothesis_met: bool
    bound: Fraction
    holds: bool

    @property
    def slack(self) -> Fraction:
        return self.bound - self.vertex_count


def disk_embedding(g: Graph, boundary: Iterable[int]) -> PlaneEmbedding:
    """Drawing witness with the given vertices on the disk boundary in the
    given cyclic order; raises when no such drawing exists."""
    emb = is_rural(Society(g.simplify(), tuple(boundary)))
    if emb is None:
        raise GraphInputError(
            "graph has no disk drawing with the given boundary")
    return emb


def check_disk_bound(g: Graph, x: Iterable[int],
                     embedding: PlaneEmbedding) -> DiskBoundReport:
    """Validate the drawing witness, then evaluate the disk vertex bound.

    The witness must embed the (simplified) graph with every vertex of x
    incident to the outer region; other outer-region vertices can always
    be nudged inside the disk, so x itself is the boundary circle.
    """
    xs = frozenset(x)
    simple = g.simplify()
    for v in xs:
        if not (0 <= v < simple.n):
            raise GraphInputError(f"boundary vertex {v} not in graph")
    if not embedding.verify(simple):
        raise GraphInputError("invalid disk drawing witness")
    faces = embedding.faces()
    if not faces:
        raise GraphInputError("drawing witness has no regions")
    outer = faces[embedding.outer_face]
    if not xs <= set(outer):
        raise GraphInputError(
            "boundary vertices are not all on the outer region")
    d = _interior_deficiency(simple, xs)
    hyp = d <= 5 and len(xs) >= 3
    bound = Fraction(len(xs) ** 2, 2) + Fraction(3 * len(xs), 2) - 1
    return DiskBoundReport(simple.n, len(xs), d, hyp, bound,
                           simple.n <= bound)


# --------------------------------------------------------------------------
# Generation of triangulated disks.
#
# Every plane triangulation of a polygon arises from a unique recursion:
# the first boundary edge of the current region lies in exactly one
# triangle, whose apex is either another region-boundary vertex (splitting
# the region in two) or a fresh interior vertex (growing the region by
# one).  Interior vertices take ids in the deterministic order the
# recursion introduces them, so each labeled triangulation is produced
# exactly once; isomorphic duplicates are removed afterwards by canonical
# code.


def _triangulation_edge_sets(k: int, interior: int,
                             max_deficiency: int = 5
                             ) -> Iterator[tuple[tuple[int, int], ...]]:
    """Edge lists of all triangulations of a k-gon (boundary 0..k-1 in
    cycle order) with `interior` interior vertices, pruned to interior
    deficiency at most `max_deficiency` as soon as enclosed degrees become
    final."""
    n = k + interior
    edges: set[tuple[int, int]] = {_norm(i, (i + 1) % k) for i in range(k)}
    deg = [2] * k + [0] * interior
    active = [1] * k + [0] * interior    # pending regions containing v
    regions: list[tuple[tuple[int, ...], int]] = [(tuple(range(k)), interior)]
    state = {"used": k, "closed_def": 0}

    def close(vertices: Iterable[int]) -> Optional[int]:
        """Drop one region occurrence per vertex; account the deficiency of
        interior vertices whose degree is now final.  None = prune."""
        delta = 0
        for v in vertices:
            active[v] -= 1
            if active[v] == 0 and v >= k:
                delta += max(6 - deg[v], 0)
        if state["closed_def"] + delta > max_deficiency:
            for v in vertices:
                active[v] += 1
            return None
        state["closed_def"] += delta
        return delta

    def reopen(vertices: Iterable[int], delta: int) -> None:
        state["closed_def"] -= delta
        for v in vertices:
            active[v] += 1

    def add_edge(e: tuple[int, int]) -> None:
        edges.add(e)
        deg[e[0]] += 1
        deg[e[1]] += 1

    def drop_edge(e: tuple[int, int]) -> None:
        edges.remove(e)
        deg[e[0]] -= 1
        deg[e[1]] -= 1

    def solve() -> Iterator[tuple[tuple[int, int], ...]]:
        if not regions:
            yield tuple(sorted(edges))
            return
        cycle, t = regions.pop()
        try:
            size = len(cycle)
            if size == 3 and t == 0:
                delta = close(cycle)
                if delta is not None:
                    yield from solve()
                    reopen(cycle, delta)
                return
            b0, b1 = cycle[0], cycle[1]
            for j in range(2, size):
                apex = cycle[j]
                new_edges = []
                if j != size - 1:
                    new_edges.append(_norm(b0, apex))
                if j != 2:
                    new_edges.append(_norm(b1, apex))
                if any(e in edges for e in new_edges):
                    continue    # chord already drawn outside this region
                sub1 = cycle[1:j + 1]
                sub2 = cycle[j:] + (b0,)
                for t1 in range(t + 1):
                    t2 = t - t1
                    if (t1 and len(sub1) < 3) or (t2 and len(sub2) < 3):
                        continue
                    subs = [(s, c) for s, c in ((sub1, t1), (sub2, t2))
                            if len(s) >= 3]
                    for e in new_edges:
                        add_edge(e)
                    for s, _ in subs:
                        for v in s:
                            active[v] += 1
                    delta = close(cycle)
                    if delta is not None:
                        regions.extend(reversed(subs))
                        yield from solve()
                        for _ in subs:
                            regions.pop()
                        reopen(cycle, delta)
                    for s, _ in subs:
                        for v in s:
                            active[v] -= 1
                    for e in new_edges:
                        drop_edge(e)
            if t >= 1:
                w = state["used"]
                state["used"] += 1
                e1, e2 = _norm(b0, w), _norm(b1, w)
                add_edge(e1)
                add_edge(e2)
                grown = cycle[1:] + (b0, w)
                for v in grown:
                    active[v] += 1
                delta = close(cycle)
                if delta is not None:
                    regions.append((grown, t - 1))
                    yield from solve()
                    regions.pop()
                    reopen(cycle, delta)
                for v in grown:
                    active[v] -= 1
                drop_edge(e2)
                drop_edge(e1)
                state["used"] -= 1
        finally:
            regions.append((cycle, t))

    yield from solve()


def _min_completion(edges: tuple[tuple[int, int], ...],
                    adj: list[list[int]], n: int,
                    relabel: dict[int, int]) -> tuple:
    """Minimal edge code over canonical extensions of a boundary labeling.

    Interior vertices are labeled one at a time; at every step only the
    unlabeled vertices whose signature (labeled-neighbor labels, degree)
    is minimal may receive the next label, with ties branched.  The result
    depends only on the isomorphism class rooted at the given boundary
    labeling, which is all deduplication needs.
    """
    best: list[Optional[tuple]] = [None]

    def rec(labels: dict[int, int]) -> None:
        if len(labels) == n:
            code = tuple(sorted(
                _norm(labels[u], labels[v]) for u, v in edges))
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        sigs = {}
        for v in range(n):
            if v not in labels:
                placed = sorted(labels[u] for u in adj[v] if u in labels)
                sigs[v] = (-len(placed), tuple(placed), len(adj[v]))
        low = min(sigs.values())
        nxt = len(labels)
        for v, sig in sigs.items():
            if sig == low:
                labels[v] = nxt
                rec(labels)
                del labels[v]

    rec(dict(relabel))
    return best[0]


def _canonical_code(edges: tuple[tuple[int, int], ...], n: int,
                    k: int) -> tuple:
    """Isomorphism-invariant code of a triangulated disk on boundary cycle
    0..k-1: minimum completion code over the 2k boundary symmetries.  The
    drawing is determined by graph plus boundary cycle (capping the disk
    with a hub gives a maximal planar, hence 3-connected, graph), so graph
    isomorphism respecting the boundary cycle is the right equivalence.

    Only symmetries realizing the lexicographically least rotation of the
    boundary degree sequence need completing; that sequence is itself an
    isomorphism invariant, so the restriction never splits an orbit.
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    bdeg = [len(adj[i]) for i in range(k)]
    starts = []
    low = None
    for start in range(k):
        for step in (1, -1):
            seq = tuple(bdeg[(start + step * i) % k] for i in range(k))
            if low is None or seq < low:
                low, starts = seq, [(start, step)]
            elif seq == low:
                starts.append((start, step))
    best = None
    for start, step in starts:
        relabel = {(start + step * i) % k: i for i in range(k)}
        code = _min_completion(edges, adj, n, relabel)
        if best is None or code < best:
            best = code
    return (n, k, best)


def _triangulations(k: int, interior: int,
                    max_deficiency: int = 5) -> Iterator[Graph]:
    """Graph view of `_triangulation_edge_sets`."""
    n = k + interior
    for edges in _triangulation_edge_sets(k, interior, max_deficiency):
        yield Graph.build(n, edges)


def generate_quilts(max_vertices: int) -> list[Quilt]:
    """Every quilt with at most `max_vertices` vertices, one per
    isomorphism class, as validated Quilt values."""
    out: list[Quilt] = []
    seen: set[tuple] = set()
    for k in range(3, max_vertices + 1):
        for i in range(max_vertices - k + 1):
            n = k + i
            for edges in _triangulation_edge_sets(k, i):
                code = _canonical_code(edges, n, k)
                if code in seen:
                    continue
                seen.add(code)
                out.append(Quilt.build(Graph.build(n, edges),
                                       tuple(range(k))))
    return out


def random_disk_triangulation(rng: random.Random, boundary_length: int,
                              interior: int) -> tuple[Graph, tuple[int, ...]]:
    """One random triangulation of a polygon (not uniformly distributed:
    each region-splitting choice is made uniformly at random).  Returns
    the graph and its boundary cycle 0..boundary_length-1."""
    k = boundary_length
    if k < 3:
        raise GraphInputError("boundary must have at least three vertices")
    n = k + interior
    while True:
        result = _random_attempt(rng, k, interior)
        if result is not None:
            return Graph.build(n, sorted(result)), tuple(range(k))


def _random_attempt(rng: random.Random, k: int,
                    interior: int) -> Optional[set[tuple[int, int]]]:
    """One randomized pass of the region recursion; None on the rare dead
    end where every apex choice would duplicate an existing chord."""
    edges: set[tuple[int, int]] = {_norm(i, (i + 1) % k) for i in range(k)}
    regions: list[tuple[tuple[int, ...], int]] = [(tuple(range(k)), interior)]
    used = k
    while regions:
        cycle, t = regions.pop()
        size = len(cycle)
        if size == 3 and t == 0:
            continue
        b0, b1 = cycle[0], cycle[1]
        options: list[tuple] = []
        for j in range(2, size):
            # an apex whose chord is already drawn (outside this region,
            # after an earlier growth step) would break simplicity
            if ((j != size - 1 and _norm(b0, cycle[j]) in edges)
                    or (j != 2 and _norm(b1, cycle[j]) in edges)):
                continue
            sub1, sub2 = cycle[1:j + 1], cycle[j:] + (b0,)
            # interior vertices only fit into subregions of size >= 3
            lo, hi = 0, t
            if len(sub1) < 3:
                hi = 0
            if len(sub2) < 3:
                lo = t
            if lo <= hi:
                options.append(("split", j, lo, hi))
        if t >= 1:
            options.append(("grow",))
        if not options:
            return None
        choice = rng.choice(options)
        if choice[0] == "grow":
            w = used
            used += 1
            edges.add(_norm(b0, w))
            edges.add(_norm(b1, w))
            regions.append((cycle[1:] + (b0, w), t - 1))
        else:
            _, j, lo, hi = choice
            t1 = rng.randint(lo, hi)
            apex = cycle[j]
            if j != size - 1:
                edges.add(_norm(b0, apex))
            if j != 2:
                edges.add(_norm(b1, apex))
            sub1, sub2 = cycle[1:j + 1], cycle[j:] + (b0,)
            if len(sub2) >= 3:
                regions.append((sub2, t - t1))
            if len(sub1) >= 3:
                regions.append((sub1, t1))
    return edges
