"""Multigraph core: deletion, contraction, connectivity, disjoint paths.

Vertices are dense integers 0..n-1.  Stable string labels travel with the
vertices, so deleting or contracting does not change the observable identity
of the survivors.  All operations are pure: they return new Graph values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphInputError(ValueError):
    """Raised when an operation receives vertices or edges not in the graph."""


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite multigraph with loops.  Edges are an unordered multiset."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]

    @staticmethod
    def build(n: int, edges: Iterable[tuple[int, int]] = (),
              labels: Optional[Sequence[str]] = None) -> "Graph":
        es = tuple(sorted(_norm(u, v) for (u, v) in edges))
        for (u, v) in es:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u},{v}) outside vertex range 0..{n-1}")
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphInputError("label count != vertex count")
        return Graph(n, es, labels)

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for (u, v) in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        d = 0
        for (a, b) in self.edges:
            if a == v:
                d += 1
            if b == v:
                d += 1  # loops count twice
        return d

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for (a, b) in self.edges:
            d[a] += 1
            d[b] += 1
        return d

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in set(self.edges)

    def edge_multiset(self):
        from collections import Counter
        return Counter(self.edges)

    def is_simple(self) -> bool:
        seen = set()
        for (u, v) in self.edges:
            if u == v or (u, v) in seen:
                return False
            seen.add((u, v))
        return True

    def simplify(self) -> "Graph":
        """Drop loops and collapse parallel edges."""
        es = sorted({(u, v) for (u, v) in self.edges if u != v})
        return Graph(self.n, tuple(es), self.labels)

    # -- structural operations -------------------------------------------

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph.build(self.n, list(self.edges) + list(extra), self.labels)

    def add_vertex(self, label: Optional[str] = None) -> "Graph":
        lab = label if label is not None else str(self.n)
        return Graph(self.n + 1, self.edges, self.labels + (lab,))

    def delete_vertices(self, s: Iterable[int]) -> "Graph":
        ss = set(s)
        for v in ss:
            if not (0 <= v < self.n):
                raise GraphInputError(f"unknown vertex id {v}")
        keep = [v for v in range(self.n) if v not in ss]
        remap = {v: i for i, v in enumerate(keep)}
        es = [(remap[u], remap[v]) for (u, v) in self.edges
              if u not in ss and v not in ss]
        return Graph.build(len(keep), es, [self.labels[v] for v in keep])

    def induced(self, s: Iterable[int]) -> "Graph":
        ss = set(s)
        return self.delete_vertices(set(range(self.n)) - ss)

    def subgraph_edges(self, keep_edges: Iterable[tuple[int, int]]) -> "Graph":
        """Same vertex set, restricted edge multiset."""
        return Graph.build(self.n, keep_edges, self.labels)

    def contract_edge(self, e: tuple[int, int]) -> "Graph":
        """Identify the ends of e.  Loops and parallel edges are retained."""
        e = _norm(*e)
        es = list(self.edges)
        try:
            es.remove(e)
        except ValueError:
            raise GraphInputError(f"edge {e} not in graph")
        u, v = e
        if u == v:  # contracting a loop just deletes it
            return Graph.build(self.n, es, self.labels)
        # survivors keep their ids below v, shift above; merged vertex is u
        remap = {}
        for w in range(self.n):
            if w == v:
                remap[w] = u
            else:
                remap[w] = w if w < v else w - 1
        out = [(remap[a], remap[b]) for (a, b) in es]
        labels = list(self.labels)
        labels[u] = self.labels[u] + "+" + self.labels[v]
        del labels[v]
        return Graph.build(self.n - 1, out, labels)

    # -- connectivity ----------------------------------------------------

    def components(self) -> list[set[int]]:
        adj = self.adjacency()
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = {s}
            seen[s] = True
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.add(y)
                        stack.append(y)
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_connected_subset(self, s: Iterable[int]) -> bool:
        ss = list(set(s))
        if not ss:
            return False
        adj = self.adjacency()
        inset = set(ss)
        seen = {ss[0]}
        stack = [ss[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in inset and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(inset)


@dataclass(frozen=True)
class Separation:
    """A pair (A, B) covering V with no edge between A-B and B-A."""

    side_a: frozenset[int]
    side_b: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.side_a & self.side_b)

    def is_valid(self, g: Graph) -> bool:
        if self.side_a | self.side_b != set(range(g.n)):
            return False
        a_only = self.side_a - self.side_b
        b_only = self.side_b - self.side_a
        for (u, v) in g.edges:
            if (u in a_only and v in b_only) or (v in a_only and u in b_only):
                return False
        return True


@dataclass(frozen=True)
class Linkage:
    """A set of pairwise vertex-disjoint paths, each a vertex sequence.

    A path with a single vertex is trivial.
    """

    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def vertex_set(self) -> set[int]:
        return {v for p in self.paths for v in p}

    def is_valid(self, g: Graph) -> bool:
        adj = g.adjacency()
        seen: set[int] = set()
        for p in self.paths:
            if len(p) == 0 or len(set(p)) != len(p):
                return False
            if any(v in seen for v in p):
                return False
            seen.update(p)
            for a, b in zip(p, p[1:]):
                if b not in adj[a]:
                    return False
        return True


@dataclass(frozen=True)
class CutCertificate:
    """A vertex set meeting every path between the two terminal sets."""

    vertices: frozenset[int]

    def is_valid(self, g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
        aset, bset = set(a) - self.vertices, set(b) - self.vertices
        h = g  # reachability in g minus the cut
        adj = h.adjacency()
        seen = set(aset)
        stack = list(aset)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in self.vertices and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return not (seen & bset)


def disjoint_paths(g: Graph, a: Iterable[int], b: Iterable[int],
                   k: int) -> Linkage | CutCertificate:
    """k vertex-disjoint A-B paths, or a cut of size < k (Menger duality).

    Unit vertex capacities via vertex splitting; augmenting paths are chosen
    lowest-id first so results are reproducible.
    """
    if k <= 0:
        raise GraphInputError("k must be positive")
    aset, bset = sorted(set(a)), sorted(set(b))
    for v in aset + bset:
        if not (0 <= v < g.n):
            raise GraphInputError(f"unknown vertex id {v}")
    n = g.n
    # node ids: v_in = 2v, v_out = 2v+1, source = 2n, sink = 2n+1
    SRC, SNK = 2 * n, 2 * n + 1
    succ: list[dict[int, int]] = [dict() for _ in range(2 * n + 2)]

    def add(u: int, v: int, cap: int) -> None:
        succ[u][v] = succ[u].get(v, 0) + cap
        succ[v].setdefault(u, 0)

    for v in range(n):
        add(2 * v, 2 * v + 1, 1)
    for (u, v) in g.edges:
        if u == v:
            continue
        add(2 * u + 1, 2 * v, 1)
        add(2 * v + 1, 2 * u, 1)
    for v in aset:
        add(SRC, 2 * v, 1)
    for v in bset:
        add(2 * v + 1, SNK, 1)
    init = [dict(d) for d in succ]

    flow = 0
    while True:
        prev = {SRC: SRC}
        frontier = [SRC]
        while frontier and SNK not in prev:
            nxt = []
            for x in frontier:
                for y in sorted(succ[x]):
                    if succ[x][y] > 0 and y not in prev:
                        prev[y] = x
                        nxt.append(y)
            frontier = nxt
        if SNK not in prev:
            break
        y = SNK
        while y != SRC:
            x = prev[y]
            succ[x][y] -= 1
            succ[y][x] += 1
            y = x
        flow += 1
        if flow >= k:
            break

    if flow >= k:
        paths = []
        # pushed flow on an original arc = initial cap - residual cap;
        # reconstruct paths by following out-arcs with positive pushed flow
        pushed: dict[tuple[int, int], int] = {}
        for x in range(2 * n + 2):
            for y, c0 in init[x].items():
                f = c0 - succ[x][y]
                if f > 0:
                    pushed[(x, y)] = f
        count = 0
        for v in aset:
            if pushed.get((SRC, 2 * v), 0) > 0 and count < k:
                pushed[(SRC, 2 * v)] -= 1
                path = [v]
                node = 2 * v
                while True:
                    node_out = node + 1
                    pushed[(node, node_out)] -= 1
                    target = None
                    for y in sorted(succ[node_out]):
                        if pushed.get((node_out, y), 0) > 0:
                            target = y
                            break
                    if target is None or target == SNK:
                        if target == SNK:
                            pushed[(node_out, SNK)] -= 1
                        break
                    pushed[(node_out, target)] -= 1
                    path.append(target // 2)
                    node = target
                paths.append(tuple(path))
                count += 1
        return Linkage(tuple(paths[:k]))

    # a min cut exists; rerun with weighted vertex capacities so the cut
    # prefers internal vertices over terminals (still minimum cardinality,
    # by the weight gap: internal n+2, terminal n+3, everything else huge)
    INF = 1 << 30
    term = set(aset) | set(bset)
    wsucc: list[dict[int, int]] = [dict() for _ in range(2 * n + 2)]

    def wadd(u: int, v: int, cap: int) -> None:
        wsucc[u][v] = wsucc[u].get(v, 0) + cap
        wsucc[v].setdefault(u, 0)

    for v in range(n):
        wadd(2 * v, 2 * v + 1, n + 3 if v in term else n + 2)
    for (u, v) in g.edges:
        if u == v:
            continue
        wadd(2 * u + 1, 2 * v, INF)
        wadd(2 * v + 1, 2 * u, INF)
    for v in aset:
        wadd(SRC, 2 * v, INF)
    for v in bset:
        wadd(2 * v + 1, SNK, INF)
    while True:
        prev = {SRC: SRC}
        frontier = [SRC]
        while frontier and SNK not in prev:
            nxt = []
            for x in frontier:
                for y in sorted(wsucc[x]):
                    if wsucc[x][y] > 0 and y not in prev:
                        prev[y] = x
                        nxt.append(y)
            frontier = nxt
        if SNK not in prev:
            break
        bottleneck = INF
        y = SNK
        while y != SRC:
            x = prev[y]
            bottleneck = min(bottleneck, wsucc[x][y])
            y = x
        y = SNK
        while y != SRC:
            x = prev[y]
            wsucc[x][y] -= bottleneck
            wsucc[y][x] += bottleneck
            y = x
    reach = {SRC}
    stack = [SRC]
    while stack:
        x = stack.pop()
        for y, c in wsucc[x].items():
            if c > 0 and y not in reach:
                reach.add(y)
                stack.append(y)
    cut = {v for v in range(n) if 2 * v in reach and 2 * v + 1 not in reach}
    return CutCertificate(frozenset(cut))


def max_disjoint_paths(g: Graph, a: Iterable[int], b: Iterable[int]) -> Linkage:
    """All-you-can-route linkage between A and B."""
    k = min(len(set(a)), len(set(b)))
    if k == 0:
        return Linkage(())
    res = disjoint_paths(g, a, b, k)
    while isinstance(res, CutCertificate):
        k = len(res.vertices)
        if k == 0:
            return Linkage(())
        res = disjoint_paths(g, a, b, k)
    return res


def _internal_cut(g: Graph, u: int, v: int, k: int) -> Optional[frozenset[int]]:
    """A u-v cut of size < k avoiding u and v, or None if k internally
    disjoint u-v paths exist.  Requires u, v nonadjacent in a simple g."""
    adj = g.adjacency()
    keep = [w for w in range(g.n) if w not in (u, v)]
    remap = {w: i for i, w in enumerate(keep)}
    h = g.delete_vertices([u, v])
    a = [remap[w] for w in adj[u]]
    b = [remap[w] for w in adj[v]]
    if min(len(a), len(b)) < k:
        small = adj[u] if len(a) < len(b) else adj[v]
        return frozenset(small)
    res = disjoint_paths(h, a, b, k)
    if isinstance(res, CutCertificate):
        return frozenset(keep[w] for w in res.vertices)
    return None


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff |V| > k and no vertex cut of fewer than k vertices exists."""
    if k <= 0:
        raise GraphInputError("k must be positive")
    if g.n <= k:
        return False
    simple = g.simplify()
    adj = simple.adjacency()
    if any(len(adj[v]) < k for v in range(g.n)):
        return False
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if v in adj[u]:
                continue
            if _internal_cut(simple, u, v, k) is not None:
                return False
    return True


def min_vertex_cut_between(g: Graph, u: int, v: int) -> frozenset[int]:
    """A minimum vertex cut separating nonadjacent u and v (excluding both)."""
    simple = g.simplify()
    if simple.has_edge(u, v):
        raise GraphInputError("endpoints are adjacent, no separating cut exists")
    k = 1
    while True:
        cut = _internal_cut(simple, u, v, k)
        if cut is not None:
            return cut
        k += 1


# -- small named graphs used across tests --------------------------------

def complete_graph(n: int) -> Graph:
    return Graph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.build(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.build(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.build(a + b, [(i, a + j) for i in range(a) for j in range(b)])
