"""Shared helpers: random instance generation and brute-force oracles.

The oracles here are deliberately naive (exhaustive enumeration) so that
the engine implementations can be checked against something independent.
"""

from __future__ import annotations

import itertools
import random

from apexkit.decomp import (FoundationalState, LinearDecomposition,
                            foundational_linkage)
from apexkit.graph import Graph


def ladder_strip(rows: int, cols: int, extra_vertices: int = 0,
                 extra_edges=()) -> Graph:
    """`rows` horizontal paths of `cols` vertices, consecutive rows joined
    by a rung in every column; vertex (r, c) is r*cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols - 1):
            edges.append((r * cols + c, r * cols + c + 1))
    for r in range(rows - 1):
        for c in range(cols):
            edges.append((r * cols + c, (r + 1) * cols + c))
    return Graph.build(rows * cols + extra_vertices,
                       edges + list(extra_edges))


def column_bags(rows: int, cols: int, extra=None) -> list[set[int]]:
    """Bags of two consecutive columns (adhesion = rows); `extra` maps a
    bag index to additional vertices."""
    extra = extra or {}
    out = []
    for i in range(cols - 1):
        bag = {r * cols + c for r in range(rows) for c in (i, i + 1)}
        out.append(bag | set(extra.get(i, ())))
    return out


def wide_bags(rows: int, cols: int, extra=None) -> list[set[int]]:
    """Bags of three consecutive columns overlapping in one (adhesion =
    rows); `cols` must be odd."""
    extra = extra or {}
    out = []
    for i in range((cols - 1) // 2):
        bag = {r * cols + c for r in range(rows)
               for c in (2 * i, 2 * i + 1, 2 * i + 2)}
        out.append(bag | set(extra.get(i, ())))
    return out


def strip_state(g: Graph, bags, p: int = 6) -> FoundationalState:
    dec = LinearDecomposition.build(bags)
    return FoundationalState(dec, foundational_linkage(g, dec), p=p)


def hub_path_state(cols: int, p: int = 3) -> tuple[Graph, FoundationalState]:
    """A path of `cols` vertices plus a hub adjacent to all of them; bags
    {i, i+1, hub}, adhesion 2, the hub a trivial foundational path."""
    z = cols
    g = Graph.build(cols + 1, [(i, i + 1) for i in range(cols - 1)]
                    + [(i, z) for i in range(cols)])
    return g, strip_state(g, [{i, i + 1, z} for i in range(cols - 1)], p=p)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return Graph.build(n, edges)


def brute_force_min_cut(g: Graph, a: set[int], b: set[int]) -> int:
    """Size of a minimum vertex set meeting every a-b path (terminals may
    be cut).  Exhaustive over all vertex subsets, smallest first."""
    n = g.n
    adj = g.adjacency()

    def separated(cut: set[int]) -> bool:
        seen = set(a) - cut
        stack = list(seen)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in cut and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return not (seen & (b - cut))

    for size in range(n + 1):
        for cut in itertools.combinations(range(n), size):
            if separated(set(cut)):
                return size
    return n


def brute_force_has_minor(host: Graph, pattern: Graph) -> bool:
    """Pattern-as-minor test by enumerating all assignments of host
    vertices to pattern branch sets (including 'unused').  Exponential;
    usable only for small hosts."""
    simple = host.simplify()
    pat = pattern.simplify()
    p = pat.n
    n = simple.n
    if n < p:
        return False
    adj = simple.adjacency()
    pedges = [(u, v) for (u, v) in pat.edges]

    for assignment in itertools.product(range(p + 1), repeat=n):
        parts = [set() for _ in range(p)]
        for v, c in enumerate(assignment):
            if c < p:
                parts[c].add(v)
        if any(not part for part in parts):
            continue
        if not all(simple.is_connected_subset(part) for part in parts):
            continue
        ok = True
        for (a, b) in pedges:
            if not any(y in adj[x] for x in parts[a] for y in parts[b]):
                ok = False
                break
        if ok:
            return True
    return False
