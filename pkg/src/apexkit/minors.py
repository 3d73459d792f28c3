"""Exact minor and subdivision testing with branch-set certificates.

The minor search combines three layers:

1. an apex shortcut for the K6 pattern (a graph with an apex vertex has no
   K6 minor, since K6 minus any vertex is the nonplanar K5),
2. a congestion-routing heuristic that grows one chain of host vertices
   per pattern vertex and iteratively re-routes overlapping chains until
   they are disjoint (positive instances only), and
3. a complete demand-driven backtracking search with a state budget;
   running out of budget yields Indeterminate, never a silent "no".

Certificates are always re-verified before being returned.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import Graph
from .embed import find_apex_vertex
from .outcome import Indeterminate, Budget, BudgetExceeded

DEFAULT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class MinorModel:
    """Branch sets plus one witness host edge per pattern edge."""

    branch_sets: tuple[frozenset[int], ...]
    witness_edges: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    # pairs (pattern edge, host edge), both as sorted vertex pairs

    def witness_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        return dict(self.witness_edges)


def verify_minor_model(host: Graph, pattern: Graph, m: MinorModel,
                       explain: bool = False):
    """True iff m certifies pattern as a minor of host.

    With explain=True returns (bool, reason).
    """

    def fail(reason: str):
        return (False, reason) if explain else False

    if len(m.branch_sets) != pattern.n:
        return fail("branch set count differs from pattern order")
    seen: set[int] = set()
    for i, bs in enumerate(m.branch_sets):
        if not bs:
            return fail(f"branch set {i} is empty")
        if any(not (0 <= v < host.n) for v in bs):
            return fail(f"branch set {i} leaves the host vertex range")
        if seen & bs:
            return fail(f"branch set {i} overlaps an earlier one")
        seen |= bs
        if not host.is_connected_subset(bs):
            return fail(f"branch set {i} is not connected in the host")
    host_edges = {tuple(sorted(e)) for e in host.edges}
    wit = m.witness_map()
    for (a, b) in pattern.simplify().edges:
        pe = (a, b)
        if pe not in wit:
            return fail(f"pattern edge {pe} has no witness")
        he = tuple(sorted(wit[pe]))
        if he not in host_edges:
            return fail(f"witness {he} for {pe} is not a host edge")
        u, v = he
        ok = (u in m.branch_sets[a] and v in m.branch_sets[b]) or \
             (v in m.branch_sets[a] and u in m.branch_sets[b])
        if not ok:
            return fail(f"witness {he} does not join branch sets {a},{b}")
    return (True, "ok") if explain else True


def _witnesses_from_partition(host: Graph, pattern: Graph,
                              sets: Sequence[frozenset[int]]
                              ) -> Optional[MinorModel]:
    """Assemble a model from candidate branch sets, or None if some pattern
    edge has no host edge between its sets."""
    locate = {}
    for i, bs in enumerate(sets):
        for v in bs:
            locate[v] = i
    between: dict[tuple[int, int], tuple[int, int]] = {}
    for (u, v) in host.edges:
        iu, iv = locate.get(u), locate.get(v)
        if iu is None or iv is None or iu == iv:
            continue
        key = (min(iu, iv), max(iu, iv))
        between.setdefault(key, (min(u, v), max(u, v)))
    wit = []
    for (a, b) in pattern.simplify().edges:
        he = between.get((min(a, b), max(a, b)))
        if he is None:
            return None
        wit.append(((a, b), he))
    return MinorModel(tuple(frozenset(s) for s in sets), tuple(wit))


# -- heuristic layer ------------------------------------------------------

def _chain_dijkstra(adj: list[set[int]], chain: set[int],
                    weight: list[float]):
    """Weighted distances from a chain, paying weight[v] to step onto v.

    Returns (dist, parent); parent[v] is the previous vertex on a cheapest
    path back to the chain (a chain vertex has parent -1).
    """
    n = len(adj)
    dist = [float("inf")] * n
    parent = [-1] * n
    heap: list[tuple[float, int]] = []
    for u in chain:
        dist[u] = 0.0
        heap.append((0.0, u))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v in adj[u]:
            nd = d + weight[v]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, parent


def _route_chains(host: Graph, pattern: Graph,
                  rng: random.Random, passes: int) -> Optional[MinorModel]:
    """Congestion-routing search for branch sets (positive answers only).

    Each pattern vertex gets a chain of host vertices: a root plus cheapest
    paths toward the chains of its already-placed pattern neighbours, where
    stepping onto a vertex already used by k chains costs alpha^k.  Chains
    are re-routed in sweeps while the congestion penalty alpha anneals
    upward, so early sweeps may overlap freely and late sweeps force
    disjointness; once no host vertex is shared, the chains are branch sets
    of a minor model.
    """
    simple = host.simplify()
    pat = pattern.simplify()
    p, n = pat.n, simple.n
    if p == 0 or n < p:
        return None
    adj = simple.adjacency()
    pat_adj = pat.adjacency()
    usage = [0] * n
    chains: list[Optional[set[int]]] = [None] * p
    alpha = 2.0  # congestion penalty, annealed upward across sweeps

    def weight() -> list[float]:
        # jitter diversifies tie-breaking between restarts
        return [alpha ** usage[v] * (1.0 + 0.2 * rng.random())
                for v in range(n)]

    def place(i: int) -> None:
        w = weight()
        targets = [j for j in pat_adj[i] if chains[j] is not None]
        rows = [_chain_dijkstra(adj, chains[j], w) for j in targets]
        if rows:
            best, best_cost = None, float("inf")
            for v in range(n):
                cost = w[v] + sum(dist[v] for dist, _ in rows)
                if cost < best_cost:
                    best, best_cost = v, cost
            if best is None:
                return False  # some target chain is unreachable
        else:
            best = min(range(n), key=lambda v: (usage[v], rng.random()))
        chain = {best}
        for (dist, parent) in rows:
            v = best
            while parent[v] != -1:
                v = parent[v]
                if dist[v] == 0.0:
                    break  # reached the target chain; do not absorb it
                chain.add(v)
        chains[i] = chain
        for v in chain:
            usage[v] += 1
        return True

    order = sorted(range(p), key=lambda i: (-len(pat_adj[i]), i))
    rng.shuffle(order)
    for i in order:
        if not place(i):
            return None
    cap = float(n) * n
    for _ in range(passes):
        if max(usage, default=0) <= 1:
            break
        alpha = min(alpha * 2.0, cap)
        rng.shuffle(order)
        for i in order:
            for v in chains[i]:
                usage[v] -= 1
            chains[i] = None
            if not place(i):
                return None
    if max(usage, default=0) > 1:
        return None
    return _witnesses_from_partition(
        simple, pat, [frozenset(chains[i]) for i in range(p)])


def _fiedler_vector(simple: Graph) -> Optional[list[float]]:
    """Second Laplacian eigenvector; orders vertices along the host's
    slowest-mixing axis (None for graphs too small to have one)."""
    n = simple.n
    if n < 3:
        return None
    lap = np.zeros((n, n))
    for (u, v) in simple.edges:
        lap[u, u] += 1
        lap[v, v] += 1
        lap[u, v] -= 1
        lap[v, u] -= 1
    _, vecs = np.linalg.eigh(lap)
    return [float(x) for x in vecs[:, 1]]


def _coarsen(simple: Graph, rng: random.Random, target: int,
             scores: Optional[dict[tuple[int, int], float]]
             ) -> tuple[Graph, list[list[int]]]:
    """Contract edges (highest score first, random when scores is None)
    until about target vertices remain.  Returns the quotient graph and,
    per quotient vertex, its class of host vertices."""
    uf = list(range(simple.n))

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    edges = list(simple.edges)
    if scores is None:
        rng.shuffle(edges)
    else:
        edges.sort(key=lambda e: -scores[e])
    remaining = simple.n
    for (u, v) in edges:
        if remaining <= target:
            break
        ru, rv = find(u), find(v)
        if ru != rv:
            uf[ru] = rv
            remaining -= 1
    classes: dict[int, int] = {}
    members: list[list[int]] = []
    for v in range(simple.n):
        r = find(v)
        if r not in classes:
            classes[r] = len(members)
            members.append([])
        members[classes[r]].append(v)
    qedges = {
        (min(classes[find(u)], classes[find(v)]),
         max(classes[find(u)], classes[find(v)]))
        for (u, v) in simple.edges if classes[find(u)] != classes[find(v)]}
    return Graph.build(len(members), sorted(qedges)), members


def _heuristic_minor(simple: Graph, pat: Graph,
                     rng: random.Random) -> Optional[MinorModel]:
    """Layered positive-only search: direct congestion routing, then
    routing on coarsened quotients (contractions preserve minors, so any
    verified quotient model lifts to the host)."""
    for _ in range(40):
        model = _route_chains(simple, pat, rng, passes=20)
        if model is not None:
            return model
    if simple.n < max(16, 2 * pat.n):
        return None
    fiedler = _fiedler_vector(simple)
    targets = [max(2 * pat.n, simple.n // 2),
               max(2 * pat.n, simple.n // 3),
               max(2 * pat.n, 30), max(2 * pat.n, 24)]
    for attempt in range(200):
        if fiedler is not None and attempt % 2 == 0:
            # contract along the long axis, jittered for diversity
            scores = {
                (u, v): abs(fiedler[u] - fiedler[v]) * (1 + rng.random())
                for (u, v) in simple.edges}
        else:
            scores = None
        target = targets[attempt % len(targets)]
        if target >= simple.n:
            continue
        quotient, members = _coarsen(simple, rng, target, scores)
        for _ in range(4):
            qmodel = _route_chains(quotient, pat, rng, passes=20)
            if qmodel is None:
                continue
            sets = [frozenset(v for c in bs for v in members[c])
                    for bs in qmodel.branch_sets]
            model = _witnesses_from_partition(simple, pat, sets)
            if model is not None and verify_minor_model(simple, pat, model):
                return model
    return None


# -- exact layer ----------------------------------------------------------

def _reachable(adj: list[set[int]], src: set[int], dst: set[int],
               blocked: set[int]) -> bool:
    """True iff some vertex of dst is reachable from src through vertices
    outside blocked (the terminal sets themselves may lie in blocked)."""
    stack = list(src)
    seen = set(src)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in dst:
                return True
            if w in seen or w in blocked:
                continue
            seen.add(w)
            stack.append(w)
    return False


def _paths_between(adj: list[set[int]], nbr: list[tuple[int, ...]],
                   src: set[int], dst: set[int], blocked: set[int],
                   budget: Budget):
    """Simple paths from src to dst with interior outside blocked and both
    terminal sets, enumerated in order of increasing length.

    Iterative deepening with a distance-to-target bound keeps the repeated
    sweeps cheap; each path is produced exactly once (in the iteration
    matching its length).
    """
    # BFS distances to dst through unblocked vertices, for length pruning
    dist: dict[int, int] = {v: 0 for v in dst}
    frontier = list(dst)
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w in dist or w in blocked or w in src:
                    continue
                dist[w] = d
                nxt.append(w)
        frontier = nxt

    length = 0
    while True:
        length += 1
        truncated = False

        def rec(v: int, path: list[int], seen: set[int], r: int):
            nonlocal truncated
            budget.spend()
            for w in nbr[v]:
                if w in dst:
                    if r == 1:
                        yield path + [w]
                    continue
                if w in seen or w in blocked or w in src or w not in dist:
                    continue
                if r == 1 or dist[w] > r - 1:
                    truncated = True
                    continue
                yield from rec(w, path + [w], seen | {w}, r - 1)

        for s in sorted(src):
            yield from rec(s, [s], {s}, length)
        if not truncated:
            return


def _paths_out(adj: list[set[int]], nbr: list[tuple[int, ...]],
               src: set[int], blocked: set[int], budget: Budget,
               max_len: int):
    """Simple paths leaving src through vertices outside blocked, shortest
    first; the caller seeds a new branch set at each path's final vertex
    and absorbs the rest of the path into src's branch set."""
    for length in range(1, max_len + 1):
        truncated = False

        def rec(v: int, path: list[int], seen: set[int], r: int):
            nonlocal truncated
            budget.spend()
            for w in nbr[v]:
                if w in seen or w in blocked or w in src:
                    continue
                if r == 1:
                    truncated = True
                    yield path + [w]
                else:
                    yield from rec(w, path + [w], seen | {w}, r - 1)

        for s in sorted(src):
            yield from rec(s, [s], {s}, length)
        if not truncated:
            return


def _exact_search(host: Graph, pattern: Graph,
                  budget: Budget) -> Optional[MinorModel]:
    """Complete demand-driven branch-set search.

    Pattern edges ("demands") are processed in an order that introduces
    pattern vertices one at a time.  A new pattern vertex is seeded at the
    far end of a path grown out of an already-placed branch set; a demand
    between two placed sets is met by a connecting path whose interior is
    split between them (a prefix joins one set, the suffix the other).
    Every minor model is reachable this way: walk the model's branch trees
    between witness-edge endpoints.  A reachability check over the
    still-unassigned vertices prunes dead branches early.  Raises
    BudgetExceeded when the state budget is spent.
    """
    simple = host.simplify()
    pat = pattern.simplify()
    p = pat.n
    if p == 0:
        return MinorModel((), ())
    if simple.n < p:
        return None
    adj = simple.adjacency()
    nbr = [tuple(sorted(s)) for s in adj]
    pat_adj = pat.adjacency()
    # introduce high-degree pattern vertices first, and order demands so
    # each prefix spans as few pattern vertices as possible: for a complete
    # pattern this certifies K3, K4, ... before growing further
    verts = sorted(range(p), key=lambda i: (-len(pat_adj[i]), i))
    rank = {v: i for i, v in enumerate(verts)}
    demands = sorted(
        {(min(a, b), max(a, b)) for (a, b) in pat.edges},
        key=lambda e: (max(rank[e[0]], rank[e[1]]),
                       min(rank[e[0]], rank[e[1]])))

    sets: list[Optional[set[int]]] = [None] * p
    assigned: set[int] = set()

    def adjacent(sa: set[int], sb: set[int]) -> bool:
        small, other = (sa, sb) if len(sa) <= len(sb) else (sb, sa)
        return any(w in other for v in small for w in adj[v])

    def feasible(di: int) -> bool:
        for (a, b) in demands[di:]:
            sa, sb = sets[a], sets[b]
            if sa is None or sb is None:
                continue
            if not _reachable(adj, sa, sb, assigned):
                return False
        return True

    def finish() -> Optional[MinorModel]:
        # pattern vertices with no demands: any free vertex will do
        rest = [i for i in range(p) if sets[i] is None]
        free = [v for v in range(simple.n) if v not in assigned]
        if len(free) < len(rest):
            return None
        for i, v in zip(rest, free):
            sets[i] = {v}
        model = _witnesses_from_partition(
            simple, pat, [frozenset(sets[i]) for i in range(p)])
        for i in rest:
            sets[i] = None
        return model

    def solve(di: int):
        budget.spend()
        if di == len(demands):
            model = finish()
            if model is not None:
                yield model
            return
        a, b = demands[di]
        if sets[a] is None and sets[b] is not None:
            a, b = b, a
        if sets[a] is None:
            # neither endpoint placed: a new pattern component starts here
            for v in range(simple.n):
                if v in assigned:
                    continue
                sets[a] = {v}
                assigned.add(v)
                yield from solve(di)
                assigned.discard(v)
                sets[a] = None
            return
        if sets[b] is None:
            # seed b at the end of a path grown out of a's branch set
            for path in _paths_out(adj, nbr, sets[a], assigned, budget,
                                   simple.n - len(assigned)):
                grown = path[1:-1]
                sets[a].update(grown)
                sets[b] = {path[-1]}
                assigned.update(path[1:])
                if feasible(di + 1):
                    yield from solve(di + 1)
                assigned.difference_update(path[1:])
                sets[b] = None
                sets[a].difference_update(grown)
            return
        if adjacent(sets[a], sets[b]):
            yield from solve(di + 1)
            return
        for path in _paths_between(adj, nbr, sets[a], sets[b], assigned,
                                   budget):
            interior = path[1:-1]
            assigned.update(interior)
            for split in range(len(interior) + 1):
                head, tail = interior[:split], interior[split:]
                sets[a].update(head)
                sets[b].update(tail)
                if feasible(di + 1):
                    yield from solve(di + 1)
                sets[b].difference_update(tail)
                sets[a].difference_update(head)
            assigned.difference_update(interior)

    for model in solve(0):
        return model
    return None


def find_minor(host: Graph, pattern: Graph,
               budget: int = DEFAULT_BUDGET
               ) -> MinorModel | None | Indeterminate:
    """A verified MinorModel of pattern in host, None when impossible, or
    Indeterminate when the exact search exceeds its budget."""
    simple = host.simplify()
    pat = pattern.simplify()
    if pat.n > simple.n or pat.m > simple.m:
        return None
    pat_adj = pat.adjacency()
    complete_pattern = pat.n > 0 and all(
        len(pat_adj[i]) == pat.n - 1 for i in range(pat.n))
    if complete_pattern and pat.n == 6:
        if find_apex_vertex(simple) is not None:
            return None  # apex graphs have no K6 minor
    if pat.m >= 1:
        model = _heuristic_minor(simple, pat, random.Random(0))
        if model is not None:
            assert verify_minor_model(host, pat, model)
            return model
    try:
        model = _exact_search(simple, pat, Budget(budget))
    except BudgetExceeded as exc:
        return Indeterminate("minor search budget exhausted", exc.states)
    if model is None:
        return None
    assert verify_minor_model(host, pat, model)
    return model


@dataclass(frozen=True)
class SubdivisionModel:
    """Branch vertices plus one internally disjoint host path per edge."""

    branch_vertices: tuple[int, ...]  # image of each pattern vertex
    edge_paths: tuple[tuple[tuple[int, int], tuple[int, ...]], ...]

    def path_map(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return dict(self.edge_paths)


def verify_subdivision_model(host: Graph, pattern: Graph,
                             m: SubdivisionModel, explain: bool = False):
    def fail(reason: str):
        return (False, reason) if explain else False

    pat = pattern.simplify()
    if len(m.branch_vertices) != pat.n:
        return fail("branch vertex count differs from pattern order")
    if len(set(m.branch_vertices)) != pat.n:
        return fail("branch vertices are not injective")
    host_adj = host.adjacency()
    paths = m.path_map()
    interior_seen: set[int] = set()
    branch_set = set(m.branch_vertices)
    for (a, b) in pat.edges:
        key = (min(a, b), max(a, b))
        if key not in paths:
            return fail(f"pattern edge {key} has no path")
        path = paths[key]
        ia, ib = m.branch_vertices[key[0]], m.branch_vertices[key[1]]
        if not ((path[0] == ia and path[-1] == ib) or
                (path[0] == ib and path[-1] == ia)):
            return fail(f"path for {key} joins the wrong branch vertices")
        if len(set(path)) != len(path):
            return fail(f"path for {key} revisits a vertex")
        for u, v in zip(path, path[1:]):
            if v not in host_adj[u]:
                return fail(f"path for {key} uses a non-edge ({u},{v})")
        for v in path[1:-1]:
            if v in branch_set:
                return fail(f"path for {key} passes through a branch vertex")
            if v in interior_seen:
                return fail(f"paths share interior vertex {v}")
            interior_seen.add(v)
    return (True, "ok") if explain else True


def subdivision_to_minor(m: SubdivisionModel, pattern: Graph) -> MinorModel:
    """Absorb each path interior into its lower-end branch set."""
    pat = pattern.simplify()
    sets = [ {m.branch_vertices[i]} for i in range(pat.n) ]
    wit = []
    for (a, b) in pat.edges:
        key = (min(a, b), max(a, b))
        path = m.path_map()[key]
        if path[0] != m.branch_vertices[key[0]]:
            path = tuple(reversed(path))
        sets[key[0]].update(path[1:-1])
        wit.append((key, (min(path[-2], path[-1]), max(path[-2], path[-1]))))
    return MinorModel(tuple(frozenset(s) for s in sets), tuple(wit))


def find_subdivision(host: Graph, pattern: Graph,
                     budget: int = DEFAULT_BUDGET
                     ) -> SubdivisionModel | None | Indeterminate:
    """Backtracking search for a subdivision of pattern inside host."""
    simple = host.simplify()
    pat = pattern.simplify()
    if pat.n > simple.n or pat.m > simple.m:
        return None
    adj = simple.adjacency()
    pat_adj = pat.adjacency()
    pat_deg = [len(s) for s in pat_adj]
    host_deg = [len(s) for s in adj]
    if pat.n and max(pat_deg, default=0) > max(host_deg, default=0):
        return None
    order = sorted(range(pat.n), key=lambda i: (-pat_deg[i], i))
    b = Budget(budget)

    def assign(pos: int, image: dict[int, int]):
        b.spend()
        if pos == pat.n:
            yield dict(image)
            return
        i = order[pos]
        for v in range(simple.n):
            if v in image.values() or host_deg[v] < pat_deg[i]:
                continue
            image[i] = v
            yield from assign(pos + 1, image)
            del image[i]

    def route(di: int, demands, image, used: set[int], acc):
        b.spend()
        if di == len(demands):
            yield tuple(acc)
            return
        a_, b_ = demands[di]
        src, dst = image[a_], image[b_]
        branch_imgs = set(image.values())
        blocked = used | (branch_imgs - {src, dst})

        def walk(path: list[int], seen: set[int]):
            b.spend()
            v = path[-1]
            for w in sorted(adj[v]):
                if w == dst:
                    yield path + [w]
            for w in sorted(adj[v]):
                if w in seen or w in blocked or w == dst:
                    continue
                yield from walk(path + [w], seen | {w})

        for path in walk([src], {src} | blocked):
            interior = set(path[1:-1])
            acc.append(((a_, b_), tuple(path)))
            yield from route(di + 1, demands, image, used | interior, acc)
            acc.pop()

    demands = sorted((min(a, b), max(a, b)) for (a, b) in pat.edges)
    try:
        for image in assign(0, {}):
            for paths in route(0, demands, image, set(), []):
                model = SubdivisionModel(
                    tuple(image[i] for i in range(pat.n)), paths)
                assert verify_subdivision_model(host, pattern, model)
                return model
    except BudgetExceeded as exc:
        return Indeterminate("subdivision search budget exhausted", exc.states)
    return None
