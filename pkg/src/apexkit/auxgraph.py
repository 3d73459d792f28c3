"""The auxiliary graph of a foundational linkage and its per-bag detectors.

The *auxiliary graph* has one vertex per foundational path; two paths are
adjacent when some bridge of an interior bag attaches to both.  Under the
uniform-adjacency axiom L8 this relation is the same in every interior
bag, so the components of the subgraph induced by the non-trivial paths —
the *cores* — organize the whole middle of the decomposition.  A core
that is a path should draw in a disk, a core that is a cycle in a
cylinder ("flatness"); the detectors in this module find the per-bag
obstructions (twists, tunnels, overloaded bridges) whose accumulation
across many bags forces either a K6 minor or an apex vertex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .bridges import _enumerate_p_paths, compute_bridges
from .decomp import FoundationalState, _orient_paths, bag_bridges
from .embed import PlaneEmbedding, Society, embed_in_cylinder, is_rural
from .graph import Graph, GraphInputError, Linkage
from .outcome import Budget, BudgetExceeded, Indeterminate

WITNESS_CAP = 64


# -- the auxiliary graph and its cores -------------------------------------

@dataclass(frozen=True)
class AuxiliaryGraph:
    """Bridge adjacency between foundational paths.

    `paths` are the linkage paths oriented first-separator → last;
    `edges` is the adjacency computed in the first interior bag;
    `uniform` records whether every other interior bag agrees (the L8
    invariant), with `witness` naming the first disagreement.
    """

    paths: tuple[tuple[int, ...], ...]
    edges: frozenset
    uniform: bool = True
    witness: object = None

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(pi for pi, p in enumerate(self.paths) if len(p) > 1)

    def neighbors(self, pi: int) -> set[int]:
        out = set()
        for (a, b) in self.edges:
            if a == pi:
                out.add(b)
            elif b == pi:
                out.add(a)
        return out


@dataclass(frozen=True)
class Core:
    """A component of the auxiliary graph on the non-trivial paths.

    `member_paths` lists path ids in traversal order; `shape` is "path",
    "cycle", or "invalid" when the component has a vertex of degree
    three or more.
    """

    member_paths: tuple[int, ...]
    shape: str


def _pairs(bridges, path_sets) -> set:
    pairs = set()
    for br in bridges:
        touching = [pi for pi, vs in enumerate(path_sets)
                    if br.attachments & vs]
        for a, b in itertools.combinations(touching, 2):
            pairs.add((a, b))
    return pairs


def build_auxiliary(g: Graph, st: FoundationalState) -> AuxiliaryGraph:
    """Bridge adjacency from the first interior bag, cross-checked in all
    the others; a disagreement is reported as data, not an error."""
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    path_sets = [frozenset(p) for p in oriented]
    l = st.decomposition.length
    per_bag = {i: _pairs(bag_bridges(g, st, i), path_sets)
               for i in range(1, l)}
    if not per_bag:
        return AuxiliaryGraph(tuple(oriented), frozenset())
    first = min(per_bag)
    uniform, witness = True, None
    for i in sorted(per_bag):
        if per_bag[i] != per_bag[first]:
            uniform = False
            witness = (sorted(per_bag[i] ^ per_bag[first])[0], first, i)
            break
    return AuxiliaryGraph(tuple(oriented), frozenset(per_bag[first]),
                          uniform, witness)


def cores(aux: AuxiliaryGraph) -> list[Core]:
    """Components of the non-trivial-path-induced subgraph, each ordered
    deterministically and classified as path, cycle, or invalid."""
    nont = list(aux.nontrivial)
    adj = {pi: set() for pi in nont}
    for (a, b) in aux.edges:
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)

    def key(pi: int) -> tuple[int, int]:
        return (aux.paths[pi][0], pi)

    seen: set[int] = set()
    out: list[Core] = []
    for start in sorted(nont, key=key):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        degs = {pi: len(adj[pi] & comp) for pi in comp}
        if any(d > 2 for d in degs.values()):
            out.append(Core(tuple(sorted(comp, key=key)), "invalid"))
            continue
        ends = sorted((pi for pi in comp if degs[pi] <= 1), key=key)
        if ends:
            first = ends[0]
            order = [first]
            while len(order) < len(comp):
                nxts = [y for y in adj[order[-1]] & comp if y not in order]
                order.append(min(nxts, key=key))
            out.append(Core(tuple(order), "path"))
        else:
            first = min(comp, key=key)
            order = [first]
            order.append(min(adj[first] & comp, key=key))
            while len(order) < len(comp):
                nxts = [y for y in adj[order[-1]] & comp
                        if y not in order]
                order.append(min(nxts, key=key))
            out.append(Core(tuple(order), "cycle"))
    return out


# -- sections and flatness -------------------------------------------------

@dataclass(frozen=True)
class Section:
    """One bag's slice of a core: its paths, the bridges attaching to
    them, trivial paths deleted; `vertices[local] = host id`."""

    graph: Graph
    vertices: tuple[int, ...]
    restrictions: tuple[tuple[int, ...], ...]
    us: tuple[int, ...]
    vs: tuple[int, ...]


def section(g: Graph, st: FoundationalState, core: Core, i: int) -> Section:
    dec = st.decomposition
    if not 1 <= i <= dec.length - 1:
        raise GraphInputError(f"bag index {i} out of range")
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    bag = dec.bags[i]
    trivial_vs = {p[0] for p in oriented if len(p) == 1}
    members = [oriented[pi] for pi in core.member_paths]
    member_sets = [frozenset(p) for p in members]

    restrictions, us, vs = [], [], []
    for pth in members:
        rest = tuple(v for v in pth if v in bag)
        if not rest:
            raise GraphInputError("core path misses the bag")
        entry = [v for v in rest if v in dec.separator(i)]
        exit_ = [v for v in rest if v in dec.separator(i + 1)]
        if len(entry) != 1 or len(exit_) != 1:
            raise GraphInputError(
                "core path must cross the bag through one vertex per "
                "separator")
        if rest[0] != entry[0] or rest[-1] != exit_[0]:
            raise GraphInputError(
                "core path restriction must run separator to separator")
        restrictions.append(rest)
        us.append(entry[0])
        vs.append(exit_[0])

    edges: set[tuple[int, int]] = set()
    for rest in restrictions:
        for a, b in zip(rest, rest[1:]):
            edges.add((min(a, b), max(a, b)))
    for br in bag_bridges(g, st, i):
        if any(br.attachments & ms for ms in member_sets):
            edges.update(br.edges)
    edges = {(a, b) for (a, b) in edges
             if a not in trivial_vs and b not in trivial_vs}
    verts = {v for e in edges for v in e}
    verts.update(v for rest in restrictions for v in rest)
    order = sorted(verts)
    idx = {v: j for j, v in enumerate(order)}
    return Section(
        Graph.build(len(order), [(idx[a], idx[b]) for (a, b) in edges]),
        tuple(order),
        tuple(tuple(idx[v] for v in rest) for rest in restrictions),
        tuple(idx[u] for u in us),
        tuple(idx[v] for v in vs))


def check_flat(g: Graph, st: FoundationalState, core: Core,
               i: int) -> Optional[PlaneEmbedding]:
    """A witness drawing of the i-th section: the ends of the core paths
    on the boundary of a disk (path cores, with the two outer paths on
    the boundary too) or of a cylinder (cycle cores); None if none exists.
    """
    if core.shape not in ("path", "cycle"):
        raise GraphInputError("core must be a path or a cycle")
    sec = section(g, st, core, i)
    if core.shape == "cycle":
        if len(core.member_paths) < 3:
            raise GraphInputError("a cycle core needs at least three paths")
        return embed_in_cylinder(sec.graph, sec.us, sec.vs)
    if len(core.member_paths) == 1:
        omega = sec.restrictions[0]
    else:
        first, last = sec.restrictions[0], sec.restrictions[-1]
        omega = (sec.us[:-1] + last + tuple(sec.vs[1:-1][::-1])
                 + tuple(reversed(first))[:-1])
    return is_rural(Society(sec.graph, omega))


# -- per-bag connector enumeration -----------------------------------------

@dataclass(frozen=True)
class _BagView:
    """Local renumbering of one bag plus its linkage connectors."""

    order: tuple[int, ...]
    connectors: tuple[tuple[int, ...], ...]  # host-id paths, interior off 𝒫
    truncated: bool


def _bag_view(g: Graph, st: FoundationalState, i: int,
              budget: Budget, cap: int = 5000) -> _BagView:
    dec = st.decomposition
    order = sorted(dec.bags[i])
    idx = {v: j for j, v in enumerate(order)}
    gi = g.induced(order)
    marked = [idx[v] for p in st.linkage.paths for v in p if v in idx]
    s_edges = [(idx[a], idx[b]) for p in st.linkage.paths
               for a, b in zip(p, p[1:]) if a in idx and b in idx]
    bdec = compute_bridges(gi, Graph.build(gi.n, s_edges), vertices=marked)
    try:
        pool, truncated = _enumerate_p_paths(gi, bdec, budget, cap)
    except BudgetExceeded:
        pool, truncated = [], True
    host = tuple(tuple(order[v] for v in q) for q in pool)
    return _BagView(tuple(order), host, truncated)


# -- twists and tunnels ----------------------------------------------------

@dataclass(frozen=True)
class Twist:
    """Two connectors between non-trivial paths p and p_prime whose ends
    interleave: q1 runs u1→v1, q2 runs u2→v2, with u1 before u2 on p but
    v2 before v1 on p_prime."""

    i: int
    p: int
    p_prime: int
    q1: tuple[int, ...]
    q2: tuple[int, ...]


@dataclass(frozen=True)
class Tunnel:
    """An arch over a stretch of one path with two feet reaching out.

    `arch` has both ends on path targets[0]; q2 and q3 start strictly
    under the arch and end on targets[1] and targets[2]."""

    i: int
    arch: tuple[int, ...]
    q2: tuple[int, ...]
    q3: tuple[int, ...]
    targets: tuple[int, int, int]


def _path_positions(oriented) -> tuple[dict, dict]:
    owner: dict[int, int] = {}
    pos: dict[int, int] = {}
    for pi, pth in enumerate(oriented):
        for j, v in enumerate(pth):
            owner[v] = pi
            pos[v] = j
    return owner, pos


def find_twists(g: Graph, st: FoundationalState,
                budget: int = 200000,
                max_per_bag: int = WITNESS_CAP) -> list:
    """All interleaving connector pairs per interior bag, capped per bag;
    a bag whose connector enumeration was truncated without producing a
    twist contributes an Indeterminate entry instead."""
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    owner, pos = _path_positions(oriented)
    nontrivial = {pi for pi, p in enumerate(oriented) if len(p) > 1}
    out: list = []
    for i in range(1, st.decomposition.length):
        view = _bag_view(g, st, i, Budget(budget))
        found: set[Twist] = set()
        for q1, q2 in itertools.permutations(view.connectors, 2):
            if len(found) >= max_per_bag:
                break
            tw = _twist_of(q1, q2, owner, pos, nontrivial)
            if tw is not None and set(q1) & set(q2) == set():
                found.add(Twist(i, tw[0], tw[1], tw[2], tw[3]))
        out.extend(sorted(found, key=lambda t: (t.p, t.p_prime, t.q1, t.q2)))
        if view.truncated and not found:
            out.append(Indeterminate(
                f"connector enumeration truncated in bag {i}"))
    return out


def _twist_of(q1, q2, owner, pos, nontrivial):
    """Orient the two connectors as a twist between two non-trivial
    paths, or None."""
    e1 = (q1[0], q1[-1])
    e2 = (q2[0], q2[-1])
    if any(v not in owner for v in e1 + e2):
        return None
    for (u1, v1) in (e1, e1[::-1]):
        a, b = owner[u1], owner[v1]
        # canonical role assignment: report each twisting pair once
        if not a < b or a not in nontrivial or b not in nontrivial:
            continue
        for (u2, v2) in (e2, e2[::-1]):
            if owner[u2] != a or owner[v2] != b:
                continue
            if pos[u1] < pos[u2] and pos[v2] < pos[v1]:
                qq1 = q1 if q1[0] == u1 else q1[::-1]
                qq2 = q2 if q2[0] == u2 else q2[::-1]
                return (a, b, qq1, qq2)
    return None


def find_tunnels(g: Graph, st: FoundationalState,
                 budget: int = 200000,
                 max_per_bag: int = WITNESS_CAP) -> list:
    """All arch-plus-two-feet configurations per interior bag; truncated
    bags without a find contribute an Indeterminate entry."""
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    owner, pos = _path_positions(oriented)
    nontrivial = {pi for pi, p in enumerate(oriented) if len(p) > 1}
    out: list = []
    for i in range(1, st.decomposition.length):
        view = _bag_view(g, st, i, Budget(budget))
        arches = []
        feet = []
        for q in view.connectors:
            a, b = q[0], q[-1]
            if a not in owner or b not in owner:
                continue
            if owner[a] == owner[b] and owner[a] in nontrivial \
                    and abs(pos[a] - pos[b]) >= 2:
                arches.append(q if pos[a] < pos[b] else q[::-1])
            elif owner[a] != owner[b]:
                for (x, y) in ((a, b), (b, a)):
                    if owner[x] in nontrivial and owner[y] in nontrivial:
                        feet.append(q if q[0] == x else q[::-1])
        found: set[Tunnel] = set()
        for arch in arches:
            if len(found) >= max_per_bag:
                break
            p1 = owner[arch[0]]
            lo, hi = pos[arch[0]], pos[arch[-1]]
            under = [q for q in feet
                     if owner[q[0]] == p1 and lo < pos[q[0]] < hi
                     and owner[q[-1]] != p1]
            for q2, q3 in itertools.permutations(under, 2):
                if owner[q2[-1]] == owner[q3[-1]]:
                    continue
                if not _internally_disjoint(arch, q2, q3):
                    continue
                found.add(Tunnel(i, arch, q2, q3,
                                 (p1, owner[q2[-1]], owner[q3[-1]])))
                break
        out.extend(sorted(found, key=lambda t: (t.targets, t.arch)))
        if view.truncated and not found:
            out.append(Indeterminate(
                f"connector enumeration truncated in bag {i}"))
    return out


def _internally_disjoint(*paths) -> bool:
    for qa, qb in itertools.permutations(paths, 2):
        if set(qa[1:-1]) & set(qb):
            return False
    return True


# -- threshold detectors ---------------------------------------------------

@dataclass(frozen=True)
class ThresholdReport:
    """How often a forbidden pattern occurred versus the count at which
    its accumulation argument fires."""

    count: int
    threshold: int
    witnesses: tuple

    @property
    def exceeded(self) -> bool:
        # a zero threshold means the accumulation argument is void at
        # this adhesion, not that it fires vacuously
        return self.threshold > 0 and self.count >= self.threshold


def threshold_detectors(g: Graph, st: FoundationalState,
                        budget: int = 200000) -> dict:
    """Counts of the per-bag and per-path patterns whose accumulation
    forces a K6 minor (or, for trivial-attachment bridges, an apex
    vertex), each against its firing threshold."""
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    q = st.decomposition.adhesion
    l = st.decomposition.length
    path_sets = [frozenset(p) for p in oriented]
    nontrivial = {pi for pi, p in enumerate(oriented) if len(p) > 1}

    three_non, only_triv, on_triv = [], [], []
    for i in range(1, l):
        brs = bag_bridges(g, st, i)
        hit3 = hit_only = hit_on = None
        for br in brs:
            touched = [pi for pi, vs in enumerate(path_sets)
                       if br.attachments & vs]
            non = [pi for pi in touched if pi in nontrivial]
            triv = [pi for pi in touched if pi not in nontrivial]
            if len(non) >= 3 and hit3 is None:
                hit3 = (i, tuple(sorted(br.attachments)))
            if br.interior and triv and not non and hit_only is None:
                hit_only = (i, tuple(sorted(br.attachments)))
            if br.interior and triv and hit_on is None:
                hit_on = (i, tuple(sorted(br.attachments)))
        if hit3:
            three_non.append(hit3)
        if hit_only:
            only_triv.append(hit_only)
        if hit_on:
            on_triv.append(hit_on)

    aux = build_auxiliary(g, st)
    four_triv, three_triv = [], []
    for pi in sorted(nontrivial):
        t = len([pj for pj in aux.neighbors(pi) if pj not in nontrivial])
        if t >= 4:
            four_triv.append((pi, t))
        if t >= 3:
            three_triv.append((pi, t))
    non_induced = []
    for pi in sorted(nontrivial):
        pth = oriented[pi]
        chords = [(a, b) for j, a in enumerate(pth)
                  for b in pth[j + 2:] if g.has_edge(a, b)]
        if chords:
            non_induced.append((pi, chords[0]))

    twist_bags = sorted({t.i for t in find_twists(g, st, budget)
                         if isinstance(t, Twist)})
    tunnel_bags = sorted({t.i for t in find_tunnels(g, st, budget)
                          if isinstance(t, Tunnel)})

    def rep(items, threshold) -> ThresholdReport:
        return ThresholdReport(len(items), threshold,
                               tuple(items[:WITNESS_CAP]))

    return {
        "bridge_on_three_nontrivial": rep(three_non, 48 * math.comb(q, 3)),
        "nontrivial_bridge_only_trivial": rep(only_triv,
                                              6 * math.comb(q, 6)),
        "path_with_four_trivial_neighbors": rep(four_triv, 1),
        "path_with_three_trivial_neighbors": rep(three_triv, 1),
        "non_induced_path": rep(non_induced, 1),
        "twisting_pair_bags": rep(twist_bags, 12 * math.comb(q, 2)),
        "tunnel_bags": rep(tunnel_bags, 48 * math.comb(q, 3)),
        "nontrivial_bridge_on_trivial_bags": rep(on_triv,
                                                 40 * math.comb(q, 3)),
    }


# -- rerouting -------------------------------------------------------------

def reroute_along(g: Graph, st: FoundationalState, i: int, p: int,
                  q_path: Iterable[int]) -> FoundationalState:
    """Replace the stretch of path p between the ends of q_path by q_path.

    The new path must stay inside bag W_i apart from what it inherits
    from p, and q_path must be internally disjoint from the linkage.
    The base axioms L1–L5 are re-validated; the end-linkage axiom L9
    survives rerouting and its flag is carried over.
    """
    from .decomp import LINEAR_AXIOMS, validate_linear
    dec = st.decomposition
    if not 1 <= i <= dec.length - 1:
        raise GraphInputError(f"bag index {i} out of range")
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    if not 0 <= p < len(oriented):
        raise GraphInputError(f"unknown path id {p}")
    q = tuple(q_path)
    bag = dec.bags[i]
    if any(v not in bag for v in q):
        raise GraphInputError("replacement path must stay inside the bag")
    pth = oriented[p]
    pos = {v: j for j, v in enumerate(pth)}
    if q[0] not in pos or q[-1] not in pos:
        raise GraphInputError("replacement path must start and end on p")
    linkage_vs = {v for pp in oriented for v in pp}
    if any(v in linkage_vs for v in q[1:-1]):
        raise GraphInputError(
            "replacement path must be internally disjoint from the linkage")
    adj = g.adjacency()
    if any(b not in adj[a] for a, b in zip(q, q[1:])):
        raise GraphInputError("replacement is not a path of the graph")
    if pos[q[0]] > pos[q[-1]]:
        q = q[::-1]
    new_path = pth[:pos[q[0]]] + q + pth[pos[q[-1]] + 1:]
    paths = list(oriented)
    paths[p] = new_path
    new = FoundationalState(dec, Linkage(tuple(paths)), frozenset(), st.p)
    rep = validate_linear(g, new, LINEAR_AXIOMS[:5])
    flags = {k for k, v in rep.items() if v.passed}
    if "L9" in st.satisfied:
        flags.add("L9")
    return new.with_flags(flags)
