"""Tree and linear decompositions: axiom validators and refinement steps.

A linear decomposition of a graph is a sequence of bags ``W_0 .. W_l``
covering all vertices and edges, whose pairwise intersections nest: for
``i <= j <= k`` the set ``W_i ∩ W_k`` is contained in ``W_j``.  A
*foundational linkage* is a set of disjoint paths of full adhesion
cardinality running from the first separator ``W_0 ∩ W_1`` to the last
``W_{l-1} ∩ W_l``; a path with a single vertex is *trivial*.

The module provides

* validators for tree-decomposition axioms ``W1``–``W5`` and
  linear-decomposition axioms ``L1``–``L12``, each returning a per-axiom
  verdict with a concrete witness on failure;
* the refinement chain that turns a tree decomposition with a long
  spine into a linear decomposition (``tree_to_linear``), merges bags
  (``elementary_contraction``), makes path triviality and bridge
  adjacency uniform across the interior bags (``uniformize``), and
  merges end blocks to gain the end-linkage exchange axiom ``L9``
  (``establish_L9``);
* the combinatorial index search ``set_sequence_indices`` underlying
  ``uniformize``, and the length thresholds ``compute_thresholds`` used
  by the certification pipeline.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .bridges import Bridge, compute_bridges, stabilize
from .graph import (CutCertificate, Graph, GraphInputError, Linkage,
                    disjoint_paths)

TREE_AXIOMS = ("W1", "W2", "W3", "W4", "W5")
LINEAR_AXIOMS = tuple(f"L{i}" for i in range(1, 13))


@dataclass(frozen=True)
class Verdict:
    """Outcome of one axiom check; `witness` explains a failure."""

    passed: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.passed


Report = dict


# -- decomposition types ---------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    """A tree together with one bag of graph vertices per tree vertex."""

    tree: Graph
    bags: tuple[frozenset[int], ...]

    @staticmethod
    def build(tree: Graph, bags: Iterable[Iterable[int]]) -> "TreeDecomposition":
        bs = tuple(frozenset(b) for b in bags)
        if len(bs) != tree.n:
            raise GraphInputError("need exactly one bag per tree vertex")
        simple = tree.simplify()
        if tree.n == 0 or not tree.is_connected() or simple.m != tree.n - 1:
            raise GraphInputError("underlying graph must be a tree")
        return TreeDecomposition(simple, bs)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class LinearDecomposition:
    """Ordered bags W_0 .. W_l with a declared adhesion q."""

    bags: tuple[frozenset[int], ...]
    adhesion: int

    @staticmethod
    def build(bags: Iterable[Iterable[int]],
              adhesion: Optional[int] = None) -> "LinearDecomposition":
        bs = tuple(frozenset(b) for b in bags)
        if len(bs) < 2:
            raise GraphInputError("need at least two bags")
        if adhesion is None:
            adhesion = len(bs[0] & bs[1])
        return LinearDecomposition(bs, adhesion)

    @property
    def length(self) -> int:
        return len(self.bags) - 1

    def separator(self, i: int) -> frozenset[int]:
        """W_{i-1} ∩ W_i for i in 1..length."""
        if not 1 <= i <= self.length:
            raise GraphInputError(f"separator index {i} out of range")
        return self.bags[i - 1] & self.bags[i]


@dataclass(frozen=True)
class FoundationalState:
    """A linear decomposition, its foundational linkage, and known axioms.

    `satisfied` lists axiom names (among L1..L12) whose validator has
    passed for this exact state; `p` is the connectivity parameter of the
    bridge-adjacency axioms (six throughout the toolkit).
    """

    decomposition: LinearDecomposition
    linkage: Linkage
    satisfied: frozenset = frozenset()
    p: int = 6

    def with_flags(self, flags: Iterable[str]) -> "FoundationalState":
        return replace(self, satisfied=self.satisfied | frozenset(flags))


# -- tree-decomposition validation -----------------------------------------

def _tree_path(tree: Graph, a: int, b: int) -> list[int]:
    """The unique a-b path in a tree, as a vertex list."""
    parent = {a: a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in tree.adjacency()[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def validate_tree_decomposition(g: Graph, t: TreeDecomposition,
                                strict: bool = False) -> Report:
    """Check coverage and connectivity axioms; strict adds the linkedness,
    distinct-bag, and proper-part axioms W3–W5."""
    report: Report = {}
    bags = t.bags
    tree = t.tree

    # W1: every vertex and every edge is inside some bag
    witness = None
    covered = set().union(*bags) if bags else set()
    for v in range(g.n):
        if v not in covered:
            witness = ("vertex", v)
            break
    if witness is None:
        for (u, v) in g.edges:
            if not any(u in b and v in b for b in bags):
                witness = ("edge", (u, v))
                break
    report["W1"] = Verdict(witness is None, witness)

    # W2: the tree vertices whose bags hold v induce a subtree
    witness = None
    for v in range(g.n):
        nodes = [x for x in range(tree.n) if v in bags[x]]
        if nodes and not tree.is_connected_subset(nodes):
            witness = (v, tuple(nodes))
            break
    report["W2"] = Verdict(witness is None, witness)

    if not strict:
        return report

    # W3: between any two bags there are as many disjoint paths as the
    # smallest separator on the tree path between them can carry
    witness = None
    for t1 in range(tree.n):
        for t2 in range(t1 + 1, tree.n):
            onpath = _tree_path(tree, t1, t2)
            k = min(len(bags[x] & bags[y])
                    for x, y in zip(onpath, onpath[1:]))
            if k == 0:
                continue
            res = disjoint_paths(g, bags[t1], bags[t2], k)
            if isinstance(res, CutCertificate):
                witness = (t1, t2, k, res)
                break
        if witness is not None:
            break
    report["W3"] = Verdict(witness is None, witness)

    # W4: all bags distinct
    witness = None
    seen: dict = {}
    for x in range(tree.n):
        if bags[x] in seen:
            witness = (seen[bags[x]], x)
            break
        seen[bags[x]] = x
    report["W4"] = Verdict(witness is None, witness)

    # W5: every branch at a tree vertex contributes a vertex of its own
    witness = None
    for t0 in range(tree.n):
        rest = [x for x in range(tree.n) if x != t0]
        if not rest:
            continue
        sub = tree.induced(rest)
        for comp in sub.components():
            members = [rest[i] for i in sorted(comp)]
            union = set().union(*(bags[x] for x in members))
            if not union - bags[t0]:
                witness = (t0, tuple(members))
                break
        if witness is not None:
            break
    report["W5"] = Verdict(witness is None, witness)
    return report


# -- linear-decomposition validation ---------------------------------------

def _orient_paths(st: FoundationalState) -> Optional[list[tuple[int, ...]]]:
    """Linkage paths reordered to run first-separator → last-separator,
    or None if some path does not span the two separators."""
    dec = st.decomposition
    first = dec.separator(1)
    last = dec.separator(dec.length)
    out = []
    for p in st.linkage.paths:
        if len(p) == 1:
            if p[0] in first and p[0] in last:
                out.append(tuple(p))
            else:
                return None
        elif p[0] in first and p[-1] in last:
            out.append(tuple(p))
        elif p[-1] in first and p[0] in last:
            out.append(tuple(reversed(p)))
        else:
            return None
    return out


def bag_bridges(g: Graph, st: FoundationalState, i: int) -> list[Bridge]:
    """Linkage bridges of the induced subgraph on bag W_i, in host ids.

    A bridge is an edge between linkage vertices that is not a linkage
    edge, or a component of the bag minus the linkage together with its
    edges to the linkage.  Bridges with internal vertices are the
    *non-trivial* ones.
    """
    dec = st.decomposition
    if not 0 <= i <= dec.length:
        raise GraphInputError(f"bag index {i} out of range")
    order = sorted(dec.bags[i])
    idx = {v: j for j, v in enumerate(order)}
    gi = g.induced(order)
    marked = [idx[v] for p in st.linkage.paths for v in p if v in idx]
    s_edges = [(idx[a], idx[b]) for p in st.linkage.paths
               for a, b in zip(p, p[1:]) if a in idx and b in idx]
    dec_i = compute_bridges(gi, Graph.build(gi.n, s_edges), vertices=marked)
    out = []
    for b in dec_i.bridges:
        out.append(Bridge(
            frozenset((order[x], order[y]) if order[x] <= order[y]
                      else (order[y], order[x]) for (x, y) in b.edges),
            frozenset(order[x] for x in b.attachments),
            b.stable))
    return out


def _touching(bridge: Bridge, path_sets: list[frozenset[int]]) -> list[int]:
    return [pi for pi, vs in enumerate(path_sets) if bridge.attachments & vs]


def _adjacency_pairs(bridges: Iterable[Bridge],
                     path_sets: list[frozenset[int]]) -> set:
    pairs = set()
    for br in bridges:
        for a, b in itertools.combinations(_touching(br, path_sets), 2):
            pairs.add((a, b))
    return pairs


def validate_linear(g: Graph, st: FoundationalState,
                    props: Optional[Iterable[str]] = None) -> Report:
    """Per-axiom verdicts for the requested subset of L1..L12."""
    wanted = tuple(props) if props is not None else LINEAR_AXIOMS
    for name in wanted:
        if name not in LINEAR_AXIOMS:
            raise GraphInputError(f"unknown axiom {name!r}")
    report: Report = {}
    dec = st.decomposition
    bags = dec.bags
    l = dec.length
    q = dec.adhesion
    p = st.p

    if "L1" in wanted:
        witness = None
        covered = set().union(*bags)
        for v in range(g.n):
            if v not in covered:
                witness = ("vertex", v)
                break
        if witness is None:
            for (u, v) in g.edges:
                if not any(u in b and v in b for b in bags):
                    witness = ("edge", (u, v))
                    break
        report["L1"] = Verdict(witness is None, witness)

    if "L2" in wanted:
        witness = None
        for v in range(g.n):
            where = [i for i, b in enumerate(bags) if v in b]
            for a, b in zip(where, where[1:]):
                if b != a + 1:
                    witness = (v, a, a + 1, b)
                    break
            if witness is not None:
                break
        report["L2"] = Verdict(witness is None, witness)

    if "L3" in wanted:
        witness = None
        for i in range(1, l + 1):
            size = len(dec.separator(i))
            if size != q:
                witness = (i, size)
                break
        report["L3"] = Verdict(witness is None, witness)

    if "L4" in wanted:
        witness = None
        for i in range(1, l + 1):
            if not bags[i - 1] - bags[i] or not bags[i] - bags[i - 1]:
                witness = i
                break
        report["L4"] = Verdict(witness is None, witness)

    oriented = None
    if any(k in wanted for k in LINEAR_AXIOMS[4:]):
        oriented = (_orient_paths(st)
                    if isinstance(st.linkage, Linkage) else None)
        ok = (oriented is not None and st.linkage.is_valid(g)
              and len(st.linkage) == q)
        if "L5" in wanted:
            report["L5"] = Verdict(
                ok, None if ok else "no valid full-adhesion linkage from the "
                "first separator to the last")
        if not ok:
            for name in LINEAR_AXIOMS[5:]:
                if name in wanted:
                    report[name] = Verdict(False, "L5")
            return report

    path_sets = [frozenset(pth) for pth in oriented] if oriented else []
    nontrivial = [pi for pi, pth in enumerate(oriented or [])
                  if len(pth) > 1]
    interior = range(1, l)
    needs_bridges = any(k in wanted for k in
                        ("L6", "L8", "L10", "L11", "L12"))
    per_bag = {i: bag_bridges(g, st, i) for i in interior} \
        if needs_bridges else {}

    if "L6" in wanted:
        witness = None
        for i in interior:
            brs = per_bag[i]
            for pi in nontrivial:
                triggers = [
                    br for br in brs
                    if br.attachments & path_sets[pi]
                    and not any(br.attachments & path_sets[pj]
                                for pj in nontrivial if pj != pi)]
                if not triggers:
                    continue
                trivial_neighbors = {
                    tj for tj in range(len(path_sets))
                    if tj not in nontrivial
                    and any(br.attachments & path_sets[tj]
                            and br.attachments & path_sets[pi]
                            for br in brs)}
                if len(trivial_neighbors) < p - 2:
                    witness = (i, pi, tuple(sorted(trivial_neighbors)))
                    break
            if witness is not None:
                break
        report["L6"] = Verdict(witness is None, witness)

    if "L7" in wanted:
        witness = None
        for pi, pth in enumerate(oriented):
            kinds = [len([v for v in pth if v in bags[i]]) > 1
                     for i in interior]
            if any(kinds) and not all(kinds):
                i_triv = list(interior)[kinds.index(False)]
                i_non = list(interior)[kinds.index(True)]
                witness = (pi, i_triv, i_non)
                break
        report["L7"] = Verdict(witness is None, witness)

    if "L8" in wanted:
        witness = None
        pair_sets = {i: _adjacency_pairs(per_bag[i], path_sets)
                     for i in interior}
        ids = list(interior)
        for i in ids[1:]:
            if pair_sets[i] != pair_sets[ids[0]]:
                diff = pair_sets[i] ^ pair_sets[ids[0]]
                witness = (sorted(diff)[0], ids[0], i)
                break
        report["L8"] = Verdict(witness is None, witness)

    if "L9" in wanted:
        witness = None
        first = dec.separator(1)
        last = dec.separator(l)
        ends = bags[0] | bags[l]
        base_edges = [e for e in g.edges
                      if e[0] in ends and e[1] in ends]
        all_ids = range(len(oriented))
        done = False
        for s in range(1, p // 2 + 1):
            for p1 in itertools.combinations(nontrivial, s):
                others = [j for j in all_ids if j not in p1]
                for extra in range(0, p - 2 * s + 1):
                    for more in itertools.combinations(others, extra):
                        p2 = set(p1) | set(more)
                        h_edges = list(base_edges)
                        for j in all_ids:
                            if j not in p2:
                                h_edges.extend(zip(oriented[j],
                                                   oriented[j][1:]))
                        h = g.subgraph_edges(h_edges)
                        v1 = set().union(*(path_sets[j] for j in p1))
                        a = first & v1
                        b = last & v1
                        res = disjoint_paths(h, a, b, s)
                        if isinstance(res, CutCertificate):
                            witness = (tuple(p1), tuple(sorted(p2)), res)
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                break
        report["L9"] = Verdict(witness is None, witness)

    if "L10" in wanted:
        witness = None
        for i in interior:
            for br in per_bag[i]:
                if not br.interior:
                    continue
                touched = [pi for pi in nontrivial
                           if br.attachments & path_sets[pi]]
                if len(touched) != 2:
                    witness = (i, tuple(sorted(br.attachments)),
                               tuple(touched))
                    break
            if witness is not None:
                break
        report["L10"] = Verdict(witness is None, witness)

    if "L11" in wanted:
        from . import auxgraph
        witness = None
        aux = auxgraph.build_auxiliary(g, st)
        for core in auxgraph.cores(aux):
            if core.shape == "invalid":
                witness = ("invalid core", core.member_paths)
                break
            for i in interior:
                if auxgraph.check_flat(g, st, core, i) is None:
                    witness = (core.member_paths, i)
                    break
            if witness is not None:
                break
        report["L11"] = Verdict(witness is None, witness)

    if "L12" in wanted:
        witness = None
        for i in interior:
            for br in per_bag[i]:
                if not br.interior:
                    continue
                hit = [tj for tj in range(len(path_sets))
                       if tj not in nontrivial
                       and br.attachments & path_sets[tj]]
                if hit:
                    witness = (i, tuple(sorted(br.attachments)), hit[0])
                    break
            if witness is not None:
                break
        report["L12"] = Verdict(witness is None, witness)

    return report


# -- tree to linear --------------------------------------------------------

def tree_to_linear(g: Graph, t: TreeDecomposition,
                   path: Sequence[int]) -> LinearDecomposition:
    """Split the tree along a spine r_1..r_l of equal-size bags and merge
    each piece into one bag; the result is linear with adhesion |bag(r_i)|.

    Every tree vertex is assigned to the spine segment nearest to it;
    segment boundaries r_i belong to both neighboring segments.
    """
    rs = list(path)
    if not rs:
        raise GraphInputError("spine must contain at least one tree vertex")
    for r in rs:
        if not 0 <= r < t.tree.n:
            raise GraphInputError(f"unknown tree vertex {r}")
    rep = validate_tree_decomposition(g, t, strict=False)
    bad = [k for k, v in rep.items() if not v.passed]
    if bad:
        raise GraphInputError(
            f"tree decomposition violates {', '.join(bad)}")
    if len({len(t.bags[r]) for r in rs}) != 1:
        raise GraphInputError(
            "separator bags along the spine must all have equal size")
    spine = _tree_path(t.tree, rs[0], rs[-1])
    pos = {v: i for i, v in enumerate(spine)}
    marks = []
    for r in rs:
        if r not in pos:
            raise GraphInputError("spine vertices must lie on one tree path")
        marks.append(pos[r])
    if marks != sorted(set(marks)) or len(set(marks)) != len(marks):
        raise GraphInputError("spine vertices must appear in path order")

    # nearest spine vertex for every tree vertex (multi-source BFS)
    anchor = {v: v for v in spine}
    queue = deque(spine)
    adj = t.tree.adjacency()
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in anchor:
                anchor[y] = anchor[x]
                queue.append(y)

    def segment(node: int) -> int:
        j = pos[anchor[node]]
        if j <= marks[0]:       # everything hanging before or at r_1
            return 0
        if j >= marks[-1]:      # everything hanging at or beyond r_l
            return len(rs)
        return sum(1 for m in marks if m <= j)

    l = len(rs)
    bag_sets: list[set[int]] = [set() for _ in range(l + 1)]
    for node in range(t.tree.n):
        bag_sets[segment(node)] |= t.bags[node]
    for i, r in enumerate(rs, start=1):
        bag_sets[i - 1] |= t.bags[r]  # r_i belongs to both segments
        bag_sets[i] |= t.bags[r]
    return LinearDecomposition.build(bag_sets, adhesion=len(t.bags[rs[0]]))


def foundational_linkage(g: Graph,
                         dec: LinearDecomposition) -> Linkage | CutCertificate:
    """Full-adhesion disjoint paths from the first separator to the last,
    or the cut showing none exist."""
    if dec.adhesion == 0:
        return Linkage(())
    return disjoint_paths(g, dec.separator(1), dec.separator(dec.length),
                          dec.adhesion)


# -- contractions ----------------------------------------------------------

def _trim_left(pth: tuple[int, ...], allowed: set[int]) -> tuple[int, ...]:
    for j, v in enumerate(pth):
        if v in allowed:
            return pth[j:]
    return pth[-1:]


def _trim_right(pth: tuple[int, ...], allowed: set[int]) -> tuple[int, ...]:
    for j in range(len(pth) - 1, -1, -1):
        if pth[j] in allowed:
            return pth[:j + 1]
    return pth[:1]


def _contract_to(st: FoundationalState,
                 boundaries: Sequence[int]) -> FoundationalState:
    """Merge bags into consecutive blocks.

    ``boundaries`` lists the first original bag index of each new bag
    after the first; the first new bag absorbs everything before
    boundaries[0] and the last everything from boundaries[-1] on.
    """
    dec = st.decomposition
    cuts = [0] + list(boundaries) + [len(dec.bags)]
    new_bags = []
    for a, b in zip(cuts, cuts[1:]):
        if a >= b:
            raise GraphInputError("block boundaries must be increasing")
        new_bags.append(frozenset().union(*dec.bags[a:b]))
    new_dec = LinearDecomposition(tuple(new_bags), dec.adhesion)

    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    everything = set().union(*dec.bags)
    left_keep = set().union(*dec.bags[cuts[1]:]) if cuts[1] > 1 \
        else everything
    right_keep = set().union(*dec.bags[:cuts[-2]]) \
        if cuts[-2] < len(dec.bags) - 1 else everything
    paths = tuple(_trim_right(_trim_left(pth, left_keep), right_keep)
                  for pth in oriented)
    return FoundationalState(new_dec, Linkage(paths), frozenset(), st.p)


def elementary_contraction(g: Graph, st: FoundationalState,
                           i: int) -> FoundationalState:
    """Merge W_{i-1} and W_i; restrict the linkage when an end bag merges.

    Axiom flags among L1–L8 survive bag merging, so the carried flags are
    re-validated and kept only if they still pass.
    """
    dec = st.decomposition
    if dec.length < 2:
        raise GraphInputError("need length at least two")
    if not 1 <= i <= dec.length:
        raise GraphInputError(f"bag index {i} out of range")
    boundaries = [j for j in range(1, len(dec.bags)) if j != i]
    new = _contract_to(st, boundaries)
    carried = sorted(st.satisfied & set(LINEAR_AXIOMS[:8]))
    if not carried:
        return new
    rep = validate_linear(g, new, carried)
    return new.with_flags(k for k in carried if rep[k].passed)


# -- equal-union index search ----------------------------------------------

def set_sequence_indices(sets: Sequence[Iterable[int]],
                         l: int) -> Optional[tuple[int, ...]]:
    """Indices 1 <= i_0 < ... < i_l <= len(sets)+1 cutting the sequence
    into l consecutive blocks with equal unions.

    Indices are 1-based: block j is sets[i_j - 1 : i_{j+1} - 1].  The
    search is exhaustive, so None means no such indices exist (possible
    only when the sequence is shorter than l^(n+1)·n! for sets drawn
    from an n-element universe).
    """
    if l < 1:
        raise GraphInputError("need at least one block")
    fs = [frozenset(s) for s in sets]
    lam = len(fs)
    for a in range(1, lam - l + 2):
        acc: frozenset = frozenset()
        for b in range(a + 1, lam + 2):
            acc = acc | fs[b - 2]
            target = acc
            # grow chains of blocks with union exactly `target`, the
            # first block being sets[a-1 : b-1]
            parent = {(1, b): a}
            frontier = [b]
            for step in range(2, l + 1):
                nxt = []
                for c in frontier:
                    u: frozenset = frozenset()
                    for d in range(c + 1, lam + 2):
                        u = u | fs[d - 2]
                        if not u <= target:
                            break
                        if u == target and (step, d) not in parent:
                            parent[(step, d)] = c
                            nxt.append(d)
                frontier = sorted(nxt)
                if not frontier:
                    break
            if not frontier:
                continue
            out = [frontier[0]]
            for step in range(l, 0, -1):
                out.append(parent[(step, out[-1])])
            return tuple(reversed(out))
    return None


# -- uniformization and the end-merge --------------------------------------

def uniformize_required_length(q: int, target_length: int) -> int:
    """Input length guaranteeing that `uniformize` succeeds: mu^(q+1)·q!
    with mu = l^(s+1)·s! and s = C(q, 2)."""
    s = math.comb(q, 2)
    mu = target_length ** (s + 1) * math.factorial(s)
    return mu ** (q + 1) * math.factorial(q)


def uniformize(g: Graph, st: FoundationalState,
               target_length: int) -> FoundationalState:
    """Contract to a decomposition of the target length on which path
    triviality (L7) and bridge adjacency (L8) are uniform across bags.

    Two block-merging passes: the first makes the per-bag sets of
    non-trivial paths agree, the second the per-bag bridge-adjacency
    pairs.  Block boundaries come from `set_sequence_indices`; the
    guaranteed-sufficient input length is mu^(q+1)·q! with
    mu = l^(s+1)·s! and s = C(q, 2).
    """
    l = target_length
    if l < 2:
        raise GraphInputError("target length must be at least two")
    dec = st.decomposition
    q = dec.adhesion
    s = math.comb(q, 2)
    mu = l ** (s + 1) * math.factorial(s)
    lam = uniformize_required_length(q, l)
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    big = dec.length

    def triviality_sets(state: FoundationalState) -> list[frozenset[int]]:
        ops = _orient_paths(state)
        bs = state.decomposition.bags
        return [frozenset(pi for pi, pth in enumerate(ops)
                          if len([v for v in pth if v in bs[i]]) > 1)
                for i in range(1, state.decomposition.length)]

    def adjacency_sets(state: FoundationalState) -> list[frozenset]:
        ops = _orient_paths(state)
        vsets = [frozenset(pth) for pth in ops]
        return [frozenset(_adjacency_pairs(bag_bridges(g, state, i), vsets))
                for i in range(1, state.decomposition.length)]

    seq1 = triviality_sets(st)
    for b1 in range(min(mu, len(seq1)), max(l - 1, 1) - 1, -1):
        idx1 = set_sequence_indices(seq1, b1)
        if idx1 is None:
            continue
        st1 = _contract_to(st, idx1)
        seq2 = adjacency_sets(st1)
        idx2 = set_sequence_indices(seq2, l - 1)
        if idx2 is None:
            continue
        out = _contract_to(st1, idx2)
        rep = validate_linear(g, out, LINEAR_AXIOMS[:8])
        return out.with_flags(k for k, v in rep.items() if v.passed)
    if big < lam:
        raise GraphInputError(
            f"input length {big} below the guaranteed-sufficient {lam}")
    raise RuntimeError(
        "no uniform contraction found despite sufficient length; the "
        "input state likely violates its declared axioms")


def establish_L9(g: Graph, st: FoundationalState) -> FoundationalState:
    """Merge 2q+2 bags at each end so end-linkage rerouting (L9) holds.

    The input must have length l + 4q + 2 with l >= 3 (l >= 1 suffices
    when q = 0 and the axiom is vacuous); the output has length l and is
    re-validated against L1–L9.
    """
    dec = st.decomposition
    q = dec.adhesion
    l = dec.length - 4 * q - 2
    if l < 3:
        raise GraphInputError(
            f"length {dec.length} too short: need l + 4q + 2 bags beyond "
            f"the end blocks with l >= 3 at adhesion {q}")
    boundaries = [s + 2 * q + 2 for s in range(l)]
    out = _contract_to(st, boundaries)
    rep = validate_linear(g, out, LINEAR_AXIOMS[:9])
    return out.with_flags(k for k, v in rep.items() if v.passed)


def establish_L6(g: Graph, st: FoundationalState) -> FoundationalState:
    """Reroute the non-trivial linkage paths until L6 holds.

    If the current linkage already passes, it is kept.  Otherwise the
    union of the non-trivial paths is stabilized (every bridge of the
    middle of the decomposition forced to attach beyond one segment) and
    the linkage is rebuilt from the stabilized union.
    """
    rep = validate_linear(g, st, ("L6",))
    if rep["L6"].passed:
        return st.with_flags(["L6"])
    oriented = _orient_paths(st)
    if oriented is None:
        raise GraphInputError("linkage is not foundational")
    dec = st.decomposition
    trivial = [pth for pth in oriented if len(pth) == 1]
    nontrivial = [pth for pth in oriented if len(pth) > 1]
    middle = set().union(*dec.bags[1:dec.length])
    middle -= {pth[0] for pth in trivial}
    order = sorted(middle)
    idx = {v: j for j, v in enumerate(order)}
    if any(v not in idx for pth in nontrivial for v in pth):
        raise GraphInputError(
            "non-trivial linkage paths must stay inside the interior bags")
    h = g.induced(order)
    s = Graph.build(h.n, [(idx[a], idx[b]) for pth in nontrivial
                          for a, b in zip(pth, pth[1:])])
    stabilized = stabilize(h, s)
    comp_paths = _paths_of_union(stabilized)
    first = dec.separator(1)
    rebuilt = []
    for comp in comp_paths:
        host = [order[v] for v in comp]
        if host[-1] in first:
            host.reverse()
        rebuilt.append(tuple(host))
    new = replace(st, linkage=Linkage(tuple(rebuilt)
                                      + tuple((p[0],) for p in trivial)),
                  satisfied=frozenset())
    rep = validate_linear(g, new, LINEAR_AXIOMS[:6])
    return new.with_flags(k for k, v in rep.items() if v.passed)


def _paths_of_union(s: Graph) -> list[list[int]]:
    """Decompose a disjoint union of paths into vertex sequences."""
    adj = s.adjacency()
    used = {v for e in s.edges for v in e}
    out = []
    seen: set[int] = set()
    for v in sorted(used):
        if v in seen or len(adj[v]) != 1:
            continue
        path = [v]
        seen.add(v)
        while True:
            nxts = [w for w in adj[path[-1]] if w not in seen]
            if not nxts:
                break
            path.append(nxts[0])
            seen.add(nxts[0])
        out.append(path)
    if any(v not in seen for v in used):
        raise GraphInputError("stabilized union is not a union of paths")
    return out


# -- pipeline thresholds ---------------------------------------------------

def compute_thresholds(w: int) -> tuple[int, int, int]:
    """Decomposition-length thresholds for width-w certification.

    l1 bounds the final working length, l2 the length needed before the
    bridge-taming contraction, l3 the length needed before the
    auxiliary-graph contraction.
    """
    if w < 1:
        raise GraphInputError("width must be positive")
    l1 = max(4 * w + 11, 2 * w + 32, 58)
    l2 = (88 * math.comb(w, 3) + 12 * math.comb(w, 2)) * l1
    l3 = (6 * math.comb(w, 6) + 48 * math.comb(w, 3)) * l2
    return (l1, l2, l3)
