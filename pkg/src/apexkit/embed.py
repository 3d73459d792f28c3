"""Planarity, disk and cylinder embeddings, apex vertices, and societies.

Embeddings are combinatorial: a rotation system (cyclic neighbor order per
vertex) plus a distinguished outer face.  Planarity itself is delegated to
networkx; every embedding we hand out is re-checked by the Euler-formula
verifier, so the backend is untrusted.

All embedding operations work on the simplification of their input: loops
and parallel edges never affect planarity or disk drawability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

from .graph import Graph, GraphInputError, disjoint_paths, CutCertificate, \
    min_vertex_cut_between
from .outcome import Indeterminate


def _cyclic_variants(seq: Sequence[int]) -> list[tuple[int, ...]]:
    s = tuple(seq)
    return [s[i:] + s[:i] for i in range(len(s))] or [()]


def cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """Equality of cyclic sequences up to rotation only."""
    return len(a) == len(b) and tuple(b) in _cyclic_variants(a)


def cyclic_orientation(a: Sequence[int], b: Sequence[int]) -> int:
    """+1 if b is a rotation of a, -1 if of reversed a, 0 otherwise."""
    if cyclic_equal(a, b):
        return 1
    if cyclic_equal(tuple(reversed(a)), b):
        return -1
    return 0


@dataclass(frozen=True)
class PlaneEmbedding:
    """Rotation system with a distinguished outer face.

    rotation[v] lists the neighbors of v in cyclic order.  Faces are the
    orbits of the half-edge successor map; the convention (clockwise versus
    counterclockwise) is irrelevant to every check we perform, since disk
    and cylinder drawings may always be reflected.
    """

    rotation: tuple[tuple[int, ...], ...]
    outer_face: int = 0

    @property
    def n(self) -> int:
        return len(self.rotation)

    def faces(self) -> list[tuple[int, ...]]:
        """Face walks as vertex sequences, one per half-edge orbit."""
        index = [
            {u: i for i, u in enumerate(rot)} for rot in self.rotation
        ]
        seen: set[tuple[int, int]] = set()
        out: list[tuple[int, ...]] = []
        for v in range(self.n):
            for w in self.rotation[v]:
                if (v, w) in seen:
                    continue
                walk = []
                edge = (v, w)
                while edge not in seen:
                    seen.add(edge)
                    walk.append(edge[0])
                    a, b = edge
                    i = index[b][a]
                    c = self.rotation[b][(i + 1) % len(self.rotation[b])]
                    edge = (b, c)
                out.append(tuple(walk))
        return sorted(out)

    def verify(self, g: Graph) -> bool:
        """Euler check against the simplification of g."""
        simple = g.simplify()
        if self.n != simple.n:
            return False
        adj = simple.adjacency()
        for v in range(self.n):
            if set(self.rotation[v]) != adj[v]:
                return False
            if len(self.rotation[v]) != len(adj[v]):
                return False
        faces = self.faces()
        if not (0 <= self.outer_face < max(len(faces), 1)):
            return False
        # Euler per component with >= 1 edge: sum of (2 - V_i + E_i)
        expected = 0
        for comp in simple.components():
            e_i = sum(1 for (u, v) in simple.edges if u in comp)
            if e_i > 0:
                expected += 2 - len(comp) + e_i
        return len(faces) == expected

    def without_last_vertices(self, count: int) -> "PlaneEmbedding":
        """Drop the highest-id vertices (used to peel off capping hubs)."""
        keep = self.n - count
        rot = tuple(
            tuple(w for w in self.rotation[v] if w < keep)
            for v in range(keep)
        )
        return PlaneEmbedding(rot, 0)


def _embedding_from_nx(emb: "nx.PlanarEmbedding", n: int) -> PlaneEmbedding:
    rot = []
    for v in range(n):
        if v in emb and len(emb[v]) > 0:
            rot.append(tuple(emb.neighbors_cw_order(v)))
        else:
            rot.append(())
    return PlaneEmbedding(tuple(rot), 0)


def is_planar(g: Graph) -> Optional[PlaneEmbedding]:
    """A verified combinatorial embedding, or None when g is nonplanar."""
    simple = g.simplify()
    G = nx.Graph()
    G.add_nodes_from(range(simple.n))
    G.add_edges_from(simple.edges)
    ok, emb = nx.check_planarity(G)
    if not ok:
        return None
    out = _embedding_from_nx(emb, simple.n)
    if not out.verify(g):  # backend is untrusted
        raise RuntimeError("planarity backend produced an invalid embedding")
    return out


def find_apex_vertex(g: Graph) -> Optional[int]:
    """Least-id vertex whose deletion leaves a planar graph, else None."""
    if g.n == 0:
        return None
    for v in range(g.n):
        if is_planar(g.delete_vertices([v])) is not None:
            return v
    return None


@dataclass(frozen=True)
class Society:
    """A graph with a cyclic permutation of some of its vertices."""

    graph: Graph
    omega: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.omega)) != len(self.omega):
            raise GraphInputError("society boundary vertices must be distinct")
        for v in self.omega:
            if not (0 <= v < self.graph.n):
                raise GraphInputError(f"boundary vertex {v} not in graph")


@dataclass(frozen=True)
class Cross:
    """Two disjoint non-trivial paths whose ends interleave on the boundary."""

    path1: tuple[int, ...]
    path2: tuple[int, ...]

    @property
    def ends(self) -> tuple[int, int, int, int]:
        return (self.path1[0], self.path2[0], self.path1[-1], self.path2[-1])

    def is_valid(self, s: Society) -> bool:
        p1, p2 = self.path1, self.path2
        if len(p1) < 2 or len(p2) < 2:
            return False
        if set(p1) & set(p2):
            return False
        from .graph import Linkage
        if not Linkage((p1, p2)).is_valid(s.graph):
            return False
        boundary = set(s.omega)
        for p in (p1, p2):
            if p[0] not in boundary or p[-1] not in boundary:
                return False
            if any(v in boundary for v in p[1:-1]):
                return False
        return _interleaved(s.omega, p1[0], p1[-1], p2[0], p2[-1])


def _interleaved(omega: Sequence[int], u1: int, v1: int, u2: int, v2: int) -> bool:
    """Do the pairs {u1,v1} and {u2,v2} separate each other on the cycle?"""
    pos = {v: i for i, v in enumerate(omega)}
    if len({u1, v1, u2, v2}) != 4:
        return False
    a, b = sorted((pos[u1], pos[v1]))
    inside = a < pos[u2] < b
    return inside != (a < pos[v2] < b)


def _boundary_paths(s: Society, cap: int) -> list[tuple[int, ...]] | Indeterminate:
    """All paths with both ends on the boundary and interior off it."""
    g = s.graph.simplify()
    adj = g.adjacency()
    boundary = set(s.omega)
    found: list[tuple[int, ...]] = []

    def extend(path: list[int], used: set[int]):
        v = path[-1]
        for w in sorted(adj[v]):
            if w in used:
                continue
            if w in boundary:
                if w != path[0]:
                    found.append(tuple(path) + (w,))
                    if len(found) > cap:
                        return
            else:
                extend(path + [w], used | {w})
                if len(found) > cap:
                    return

    for start in sorted(boundary):
        extend([start], {start})
        if len(found) > cap:
            return Indeterminate("boundary-path enumeration exceeded budget",
                                 len(found))
    # each path found twice (once per direction); keep one orientation
    dedup = {}
    for p in found:
        key = min(p, tuple(reversed(p)))
        dedup.setdefault(key, p)
    return sorted(dedup)


def find_cross(s: Society, budget: int = 200000) -> Cross | None | Indeterminate:
    """An interleaving disjoint path pair, None if none exists.

    Exhaustive over all boundary-to-boundary paths; Indeterminate only when
    the path enumeration outgrows the budget.
    """
    if len(s.omega) < 4:
        return None
    paths = _boundary_paths(s, budget)
    if isinstance(paths, Indeterminate):
        return paths
    for p1, p2 in itertools.combinations(paths, 2):
        if set(p1) & set(p2):
            continue
        if _interleaved(s.omega, p1[0], p1[-1], p2[0], p2[-1]):
            cross = Cross(p1, p2)
            assert cross.is_valid(s)
            return cross
    return None


def _augment_with_hub(g: Graph, boundary: Sequence[int]) -> Graph:
    """Add the boundary cycle plus a hub adjacent to all boundary vertices."""
    hub = g.n
    out = g.add_vertex("hub")
    extra = [(hub, v) for v in boundary]
    k = len(boundary)
    if k >= 2:
        extra += [(boundary[i], boundary[(i + 1) % k]) for i in range(k)]
    return out.add_edges(extra).simplify()


def _hub_rotation_sign(emb: PlaneEmbedding, hub: int,
                       boundary: Sequence[int]) -> int:
    """Orientation of the hub's rotation against the boundary order.

    Any embedding of a wheel forces the hub rotation to follow the rim, so
    for |boundary| >= 3 the result is +1 or -1; shorter boundaries carry no
    orientation and yield 0 (meaning: unconstrained).
    """
    if len(boundary) < 3:
        return 0
    return cyclic_orientation(emb.rotation[hub], boundary)


def face_reads_boundary(face: Sequence[int], omega: Sequence[int]) -> bool:
    """Does this face walk visit the boundary exactly in cyclic order?

    The walk may detour through non-boundary vertices (pieces hanging into
    the face); detours at a single boundary vertex repeat it consecutively,
    which we collapse.  Sound because detours can be drawn just inside the
    disk while the boundary circle follows the face.
    """
    bset = set(omega)
    seq = [v for v in face if v in bset]
    if not seq:
        return not omega
    collapsed: list[int] = []
    for v in seq:
        if not collapsed or collapsed[-1] != v:
            collapsed.append(v)
    if len(collapsed) > 1 and collapsed[0] == collapsed[-1]:
        collapsed.pop()
    if len(collapsed) != len(omega) or set(collapsed) != bset:
        return False
    return cyclic_orientation(collapsed, omega) != 0


def is_rural(s: Society) -> Optional[PlaneEmbedding]:
    """Disk-drawing witness with the boundary in prescribed cyclic order.

    Implemented by capping: add the boundary cycle and a hub adjacent to
    every boundary vertex, then planarity-test.  The cap is removable iff
    the graph fits in the complementary disk, and the wheel structure pins
    the boundary order (a disk may be reflected, so orientation is free).
    The witness is an embedding of graph-plus-boundary-cycle whose outer
    face reads the boundary in order.
    """
    g = s.graph.simplify()
    aug = _augment_with_hub(g, s.omega)
    emb = is_planar(aug)
    if emb is None:
        return None
    reduced = emb.without_last_vertices(1)
    if len(s.omega) < 3:
        return reduced
    # locate the face freed by removing the hub: it reads the boundary
    for i, face in enumerate(reduced.faces()):
        if face_reads_boundary(face, s.omega):
            return PlaneEmbedding(reduced.rotation, i)
    raise RuntimeError("hub removal did not expose the boundary face")


def embed_in_cylinder(g: Graph, boundary1: Sequence[int],
                      boundary2: Sequence[int],
                      allow_reflection: bool = False
                      ) -> Optional[PlaneEmbedding]:
    """Cylinder drawing with each boundary on one rim in clockwise order.

    Both rims are capped with a hub wheel; the graph fits the cylinder iff
    the capped graph is planar and the two rim orders have opposite
    orientation in the embedding (a sphere reflection flips both rims at
    once, so "clockwise/clockwise on the cylinder" means opposite rotation
    signs at the hubs).  When the two hubs can be separated by at most two
    vertices the relative orientation is flippable and any planar capping
    suffices.  allow_reflection additionally accepts the mirrored order of
    boundary2.

    The witness is an embedding of g plus both rim cycles.
    """
    b1, b2 = tuple(boundary1), tuple(boundary2)
    if set(b1) & set(b2):
        raise GraphInputError("cylinder boundaries must be disjoint")
    for v in b1 + b2:
        if not (0 <= v < g.n):
            raise GraphInputError(f"boundary vertex {v} not in graph")
    if not b2:
        return is_rural(Society(g, b1))
    if not b1:
        return is_rural(Society(g, b2))
    simple = g.simplify()
    aug = _augment_with_hub(_augment_with_hub(simple, b1), b2)
    hub1, hub2 = simple.n, simple.n + 1
    emb = is_planar(aug)
    if emb is None:
        return None
    o1 = _hub_rotation_sign(emb, hub1, b1)
    o2 = _hub_rotation_sign(emb, hub2, b2)
    ok = (o1 == 0 or o2 == 0 or o1 * o2 == -1)
    if not ok and not allow_reflection:
        # relative rim orientation is an embedding invariant unless a cut
        # of order <= 2 separates the hubs, in which case one side flips
        if len(min_vertex_cut_between(aug, hub1, hub2)) <= 2:
            ok = True
    if not ok and allow_reflection:
        ok = True  # mirrored boundary2 explicitly permitted
    if not ok:
        return None
    reduced = PlaneEmbedding(
        tuple(tuple(w for w in emb.rotation[v] if w < simple.n)
              for v in range(simple.n)), 0)
    return reduced


def is_4_connected_society(s: Society) -> bool:
    """No separation of order <= 3 keeps the whole boundary on one side
    while the other side still has a private vertex."""
    g = s.graph.simplify()
    boundary = set(s.omega)
    interior = [v for v in range(g.n) if v not in boundary]
    if not interior:
        return True
    if len(boundary) <= 3:
        return False  # the boundary itself is a small separator
    adj = g.adjacency()
    for v in interior:
        # a fan of 4 paths from v to the boundary, pairwise sharing only v
        keep = [w for w in range(g.n) if w != v]
        remap = {w: i for i, w in enumerate(keep)}
        h = g.delete_vertices([v])
        a = [remap[w] for w in adj[v]]
        b = [remap[w] for w in boundary]
        if len(a) < 4:
            return False
        res = disjoint_paths(h, a, b, 4)
        if isinstance(res, CutCertificate):
            return False
    return True
