"""Parameterized generators for the explicit graph families.

Every generator builds its graph literally from the defining vertex and
edge sets, with labels that name the structural role of each vertex
(rows/columns, rings, vanes, hubs).  Free endpoint choices are parameters
with canonical defaults; invalid choices raise input errors.

Graphs listed in FIGURE_DERIVED are best-effort reconstructions from
pictures rather than displayed formulas; treat them as illustrative
instances, not ground truth.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .graph import Graph, GraphInputError


def _row_col_graph(k: int, l: int, label: str = "v") -> tuple[int, list, list]:
    """Vertex ids and labels for a k-row, l-column grid; id = row*l + col."""
    labels = [f"{label}{i + 1}_{j + 1}" for i in range(k) for j in range(l)]
    return k * l, [], labels


def linked_cylinder(k: int, l: int,
                    q1: tuple[int, int] = (0, 0),
                    q2: tuple[int, int] = (1, 1)) -> Graph:
    """k disjoint paths of l vertices, rung cycles in every column, plus two
    linking edges q1, q2 from column 1 to column l with no common end.

    q1 and q2 are given as (row at column 1, row at column l), 0-based.
    """
    if k < 3 or l < 3:
        raise GraphInputError("linked cylinder needs k, l >= 3")
    (r1, s1), (r2, s2) = q1, q2
    for r in (r1, s1, r2, s2):
        if not (0 <= r < k):
            raise GraphInputError(f"linking-edge row {r} outside 0..{k-1}")
    if r1 == r2 or s1 == s2:
        raise GraphInputError("linking edges must not share an end")
    n, edges, labels = _row_col_graph(k, l)

    def vid(i: int, j: int) -> int:
        return i * l + j

    for i in range(k):
        for j in range(l - 1):
            edges.append((vid(i, j), vid(i, j + 1)))
    for j in range(l):
        for i in range(k):
            edges.append((vid(i, j), vid((i + 1) % k, j)))
    edges.append((vid(r1, 0), vid(s1, l - 1)))
    edges.append((vid(r2, 0), vid(s2, l - 1)))
    return Graph.build(n, edges, labels)


def legal_linking_choices(k: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All unordered pairs of linking edges with no common end."""
    singles = [(a, b) for a in range(k) for b in range(k)]
    out = []
    for i, e1 in enumerate(singles):
        for e2 in singles[i + 1:]:
            if e1[0] != e2[0] and e1[1] != e2[1]:
                out.append((e1, e2))
    return out


def pinwheel(t: int) -> Graph:
    """Two rings of length 2t joined on even positions, vane tips w_j over
    the odd positions, and a hub x adjacent to every w_j."""
    if t < 1:
        raise GraphInputError("pinwheel needs t >= 1")
    ring = 2 * t

    def c(i: int, j: int) -> int:  # ring i in {0,1}, position j in 0..2t-1
        return i * ring + j

    w = [2 * ring + j for j in range(t)]
    x = 2 * ring + t
    labels = [f"v{i + 1}_{j + 1}" for i in range(2) for j in range(ring)]
    labels += [f"w{j + 1}" for j in range(t)] + ["x"]
    edges = []
    for i in range(2):
        for j in range(ring):
            edges.append((c(i, j), c(i, (j + 1) % ring)))
    for j in range(1, t + 1):  # even ring positions v_{2j}
        edges.append((c(0, 2 * j - 1), c(1, 2 * j - 1)))
    for j in range(1, t + 1):  # vanes over odd positions v_{2j-1}
        edges.append((w[j - 1], c(0, 2 * j - 2)))
        edges.append((w[j - 1], c(1, 2 * j - 2)))
        edges.append((x, w[j - 1]))
    return Graph.build(x + 1, edges, labels)


def moebius_pinwheel(t: int) -> Graph:
    """Pinwheel rewired into one long ring: the two ring-closing edges are
    replaced by the two cross edges between the rings."""
    g = pinwheel(t)
    ring = 2 * t

    def c(i: int, j: int) -> int:
        return i * ring + j

    drop = {tuple(sorted((c(0, ring - 1), c(0, 0)))),
            tuple(sorted((c(1, ring - 1), c(1, 0))))}
    kept = [e for e in g.edges if e not in drop]
    kept.append((c(0, ring - 1), c(1, 0)))
    kept.append((c(1, ring - 1), c(0, 0)))
    return Graph.build(g.n, kept, g.labels)


def _check_interleaved_rows(k: int, e1: tuple[int, int], e2: tuple[int, int],
                            what: str) -> None:
    u1, v1 = e1
    u2, v2 = e2
    rows = [u1, u2, v1, v2]
    if len(set(rows)) != 4:
        raise GraphInputError(f"{what} ends must be four distinct rows")
    for r in rows:
        if not (0 <= r < k):
            raise GraphInputError(f"{what} row {r} outside 0..{k-1}")
    # u1, u2, v1, v2 must occur in this cyclic row order
    shifted = [(r - u1) % k for r in rows]
    if not (0 == shifted[0] < shifted[1] < shifted[2] < shifted[3]):
        raise GraphInputError(f"{what} ends do not interleave in cyclic order")


def double_crossed_cylinder(k: int, l: int,
                            q_ends: Optional[tuple[tuple[int, int],
                                                   tuple[int, int]]] = None,
                            r_ends: Optional[tuple[tuple[int, int],
                                                   tuple[int, int]]] = None
                            ) -> Graph:
    """Cylinder of k paths with rung cycles plus one crossing edge pair on
    each end column.  q_ends = ((u1, v1), (u2, v2)) gives rows in column 1
    with u1, u2, v1, v2 in cyclic row order; r_ends likewise in column l.
    """
    if k < 3 or l < 3:
        raise GraphInputError("double crossed cylinder needs k, l >= 3")
    if q_ends is None:
        q_ends = ((0, 2), (1, 3))
    if r_ends is None:
        r_ends = ((0, 2), (1, 3))
    _check_interleaved_rows(k, *q_ends, what="first-column crossing")
    _check_interleaved_rows(k, *r_ends, what="last-column crossing")
    n, edges, labels = _row_col_graph(k, l)

    def vid(i: int, j: int) -> int:
        return i * l + j

    for i in range(k):
        for j in range(l - 1):
            edges.append((vid(i, j), vid(i, j + 1)))
    for j in range(l):
        for i in range(k):
            edges.append((vid(i, j), vid((i + 1) % k, j)))
    (u1, v1), (u2, v2) = q_ends
    edges.append((vid(u1, 0), vid(v1, 0)))
    edges.append((vid(u2, 0), vid(v2, 0)))
    (x1, y1), (x2, y2) = r_ends
    edges.append((vid(x1, l - 1), vid(y1, l - 1)))
    edges.append((vid(x2, l - 1), vid(y2, l - 1)))
    return Graph.build(n, edges, labels)


# -- named fixed graphs ---------------------------------------------------

def _four_hubs_spine() -> Graph:
    # 4 hubs each adjacent to all 6 spine vertices; spine forms a path
    hubs, spine = 4, 6
    edges = [(h, hubs + j) for h in range(hubs) for j in range(spine)]
    edges += [(hubs + j, hubs + j + 1) for j in range(spine - 1)]
    labels = [f"v{h + 1}" for h in range(hubs)] + \
             [f"b{j + 1}" for j in range(spine)]
    return Graph.build(hubs + spine, edges, labels)


def _three_hubs_spine_rail() -> Graph:
    # 3 hubs over a 6-vertex spine path, plus a rail vertex adjacent to
    # every spine vertex
    hubs, spine = 3, 6
    rail = hubs + spine
    edges = [(h, hubs + j) for h in range(hubs) for j in range(spine)]
    edges += [(hubs + j, hubs + j + 1) for j in range(spine - 1)]
    edges += [(rail, hubs + j) for j in range(spine)]
    labels = [f"v{h + 1}" for h in range(hubs)] + \
             [f"b{j + 1}" for j in range(spine)] + ["c"]
    return Graph.build(rail + 1, edges, labels)


def _triple_block_belt() -> Graph:
    # two parallel 6-vertex paths carrying three complete blocks of four,
    # closed up by two end-to-end edges
    l = 6
    a = [j for j in range(l)]
    b = [l + j for j in range(l)]
    edges = [(a[j], a[j + 1]) for j in range(l - 1)]
    edges += [(b[j], b[j + 1]) for j in range(l - 1)]
    for m in range(3):
        p, q = 2 * m, 2 * m + 1
        edges += [(a[p], b[p]), (a[q], b[q]), (a[p], b[q]), (a[q], b[p])]
    edges += [(a[0], b[l - 1]), (b[0], a[l - 1])]
    labels = [f"a{j + 1}" for j in range(l)] + [f"b{j + 1}" for j in range(l)]
    return Graph.build(2 * l, edges, labels)


def _apexed_ladder() -> Graph:
    # ladder of 6 rungs; two hubs over the whole top rail, two under the
    # whole bottom rail
    l = 6
    a = [j for j in range(l)]
    b = [l + j for j in range(l)]
    q1, q2, s1, s2 = 2 * l, 2 * l + 1, 2 * l + 2, 2 * l + 3
    edges = [(a[j], a[j + 1]) for j in range(l - 1)]
    edges += [(b[j], b[j + 1]) for j in range(l - 1)]
    edges += [(a[j], b[j]) for j in range(l)]
    edges += [(q1, a[j]) for j in range(l)] + [(q2, a[j]) for j in range(l)]
    edges += [(s1, b[j]) for j in range(l)] + [(s2, b[j]) for j in range(l)]
    labels = [f"a{j + 1}" for j in range(l)] + [f"b{j + 1}" for j in range(l)]
    labels += ["q1", "q2", "s1", "s2"]
    return Graph.build(2 * l + 4, edges, labels)


def _crossed_grid() -> Graph:
    # 3-row grid strip with two hubs over the top rail and a crossing pair
    # of chords joining the left and right boundary columns
    rows, cols = 3, 8
    edges = []

    def vid(i: int, j: int) -> int:
        return i * cols + j

    for i in range(rows):
        for j in range(cols - 1):
            edges.append((vid(i, j), vid(i, j + 1)))
    for i in range(rows - 1):
        for j in range(cols):
            edges.append((vid(i, j), vid(i + 1, j)))
    q1, q2 = rows * cols, rows * cols + 1
    edges += [(q1, vid(0, j)) for j in range(cols)]
    edges += [(q2, vid(0, j)) for j in range(cols)]
    # interleaved chords on the boundary cycle through both end columns
    edges.append((vid(1, 0), vid(0, cols - 1)))
    edges.append((vid(0, 0), vid(2, cols - 1)))
    labels = [f"v{i + 1}_{j + 1}" for i in range(rows) for j in range(cols)]
    labels += ["q1", "q2"]
    return Graph.build(rows * cols + 2, edges, labels)


def _escaped_hubs_ladder() -> Graph:
    # annular ladder of 8 rungs (two concentric cycles); two hubs attached
    # to overlapping arcs of the inner cycle, each escaping by one edge to
    # the outer cycle at staggered positions
    l = 8
    a = [j for j in range(l)]
    b = [l + j for j in range(l)]
    q1, q2 = 2 * l, 2 * l + 1
    edges = [(a[j], a[(j + 1) % l]) for j in range(l)]
    edges += [(b[j], b[(j + 1) % l]) for j in range(l)]
    edges += [(a[j], b[j]) for j in range(l)]
    edges += [(q1, a[j]) for j in (0, 1, 2, 3, 4)]
    edges += [(q2, a[j]) for j in (4, 5, 6, 7, 0)]
    edges += [(q1, b[2]), (q2, b[6])]
    labels = [f"a{j + 1}" for j in range(l)] + [f"b{j + 1}" for j in range(l)]
    labels += ["q1", "q2"]
    return Graph.build(2 * l + 2, edges, labels)


_FIGURES = {
    "four_hubs_spine": _four_hubs_spine,
    "three_hubs_spine_rail": _three_hubs_spine_rail,
    "triple_block_belt": _triple_block_belt,
    "apexed_ladder": _apexed_ladder,
    "crossed_grid": _crossed_grid,
    "escaped_hubs_ladder": _escaped_hubs_ladder,
}

# reconstructions from pictures only; edge lists are best effort
FIGURE_DERIVED = frozenset({
    "three_hubs_spine_rail", "triple_block_belt", "apexed_ladder",
    "crossed_grid", "escaped_hubs_ladder",
})


def figure_names() -> list[str]:
    return sorted(_FIGURES)


def figure_graph(name: str) -> Graph:
    """A named fixed graph; see FIGURE_DERIVED for reconstruction status."""
    try:
        return _FIGURES[name]()
    except KeyError:
        raise GraphInputError(f"unknown figure graph {name!r}") from None
