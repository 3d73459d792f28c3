"""Decision-tree executor: decide K6-minor versus apex for a 6-connected
host, with every emitted witness re-verified before it leaves.

The executor follows the structure of the bounded-tree-width dichotomy:
direct minor search first, then (when a linear decomposition is supplied)
axiom validation, the uniformizing refinement chain, threshold detectors,
core extraction, and a shape-specific apex assembly — a cylinder argument
when some core is a cycle, a planar-strip argument when every core is a
path.  Anything unprovable at the configured scale yields an Inconclusive
certificate whose trail names the exact failing step.

Strict mode enforces the literal length bounds (l >= 2q+32 for the cycle
case, l >= max(4q+11, 48) for the path case, and the staged thresholds of
`compute_thresholds` on the input length); demo mode records every
relaxation in the trail instead of failing on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .auxgraph import (Core, build_auxiliary, check_flat, cores,
                       threshold_detectors)
from .decomp import (LINEAR_AXIOMS, FoundationalState, LinearDecomposition,
                     compute_thresholds, establish_L6, establish_L9,
                     foundational_linkage, uniformize, validate_linear)
from .embed import PlaneEmbedding, find_apex_vertex, is_planar
from .graph import (CutCertificate, Graph, GraphInputError, Linkage,
                    complete_graph, disjoint_paths, min_vertex_cut_between)
from .minors import MinorModel, find_minor, verify_minor_model
from .outcome import Indeterminate


@dataclass(frozen=True)
class TrailEntry:
    """One step of the analysis: what ran, how it ended, and why."""

    step: str
    status: str        # "ok" | "failed" | "assumed" | "relaxed" | "skipped"
    detail: str = ""


@dataclass(frozen=True)
class Certificate:
    """Outcome of `analyze` with its verified witness and full trail.

    verdict "k6-minor" carries a MinorModel that passes
    verify_minor_model; "apex" carries a vertex whose deletion leaves the
    (verified) plane embedding; "inconclusive" carries a reason, and the
    trail lists every hypothesis that failed or was assumed.
    """

    verdict: str
    trail: tuple[TrailEntry, ...] = ()
    minor_model: Optional[MinorModel] = None
    apex_vertex: Optional[int] = None
    embedding: Optional[PlaneEmbedding] = None
    reason: str = ""

    @property
    def decided(self) -> bool:
        return self.verdict in ("k6-minor", "apex")


@dataclass(frozen=True)
class RunConfig:
    """Mode, budgets, and optional overrides of the literal length bounds.

    In strict mode every override left at None means the literal bound;
    demo mode never fails on a bound, it records the relaxation.
    """

    mode: str = "demo"
    budget: int = 200000
    min_input_length: Optional[int] = None    # staged threshold on l
    cycle_min_length: Optional[int] = None    # 2q + 32
    path_min_length: Optional[int] = None     # max(4q + 11, 48)
    uniform_target: Optional[int] = None      # contraction target length

    def __post_init__(self):
        if self.mode not in ("strict", "demo"):
            raise GraphInputError("mode must be 'strict' or 'demo'")


def small_cut(g: Graph, order: int) -> Optional[frozenset[int]]:
    """A vertex cut of at most `order` vertices, or None when the graph is
    (order+1)-connected (complete-ish graphs have no cut at all)."""
    simple = g.simplify()
    if simple.n <= order + 1:
        return None
    adj = simple.adjacency()
    best = None
    for u in range(simple.n):
        for v in range(u + 1, simple.n):
            if v in adj[u]:
                continue
            cut = min_vertex_cut_between(simple, u, v)
            if best is None or len(cut) < len(best):
                best = cut
                if len(best) <= order:
                    return best
    return best if best is not None and len(best) <= order else None


DecompositionInput = Union[FoundationalState, LinearDecomposition, None]


def _as_state(g: Graph, dec: DecompositionInput, trail: list) -> \
        Optional[FoundationalState]:
    if dec is None:
        return None
    if isinstance(dec, FoundationalState):
        return dec
    linkage = foundational_linkage(g, dec)
    if isinstance(linkage, CutCertificate):
        trail.append(TrailEntry(
            "foundational-linkage", "failed",
            f"separators not linked; cut {sorted(linkage.vertices)}"))
        return None
    return FoundationalState(dec, linkage)


def _k6_certificate(g: Graph, model: MinorModel,
                    trail: list) -> Certificate:
    ok, why = verify_minor_model(g, complete_graph(6), model, explain=True)
    if not ok:
        raise RuntimeError(f"unverifiable minor model: {why}")
    trail.append(TrailEntry("verify-minor-model", "ok", ""))
    return Certificate("k6-minor", tuple(trail), minor_model=model)


def _apex_certificate(g: Graph, v: int, route: str,
                      trail: list) -> Optional[Certificate]:
    emb = is_planar(g.delete_vertices([v]))
    if emb is None:
        return None
    trail.append(TrailEntry("verify-apex", "ok",
                            f"vertex {v} via {route}"))
    return Certificate("apex", tuple(trail), apex_vertex=v, embedding=emb)


def _try_apex(g: Graph, candidates, route: str,
              trail: list) -> Optional[Certificate]:
    for v in candidates:
        cert = _apex_certificate(g, v, route, trail)
        if cert is not None:
            return cert
    return None


def _inconclusive(reason: str, trail: list) -> Certificate:
    return Certificate("inconclusive", tuple(trail), reason=reason)


def _refine(g: Graph, st: FoundationalState, cfg: RunConfig,
            trail: list) -> FoundationalState:
    """Run the refinement chain, recording each step; axioms that still
    fail afterwards are left unsatisfied (and noted in the trail)."""
    rep = validate_linear(g, st)
    st = st.with_flags(k for k, v in rep.items() if v.passed)
    failing = [k for k in LINEAR_AXIOMS if not rep[k].passed]
    trail.append(TrailEntry(
        "validate-axioms", "ok" if not failing else "failed",
        "all pass" if not failing else "failing: " + ",".join(failing)))
    if "L6" in failing:
        try:
            st = establish_L6(g, st)
            trail.append(TrailEntry("reroute-linkage", "ok", ""))
        except GraphInputError as exc:
            trail.append(TrailEntry("reroute-linkage", "failed", str(exc)))
    if "L7" in failing or "L8" in failing:
        target = cfg.uniform_target or max(
            3, min(st.decomposition.length, 6))
        try:
            st = uniformize(g, st, target)
            trail.append(TrailEntry("uniformize", "ok",
                                    f"target length {target}"))
        except (GraphInputError, RuntimeError) as exc:
            trail.append(TrailEntry("uniformize", "failed", str(exc)))
    if "L9" not in st.satisfied:
        try:
            st = establish_L9(g, st)
            trail.append(TrailEntry("end-rerouting", "ok",
                                    f"length {st.decomposition.length}"))
        except GraphInputError as exc:
            trail.append(TrailEntry("end-rerouting", "failed", str(exc)))
    rep = validate_linear(g, st)
    st = st.with_flags(k for k, v in rep.items() if v.passed)
    return st


def _length_gate(name: str, length: int, needed: int, cfg: RunConfig,
                 trail: list) -> bool:
    """Record a literal length bound; strict mode refuses when unmet."""
    if length >= needed:
        trail.append(TrailEntry(name, "ok", f"{length} >= {needed}"))
        return True
    if cfg.mode == "strict":
        trail.append(TrailEntry(name, "failed", f"{length} < {needed}"))
        return False
    trail.append(TrailEntry(name, "relaxed", f"{length} < {needed}"))
    return True


def _trivial_neighbor_vertices(aux, members) -> list[int]:
    """Vertices of trivial paths attached (in the auxiliary graph) to the
    given member paths, end members first."""
    nontrivial = set(aux.nontrivial)
    out: list[int] = []
    for pi in members:
        for nb in sorted(aux.neighbors(pi)):
            if nb not in nontrivial:
                v = aux.paths[nb][0]
                if v not in out:
                    out.append(v)
    return out


def _cycle_handler(g: Graph, st: FoundationalState, core: Core,
                   aux, cfg: RunConfig, trail: list) -> Optional[Certificate]:
    """Cylinder assembly: flat middle, then the outside either links the
    two rims (forcing a minor) or is severed by at most one vertex, the
    apex candidate."""
    dec = st.decomposition
    q, l = dec.adhesion, dec.length
    needed = cfg.cycle_min_length or (2 * q + 32)
    if not _length_gate("cycle-length-bound", l, needed, cfg, trail):
        return None
    flat = 0
    for i in range(1, l):
        if check_flat(g, st, core, i) is not None:
            flat += 1
        else:
            trail.append(TrailEntry("flat-middle", "failed", f"bag {i}"))
            return None
    trail.append(TrailEntry("flat-middle", "ok", f"{flat} bags"))
    rims_a = [aux.paths[pi][0] for pi in core.member_paths]
    rims_b = [aux.paths[pi][-1] for pi in core.member_paths]
    interior = {v for pi in core.member_paths
                for v in aux.paths[pi]} - set(rims_a) - set(rims_b)
    outside = Graph.build(g.n, [e for e in g.edges
                                if e[0] not in interior
                                and e[1] not in interior], g.labels)
    link = disjoint_paths(outside, rims_a, rims_b, 2)
    if isinstance(link, Linkage):
        trail.append(TrailEntry(
            "outside-linkage", "ok",
            "two disjoint outside paths close a crossed cylinder"))
        model = find_minor(g, complete_graph(6), cfg.budget)
        if isinstance(model, MinorModel):
            return _k6_certificate(g, model, trail)
        trail.append(TrailEntry("minor-search", "failed",
                                "crossed cylinder not certified"))
        return None
    cut = sorted(link.vertices)
    trail.append(TrailEntry("outside-cut", "ok", f"cut {cut}"))
    return _try_apex(g, cut, "cylinder assembly", trail)


def _path_handler(g: Graph, st: FoundationalState, core: Core,
                  aux, cfg: RunConfig, trail: list) -> Optional[Certificate]:
    """Planar-strip assembly: the apex candidates are the trivial paths
    attached to the ends of the core."""
    dec = st.decomposition
    q, l = dec.adhesion, dec.length
    needed = cfg.path_min_length or max(4 * q + 11, 48)
    if not _length_gate("path-length-bound", l, needed, cfg, trail):
        return None
    flat = 0
    for i in range(1, l):
        if check_flat(g, st, core, i) is not None:
            flat += 1
        else:
            trail.append(TrailEntry("flat-strip", "failed", f"bag {i}"))
            return None
    trail.append(TrailEntry("flat-strip", "ok", f"{flat} bags"))
    members = core.member_paths
    ends = [members[0], members[-1]]
    candidates = _trivial_neighbor_vertices(aux, ends)
    candidates += [v for v in _trivial_neighbor_vertices(aux, members[1:-1])
                   if v not in candidates]
    if not candidates:
        trail.append(TrailEntry("trivial-attachments", "ok",
                                "none attached; strip already planar"))
    else:
        trail.append(TrailEntry("trivial-attachments", "ok",
                                f"candidates {candidates}"))
    return _try_apex(g, candidates, "strip assembly", trail)


def analyze(g: Graph, decomposition: DecompositionInput = None,
            cfg: RunConfig = RunConfig()) -> Certificate:
    """Decide K6-minor versus apex; Inconclusive when neither is provable
    at the configured scale.  Every witness is independently re-verified.

    Raises a precondition error in strict mode when the host is not
    6-connected; demo mode records the violating cut and continues.
    """
    trail: list[TrailEntry] = []
    cut = small_cut(g, 5)
    if cut is not None:
        if cfg.mode == "strict":
            raise GraphInputError(
                f"host is not 6-connected: cut {sorted(cut)}")
        trail.append(TrailEntry("six-connected", "relaxed",
                                f"cut {sorted(cut)} of order {len(cut)}"))
    else:
        trail.append(TrailEntry("six-connected", "ok", ""))

    model = find_minor(g, complete_graph(6), cfg.budget)
    if isinstance(model, MinorModel):
        trail.append(TrailEntry("minor-search", "ok", "model found"))
        return _k6_certificate(g, model, trail)
    if model is None:
        trail.append(TrailEntry("minor-search", "ok", "no model exists"))
    else:
        trail.append(TrailEntry("minor-search", "assumed",
                                "budget exhausted; assuming no model"))

    st = _as_state(g, decomposition, trail)
    if st is not None:
        q = st.decomposition.adhesion
        l1, l2, l3 = compute_thresholds(q)
        needed = cfg.min_input_length or l3
        if not _length_gate("input-length-threshold",
                            st.decomposition.length, needed, cfg, trail):
            return _inconclusive(
                f"input length {st.decomposition.length} below the staged "
                f"threshold {needed} (stages {l1}, {l2}, {l3})", trail)
        st = _refine(g, st, cfg, trail)
        missing = [k for k in LINEAR_AXIOMS if k not in st.satisfied]
        if missing:
            trail.append(TrailEntry("axioms-after-refinement", "failed",
                                    "missing: " + ",".join(missing)))
        else:
            trail.append(TrailEntry("axioms-after-refinement", "ok", ""))
        try:
            dets = threshold_detectors(g, st, cfg.budget)
            fired = sorted(k for k, r in dets.items()
                           if not isinstance(r, Indeterminate)
                           and r.exceeded)
            trail.append(TrailEntry(
                "threshold-detectors", "ok",
                "fired: " + (",".join(fired) if fired else "none")))
        except GraphInputError as exc:
            trail.append(TrailEntry("threshold-detectors", "failed",
                                    str(exc)))
        if not missing:
            aux = build_auxiliary(g, st)
            shapes = cores(aux)
            trail.append(TrailEntry(
                "cores", "ok",
                ",".join(c.shape for c in shapes) or "none"))
            if any(c.shape == "invalid" for c in shapes):
                trail.append(TrailEntry("core-shapes", "failed",
                                        "a core has a degree-3 vertex"))
            else:
                cyc = next((c for c in shapes if c.shape == "cycle"), None)
                pat = next((c for c in shapes if c.shape == "path"
                            and len(c.member_paths) >= 2), None)
                cert = None
                if cyc is not None:
                    cert = _cycle_handler(g, st, cyc, aux, cfg, trail)
                elif pat is not None:
                    cert = _path_handler(g, st, pat, aux, cfg, trail)
                else:
                    trail.append(TrailEntry("core-shapes", "failed",
                                            "no usable core"))
                if cert is not None:
                    return cert
        if cfg.mode == "strict":
            return _inconclusive(
                "decomposition machinery did not certify a verdict", trail)

    v = find_apex_vertex(g)
    if v is not None:
        cert = _apex_certificate(g, v, "direct scan", trail)
        if cert is not None:
            return cert
    trail.append(TrailEntry("apex-scan", "failed", "no apex vertex"))
    return _inconclusive("neither a minor model nor an apex vertex was "
                         "certified at this scale", trail)
