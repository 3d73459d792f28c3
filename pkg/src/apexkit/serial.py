"""Structured-text serialization for graphs, decompositions, and
certificates.

Every value is a JSON document carrying a "type" tag; field order is
stable so fixtures diff cleanly.  Deserialization validates shapes and
reports the location of the first malformed field.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .decomp import FoundationalState, LinearDecomposition, TreeDecomposition
from .embed import PlaneEmbedding
from .graph import Graph, Linkage
from .minors import MinorModel, SubdivisionModel


class ParseError(ValueError):
    """Malformed serialized input; `location` names the offending field."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


# -- object -> plain dict --------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    doc: dict[str, Any] = {
        "type": "graph",
        "n": g.n,
        "edges": [[u, v] for (u, v) in g.edges],
    }
    labels = {str(i): lab for i, lab in enumerate(g.labels)
              if lab != str(i)}
    if labels:
        doc["labels"] = labels
    return doc


def linkage_to_json(p: Linkage) -> dict:
    return {"type": "linkage", "paths": [list(pth) for pth in p.paths]}


def linear_to_json(dec: LinearDecomposition) -> dict:
    return {
        "type": "linear-decomposition",
        "bags": [sorted(b) for b in dec.bags],
        "adhesion": dec.adhesion,
    }


def tree_to_json(t: TreeDecomposition) -> dict:
    return {
        "type": "tree-decomposition",
        "tree_edges": [[u, v] for (u, v) in t.tree.edges],
        "bags": [sorted(b) for b in t.bags],
    }


def state_to_json(st: FoundationalState) -> dict:
    return {
        "type": "foundational-state",
        "bags": [sorted(b) for b in st.decomposition.bags],
        "adhesion": st.decomposition.adhesion,
        "linkage": [list(pth) for pth in st.linkage.paths],
        "satisfied": sorted(st.satisfied),
        "p": st.p,
    }


def minor_model_to_json(m: MinorModel) -> dict:
    return {
        "type": "minor-model",
        "branch_sets": [sorted(b) for b in m.branch_sets],
        "witness_edges": [[list(pe), list(he)]
                          for (pe, he) in m.witness_edges],
    }


def subdivision_to_json(m: SubdivisionModel) -> dict:
    return {
        "type": "subdivision-model",
        "branch_vertices": list(m.branch_vertices),
        "edge_paths": [[list(pe), list(pth)] for (pe, pth) in m.edge_paths],
    }


def embedding_to_json(emb: PlaneEmbedding) -> dict:
    return {
        "type": "plane-embedding",
        "rotation": [list(rot) for rot in emb.rotation],
        "outer_face": emb.outer_face,
    }


def certificate_to_json(cert) -> dict:
    doc: dict[str, Any] = {
        "type": "certificate",
        "verdict": cert.verdict,
        "trail": [{"step": e.step, "status": e.status, "detail": e.detail}
                  for e in cert.trail],
    }
    if cert.minor_model is not None:
        doc["minor_model"] = minor_model_to_json(cert.minor_model)
    if cert.apex_vertex is not None:
        doc["apex_vertex"] = cert.apex_vertex
    if cert.embedding is not None:
        doc["embedding"] = embedding_to_json(cert.embedding)
    if cert.reason:
        doc["reason"] = cert.reason
    return doc


def to_json(obj) -> dict:
    from .certify import Certificate
    if isinstance(obj, Graph):
        return graph_to_json(obj)
    if isinstance(obj, Linkage):
        return linkage_to_json(obj)
    if isinstance(obj, LinearDecomposition):
        return linear_to_json(obj)
    if isinstance(obj, TreeDecomposition):
        return tree_to_json(obj)
    if isinstance(obj, FoundationalState):
        return state_to_json(obj)
    if isinstance(obj, MinorModel):
        return minor_model_to_json(obj)
    if isinstance(obj, SubdivisionModel):
        return subdivision_to_json(obj)
    if isinstance(obj, PlaneEmbedding):
        return embedding_to_json(obj)
    if isinstance(obj, Certificate):
        return certificate_to_json(obj)
    raise ParseError(f"cannot serialize {type(obj).__name__}")


def serialize(obj) -> bytes:
    return (json.dumps(to_json(obj), indent=2, sort_keys=False)
            + "\n").encode()


# -- plain dict -> object --------------------------------------------------

def _need(doc: dict, key: str, loc: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing field {key!r}", loc)
    return doc[key]


def _int(value, loc: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError("expected an integer", loc)
    return value


def _int_list(value, loc: str) -> list[int]:
    if not isinstance(value, list):
        raise ParseError("expected a list", loc)
    return [_int(v, f"{loc}[{i}]") for i, v in enumerate(value)]


def _pair(value, loc: str) -> tuple[int, int]:
    out = _int_list(value, loc)
    if len(out) != 2:
        raise ParseError("expected a pair", loc)
    return (out[0], out[1])


def graph_from_json(doc: dict, loc: str = "$") -> Graph:
    n = _int(_need(doc, "n", loc), f"{loc}.n")
    raw = _need(doc, "edges", loc)
    if not isinstance(raw, list):
        raise ParseError("expected a list", f"{loc}.edges")
    edges = [_pair(e, f"{loc}.edges[{i}]") for i, e in enumerate(raw)]
    labels = None
    if "labels" in doc:
        lab = doc["labels"]
        if not isinstance(lab, dict):
            raise ParseError("expected an object", f"{loc}.labels")
        labels = [str(i) for i in range(n)]
        for key, val in lab.items():
            try:
                idx = int(key)
            except ValueError:
                raise ParseError(f"bad vertex key {key!r}", f"{loc}.labels")
            if not 0 <= idx < n:
                raise ParseError(f"vertex {idx} out of range", f"{loc}.labels")
            labels[idx] = str(val)
    try:
        return Graph.build(n, edges, labels)
    except Exception as exc:
        raise ParseError(str(exc), loc)


def linkage_from_json(doc: dict, loc: str = "$") -> Linkage:
    raw = _need(doc, "paths", loc)
    if not isinstance(raw, list):
        raise ParseError("expected a list", f"{loc}.paths")
    return Linkage(tuple(tuple(_int_list(p, f"{loc}.paths[{i}]"))
                         for i, p in enumerate(raw)))


def linear_from_json(doc: dict, loc: str = "$") -> LinearDecomposition:
    raw = _need(doc, "bags", loc)
    if not isinstance(raw, list):
        raise ParseError("expected a list", f"{loc}.bags")
    bags = [_int_list(b, f"{loc}.bags[{i}]") for i, b in enumerate(raw)]
    adhesion = (_int(doc["adhesion"], f"{loc}.adhesion")
                if "adhesion" in doc else None)
    try:
        return LinearDecomposition.build(bags, adhesion)
    except Exception as exc:
        raise ParseError(str(exc), loc)


def tree_from_json(doc: dict, loc: str = "$") -> TreeDecomposition:
    raw = _need(doc, "tree_edges", loc)
    if not isinstance(raw, list):
        raise ParseError("expected a list", f"{loc}.tree_edges")
    edges = [_pair(e, f"{loc}.tree_edges[{i}]") for i, e in enumerate(raw)]
    bags_raw = _need(doc, "bags", loc)
    if not isinstance(bags_raw, list):
        raise ParseError("expected a list", f"{loc}.bags")
    bags = [_int_list(b, f"{loc}.bags[{i}]")
            for i, b in enumerate(bags_raw)]
    try:
        return TreeDecomposition.build(Graph.build(len(bags), edges), bags)
    except Exception as exc:
        raise ParseError(str(exc), loc)


def state_from_json(doc: dict, loc: str = "$") -> FoundationalState:
    dec = linear_from_json(doc, loc)
    linkage = Linkage(tuple(
        tuple(_int_list(p, f"{loc}.linkage[{i}]"))
        for i, p in enumerate(_need(doc, "linkage", loc))))
    satisfied = frozenset(doc.get("satisfied", ()))
    p = _int(doc.get("p", 6), f"{loc}.p")
    return FoundationalState(dec, linkage, satisfied, p)


def minor_model_from_json(doc: dict, loc: str = "$") -> MinorModel:
    raw = _need(doc, "branch_sets", loc)
    branch = tuple(frozenset(_int_list(b, f"{loc}.branch_sets[{i}]"))
                   for i, b in enumerate(raw))
    raww = _need(doc, "witness_edges", loc)
    if not isinstance(raww, list):
        raise ParseError("expected a list", f"{loc}.witness_edges")
    wit = []
    for i, item in enumerate(raww):
        where = f"{loc}.witness_edges[{i}]"
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("expected [pattern edge, host edge]", where)
        wit.append((_pair(item[0], where), _pair(item[1], where)))
    return MinorModel(branch, tuple(wit))


def subdivision_from_json(doc: dict, loc: str = "$") -> SubdivisionModel:
    branch = tuple(_int_list(_need(doc, "branch_vertices", loc),
                             f"{loc}.branch_vertices"))
    raw = _need(doc, "edge_paths", loc)
    paths = []
    for i, item in enumerate(raw):
        where = f"{loc}.edge_paths[{i}]"
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("expected [pattern edge, path]", where)
        paths.append((_pair(item[0], where),
                      tuple(_int_list(item[1], where))))
    return SubdivisionModel(branch, tuple(paths))


def embedding_from_json(doc: dict, loc: str = "$") -> PlaneEmbedding:
    raw = _need(doc, "rotation", loc)
    if not isinstance(raw, list):
        raise ParseError("expected a list", f"{loc}.rotation")
    rot = tuple(tuple(_int_list(r, f"{loc}.rotation[{i}]"))
                for i, r in enumerate(raw))
    return PlaneEmbedding(rot, _int(doc.get("outer_face", 0),
                                    f"{loc}.outer_face"))


def certificate_from_json(doc: dict, loc: str = "$"):
    from .certify import Certificate, TrailEntry
    verdict = _need(doc, "verdict", loc)
    if verdict not in ("k6-minor", "apex", "inconclusive"):
        raise ParseError(f"unknown verdict {verdict!r}", f"{loc}.verdict")
    trail = []
    for i, e in enumerate(doc.get("trail", [])):
        where = f"{loc}.trail[{i}]"
        trail.append(TrailEntry(str(_need(e, "step", where)),
                                str(_need(e, "status", where)),
                                str(e.get("detail", ""))))
    return Certificate(
        verdict=verdict,
        trail=tuple(trail),
        minor_model=(minor_model_from_json(doc["minor_model"],
                                           f"{loc}.minor_model")
                     if "minor_model" in doc else None),
        apex_vertex=(_int(doc["apex_vertex"], f"{loc}.apex_vertex")
                     if "apex_vertex" in doc else None),
        embedding=(embedding_from_json(doc["embedding"], f"{loc}.embedding")
                   if "embedding" in doc else None),
        reason=str(doc.get("reason", "")),
    )


_READERS = {
    "graph": graph_from_json,
    "linkage": linkage_from_json,
    "linear-decomposition": linear_from_json,
    "tree-decomposition": tree_from_json,
    "foundational-state": state_from_json,
    "minor-model": minor_model_from_json,
    "subdivision-model": subdivision_from_json,
    "plane-embedding": embedding_from_json,
    "certificate": certificate_from_json,
}


def from_json(doc: dict, loc: str = "$"):
    kind = _need(doc, "type", loc)
    reader = _READERS.get(kind)
    if reader is None:
        raise ParseError(f"unknown type {kind!r}", f"{loc}.type")
    return reader(doc, loc)


def deserialize(data: bytes):
    try:
        doc = json.loads(data.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid structured text: {exc}")
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    return from_json(doc)


# -- dot export ------------------------------------------------------------

def to_dot(g: Graph, name: str = "G") -> str:
    """Graphviz rendering of a graph, labeled vertices included."""
    lines = [f"graph {json.dumps(name)} {{"]
    for v in range(g.n):
        if g.labels[v] != str(v):
            lines.append(f'  {v} [label={json.dumps(g.labels[v])}];')
    for (u, v) in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
