"""JSON serialization of idags.

Schema:

    {"mode": "bool" | "nat" | "int",
     "inputs": N, "outputs": M,
     "nodes": [{"id": "...", "label": "..."}, ...],
     "edges": [{"src": {"in": i} | {"node": id},
                "dst": {"out": j} | {"node": id},
                "w": k}, ...]}

"label" is omitted when it is the default "•" and "w" is omitted when it is 1.
Serialization is deterministic: nodes in sequence order, edges sorted (inputs
first, then nodes by sequence position, then outputs), compact separators.
Canonical forms therefore serialize byte-identically iff equal.
"""

from __future__ import annotations

import json
from typing import Any

from .core import DEFAULT_LABEL, Idag, In, NodeRef, Out, Vertex, edge_sort_key, make_idag
from .errors import SchemaError
from .weights import BY_NAME


def idag_to_obj(d: Idag) -> dict[str, Any]:
    nodes = []
    for nid, lbl in d.nodes:
        entry: dict[str, Any] = {"id": nid}
        if lbl != DEFAULT_LABEL:
            entry["label"] = lbl
        nodes.append(entry)

    def vert(v: Vertex) -> dict[str, Any]:
        if isinstance(v, In):
            return {"in": v.index}
        if isinstance(v, Out):
            return {"out": v.index}
        return {"node": v.id}

    edges = []
    for src, dst in sorted(d.edges, key=edge_sort_key(d)):
        entry = {"src": vert(src), "dst": vert(dst)}
        w = d.edges[(src, dst)]
        if w != 1:
            entry["w"] = w
        edges.append(entry)
    return {
        "mode": d.weights.name,
        "inputs": d.n_in,
        "outputs": d.n_out,
        "nodes": nodes,
        "edges": edges,
    }


def idag_to_json(d: Idag) -> str:
    return json.dumps(idag_to_obj(d), separators=(",", ":"), ensure_ascii=False)


def _vertex_from_obj(obj: Any, side: str) -> Vertex:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError(f"bad {side} endpoint {obj!r}")
    (kind, val), = obj.items()
    if kind == "in" and side == "src":
        if not isinstance(val, int):
            raise SchemaError(f"input index must be an integer, got {val!r}")
        return In(val)
    if kind == "out" and side == "dst":
        if not isinstance(val, int):
            raise SchemaError(f"output index must be an integer, got {val!r}")
        return Out(val)
    if kind == "node":
        if not isinstance(val, str):
            raise SchemaError(f"node reference must be a string, got {val!r}")
        return NodeRef(val)
    raise SchemaError(f"bad {side} endpoint kind {kind!r}")


def idag_from_obj(obj: Any) -> Idag:
    if not isinstance(obj, dict):
        raise SchemaError("idag document must be a JSON object")
    fields = {"mode", "inputs", "outputs", "nodes", "edges"}
    missing = fields - set(obj)
    if missing:
        raise SchemaError(f"missing fields {sorted(missing)}")
    extra = set(obj) - fields
    if extra:
        raise SchemaError(f"unknown fields {sorted(extra)}")
    mode_name = obj["mode"]
    if mode_name not in BY_NAME:
        raise SchemaError(f"unknown mode {mode_name!r}")
    mode = BY_NAME[mode_name]
    if not isinstance(obj["inputs"], int) or not isinstance(obj["outputs"], int):
        raise SchemaError("inputs/outputs must be integers")
    if not isinstance(obj["nodes"], list) or not isinstance(obj["edges"], list):
        raise SchemaError("nodes and edges must be arrays")

    nodes: list[tuple[str, str]] = []
    for entry in obj["nodes"]:
        if not isinstance(entry, dict) or "id" not in entry:
            raise SchemaError(f"bad node entry {entry!r}")
        nid = entry["id"]
        lbl = entry.get("label", DEFAULT_LABEL)
        if not isinstance(nid, str) or not isinstance(lbl, str):
            raise SchemaError(f"bad node entry {entry!r}")
        extra = set(entry) - {"id", "label"}
        if extra:
            raise SchemaError(f"unknown node fields {sorted(extra)}")
        nodes.append((nid, lbl))

    edges: list[tuple[Vertex, Vertex, int]] = []
    for entry in obj["edges"]:
        if not isinstance(entry, dict) or "src" not in entry or "dst" not in entry:
            raise SchemaError(f"bad edge entry {entry!r}")
        extra = set(entry) - {"src", "dst", "w"}
        if extra:
            raise SchemaError(f"unknown edge fields {sorted(extra)}")
        w = entry.get("w", 1)
        if not isinstance(w, int) or isinstance(w, bool):
            raise SchemaError(f"edge weight must be an integer, got {w!r}")
        edges.append(
            (_vertex_from_obj(entry["src"], "src"), _vertex_from_obj(entry["dst"], "dst"), w)
        )
    return make_idag(obj["inputs"], obj["outputs"], nodes, edges, mode)


def idag_from_json(text: str) -> Idag:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return idag_from_obj(obj)
