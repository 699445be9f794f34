"""Text, JSON, and DOT serialization of graphs.

Text format: first non-comment line "n m", then m lines "u v" with 0-based
ids and u < v; optional section "rotations" with one line per vertex listing
its neighbors in cyclic order; optional section "lists" with one line per
vertex giving a subset of "abcd"; '#' starts a comment anywhere.  The JSON
form mirrors the same data plus a label table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .coloring import letters_from_mask, mask_from_letters
from .graphs import Graph, GraphError, RotationSystem


@dataclass(frozen=True)
class GraphDocument:
    graph: Graph
    rotation: RotationSystem | None = None
    lists: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None


def parse_graph_text(text: str) -> GraphDocument:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty graph file")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphError(f"expected 'n m' header, got {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    if len(lines) < 1 + m:
        raise GraphError(f"expected {m} edge lines")
    edges = []
    for line in lines[1 : 1 + m]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise GraphError(f"edge {u} {v} must have u < v")
        edges.append((u, v))
    g = Graph.from_edges(n, edges)
    rot = None
    lists = None
    i = 1 + m
    while i < len(lines):
        section = lines[i]
        if section == "rotations":
            rows = [tuple(int(x) for x in lines[i + 1 + v].split()) for v in range(n)]
            rot = RotationSystem(tuple(rows))
            rot.validate(g)
            i += 1 + n
        elif section == "lists":
            lists = tuple(mask_from_letters(lines[i + 1 + v]) for v in range(n))
            i += 1 + n
        else:
            raise GraphError(f"unknown section {section!r}")
    return GraphDocument(g, rot, lists)


def write_graph_text(doc: GraphDocument) -> str:
    g = doc.graph
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    if doc.rotation is not None:
        out.append("rotations")
        out.extend(" ".join(str(x) for x in row) for row in doc.rotation.rot)
    if doc.lists is not None:
        out.append("lists")
        out.extend(letters_from_mask(m) for m in doc.lists)
    return "\n".join(out) + "\n"


def to_json_dict(doc: GraphDocument) -> dict:
    g = doc.graph
    payload: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    if doc.rotation is not None:
        payload["rotations"] = [list(row) for row in doc.rotation.rot]
    if doc.lists is not None:
        payload["lists"] = [letters_from_mask(m) for m in doc.lists]
    if doc.labels is not None:
        payload["labels"] = {str(v): lab for v, lab in enumerate(doc.labels)}
    return payload


def write_graph_json(doc: GraphDocument) -> str:
    return json.dumps(to_json_dict(doc), indent=1, sort_keys=True) + "\n"


def parse_graph_json(text: str) -> GraphDocument:
    data = json.loads(text)
    g = Graph.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])
    rot = None
    if data.get("rotations") is not None:
        rot = RotationSystem(tuple(tuple(row) for row in data["rotations"]))
        rot.validate(g)
    lists = None
    if data.get("lists") is not None:
        lists = tuple(mask_from_letters(s) for s in data["lists"])
    labels = None
    if data.get("labels") is not None:
        table = data["labels"]
        labels = tuple(table[str(v)] for v in range(g.n))
    return GraphDocument(g, rot, lists, labels)


def write_dot(doc: GraphDocument, name: str = "G") -> str:
    """Write-only DOT rendering; labels become node labels when present."""
    lines = [f"graph {name} {{"]
    for v in range(doc.graph.n):
        if doc.labels is not None:
            lines.append(f'  {v} [label="{doc.labels[v]}"];')
        else:
            lines.append(f"  {v};")
    for u, v in doc.graph.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_graph_file(path: str) -> GraphDocument:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return parse_graph_json(text)
    return parse_graph_text(text)
