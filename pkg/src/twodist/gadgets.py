"""Construction and verification of the girth-11 gadget graphs.

The 40-vertex base gadget forces its two ports to receive different colors
in every 4-coloring; two copies joined through a 4-clique-at-distance-2 of
the square yield an 82-vertex gadget with the same forcing at port distance
10; adding a 3-chain produces the 84-vertex equalizer whose ports always
agree; an equalizer and a distinguisher in parallel give a 164-vertex
subcubic planar graph of girth 11 with no 4-coloring at all.

Geometry: the base gadget carries explicit plane coordinates and its
rotation is their angular sort.  Compositions place each copy inside a disk
attached along its port edges; copies keep their internal rotations (up to
a global mirror chosen automatically) and the junction vertices carry the
cyclic orders of the assembly drawing, so planarity is always a checked
property of the final rotation system, never an assumption.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .coloring import (
    COLOR_LETTERS,
    SolveOutcome,
    enumerate_colorings,
    solve,
    validate_coloring,
)
from .graphs import (
    Graph,
    GraphError,
    RotationSystem,
    check_planar_embedding,
    distance,
    girth,
    girth_cycles,
)
from .io import GraphDocument, write_dot, write_graph_json, write_graph_text

FORCES_DISTINCT = "forces-distinct"
FORCES_EQUAL = "forces-equal"
UNSAT_RELATION = "unsat"

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class Gadget:
    """A graph with two distinguished ports and a claimed port relation.

    Ports keep degree at most 2 inside a gadget so compositions stay
    subcubic.  `labels` is a bijective name table; `rotation`, when present,
    is a verified plane embedding.
    """

    graph: Graph
    port_u: int
    port_v: int
    labels: tuple[str, ...]
    rotation: RotationSystem | None
    relation: str | None

    def __post_init__(self) -> None:
        if len(set(self.labels)) != self.graph.n:
            raise GraphError("gadget labels must be bijective")

    def vertex(self, label: str) -> int:
        return self.labels.index(label)

    def document(self) -> GraphDocument:
        return GraphDocument(self.graph, self.rotation, None, self.labels)


# ---------------------------------------------------------------------------
# The base distinguisher
# ---------------------------------------------------------------------------

# Plane coordinates of the drawing; chains are laid out on straight segments.
_GNEQ_COORDS: dict[str, tuple[float, float]] = {
    "u": (-1, 0), "v": (17, 0),
    "u1": (0, 0), "u2": (1, 4), "u3": (5, 8), "u4": (11, 8), "u5": (15, 4), "u6": (16, 0),
    "v1": (15, -4), "v2": (12, -7), "v3": (8, -8), "v4": (4, -7), "v5": (1, -4),
    "v7": (8, -6), "v8": (2, -3), "v6": (14, -3),
    "t1": (5.44, 6), "t2": (5.86, 4), "t3": (6.73, 0), "t4": (7.35, -3),
    "w1": (10.56, 6), "w2": (10.14, 4), "w3": (9.27, 0), "w4": (8.65, -3),
    "t'1": (5.33, 3), "t'2": (4.5, 1.5), "t'3": (3.67, 0), "t'4": (2.83, -1.5),
    "t''1": (6, -0.48), "t''2": (5, -1.1), "t''3": (4, -1.74), "t''4": (3, -2.37),
    "w'1": (10.67, 3), "w'2": (11.5, 1.5), "w'3": (12.33, 0), "w'4": (13.17, -1.5),
    "w''1": (10, -0.48), "w''2": (11, -1.1), "w''3": (12, -1.74), "w''4": (13, -2.37),
}


def _chain(*names: str) -> list[tuple[str, str]]:
    return list(zip(names, names[1:]))


_GNEQ_EDGES: list[tuple[str, str]] = (
    _chain("u", "u1", "u2", "u3", "u4", "u5", "u6", "v")
    + _chain("u6", "v1", "v2", "v3", "v4", "v5", "u1")
    + [("v3", "v7")]
    + _chain("u3", "t1", "t2", "t3", "t4", "v7")
    + _chain("u4", "w1", "w2", "w3", "w4", "v7")
    + [("v5", "v8")]
    + _chain("t2", "t'1", "t'2", "t'3", "t'4", "v8")
    + _chain("t3", "t''1", "t''2", "t''3", "t''4", "v8")
    + [("v1", "v6")]
    + _chain("w2", "w'1", "w'2", "w'3", "w'4", "v6")
    + _chain("w3", "w''1", "w''2", "w''3", "w''4", "v6")
)


def build_g_neq() -> Gadget:
    """The 40-vertex distinguisher: ports always receive different colors."""
    labels = tuple(_GNEQ_COORDS)
    index = {lab: i for i, lab in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in _GNEQ_EDGES]
    g = Graph.from_edges(len(labels), edges)
    rows = []
    for lab in labels:
        x, y = _GNEQ_COORDS[lab]
        nbrs = sorted(
            g.adj[index[lab]],
            key=lambda u: math.atan2(
                _GNEQ_COORDS[labels[u]][1] - y, _GNEQ_COORDS[labels[u]][0] - x
            ),
        )
        rows.append(tuple(nbrs))
    rot = RotationSystem(tuple(rows))
    return Gadget(g, index["u"], index["v"], labels, rot, FORCES_DISTINCT)


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Part:
    prefix: str
    gadget: Gadget
    u_to: str  # junction name the part's port u is identified with
    v_to: str


def _compose(
    parts: Sequence[_Part],
    junction_names: Sequence[str],
    extra_edges: Sequence[tuple[str, str]],
    junction_rot: Mapping[str, Sequence[str]],
    port_u: str,
    port_v: str,
    relation: str,
) -> Gadget:
    """Glue gadget copies at junction vertices and search the copy mirrorings
    for a rotation passing the Euler check.

    Copies keep their internal cyclic orders (reversed when mirrored);
    junction vertices use the assembly drawing's orders.  Raises when no
    mirroring combination embeds in the plane, which would mean the assembly
    data itself is wrong.
    """
    names: list[str] = list(junction_names)
    name_of: list[dict[int, str]] = []
    for part in parts:
        mapping: dict[int, str] = {}
        for vid in range(part.gadget.graph.n):
            if vid == part.gadget.port_u:
                mapping[vid] = part.u_to
            elif vid == part.gadget.port_v:
                mapping[vid] = part.v_to
            else:
                mapping[vid] = f"{part.prefix}.{part.gadget.labels[vid]}"
                names.append(mapping[vid])
        name_of.append(mapping)
    index = {name: i for i, name in enumerate(names)}
    edges: list[tuple[int, int]] = [(index[a], index[b]) for a, b in extra_edges]
    for part, mapping in zip(parts, name_of):
        for a, b in part.gadget.graph.edges():
            edges.append((index[mapping[a]], index[mapping[b]]))
    g = Graph.from_edges(len(names), edges)

    junction_rows = {}
    for name, order in junction_rot.items():
        junction_rows[index[name]] = tuple(index[x] for x in order)
    for v, row in junction_rows.items():
        if sorted(row) != list(g.adj[v]):
            raise GraphError(f"assembly rotation at {names[v]} does not match its edges")

    for flips in itertools.product((False, True), repeat=len(parts)):
        rows: list[tuple[int, ...]] = [()] * g.n
        for v, row in junction_rows.items():
            rows[v] = row
        for part, mapping, flip in zip(parts, name_of, flips):
            assert part.gadget.rotation is not None
            for vid, row in enumerate(part.gadget.rotation.rot):
                if vid in (part.gadget.port_u, part.gadget.port_v):
                    continue
                mapped = tuple(index[mapping[x]] for x in row)
                rows[index[mapping[vid]]] = mapped[::-1] if flip else mapped
        rot = RotationSystem(tuple(rows))
        if check_planar_embedding(g, rot):
            return Gadget(g, index[port_u], index[port_v], tuple(names), rot, relation)
    raise GraphError("no mirroring of the copies yields a plane embedding")


def build_g_neq_prime() -> Gadget:
    """The 82-vertex distinguisher with port distance 10."""
    base = build_g_neq()
    parts = [
        _Part("A", base, "u", "w3"),
        _Part("B", base, "u", "w4"),
    ]
    return _compose(
        parts,
        ["u", "w1", "w2", "w3", "w4", "v"],
        [("w3", "w2"), ("w4", "w2"), ("w2", "w1"), ("w1", "v")],
        {
            "u": ["A.u1", "B.u1"],
            "w3": ["A.u6", "w2"],
            "w4": ["B.u6", "w2"],
            "w2": ["w1", "w3", "w4"],
            "w1": ["v", "w2"],
            "v": ["w1"],
        },
        "u",
        "v",
        FORCES_DISTINCT,
    )


def build_g_eq() -> Gadget:
    """The 84-vertex equalizer: ports always receive the same color."""
    base = build_g_neq()
    parts = [
        _Part("A", base, "t2", "w3"),
        _Part("B", base, "t2", "w4"),
    ]
    return _compose(
        parts,
        ["u", "t1", "t2", "w1", "w2", "w3", "w4", "v"],
        [
            ("u", "t1"),
            ("t1", "t2"),
            ("t1", "w1"),
            ("w3", "w2"),
            ("w4", "w2"),
            ("w2", "w1"),
            ("w1", "v"),
        ],
        {
            "u": ["t1"],
            "t1": ["w1", "t2", "u"],
            "t2": ["B.u1", "A.u1", "t1"],
            "w3": ["A.u6", "w2"],
            "w4": ["B.u6", "w2"],
            "w2": ["w1", "w3", "w4"],
            "w1": ["t1", "v", "w2"],
            "v": ["w1"],
        },
        "u",
        "v",
        FORCES_EQUAL,
    )


def build_counterexample() -> Gadget:
    """Distinguisher and equalizer in parallel: 164 vertices, no 4-coloring."""
    prime = build_g_neq_prime()
    eq = build_g_eq()
    parts = [
        _Part("P", prime, "u", "v"),
        _Part("E", eq, "u", "v"),
    ]
    return _compose(
        parts,
        ["u", "v"],
        [],
        {
            "u": ["P.A.u1", "P.B.u1", "E.t1"],
            "v": ["P.w1", "E.w1"],
        },
        "u",
        "v",
        UNSAT_RELATION,
    )


BUILDERS: dict[str, Callable[[], Gadget]] = {
    "g-neq": build_g_neq,
    "g-neq-prime": build_g_neq_prime,
    "g-eq": build_g_eq,
    "counterexample": build_counterexample,
}

GADGET_EXPECTATIONS: dict[str, dict] = {
    "g-neq": {
        "vertices": 40,
        "edges": 46,
        "max_degree": 3,
        "girth": 11,
        "port_distance": 7,
        "planar": True,
        "relation": FORCES_DISTINCT,
    },
    "g-neq-prime": {
        "vertices": 82,
        "max_degree": 3,
        "girth": 11,
        "port_distance": 10,
        "planar": True,
        "relation": FORCES_DISTINCT,
    },
    "g-eq": {
        "vertices": 84,
        "max_degree": 3,
        "girth": 11,
        "port_distance": 3,
        "planar": True,
        "relation": FORCES_EQUAL,
    },
    "counterexample": {
        "vertices": 164,
        "max_degree": 3,
        "girth": 11,
        "planar": True,
        "relation": UNSAT_RELATION,
    },
}


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricsReport:
    measured: dict
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_metrics(gadget: Gadget, expect: Mapping | None = None) -> MetricsReport:
    """Recompute degree bound, girth, port distance, and planarity.

    Failed expectations are reported by property name.
    """
    g = gadget.graph
    measured: dict = {
        "vertices": g.n,
        "edges": g.m,
        "max_degree": g.max_degree(),
        "girth": girth(g),
        "port_distance": distance(g, gadget.port_u, gadget.port_v),
        "planar": (
            check_planar_embedding(g, gadget.rotation)
            if gadget.rotation is not None
            else None
        ),
        "relation": gadget.relation,
    }
    failures = []
    if expect:
        for key, want in expect.items():
            if measured.get(key) != want:
                failures.append(key)
    return MetricsReport(measured, tuple(failures))


@dataclass(frozen=True)
class Probe:
    description: str
    status: str
    nodes: int


@dataclass(frozen=True)
class PortRelationVerdict:
    relation: str
    verified: bool
    aborted: bool
    probes: tuple[Probe, ...]
    witness: tuple[int, ...] | None = None


def verify_relation(
    gadget: Gadget, budget: int = DEFAULT_BUDGET, color: int = 0
) -> PortRelationVerdict:
    """Check the claimed port relation by exact search.

    forces-distinct: equal port colors are unsatisfiable (one fixed color
    suffices by palette symmetry) while one fixed port alone is satisfiable.
    forces-equal: different port colors are unsatisfiable and equal ones
    admit an explicit validated witness.  unsat: the full instance has no
    coloring at all.  A budget overrun is reported, never passed off.
    """
    g, u, v = gadget.graph, gadget.port_u, gadget.port_v
    other = (color + 1) % 4
    probes: list[Probe] = []
    witness = None

    def run(desc: str, fixed: dict[int, int] | None, want_sat: bool) -> bool | None:
        res = solve(g, fixed=fixed, budget=budget)
        probes.append(Probe(desc, res.status, res.nodes))
        if res.is_aborted:
            return None
        if res.is_sat and not validate_coloring(g, None, res.witness):
            raise GraphError(f"witness failed independent re-validation in {desc}")
        if res.is_sat and want_sat:
            nonlocal witness
            witness = res.witness
        return res.is_sat == want_sat

    if gadget.relation == FORCES_DISTINCT:
        checks = [
            run(f"ports both {COLOR_LETTERS[color]}", {u: color, v: color}, False),
            run(f"port u {COLOR_LETTERS[color]} alone", {u: color}, True),
        ]
    elif gadget.relation == FORCES_EQUAL:
        checks = [
            run(
                f"ports {COLOR_LETTERS[color]}/{COLOR_LETTERS[other]}",
                {u: color, v: other},
                False,
            ),
            run(f"ports both {COLOR_LETTERS[color]}", {u: color, v: color}, True),
        ]
    elif gadget.relation == UNSAT_RELATION:
        checks = [run("full 4-lists", None, False)]
    else:
        raise GraphError(f"gadget claims no checkable relation: {gadget.relation!r}")

    aborted = any(c is None for c in checks)
    verified = all(c is True for c in checks)
    return PortRelationVerdict(
        gadget.relation, verified, aborted, tuple(probes), witness
    )


def compositional_unsat(
    distinct: PortRelationVerdict, equal: PortRelationVerdict
) -> bool:
    """Parallel composition of a verified distinguisher and equalizer shares
    both ports, so any coloring would need the port colors both different
    and equal; the conjunction of the two verdicts refutes it."""
    return (
        distinct.relation == FORCES_DISTINCT
        and distinct.verified
        and equal.relation == FORCES_EQUAL
        and equal.verified
    )


def expected_girth_cycle_edges(gadget: Gadget) -> bool:
    """Every shortest cycle uses only edges of the construction tables.

    Guards the hand-entered chain lists: a transcription slip that shortens
    a chain shows up as a rogue short cycle.
    """
    edge_set = set(gadget.graph.edges())
    for cyc in girth_cycles(gadget.graph):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if (min(a, b), max(a, b)) not in edge_set:
                return False
    return True


# ---------------------------------------------------------------------------
# The two coloring lemmas behind the distinguisher
# ---------------------------------------------------------------------------


def verify_path_lemma() -> tuple[bool, int]:
    """On a 5-edge path, equal end colors force equal second/fifth colors.

    Checked over the complete enumeration of valid colorings of the path's
    square.  Returns (holds, colorings_checked).
    """
    from . import catalog

    g = catalog.path(6)
    colorings, truncated = enumerate_colorings(g)
    assert not truncated
    ok = all(c[1] == c[4] for c in colorings if c[0] == c[5])
    return ok, len(colorings)


def path_lemma_blocked_pattern() -> bool:
    """The non-completable pattern (a,b,d,.,c,a) really has no completion."""
    from . import catalog

    g = catalog.path(6)
    res = solve(g, fixed={0: 0, 1: 1, 2: 3, 4: 2, 5: 0}, break_palette_symmetry=False)
    return res.is_unsat


def triangle_lemma_graph() -> tuple[Graph, dict[str, int]]:
    """Path u1..u6 plus two 5-edge paths from u3 and u4 meeting at v1, and a
    pendant v0 on v1; 16 vertices."""
    names = (
        ["u1", "u2", "u3", "u4", "u5", "u6"]
        + ["x1", "x2", "x3", "x4"]
        + ["y1", "y2", "y3", "y4"]
        + ["v1", "v0"]
    )
    idx = {n: i for i, n in enumerate(names)}
    edges = _chain("u1", "u2", "u3", "u4", "u5", "u6")
    edges += _chain("u3", "x1", "x2", "x3", "x4", "v1")
    edges += _chain("u4", "y1", "y2", "y3", "y4", "v1")
    edges += [("v0", "v1")]
    g = Graph.from_edges(16, [(idx[a], idx[b]) for a, b in edges])
    return g, idx


def verify_triangle_lemma(drop_anchor: bool = False) -> tuple[bool, int]:
    """With u1, u6, v0 pinned to one color, every valid coloring gives u2,
    u5, v1 a common color.

    Complete enumeration with the three anchors fixed; `drop_anchor` leaves
    v0 free, under which the conclusion is expected to fail (the anchor is
    load-bearing).  Returns (holds, colorings_checked).
    """
    g, idx = triangle_lemma_graph()
    fixed = {idx["u1"]: 0, idx["u6"]: 0}
    if not drop_anchor:
        fixed[idx["v0"]] = 0
    colorings, truncated = enumerate_colorings(g, fixed=fixed)
    assert not truncated
    u2, u5, v1 = idx["u2"], idx["u5"], idx["v1"]
    ok = all(c[u2] == c[u5] == c[v1] for c in colorings)
    return ok, len(colorings)


def triangle_lemma_blocked_pattern() -> bool:
    """With the anchors fixed, no coloring puts the meeting vertex on the
    same color as u3."""
    g, idx = triangle_lemma_graph()
    res = solve(
        g,
        fixed={idx["u1"]: 0, idx["u6"]: 0, idx["v0"]: 0, idx["u3"]: 2, idx["v1"]: 2},
        break_palette_symmetry=False,
    )
    return res.is_unsat


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def export(gadget: Gadget, fmt: str) -> str:
    """Serialize a gadget; text and JSON round-trip, DOT is write-only."""
    doc = gadget.document()
    if fmt == "text":
        return write_graph_text(doc)
    if fmt == "json":
        return write_graph_json(doc)
    if fmt == "dot":
        return write_dot(doc)
    raise GraphError(f"unknown export format {fmt!r}")
