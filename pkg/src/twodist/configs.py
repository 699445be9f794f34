"""Reducibility engine for path/pair/triple configurations.

A configuration describes degree-3 vertices by the lengths of the chains of
degree-2 vertices hanging off them, in the (k,l,m) notation: a coordinate
with a "+" mark is a lower bound.  Shared coordinates between adjacent
configuration vertices are always exact.  The engine expands the bounded
coordinates (chains longer than 5 are excluded separately by the "path 6"
configuration, whose interior list sizes only grow with the chain, so the
minimal case is the binding one), builds for each concrete shape a tree
fragment with exterior stubs, derives the worst-case color-list size of
every interior vertex from the number of exterior vertices within distance
two, and then verifies that every list assignment at exactly those sizes
extends to a valid coloring of the fragment's square.

The adversary model: the host graph outside the fragment is colored first,
and an interior vertex keeps the palette minus the colors of the exterior
vertices it sees (distance at most two).  The engine therefore enumerates
colorings of the relevant exterior vertices, subject only to exteriors
within distance two of each other being distinct (true in any host, where
distances can only be shorter than in the fragment), and checks the induced
interior lists.  This captures the correlations between lists sharing an
exterior neighbor; satisfiability is monotone in the lists, so hosts that
constrain the interior less are covered automatically.

Within one fragment the engine maintains a pool of valid interior colorings
(closed under palette permutations); an exterior coloring is verified the
moment some pooled coloring avoids every induced clash.  The search for an
exterior coloring compatible with no pooled coloring memoizes on the
surviving pool subset and the constraining frontier, so covered regions are
never revisited.  Each uncovered case goes to the exact solver: a
satisfiable answer grows the pool, an unsatisfiable one is a counterexample
certificate (re-checked independently).  The result is an exhaustive verdict
with a small number of solver calls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .coloring import FULL_MASK, SAT, search_masks, solve
from .graphs import Graph, bfs_distances, is_connected, square
from . import catalog

MAX_CHAIN = 5  # chains of 6 or more 2-vertices are excluded by "path 6"


class PatternError(ValueError):
    """Malformed configuration pattern or DSL text."""


@dataclass(frozen=True)
class Branch:
    length: int
    at_least: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.length <= MAX_CHAIN:
            raise PatternError(f"chain length {self.length} out of range 0..{MAX_CHAIN}")

    def __str__(self) -> str:
        return f"{self.length}+" if self.at_least else str(self.length)


def _parse_branch(tok: str) -> Branch:
    if tok.endswith("+"):
        return Branch(int(tok[:-1]), True)
    return Branch(int(tok))


@dataclass(frozen=True)
class ConfigPattern:
    """A single, path, pair, or triple configuration.

    `outer` holds the bounded coordinates per configuration vertex, `shared`
    the exact chain lengths joining consecutive configuration vertices.
    For kind "path" only `path_length` is meaningful.
    """

    kind: str
    outer: tuple[tuple[Branch, ...], ...] = ()
    shared: tuple[int, ...] = ()
    path_length: int = 0

    def __post_init__(self) -> None:
        if self.kind == "single":
            if len(self.outer) != 1 or len(self.outer[0]) != 3 or self.shared:
                raise PatternError("single takes exactly three coordinates")
        elif self.kind == "pair":
            if len(self.outer) != 2 or any(len(o) != 2 for o in self.outer) or len(self.shared) != 1:
                raise PatternError("pair takes 2+2 outer coordinates and one shared length")
        elif self.kind == "triple":
            if (
                len(self.outer) != 3
                or len(self.outer[0]) != 2
                or len(self.outer[1]) != 1
                or len(self.outer[2]) != 2
                or len(self.shared) != 2
            ):
                raise PatternError("triple takes 2+1+2 outer coordinates and two shared lengths")
        elif self.kind == "path":
            if self.path_length < 1 or self.outer or self.shared:
                raise PatternError("path takes a positive interior length")
        else:
            raise PatternError(f"unknown pattern kind {self.kind!r}")

    @property
    def is_concrete(self) -> bool:
        return all(not b.at_least for group in self.outer for b in group)

    def dsl(self) -> str:
        if self.kind == "path":
            return f"path {self.path_length}"
        if self.kind == "single":
            return "single " + " ".join(str(b) for b in self.outer[0])
        groups = []
        if self.kind == "pair":
            (k, l), (n, p) = self.outer
            m = self.shared[0]
            groups = [f"{k} {l} {m}", f"{m} {n} {p}"]
        else:
            (k, l), (n,), (q, r) = self.outer
            m, p = self.shared
            groups = [f"{k} {l} {m}", f"{m} {n} {p}", f"{p} {q} {r}"]
        return f"{self.kind} " + " - ".join(groups)

    def __str__(self) -> str:
        return self.dsl()


def parse_pattern(text: str) -> ConfigPattern:
    """Parse the pattern DSL.

    Examples: ``single 3 3 3``, ``path 6``, ``pair 4+ 3+ 0 - 0 2+ 4+``,
    ``triple 5+ 5+ 0 - 0 2+ 0 - 0 4+ 5+``.  Shared coordinates must repeat
    exactly across the dash and may not carry a "+".
    """
    toks = text.split()
    if not toks:
        raise PatternError("empty pattern")
    kind = toks[0]
    rest = " ".join(toks[1:])
    if kind == "path":
        if len(toks) != 2:
            raise PatternError("path takes one length")
        return ConfigPattern("path", path_length=int(toks[1].rstrip("+")))
    groups = [grp.split() for grp in rest.split("-")]
    branches = [[_parse_branch(t) for t in grp] for grp in groups]
    if kind == "single":
        if len(branches) != 1 or len(branches[0]) != 3:
            raise PatternError("single takes three coordinates")
        return ConfigPattern("single", (tuple(branches[0]),))
    if kind == "pair":
        if len(branches) != 2 or any(len(b) != 3 for b in branches):
            raise PatternError("pair takes two groups of three")
        (k, l, m1), (m2, n, p) = branches
        _require_shared(m1, m2)
        return ConfigPattern("pair", ((k, l), (n, p)), (m1.length,))
    if kind == "triple":
        if len(branches) != 3 or any(len(b) != 3 for b in branches):
            raise PatternError("triple takes three groups of three")
        (k, l, m1), (m2, n, p1), (p2, q, r) = branches
        _require_shared(m1, m2)
        _require_shared(p1, p2)
        return ConfigPattern("triple", ((k, l), (n,), (q, r)), (m1.length, p1.length))
    raise PatternError(f"unknown pattern kind {kind!r}")


def _require_shared(a: Branch, b: Branch) -> None:
    if a.at_least or b.at_least or a.length != b.length:
        raise PatternError("shared coordinates must be exact and agree across groups")


def expand_pattern(p: ConfigPattern) -> list[ConfigPattern]:
    """All concrete shapes: every "+" coordinate ranges to the chain cap."""
    if p.kind == "path":
        return [p]
    axes: list[list[Branch]] = []
    for group in p.outer:
        for b in group:
            if b.at_least:
                axes.append([Branch(v) for v in range(b.length, MAX_CHAIN + 1)])
            else:
                axes.append([b])
    out = []
    for combo in itertools.product(*axes):
        it = iter(combo)
        outer = tuple(tuple(next(it) for _ in group) for group in p.outer)
        out.append(ConfigPattern(p.kind, outer, p.shared))
    return out


def shape_key(p: ConfigPattern) -> tuple:
    """Equivalence key of a concrete shape: branches around one vertex are
    unordered, and a pair or triple read right-to-left is the same shape."""
    if p.kind == "path":
        return ("path", p.path_length)
    groups = tuple(tuple(sorted(b.length for b in grp)) for grp in p.outer)
    forward = (p.kind, groups, p.shared)
    backward = (p.kind, groups[::-1], p.shared[::-1])
    return min(forward, backward)


def dedupe_expansions(expansions: Iterable[ConfigPattern]) -> list[ConfigPattern]:
    seen: set[tuple] = set()
    out = []
    for e in expansions:
        key = shape_key(e)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


# ---------------------------------------------------------------------------
# Fragments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fragment:
    """Tree around a concrete configuration, with exterior stubs attached.

    `interior` lists the vertices whose lists the host graph cannot touch
    beyond the derived floor `min_sizes` (4 minus the number of exterior
    vertices within distance two).  Everything else is exterior.
    """

    graph: Graph
    labels: tuple[str, ...]
    interior: tuple[int, ...]
    min_sizes: tuple[int, ...]
    config_vertices: tuple[int, ...]

    def size_of(self, label: str) -> int:
        v = self.labels.index(label)
        return self.min_sizes[self.interior.index(v)]


class _TreeBuilder:
    def __init__(self) -> None:
        self.labels: list[str] = []
        self.edges: list[tuple[int, int]] = []
        self.interior: list[int] = []

    def add(self, label: str, interior: bool, attach: int | None = None) -> int:
        v = len(self.labels)
        self.labels.append(label)
        if attach is not None:
            self.edges.append((attach, v))
        if interior:
            self.interior.append(v)
        return v

    def chain(self, start: int, count: int, name: str, interior_upto: int) -> int:
        """Attach `count` vertices after `start`; the first `interior_upto`
        of them are interior.  Returns the last vertex."""
        cur = start
        for i in range(1, count + 1):
            cur = self.add(f"{name}{i}", i <= interior_upto, cur)
        return cur

    def stub_end(self, attach: int, name: str) -> None:
        """Exterior chain endpoint of degree 3: the endpoint plus its two
        other neighbors, all exterior."""
        end = self.add(name, False, attach)
        self.add(f"{name}.x1", False, end)
        self.add(f"{name}.x2", False, end)


def _attach_outer_branch(b: _TreeBuilder, at: int, length: int, name: str) -> None:
    # interior chain keeps all but the outermost 2-vertex; the outermost
    # 2-vertex, the far endpoint, and the endpoint's neighbors are exterior
    last = b.chain(at, length, name, interior_upto=length - 1)
    b.stub_end(last, f"{name}end")


def build_fragment(p: ConfigPattern) -> Fragment:
    """Tree fragment and interior list-size floors for a concrete pattern."""
    if not p.is_concrete and p.kind != "path":
        raise PatternError("pattern must be concrete; expand it first")
    b = _TreeBuilder()
    if p.kind == "path":
        first = b.add("p1", True)
        last = first
        for i in range(2, p.path_length + 1):
            last = b.add(f"p{i}", True, last)
        b.stub_end(first, "left")
        b.stub_end(last, "right")
    elif p.kind == "single":
        u = b.add("u", True)
        for idx, br in enumerate(p.outer[0]):
            _attach_outer_branch(b, u, br.length, f"u.{idx}.")
    else:
        names = ["u", "v", "w"][: len(p.outer)]
        config = [b.add(names[0], True)]
        for i, m in enumerate(p.shared):
            prev = config[-1]
            # all 2-vertices on a shared chain are interior
            last = b.chain(prev, m, f"{names[i]}'{names[i + 1]}.", interior_upto=m)
            config.append(b.add(names[i + 1], True, last))
        for vi, group in enumerate(p.outer):
            for bi, br in enumerate(group):
                _attach_outer_branch(b, config[vi], br.length, f"{names[vi]}.{bi}.")
    graph = Graph.from_edges(len(b.labels), b.edges)
    interior = tuple(b.interior)
    interior_set = set(interior)
    sizes = []
    for v in interior:
        dist = bfs_distances(graph, v, cutoff=2)
        exterior_near = sum(
            1 for u in range(graph.n) if u != v and u not in interior_set and dist[u] <= 2
        )
        size = 4 - exterior_near
        if size < 1:
            raise PatternError(f"interior vertex {b.labels[v]} would need an empty list")
        sizes.append(size)
    config_vertices = tuple(
        v for v, lab in enumerate(b.labels) if lab in ("u", "v", "w")
    )
    return Fragment(graph, tuple(b.labels), interior, tuple(sizes), config_vertices)


def fragment_conflicts(frag: Fragment) -> list[tuple[int, ...]]:
    """Conflict lists between interior vertices: distance <= 2 in the fragment."""
    sq = square(frag.graph)
    index = {v: i for i, v in enumerate(frag.interior)}
    out: list[tuple[int, ...]] = []
    for v in frag.interior:
        out.append(tuple(index[u] for u in sq.adj[v] if u in index))
    return out


_SUBSETS_BY_SIZE: dict[int, tuple[int, ...]] = {
    s: tuple(m for m in range(16) if bin(m).count("1") == s) for s in range(5)
}


# ---------------------------------------------------------------------------
# Reducibility checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    expansion: ConfigPattern
    lists: tuple[int, ...]
    labels: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    status: str  # "reducible" | "counterexample" | "aborted"
    pattern: ConfigPattern
    expansions: int = 0
    assignments: int = 0
    solver_calls: int = 0
    nodes: int = 0
    counterexample: Counterexample | None = None

    @property
    def is_reducible(self) -> bool:
        return self.status == "reducible"


class _Budget:
    __slots__ = ("limit", "nodes", "calls")

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.nodes = 0
        self.calls = 0

    def spend(self, nodes: int) -> bool:
        self.nodes += nodes
        self.calls += 1
        return not self.limit or self.nodes <= self.limit


def _layer_size(sizes: Sequence[int]) -> int:
    total = 1
    for s in sizes:
        total *= len(_SUBSETS_BY_SIZE[s])
    return total


def verify_layer(
    adj: Sequence[Sequence[int]], sizes: Sequence[int], budget: _Budget | None = None
) -> tuple[int, tuple[int, ...] | None, str]:
    """Verify that every list assignment at exactly `sizes` satisfies `adj`.

    Returns (layer_size, failing_lists_or_None, status).  A coloring pool
    plus memoized coverage search certifies every assignment in the layer;
    the exact solver runs only on assignments no pooled coloring covers.
    """
    if budget is None:
        budget = _Budget(0)
    nh = len(sizes)
    layer = _layer_size(sizes)

    # constrained vertices branch the search; full-list vertices never do
    order = sorted((i for i in range(nh) if sizes[i] < 4), key=lambda i: (sizes[i], i))
    choices = [_SUBSETS_BY_SIZE[sizes[i]] for i in order]

    def full_assignment(prefix: Sequence[int]) -> list[int]:
        masks = [FULL_MASK] * nh
        for pos, m in zip(order, prefix):
            masks[pos] = m
        for pos in order[len(prefix):]:
            masks[pos] = _SUBSETS_BY_SIZE[sizes[pos]][0]
        return masks

    pool: list[tuple[int, ...]] = []
    pool_seen: set[tuple[int, ...]] = set()
    # compat[j][mask] = bitmask over pool of colorings whose color at order[j]
    # lies in `mask`; extended as the pool grows
    compat: list[dict[int, int]] = [{m: 0 for m in opts} for opts in choices]

    def add_witness(coloring: Sequence[int]) -> int:
        """Add a valid coloring and its whole palette orbit to the pool.

        Recolorings under palette permutations stay valid, so one solver call
        seeds up to 24 coverage certificates.  Returns the bits added.
        """
        added = 0
        projected = tuple(coloring[pos] for pos in order)
        for perm in itertools.permutations(range(4)):
            img = tuple(perm[c] for c in projected)
            if img in pool_seen:
                continue
            pool_seen.add(img)
            bit = 1 << len(pool)
            pool.append(img)
            added |= bit
            for j, c in enumerate(img):
                for mask in choices[j]:
                    if mask >> c & 1:
                        compat[j][mask] |= bit
        return added

    class _Bad(Exception):
        def __init__(self, masks: tuple[int, ...]):
            self.masks = masks

    class _Out(Exception):
        pass

    # Subtrees proven covered are memoized on (depth, surviving pool subset);
    # the pool only grows, so entries stay valid after later insertions.
    memo: set[tuple[int, int]] = set()
    prefix: list[int] = []

    def seed_witness() -> int:
        """Solve one completion of the current prefix; grow the pool or stop.

        Returns the pool bits of the new orbit members that are compatible
        with the prefix chosen so far (the solved witness always is).
        """
        masks = full_assignment(prefix)
        status, witness, nodes = search_masks(adj, list(masks))
        if not budget.spend(nodes):
            raise _Out
        if status != SAT:
            raise _Bad(tuple(masks))
        assert witness is not None
        added = add_witness(witness)
        alive = 0
        bits = added
        while bits:
            bit = bits & -bits
            bits ^= bit
            img = pool[bit.bit_length() - 1]
            if all(prefix[j] >> img[j] & 1 for j in range(len(prefix))):
                alive |= bit
        return alive

    def walk(j: int, alive: int) -> None:
        if not alive:
            # nothing in the pool covers this prefix: certify one completion,
            # then sweep the subtree against the fresh coloring
            alive = seed_witness()
            if j == len(order):
                return
        if j == len(order):
            return
        key = (j, alive)
        if key in memo:
            return
        row = compat[j]
        for mask in choices[j]:
            prefix.append(mask)
            walk(j + 1, alive & row[mask])
            prefix.pop()
        memo.add(key)

    try:
        walk(0, 0)
    except _Bad as bad:
        return layer, bad.masks, "counterexample"
    except _Out:
        return layer, None, "aborted"
    return layer, None, "done"


def verify_layer_exhaustive(
    adj: Sequence[Sequence[int]], sizes: Sequence[int]
) -> tuple[int, tuple[int, ...] | None]:
    """Reference implementation: solve every assignment in the layer.

    Used in tests to cross-validate the covering engine on small shapes.
    """
    checked = 0
    for combo in itertools.product(*(_SUBSETS_BY_SIZE[s] for s in sizes)):
        checked += 1
        status, _, _ = search_masks(adj, list(combo))
        if status != SAT:
            return checked, tuple(combo)
    return checked, None


# ---------------------------------------------------------------------------
# Worst-case exterior colorings of a fragment
# ---------------------------------------------------------------------------
#
# The host graph colors everything outside the fragment first; an interior
# vertex then keeps the palette minus the colors of the exterior vertices it
# sees (distance <= 2).  Lists of interior vertices sharing an exterior
# neighbor are therefore correlated: treating them as independent subsets at
# the floor sizes is too coarse (some shapes are only reducible thanks to the
# induced inclusions).  The faithful worst case enumerates colorings of the
# relevant exterior vertices directly, requiring only that exteriors within
# distance two of each other differ (true in the host, where distances can
# only be shorter than in the fragment).


def _ban_mask(coloring: Sequence[int], positions: Sequence[int]) -> int:
    mask = 0
    for i in positions:
        mask |= 1 << coloring[i]
    return mask


class _FragmentInstance:
    """Precomputed structure for exterior-coloring enumeration."""

    def __init__(self, frag: Fragment):
        sq = square(frag.graph)
        self.interior = frag.interior
        index = {v: i for i, v in enumerate(frag.interior)}
        self.adj = tuple(
            tuple(index[u] for u in sq.adj[v] if u in index) for v in frag.interior
        )
        inside = set(frag.interior)
        self.ext = tuple(
            x
            for x in range(frag.graph.n)
            if x not in inside and any(u in inside for u in sq.adj[x])
        )
        pos = {x: j for j, x in enumerate(self.ext)}
        self.bans = tuple(
            tuple(index[u] for u in sq.adj[x] if u in inside) for x in self.ext
        )
        # conflicts among relevant exteriors, split by position
        self.ext_conf_before = tuple(
            tuple(pos[y] for y in sq.adj[x] if y in pos and pos[y] < j)
            for j, x in enumerate(self.ext)
        )
        # frontier at j: earlier positions that still constrain position >= j
        frontier: list[tuple[int, ...]] = []
        k = len(self.ext)
        for j in range(k):
            live = set()
            for q in range(j, k):
                live.update(p for p in self.ext_conf_before[q] if p < j)
            frontier.append(tuple(sorted(live)))
        self.frontier = tuple(frontier)

    def induced_masks(self, phi: Sequence[int]) -> list[int]:
        """Interior lists after the exteriors colored so far (-1 = uncolored)."""
        masks = [FULL_MASK] * len(self.interior)
        for j, col in enumerate(phi):
            if col < 0:
                continue
            clear = ~(1 << col)
            for i in self.bans[j]:
                masks[i] &= clear
        return masks

    def count_proper(self) -> int:
        """Number of exterior colorings the verdict quantifies over."""
        memo: dict[tuple[int, tuple[int, ...]], int] = {}
        k = len(self.ext)
        phi = [-1] * k

        def rec(j: int) -> int:
            if j == k:
                return 1
            key = (j, tuple(phi[p] for p in self.frontier[j]))
            got = memo.get(key)
            if got is not None:
                return got
            total = 0
            for col in range(4):
                if any(phi[p] == col for p in self.ext_conf_before[j]):
                    continue
                phi[j] = col
                total += rec(j + 1)
                phi[j] = -1
            memo[key] = total
            return total

        return rec(0)


def verify_fragment(
    frag: Fragment, budget: _Budget | None = None
) -> tuple[int, tuple[int, ...] | None, str]:
    """Verify a fragment against every worst-case exterior coloring.

    Returns (exterior_colorings, failing_interior_lists_or_None, status).
    The coloring pool works as in `verify_layer`; memoization additionally
    keys on the colors of exteriors that still constrain upcoming choices.
    """
    if budget is None:
        budget = _Budget(0)
    inst = _FragmentInstance(frag)
    k = len(inst.ext)
    layer = inst.count_proper()

    # A pooled coloring matters only through the colors it places next to
    # each exterior vertex, kept as one 4-bit ban mask per exterior; palette
    # permutations act on ban masks through the precomputed tables, so one
    # solver witness seeds its whole orbit cheaply.
    pool: list[tuple[int, ...]] = []  # ban-mask vectors
    pool_seen: set[tuple[int, ...]] = set()
    # compat[j][col] = pool bitmask of colorings not clashing with exterior
    # j taking color col
    compat: list[list[int]] = [[0, 0, 0, 0] for _ in range(k)]
    phi = [-1] * k

    from .coloring import MASK_IMAGE

    def add_witness(coloring: Sequence[int]) -> int:
        added = 0
        base = tuple(_ban_mask(coloring, bans) for bans in inst.bans)
        for table in MASK_IMAGE:
            img = tuple(table[b] for b in base)
            if img in pool_seen:
                continue
            pool_seen.add(img)
            bit = 1 << len(pool)
            pool.append(img)
            added |= bit
            for j, banned in enumerate(img):
                row = compat[j]
                for col in range(4):
                    if not banned >> col & 1:
                        row[col] |= bit
        return added

    class _Bad(Exception):
        def __init__(self, masks: tuple[int, ...]):
            self.masks = masks

    class _Out(Exception):
        pass

    def seed_witness() -> int:
        masks = inst.induced_masks(phi)
        status, witness, nodes = search_masks(inst.adj, list(masks))
        if not budget.spend(nodes):
            raise _Out
        if status != SAT:
            # extend the exterior coloring greedily; more exterior colors
            # only shrink lists, so unsatisfiability is preserved
            full_phi = list(phi)
            for j in range(k):
                if full_phi[j] < 0:
                    used = {full_phi[p] for p in inst.ext_conf_before[j]}
                    full_phi[j] = min(c for c in range(4) if c not in used)
            raise _Bad(tuple(inst.induced_masks(full_phi)))
        assert witness is not None
        added = add_witness(witness)
        alive = 0
        bits = added
        while bits:
            bit = bits & -bits
            bits ^= bit
            img = pool[bit.bit_length() - 1]
            if all(
                col < 0 or not img[j] >> col & 1 for j, col in enumerate(phi)
            ):
                alive |= bit
        return alive

    memo: set[tuple[int, int, tuple[int, ...]]] = set()

    def walk(j: int, alive: int) -> None:
        if not alive:
            alive = seed_witness()
        if j == k:
            return
        key = (j, alive, tuple(phi[p] for p in inst.frontier[j]))
        if key in memo:
            return
        row = compat[j]
        for col in range(4):
            if any(phi[p] == col for p in inst.ext_conf_before[j]):
                continue
            phi[j] = col
            walk(j + 1, alive & row[col])
            phi[j] = -1
        memo.add(key)

    try:
        walk(0, 0)
    except _Bad as bad:
        return layer, bad.masks, "counterexample"
    except _Out:
        return layer, None, "aborted"
    return layer, None, "done"


def verify_fragment_exhaustive(frag: Fragment) -> tuple[int, tuple[int, ...] | None]:
    """Reference: solve the induced instance of every proper exterior coloring."""
    inst = _FragmentInstance(frag)
    k = len(inst.ext)
    phi = [-1] * k
    checked = 0

    def rec(j: int) -> tuple[int, ...] | None:
        nonlocal checked
        if j == k:
            checked += 1
            masks = inst.induced_masks(phi)
            status, _, _ = search_masks(inst.adj, list(masks))
            if status != SAT:
                return tuple(inst.induced_masks(phi))
            return None
        for col in range(4):
            if any(phi[p] == col for p in inst.ext_conf_before[j]):
                continue
            phi[j] = col
            bad = rec(j + 1)
            if bad is not None:
                return bad
            phi[j] = -1
        return None

    bad = rec(0)
    return checked, bad


def check_reducible(p: ConfigPattern, budget: int = 0) -> Verdict:
    """Reducible iff, for every concrete expansion, the fragment's interior
    extends to a valid coloring under every worst-case exterior coloring.

    Exterior colorings induce the interior lists (palette minus nearby
    exterior colors), which is exactly the position of a configuration inside
    a host whose remainder was colored first; monotonicity of list coloring
    lifts the verdict to hosts that constrain the interior less.  A
    counterexample carries the failing expansion and induced lists,
    re-checked as unsatisfiable through the public solver before being
    reported.

    Expansions that coincide up to reordering branches around a vertex or
    reading the configuration right-to-left produce isomorphic fragments and
    are checked once; `assignments` counts the exterior colorings quantified
    over across the distinct shapes.
    """
    expansions = dedupe_expansions(expand_pattern(p))
    bud = _Budget(budget)
    assignments = 0
    for concrete in expansions:
        frag = build_fragment(concrete)
        layer, bad, status = verify_fragment(frag, bud)
        assignments += layer
        if status == "aborted":
            return Verdict(
                "aborted", p, len(expansions), assignments, bud.calls, bud.nodes
            )
        if bad is not None:
            recheck = solve(
                _interior_graph(frag), bad, break_palette_symmetry=False
            )
            assert recheck.is_unsat, "counterexample failed independent re-check"
            interior_labels = tuple(frag.labels[v] for v in frag.interior)
            return Verdict(
                "counterexample",
                p,
                len(expansions),
                assignments,
                bud.calls,
                bud.nodes,
                Counterexample(concrete, bad, interior_labels),
            )
    return Verdict("reducible", p, len(expansions), assignments, bud.calls, bud.nodes)


def _interior_graph(frag: Fragment) -> Graph:
    """The fragment's interior with one edge per distance<=2 conflict, so the
    public solver sees exactly the same constraints the engine used."""
    index = {v: i for i, v in enumerate(frag.interior)}
    sq = square(frag.graph)
    edges = [
        (index[u], index[v])
        for u, v in sq.edges()
        if u in index and v in index
    ]
    return Graph.from_edges(len(frag.interior), edges)


# ---------------------------------------------------------------------------
# The forbidden-configuration catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    claim: str
    group: str  # "inherited" | "pair" | "triple"
    pattern: ConfigPattern


def load_catalog() -> tuple[CatalogEntry, ...]:
    """The forbidden-configuration catalog shipped as data."""
    from importlib.resources import files

    text = files("twodist.data").joinpath("configurations.txt").read_text()
    return parse_catalog(text)


def parse_catalog(text: str) -> tuple[CatalogEntry, ...]:
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        claim, group, dsl = line.split(None, 2)
        entries.append(CatalogEntry(claim, group, parse_pattern(dsl)))
    return tuple(entries)


# ---------------------------------------------------------------------------
# Helper lemma checks: the forced-list triangle, the small colorable shapes,
# and the tail-restriction property
# ---------------------------------------------------------------------------


def check_122() -> bool:
    """Characterize unsatisfiability of three mutually conflicting vertices
    with list sizes (1,2,2) or (2,1,2).

    True iff, over all such assignments, the instance is unsatisfiable
    exactly when all three lists fit in one common 2-color set (forcing the
    two 2-lists equal and the 1-list inside them).
    """
    g = catalog.path(3)
    for sizes in ((1, 2, 2), (2, 1, 2)):
        for combo in itertools.product(*(_SUBSETS_BY_SIZE[s] for s in sizes)):
            verdict = solve(g, list(combo), break_palette_symmetry=False)
            union = combo[0] | combo[1] | combo[2]
            forced = union.bit_count() <= 2
            if verdict.is_unsat != forced:
                return False
    return True


@dataclass(frozen=True)
class ChainShape:
    """A chain with optional pendant chains: the twelve small colorable shapes.

    `floors[i]` is the required list size of chain vertex i; `pendants` maps
    a chain position to the floors along its pendant chain; `inclusions` are
    (subset, superset) conditions between named vertices.  Chain vertices are
    named u1..uN, pendants u'j then u''j.
    """

    floors: tuple[int, ...]
    pendants: tuple[tuple[int, tuple[int, ...]], ...] = ()
    inclusions: tuple[tuple[str, str], ...] = ()

    def build(self) -> tuple[Graph, tuple[str, ...], tuple[int, ...]]:
        names = [f"u{i + 1}" for i in range(len(self.floors))]
        floors = list(self.floors)
        edges = [(i, i + 1) for i in range(len(self.floors) - 1)]
        for pos, chain in self.pendants:
            attach = pos
            for depth, f in enumerate(chain):
                v = len(names)
                names.append(("u" + "'" * (depth + 1)) + str(pos + 1))
                floors.append(f)
                edges.append((attach, v))
                attach = v
        return Graph.from_edges(len(names), edges), tuple(names), tuple(floors)


COLORABLE_SHAPES: dict[str, ChainShape] = {
    "a": ChainShape((2, 2, 3, 2)),
    "b": ChainShape((2, 3, 4, 3), pendants=((1, (3,)), (2, (3,)))),
    "c": ChainShape((2, 2, 3, 3, 2)),
    "d": ChainShape(
        (2, 3, 4, 3, 2), pendants=((2, (2,)),), inclusions=(("u1", "u2"), ("u5", "u4"))
    ),
    "e": ChainShape((2, 3, 3, 4, 2), pendants=((2, (2,)),)),
    "f": ChainShape((2, 2, 4, 3, 2), pendants=((2, (3,)),)),
    "g": ChainShape(
        (2, 4, 3, 4, 3), pendants=((2, (2,)), (3, (3,))), inclusions=(("u'3", "u3"),)
    ),
    "h": ChainShape(
        (2, 3, 4, 3, 2),
        pendants=((2, (3, 2)),),
        inclusions=(("u1", "u2"), ("u''3", "u'3"), ("u5", "u4")),
    ),
    "i": ChainShape((2, 2, 4, 3, 2, 2)),
    "j": ChainShape(
        (2, 3, 4, 4, 2, 2),
        pendants=((2, (3, 2)),),
        inclusions=(("u1", "u2"), ("u''3", "u'3")),
    ),
    "k": ChainShape((2, 3, 3, 4, 4, 2, 2), pendants=((2, (2,)),)),
    "l": ChainShape(
        (2, 2, 4, 4, 3, 4, 3),
        pendants=((4, (2,)), (5, (3,))),
        inclusions=(("u'5", "u5"),),
    ),
}


def check_colorable_shape(shape_id: str) -> bool:
    """True iff every assignment at the shape's exact floor sizes, subject to
    its inclusion conditions, is satisfiable.  Monotone in the floors."""
    try:
        shape = COLORABLE_SHAPES[shape_id]
    except KeyError:
        raise PatternError(f"unknown shape id {shape_id!r}") from None
    g, names, floors = shape.build()
    adj = square(g).adj
    name_to_id = {nm: i for i, nm in enumerate(names)}
    superset_of = {name_to_id[sub]: name_to_id[sup] for sub, sup in shape.inclusions}
    # choose supersets before their subsets
    order = sorted(range(g.n), key=lambda v: (v in superset_of, v))
    pool: list[tuple[int, ...]] = []
    masks = [0] * g.n

    def leaf_ok() -> bool:
        for w in pool:
            if all(masks[v] >> w[v] & 1 for v in range(g.n)):
                return True
        status, witness, _ = search_masks(adj, list(masks))
        if status == SAT:
            assert witness is not None
            pool.append(witness)
            return True
        return False

    def rec(idx: int) -> bool:
        if idx == g.n:
            return leaf_ok()
        v = order[idx]
        if v in superset_of:
            sup_mask = masks[superset_of[v]]
            opts = [m for m in _SUBSETS_BY_SIZE[floors[v]] if m & ~sup_mask == 0]
        else:
            opts = list(_SUBSETS_BY_SIZE[floors[v]])
        for m in opts:
            masks[v] = m
            if not rec(idx + 1):
                return False
        return True

    return rec(0)


def check_lemma33(shape_id: str) -> bool:
    """Alias keeping the one-letter shape ids a..l as the public interface."""
    return check_colorable_shape(shape_id)


# ---------------------------------------------------------------------------
# Tail-restriction property
# ---------------------------------------------------------------------------


def _tail_canonical(masks: tuple[int, ...]) -> tuple[int, ...]:
    from .coloring import MASK_IMAGE

    return min(tuple(t[m] for m in masks) for t in MASK_IMAGE)


def check_restriction_property(
    tail: Graph,
    attach: int = 0,
    u1_size: int = 2,
    u2_size: int = 3,
    u3_size: int | None = None,
) -> bool | None:
    """Verify the tail-restriction property on a chain u1-u2-u3 glued to `tail`.

    u3 is adjacent to `attach` in the tail.  For every assignment where the
    tail alone stays colorable after removing any single color from u4's
    list, the whole graph must be colorable with u1,u2,u3 at sizes
    (u1_size, u2_size, u3_size); u3's default size is one less than the
    number of its distance-2 neighbors.  Returns None when that size exceeds
    the palette (property not applicable), True/False otherwise.

    Calling with weakened u1/u2 sizes demonstrates the tightness of the
    default ones.
    """
    t = tail.n
    tail.check_vertex(attach)
    edges = [(0, 1), (1, 2), (2, 3 + attach)]
    edges += [(3 + a, 3 + b) for a, b in tail.edges()]
    whole = Graph.from_edges(3 + t, edges)
    d_star = 3 + tail.degree(attach)
    if u3_size is None:
        u3_size = d_star - 1
    if u3_size > 4:
        return None
    whole_adj = square(whole).adj
    tail_adj = square(tail).adj
    u4 = attach  # within the tail indexing

    hyp_cache: dict[tuple[int, ...], bool] = {}

    def hypothesis(tail_masks: tuple[int, ...]) -> bool:
        cached = hyp_cache.get(tail_masks)
        if cached is not None:
            return cached
        ok = True
        m4 = tail_masks[u4]
        for c in range(4):
            if not m4 >> c & 1:
                continue
            dom = list(tail_masks)
            dom[u4] = m4 & ~(1 << c)
            status, _, _ = search_masks(tail_adj, dom)
            if status != SAT:
                ok = False
                break
        hyp_cache[tail_masks] = ok
        return ok

    seen: set[tuple[int, ...]] = set()
    pool: list[tuple[int, ...]] = []
    boundary_opts = [
        _SUBSETS_BY_SIZE[u1_size],
        _SUBSETS_BY_SIZE[u2_size],
        _SUBSETS_BY_SIZE[u3_size],
    ]
    for tail_masks in itertools.product(*([list(range(1, 16))] * t)):
        canon = _tail_canonical(tail_masks)
        if canon in seen:
            continue
        seen.add(canon)
        if not hypothesis(canon):
            continue
        for bnd in itertools.product(*boundary_opts):
            masks = list(bnd) + list(canon)
            covered = False
            for w in pool:
                if all(masks[v] >> w[v] & 1 for v in range(len(masks))):
                    covered = True
                    break
            if covered:
                continue
            status, witness, _ = search_masks(whole_adj, list(masks))
            if status == SAT:
                assert witness is not None
                pool.append(witness)
            else:
                return False
    return True


def all_tails(max_vertices: int = 4) -> list[Graph]:
    """Connected tail graphs rooted at vertex 0, deduplicated up to
    isomorphisms fixing the root, with 1..max_vertices vertices."""
    out: list[Graph] = []
    for t in range(1, max_vertices + 1):
        seen: set[tuple[tuple[int, int], ...]] = set()
        all_pairs = [(i, j) for i in range(t) for j in range(i + 1, t)]
        for subset in itertools.product((False, True), repeat=len(all_pairs)):
            edges = [e for e, keep in zip(all_pairs, subset) if keep]
            if len(edges) < t - 1:
                continue
            g = Graph.from_edges(t, edges)
            if not is_connected(g):
                continue
            canon = None
            for perm_rest in itertools.permutations(range(1, t)):
                perm = (0,) + perm_rest
                mapped = tuple(
                    sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
                )
                if canon is None or mapped < canon:
                    canon = mapped
            assert canon is not None
            if canon in seen:
                continue
            seen.add(canon)
            out.append(Graph.from_edges(t, list(canon)))
    return out
