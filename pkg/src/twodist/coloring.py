"""Exact 2-distance list coloring over the 4-color palette {a,b,c,d}.

Color sets are 4-bit masks (bit i = letter "abcd"[i]), list assignments are
per-vertex masks, and a coloring is a tuple of color indices.  The solver is
a complete backtracking search on the square graph with unit propagation
(forced singletons assigned immediately, empty lists backtrack) and
minimum-remaining-values branching.  `chi2` widens the palette internally;
everything else is fixed to 4 colors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graphs import Graph, GraphError, bfs_distances, square

COLOR_LETTERS = "abcd"
FULL_MASK = 0b1111

SAT = "sat"
UNSAT = "unsat"
ABORTED = "aborted"


def mask_from_letters(letters: str) -> int:
    mask = 0
    for ch in letters:
        i = COLOR_LETTERS.find(ch)
        if i < 0:
            raise ValueError(f"unknown color letter {ch!r}")
        mask |= 1 << i
    return mask


def letters_from_mask(mask: int) -> str:
    if not 0 <= mask <= FULL_MASK:
        raise ValueError(f"mask {mask} out of range")
    return "".join(COLOR_LETTERS[i] for i in range(4) if mask >> i & 1)


def full_lists(n: int) -> tuple[int, ...]:
    return (FULL_MASK,) * n


# The 24 palette permutations and, for each, the induced action on masks.
PALETTE_PERMS: tuple[tuple[int, ...], ...] = tuple(itertools.permutations(range(4)))


def _mask_image_table() -> tuple[tuple[int, ...], ...]:
    tables = []
    for perm in PALETTE_PERMS:
        row = []
        for mask in range(16):
            img = 0
            for c in range(4):
                if mask >> c & 1:
                    img |= 1 << perm[c]
            row.append(img)
        tables.append(tuple(row))
    return tuple(tables)


MASK_IMAGE: tuple[tuple[int, ...], ...] = _mask_image_table()


def canonicalize(lists: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least image of `lists` under palette permutations.

    Satisfiability is invariant under this map, so a canonical form stands
    for its whole orbit of up to 24 assignments.
    """
    return min(tuple(table[m] for m in lists) for table in MASK_IMAGE)


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a satisfiability search.

    `status` is one of "sat", "unsat", "aborted"; an aborted run exhausted
    its node budget and proves nothing.  `nodes` counts every committed
    assignment, decisions and propagated singletons alike.
    """

    status: str
    witness: tuple[int, ...] | None = None
    nodes: int = 0

    @property
    def is_sat(self) -> bool:
        return self.status == SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT

    @property
    def is_aborted(self) -> bool:
        return self.status == ABORTED


class _Abort(Exception):
    pass


def search_masks(
    adj: Sequence[Sequence[int]],
    dom: list[int],
    budget: int = 0,
    tie_degree: Sequence[int] | None = None,
) -> tuple[str, tuple[int, ...] | None, int]:
    """Complete MRV backtracking search on an explicit conflict graph.

    `dom` is consumed (mutated).  Returns (status, witness, nodes).  Branch
    variable: fewest remaining colors, ties to higher degree in `adj`, then
    lower id.  Palette width is arbitrary (masks are plain ints).
    """
    n = len(adj)
    if tie_degree is None:
        tie_degree = [len(a) for a in adj]
    color_of = [-1] * n
    nodes = 0
    budget = budget or 0

    def assign(v: int, c: int, changes: list[tuple[int, int]]) -> bool:
        nonlocal nodes
        queue = [(v, c)]
        while queue:
            x, cx = queue.pop()
            if color_of[x] != -1:
                if color_of[x] != cx:
                    return False
                continue
            nodes += 1
            if budget and nodes > budget:
                raise _Abort
            color_of[x] = cx
            changes.append((x, -1))
            bit = 1 << cx
            for y in adj[x]:
                if color_of[y] != -1:
                    if color_of[y] == cx:
                        return False
                    continue
                old = dom[y]
                if old & bit:
                    new = old & ~bit
                    if not new:
                        return False
                    dom[y] = new
                    changes.append((y, old))
                    if new & (new - 1) == 0:
                        queue.append((y, new.bit_length() - 1))
        return True

    def undo(changes: list[tuple[int, int]]) -> None:
        for x, old in reversed(changes):
            if old == -1:
                color_of[x] = -1
            else:
                dom[x] = old

    def pick() -> int:
        best = -1
        best_key = None
        for v in range(n):
            if color_of[v] == -1:
                key = (dom[v].bit_count(), -tie_degree[v], v)
                if best_key is None or key < best_key:
                    best_key = key
                    best = v
        return best

    # initial forced assignments
    init_changes: list[tuple[int, int]] = []
    for v in range(n):
        d = dom[v]
        if d == 0:
            return UNSAT, None, nodes
        if d & (d - 1) == 0 and color_of[v] == -1:
            try:
                if not assign(v, d.bit_length() - 1, init_changes):
                    return UNSAT, None, nodes
            except _Abort:
                return ABORTED, None, nodes

    def dfs() -> bool:
        v = pick()
        if v == -1:
            return True
        mask = dom[v]
        while mask:
            bit = mask & -mask
            mask ^= bit
            changes: list[tuple[int, int]] = []
            if assign(v, bit.bit_length() - 1, changes) and dfs():
                return True
            undo(changes)
        return False

    try:
        if dfs():
            return SAT, tuple(color_of), nodes
        return UNSAT, None, nodes
    except _Abort:
        return ABORTED, None, nodes


def _prepare_domains(
    g: Graph,
    lists: Sequence[int] | None,
    fixed: Mapping[int, int] | None,
) -> list[int]:
    if lists is None:
        lists = full_lists(g.n)
    if len(lists) != g.n:
        raise GraphError("list assignment length differs from vertex count")
    dom = []
    for v, m in enumerate(lists):
        if not 0 <= m <= FULL_MASK:
            raise GraphError(f"list mask {m} at vertex {v} out of range")
        dom.append(m)
    if fixed:
        for v, c in fixed.items():
            g.check_vertex(v)
            if not 0 <= c < 4:
                raise GraphError(f"fixed color {c} out of range")
            if not dom[v] >> c & 1:
                raise GraphError(f"fixed color {COLOR_LETTERS[c]} not in list of vertex {v}")
            dom[v] = 1 << c
    return dom


def solve(
    g: Graph,
    lists: Sequence[int] | None = None,
    fixed: Mapping[int, int] | None = None,
    budget: int = 0,
    break_palette_symmetry: bool = True,
) -> SolveOutcome:
    """Decide whether a complete valid 2-distance coloring exists.

    Searches the square of `g` exhaustively within `lists` (full palette when
    omitted) extending `fixed`.  budget=0 means unlimited; a budget overrun
    yields status "aborted", which is never conflated with "unsat".

    When every list is the full palette and nothing is fixed, the first
    branching vertex is pinned to color a: by palette symmetry this changes
    neither the verdict nor the existence of a witness, only the work done.
    """
    dom = _prepare_domains(g, lists, fixed)
    sq = square(g)
    adj = sq.adj
    deg = [len(a) for a in adj]
    if break_palette_symmetry and not fixed and all(m == FULL_MASK for m in dom) and g.n:
        v0 = min(range(g.n), key=lambda v: (-deg[v], v))
        dom[v0] = 1
    status, witness, nodes = search_masks(adj, dom, budget=budget, tie_degree=deg)
    return SolveOutcome(status, witness, nodes)


def enumerate_colorings(
    g: Graph,
    lists: Sequence[int] | None = None,
    fixed: Mapping[int, int] | None = None,
    cap: int = 0,
) -> tuple[list[tuple[int, ...]], bool]:
    """All complete valid colorings in lexicographic vertex/color order.

    Returns (colorings, truncated); truncation at `cap` (0 = no cap) is
    signaled, not raised.
    """
    dom0 = _prepare_domains(g, lists, fixed)
    adj = square(g).adj
    n = g.n
    out: list[tuple[int, ...]] = []
    truncated = False

    color_of = [-1] * n
    dom = dom0

    def assign(v: int, c: int, changes: list[tuple[int, int]]) -> bool:
        if color_of[v] != -1:
            return color_of[v] == c
        color_of[v] = c
        changes.append((v, -1))
        bit = 1 << c
        for y in adj[v]:
            if color_of[y] != -1:
                if color_of[y] == c:
                    return False
                continue
            old = dom[y]
            if old & bit:
                new = old & ~bit
                if not new:
                    return False
                dom[y] = new
                changes.append((y, old))
        return True

    def undo(changes: list[tuple[int, int]]) -> None:
        for x, old in reversed(changes):
            if old == -1:
                color_of[x] = -1
            else:
                dom[x] = old

    def dfs(i: int) -> bool:
        nonlocal truncated
        if i == n:
            out.append(tuple(color_of))
            if cap and len(out) >= cap:
                truncated = True
                return False
            return True
        if color_of[i] != -1:
            return dfs(i + 1)
        mask = dom[i]
        while mask:
            bit = mask & -mask
            mask ^= bit
            changes: list[tuple[int, int]] = []
            ok = assign(i, bit.bit_length() - 1, changes)
            if ok and not dfs(i + 1):
                undo(changes)
                return False
            undo(changes)
        return True

    dfs(0)
    return out, truncated


def chi2(g: Graph) -> int:
    """Smallest k such that the square of `g` has a proper k-coloring.

    Tries k upward from max degree + 1; the first branching vertex is pinned
    to the first color, which is sound by color symmetry.
    """
    if g.n == 0:
        return 0
    adj = square(g).adj
    deg = [len(a) for a in adj]
    k = g.max_degree() + 1
    while True:
        dom = [(1 << k) - 1] * g.n
        v0 = min(range(g.n), key=lambda v: (-deg[v], v))
        dom[v0] = 1
        status, _, _ = search_masks(adj, dom, tie_degree=deg)
        if status == SAT:
            return k
        k += 1


def validate_coloring(
    g: Graph,
    lists: Sequence[int] | None,
    coloring: Sequence[int],
) -> bool:
    """Independent witness check: lists honored and no clash within distance 2.

    Distances are recomputed by BFS from every vertex, deliberately not
    reusing the solver's conflict graph.
    """
    if len(coloring) != g.n:
        return False
    if lists is None:
        lists = full_lists(g.n)
    for v, c in enumerate(coloring):
        if c is None or not 0 <= c < 4 or not lists[v] >> c & 1:
            return False
    for v in range(g.n):
        dist = bfs_distances(g, v, cutoff=2)
        for u in range(g.n):
            if u != v and dist[u] <= 2 and coloring[u] == coloring[v]:
                return False
    return True


def parse_lists(rows: Iterable[str]) -> tuple[int, ...]:
    """Per-vertex color lists from lines of letters such as "abd"."""
    return tuple(mask_from_letters(row.strip()) for row in rows)


def format_witness(coloring: Sequence[int]) -> str:
    """One "vertex color" line per vertex."""
    return "\n".join(f"{v} {COLOR_LETTERS[c]}" for v, c in enumerate(coloring))
