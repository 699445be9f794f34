"""Immutable simple graphs, distance metrics, square graphs, and combinatorial
planarity checks through rotation systems.

Everything downstream (the coloring solver, the configuration engine, the
gadget builders) sits on the `Graph` type defined here.  Graphs are frozen
after construction and all operations are pure functions, so instances can be
shared freely across threads or worker processes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

INF = float("inf")


class GraphError(ValueError):
    """Raised for malformed graphs, rotations, or invalid vertex ids."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.

    Invariants enforced at construction: no self-loops, no parallel edges,
    symmetric adjacency.  Use :meth:`from_edges` rather than building the
    adjacency tuple by hand.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in sets[u]:
                raise GraphError(f"parallel edge ({u},{v})")
            sets[u].add(v)
            sets[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in sets))

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError("adjacency length differs from vertex count")
        for u, nbrs in enumerate(self.adj):
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"duplicate neighbors at vertex {u}")
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise GraphError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise GraphError(f"self-loop at vertex {u}")
                if u not in self.adj[v]:
                    raise GraphError(f"asymmetric adjacency {u}->{v}")

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise GraphError(f"invalid vertex id {v!r}")


def bfs_distances(g: Graph, source: int, cutoff: int | None = None) -> list[float]:
    """Hop distances from `source`; unreachable vertices get INF."""
    g.check_vertex(source)
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if cutoff is not None and du >= cutoff:
            continue
        for v in g.adj[u]:
            if dist[v] == INF:
                dist[v] = du + 1
                queue.append(v)
    return dist


def distance(g: Graph, u: int, v: int) -> float:
    """Shortest-path edge count between u and v; INF if disconnected."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0
    dist = bfs_distances(g, u)
    return dist[v]


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return all(d != INF for d in bfs_distances(g, 0))


def square(g: Graph) -> Graph:
    """Graph on the same vertices joining every pair at distance 1 or 2."""
    edges = []
    for u in range(g.n):
        reach = set()
        for v in g.adj[u]:
            reach.add(v)
            reach.update(g.adj[v])
        reach.discard(u)
        for v in reach:
            if u < v:
                edges.append((u, v))
    return Graph.from_edges(g.n, edges)


def girth(g: Graph) -> float:
    """Length of a shortest cycle, INF for forests.

    For each edge (u,v) the shortest cycle through that edge is 1 plus the
    u-v distance with the edge removed; the minimum over edges is exact.
    """
    best = INF
    for u, v in g.edges():
        dist: list[float] = [INF] * g.n
        dist[u] = 0
        queue = deque([u])
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if dx + 1 >= best:
                continue
            for y in g.adj[x]:
                if (x == u and y == v) or (x == v and y == u):
                    continue
                if dist[y] == INF:
                    dist[y] = dx + 1
                    queue.append(y)
        if dist[v] + 1 < best:
            best = dist[v] + 1
    return best


def girth_cycles(g: Graph) -> list[tuple[int, ...]]:
    """All shortest cycles, as canonical vertex tuples (deduplicated).

    Exists so a caller can inspect which cycles realize the girth; intended
    for small graphs (every BFS parent tree is expanded).
    """
    best = girth(g)
    if best == INF:
        return []
    found: set[tuple[int, ...]] = set()
    for u, v in g.edges():
        # all shortest u-v paths avoiding the edge uv, then close the cycle
        dist: list[float] = [INF] * g.n
        parents: list[list[int]] = [[] for _ in range(g.n)]
        dist[u] = 0
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if dist[x] >= best:
                continue
            for y in g.adj[x]:
                if (x == u and y == v) or (x == v and y == u):
                    continue
                if dist[y] == INF:
                    dist[y] = dist[x] + 1
                    parents[y].append(x)
                    queue.append(y)
                elif dist[y] == dist[x] + 1:
                    parents[y].append(x)
        if dist[v] + 1 != best:
            continue

        def expand(x: int) -> list[list[int]]:
            if x == u:
                return [[u]]
            return [path + [x] for p in parents[x] for path in expand(p)]

        for path in expand(v):
            found.add(_canonical_cycle(path))
    return sorted(found)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    k = len(cycle)
    best: tuple[int, ...] | None = None
    doubled = list(cycle) + list(cycle)
    for i in range(k):
        for cand in (tuple(doubled[i : i + k]), tuple(reversed(doubled[i : i + k]))):
            if best is None or cand < best:
                best = cand
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Rotation systems and faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic ordering of the neighbors around every vertex.

    `rot[v]` must be a permutation of `adj[v]`.  A rotation system determines
    a cellular embedding on an orientable surface; tracing faces and counting
    them against Euler's formula decides whether that surface is the sphere.
    """

    rot: tuple[tuple[int, ...], ...]

    @classmethod
    def from_lists(cls, rows: Iterable[Sequence[int]]) -> "RotationSystem":
        return cls(tuple(tuple(r) for r in rows))

    def validate(self, g: Graph) -> None:
        if len(self.rot) != g.n:
            raise GraphError("rotation length differs from vertex count")
        for v, row in enumerate(self.rot):
            if sorted(row) != list(g.adj[v]):
                raise GraphError(f"rotation at {v} is not a permutation of its adjacency")


def identity_rotation(g: Graph) -> RotationSystem:
    """Rotation listing neighbors in sorted id order (arbitrary embedding)."""
    return RotationSystem(tuple(tuple(a) for a in g.adj))


def trace_faces(g: Graph, rot: RotationSystem) -> list[tuple[int, ...]]:
    """Face walks of the embedding as closed vertex sequences.

    Each directed edge lies on exactly one walk: from dart (u,v) the walk
    continues with the successor of u in the rotation at v.  Walk lengths sum
    to 2m, and a bridge contributes twice to its single face.
    """
    rot.validate(g)
    if not is_connected(g):
        raise GraphError("face tracing requires a connected graph")
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    for v, row in enumerate(rot.rot):
        deg = len(row)
        index = {u: i for i, u in enumerate(row)}
        for u in row:
            w = row[(index[u] + 1) % deg]
            succ[(u, v)] = (v, w)
    faces: list[tuple[int, ...]] = []
    seen: set[tuple[int, int]] = set()
    for start in succ:
        if start in seen:
            continue
        walk = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            walk.append(dart[0])
            dart = succ[dart]
        faces.append(tuple(walk))
    return faces


def check_planar_embedding(g: Graph, rot: RotationSystem) -> bool:
    """True iff the traced embedding satisfies n - m + f = 2."""
    faces = trace_faces(g, rot)
    return g.n - g.m + len(faces) == 2


def eq1_balance(g: Graph, rot: RotationSystem) -> Fraction:
    """Total of the vertex charges 19/2*d(u)-21 and face charges d(f)-21.

    Defined only on verified plane embeddings, where Euler's formula forces
    the total to -42 regardless of the graph.  Computed in exact quarter
    units; no floating point.
    """
    if not check_planar_embedding(g, rot):
        raise GraphError("eq1_balance requires a planar embedding")
    quarters = 0
    for v in range(g.n):
        quarters += 38 * g.degree(v) - 84
    for face in trace_faces(g, rot):
        quarters += 4 * (len(face) - 21)
    return Fraction(quarters, 4)
