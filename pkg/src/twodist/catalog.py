"""Small named graphs and randomized planar fixtures used across the toolkit.

The planar fixtures come with rotations that are correct by construction
(vertices on a circle, chords drawn as straight lines), so the Euler check
has real embeddings to exercise.
"""

from __future__ import annotations

import random

from .graphs import Graph, RotationSystem


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def single_edge() -> Graph:
    return Graph.from_edges(2, [(0, 1)])


def petersen() -> Graph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i-(i+5)."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, edges)


def cube_with_rotation() -> tuple[Graph, RotationSystem]:
    """Q3 with the rotation of the standard square-in-square drawing."""
    outer = [0, 1, 2, 3]
    inner = [4, 5, 6, 7]
    edges = [(outer[i], outer[(i + 1) % 4]) for i in range(4)]
    edges += [(inner[i], inner[(i + 1) % 4]) for i in range(4)]
    edges += [(outer[i], inner[i]) for i in range(4)]
    g = Graph.from_edges(8, edges)
    coords = {
        0: (-2.0, -2.0), 1: (2.0, -2.0), 2: (2.0, 2.0), 3: (-2.0, 2.0),
        4: (-1.0, -1.0), 5: (1.0, -1.0), 6: (1.0, 1.0), 7: (-1.0, 1.0),
    }
    return g, rotation_from_coordinates(g, coords)


def k4_with_rotation() -> tuple[Graph, RotationSystem]:
    """K4 drawn as a triangle with a center vertex."""
    g = complete(4)
    coords = {0: (0.0, 2.0), 1: (-2.0, -1.0), 2: (2.0, -1.0), 3: (0.0, 0.0)}
    return g, rotation_from_coordinates(g, coords)


def rotation_from_coordinates(g: Graph, coords: dict[int, tuple[float, float]]) -> RotationSystem:
    """Counterclockwise angular sort of each vertex's neighbors.

    Valid whenever `coords` is a straight-line plane drawing of the graph.
    """
    import math

    rows = []
    for v in range(g.n):
        x, y = coords[v]

        def angle(u: int) -> float:
            ux, uy = coords[u]
            return math.atan2(uy - y, ux - x)

        rows.append(tuple(sorted(g.adj[v], key=angle)))
    return RotationSystem(rows)


def random_outerplanar_with_rotation(
    rng: random.Random, n_min: int = 6, n_max: int = 16
) -> tuple[Graph, RotationSystem]:
    """Random cycle plus non-crossing chords, vertices on a circle.

    Chords are generated by recursive splitting so they never cross; the
    rotation is the angular order on the circle, hence a plane embedding.
    """
    import math

    n = rng.randint(n_min, n_max)
    edges = [(i, (i + 1) % n) for i in range(n)]
    chords: list[tuple[int, int]] = []

    def split(lo: int, hi: int) -> None:
        # add a chord inside the arc lo..hi with probability decaying in span
        if hi - lo < 3:
            return
        if rng.random() < 0.7:
            a = rng.randint(lo, hi - 2)
            b = rng.randint(a + 2, hi)
            if not (a == lo and b == hi) and (b - a) < n - 1:
                chords.append((a, b))
                split(a, b)
                split(b, hi)
                return
        split(lo + 1, hi)

    split(0, n - 1)
    g = Graph.from_edges(n, edges + chords)
    coords = {
        v: (math.cos(2 * math.pi * v / n), math.sin(2 * math.pi * v / n))
        for v in range(n)
    }
    return g, rotation_from_coordinates(g, coords)


def random_tree_with_rotation(
    rng: random.Random, n_min: int = 4, n_max: int = 14
) -> tuple[Graph, RotationSystem]:
    """Random tree with an arbitrary rotation (every rotation of a tree is planar)."""
    n = rng.randint(n_min, n_max)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    g = Graph.from_edges(n, edges)
    rows = []
    for v in range(g.n):
        row = list(g.adj[v])
        rng.shuffle(row)
        rows.append(tuple(row))
    return g, RotationSystem(tuple(rows))
