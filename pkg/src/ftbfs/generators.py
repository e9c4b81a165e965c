"""Seeded random connected graphs for test corpora and calibration."""
from __future__ import annotations

import random

from .graph import Graph

DENSITIES = ("tree+", "sparse", "medium", "dense")


def random_connected_graph(n: int, density: str, seed: int) -> Graph:
    """A random spanning tree plus extra edges; ``density`` picks how many.

    tree+ adds about n/8 edges, sparse about n, medium about 4n, and dense
    includes each remaining pair with probability 0.3.  The tree+ and sparse
    families grow a deep spanning tree (each vertex hangs off one of the few
    most recent ones) so that BFS trees have long root paths.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    window = 3 if density in ("tree+", "sparse") else None
    for i in range(1, n):
        lo = max(0, i - window) if window else 0
        u, v = order[i], order[rng.randrange(lo, i)]
        edges.add((min(u, v), max(u, v)))
    max_m = n * (n - 1) // 2
    if density == "dense":
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in edges and rng.random() < 0.3:
                    edges.add((u, v))
    else:
        extra = {"tree+": max(1, n // 8), "sparse": n, "medium": 4 * n}[density]
        target = min(max_m, len(edges) + extra)
        while len(edges) < target:
            u, v = rng.sample(range(n), 2)
            if window and abs(order.index(u) - order.index(v)) > 4 * window:
                continue
            edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


def corpus(count: int, seed: int, n_min: int = 16, n_max: int = 200) -> list[tuple[str, Graph]]:
    """``count`` graphs cycling through the densities with seeded sizes."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        density = DENSITIES[i % len(DENSITIES)]
        n = rng.randint(n_min, n_max)
        gseed = rng.randrange(2**31)
        out.append((f"{density}-n{n}-s{gseed}", random_connected_graph(n, density, gseed)))
    return out
