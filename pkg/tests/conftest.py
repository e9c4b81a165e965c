from __future__ import annotations

import pytest
from hypothesis import strategies as st

from ftbfs.graph import Graph


def triangle() -> Graph:
    # s=0, a=1, b=2; e0=(s,a), e1=(a,b), e2=(s,b)
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star(n: int) -> Graph:
    return Graph(n, [(0, i) for i in range(1, n)])


def binary_tree(n: int) -> Graph:
    return Graph(n, [((i - 1) // 2, i) for i in range(1, n)])


def comb(d: int, targets: int = 1) -> Graph:
    """A path of d edges with shrinking ladders from each path vertex to z_j,
    and ``targets`` vertices hung off the path end and joined to every z_j."""
    edges = [(j, j + 1) for j in range(d)]
    n = d + 1
    zs = []
    for j in range(1, d + 1):
        prev = j - 1
        for _ in range(6 + 2 * (d - j)):
            edges.append((prev, n))
            prev = n
            n += 1
        zs.append(prev)
    for _ in range(targets):
        x = n
        n += 1
        edges.append((d, x))
        edges.extend((x, z) for z in zs)
    return Graph(n, edges)


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 12, connected: bool = True) -> Graph:
    """Small random graphs: a random spanning tree (optional) plus random chords."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    if connected:
        for v in range(1, n):
            u = draw(st.integers(0, v - 1))
            edges.add((u, v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if pairs:
        chosen = draw(st.lists(st.sampled_from(pairs), max_size=min(len(pairs), 2 * n), unique=True))
        edges.update(chosen)
    order = draw(st.permutations(sorted(edges)))
    return Graph(n, list(order))


@pytest.fixture
def tri() -> Graph:
    return triangle()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
