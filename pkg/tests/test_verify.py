from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, graphs, path_graph, triangle
from ftbfs.construction import compute_unprotected
from ftbfs.graph import INF, BfsTree, Graph
from ftbfs.verify import (
    Violation,
    enumerate_all_shortest,
    minimal_reinforcement_oracle,
    verify_structure,
)


class TestVerifyStructure:
    def test_full_graph_ok(self):
        g = complete(5)
        assert verify_structure(g, [0], range(g.m)).ok

    def test_triangle_tree_violations(self):
        g = triangle()
        rep = verify_structure(g, [0], {0, 2}, ())
        assert not rep.ok
        assert Violation(0, 0, 1, INF, 2) in rep.violations
        assert rep.violations == [Violation(0, 0, 1, INF, 2), Violation(0, 2, 2, INF, 2)]

    def test_triangle_tree_reinforced(self):
        rep = verify_structure(triangle(), [0], {0, 2}, {0, 2})
        assert rep.ok and rep.edges_checked == 1

    def test_json(self):
        g = triangle()
        out = verify_structure(g, [0], {0, 2}, ()).to_json(g)
        assert out["violations"][0] == {"source": 0, "failed_edge": [0, 1], "vertex": 1, "dist_h": None, "dist_g": 2}

    def test_bridges_are_vacuous(self):
        g = path_graph(4)
        assert verify_structure(g, [0], range(g.m)).ok

    def test_preconditions(self):
        g = triangle()
        with pytest.raises(ValueError, match="subset"):
            verify_structure(g, [0], {0, 7})
        with pytest.raises(ValueError, match="reinforced"):
            verify_structure(g, [0], {0}, {1})
        with pytest.raises(ValueError, match="source"):
            verify_structure(g, [3], {0})
        with pytest.raises(ValueError, match="sample"):
            verify_structure(g, [0], {0}, sample=0)

    def test_sampling_is_partial_and_seeded(self):
        g = complete(6)
        a = verify_structure(g, [0], range(g.m), sample=0.3, seed=4)
        b = verify_structure(g, [0], range(g.m), sample=0.3, seed=4)
        assert a.partial and a.edges_checked == round(0.3 * g.m)
        assert a.violations == b.violations
        assert not verify_structure(g, [0], range(g.m), sample=1.0).partial

    def test_multi_source(self):
        g = cycle(6)
        t = BfsTree(g, 0)
        rep = verify_structure(g, [0, 3], t.tree_edges, ())
        assert {v.source for v in rep.violations} == {0, 3}
        par = verify_structure(g, [0, 3], t.tree_edges, (), workers=2)
        assert par.violations == rep.violations

    def test_disconnected(self):
        g = Graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        assert verify_structure(g, [0], range(g.m)).ok


class TestEnumerate:
    def test_four_cycle(self):
        assert enumerate_all_shortest(cycle(4), 0, 2) == {(0, 1, 2), (0, 3, 2)}

    def test_path(self):
        assert enumerate_all_shortest(path_graph(4), 0, 3) == {(0, 1, 2, 3)}

    def test_k4(self):
        assert enumerate_all_shortest(complete(4), 0, 3) == {(0, 3)}

    def test_unreachable(self):
        assert enumerate_all_shortest(Graph(3, [(0, 1)]), 0, 2) == set()

    def test_guard(self):
        # a chain of 4-cycles doubles the path count each step
        k = 14
        edges = []
        for i in range(k):
            a, b, c, d = 3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3
            edges += [(a, b), (b, d), (a, c), (c, d)]
        g = Graph(3 * k + 1, edges)
        with pytest.raises(ValueError, match="limit"):
            enumerate_all_shortest(g, 0, 3 * k)
        assert len(enumerate_all_shortest(g, 0, 3 * 10)) == 2**10


class TestOracle:
    def test_full_graph(self):
        g = complete(5)
        assert minimal_reinforcement_oracle(g, 0, range(g.m)) == set()

    def test_triangle(self):
        g = triangle()
        assert minimal_reinforcement_oracle(g, 0, {0, 2}) == {0, 2}

    def test_tree(self):
        g = path_graph(5)
        assert minimal_reinforcement_oracle(g, 0, range(g.m)) == set()

    def test_requires_tree(self):
        with pytest.raises(ValueError):
            minimal_reinforcement_oracle(triangle(), 0, {0, 1})


@given(graphs(max_n=13, connected=False), st.data())
@settings(deadline=None, max_examples=120)
def test_last_protection_covers_oracle(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = BfsTree(g, s)
    extra = data.draw(st.sets(st.sampled_from(range(g.m)))) if g.m else set()
    h = set(t.tree_edges) | extra
    unprotected = compute_unprotected(g, t, h)
    assert unprotected >= minimal_reinforcement_oracle(g, s, h)
    assert verify_structure(g, [s], h, unprotected).ok
    assert verify_structure(g, [s], range(g.m)).ok
