from __future__ import annotations

import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, graphs, path_graph, triangle
from pathcheck import check_pair, check_same_target
from ftbfs.graph import BfsTree, Graph
from ftbfs.replacement import (
    detour_order,
    failure_view,
    pcons_all,
    pcons_pair,
    replacement_path,
)


class TestPconsPair:
    def test_triangle_step_two(self):
        g = triangle()
        t = BfsTree(g, 0)
        p = pcons_pair(g, t, 2, 2)
        assert p.path == (0, 1, 2)
        assert p.new_ending and p.divergence == 0 and p.last_edge == 1
        assert p.detour == (0, 1, 2)

    def test_step_one_keeps_tree_last_edge(self):
        # s=0, a=1, b=2, d=3: b hangs below a, and s-d-b survives the loss of (s,a)
        g = Graph(4, [(0, 1), (1, 2), (0, 3), (3, 2)])
        t = BfsTree(g, 0)
        assert t.tree_edges == {0, 1, 2}
        p = pcons_pair(g, t, 1, 0)
        assert p.path == (0, 3, 2, 1)
        assert not p.new_ending and p.last_edge == 1 and p.divergence is None

    def test_bridge_is_absent(self):
        g = path_graph(3)
        t = BfsTree(g, 0)
        assert pcons_pair(g, t, 2, 1) is None

    def test_off_path_edge_rejected(self):
        g = triangle()
        t = BfsTree(g, 0)
        with pytest.raises(ValueError):
            pcons_pair(g, t, 1, 2)
        with pytest.raises(ValueError):
            pcons_pair(g, t, 1, 1)

    def test_unreachable_rejected(self):
        g = Graph(3, [(0, 1)])
        with pytest.raises(ValueError):
            pcons_pair(g, BfsTree(g, 0), 2, 0)

    def test_wrapper_returns_tree_path_off_pi(self):
        g = triangle()
        t = BfsTree(g, 0)
        p = replacement_path(g, t, 1, 2)
        assert p.path == (0, 1) and not p.new_ending
        assert replacement_path(g, t, 2, 2).new_ending


class TestPconsAll:
    def test_triangle_uncovered(self):
        g = triangle()
        r = pcons_all(g, BfsTree(g, 0))
        assert set(r.uncovered) == {(1, 0), (2, 2)}
        assert {p.last_edge for p in r.uncovered.values()} == {1}
        assert r.up_of(1) == [(1, 0)]

    def test_tree_all_bridges(self):
        g = Graph(5, [(0, 1), (1, 2), (1, 3), (0, 4)])
        r = pcons_all(g, BfsTree(g, 0))
        assert not r.uncovered
        assert len(r.bridges) == len(r.paths) == 1 + 2 + 2 + 1

    def test_k4_two_hop_replacements(self):
        g = complete(4)
        r = pcons_all(g, BfsTree(g, 0))
        assert r.uncovered
        assert all(p.length == 2 for p in r.uncovered.values())

    def test_keys_sorted(self):
        g = complete(5)
        r = pcons_all(g, BfsTree(g, 0))
        assert list(r.paths) == sorted(r.paths)

    def test_dump_jsonl(self):
        g = triangle()
        r = pcons_all(g, BfsTree(g, 0))
        buf = io.StringIO()
        r.dump_jsonl(buf)
        rows = [json.loads(line) for line in buf.getvalue().splitlines()]
        assert {"v": 2, "e": [0, 2], "path": [0, 1, 2], "new_ending": True} in rows

    def test_failure_view_only_touches_subtree(self):
        g = complete(5)
        t = BfsTree(g, 0)
        e = min(t.tree_edges)
        view = failure_view(g, t, e)
        inside = set(t.subtree(t.child_of(e)))
        for v in range(g.n):
            if v not in inside:
                assert view.dist[v] == t.depth[v]


class TestDetourOrder:
    def test_nearest_failure_first(self):
        g = path_graph(5)
        t = BfsTree(g, 0)
        assert detour_order(t, [(4, 1), (4, 3)]) == [(4, 3), (4, 1)]

    def test_trivial(self):
        t = BfsTree(path_graph(3), 0)
        assert detour_order(t, [(2, 0)]) == [(2, 0)]
        assert detour_order(t, []) == []

    def test_mixed_targets(self):
        t = BfsTree(path_graph(3), 0)
        with pytest.raises(ValueError, match="mix targets"):
            detour_order(t, [(2, 0), (1, 0)])


@given(graphs(max_n=11))
@settings(deadline=None, max_examples=120)
def test_every_pair_satisfies_structure(g):
    t = BfsTree(g, 0)
    r = pcons_all(g, t)
    for (v, e), p in r.paths.items():
        assert check_pair(g, t, v, e, p) == []
        if p is not None:
            assert r.failure_dist[e][v] == p.length


@given(graphs(min_n=4, max_n=12), st.integers(0, 3))
@settings(deadline=None, max_examples=120)
def test_same_target_interleaving(g, s):
    s = s % g.n
    t = BfsTree(g, s)
    r = pcons_all(g, t)
    for v in range(g.n):
        paths = [r.uncovered[k] for k in r.up_of(v)]
        assert check_same_target(t, paths) == []
