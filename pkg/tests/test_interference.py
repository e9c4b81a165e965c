from __future__ import annotations

import io
import json
import random

import pytest
from hypothesis import given, settings

from conftest import complete, graphs, triangle
from ftbfs.generators import random_connected_graph
from ftbfs.graph import BfsTree, Graph
from ftbfs.interference import (
    InterferenceIndex,
    classify_types,
    i_nsim,
    interferes,
    is_sim_set,
    pi_intersects,
    write_census,
)
from ftbfs.replacement import ReplacementPath, pcons_all


def relay():
    """Targets v=2 (below a=1) and t=4 (below b=3) whose detours share the relay r=5, q=6."""
    g = Graph(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6), (6, 2), (6, 4)])
    t = BfsTree(g, 0)
    return g, t, pcons_all(g, t)


def crossing():
    """v=2 below a=1; its detour after losing (s,a) runs through b=3 and t=4."""
    g = Graph(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2)])
    t = BfsTree(g, 0)
    return g, t, pcons_all(g, t)


def fake(target, detour, new_ending=True, edge=0):
    return ReplacementPath(target, edge, tuple(detour), new_ending, 99, detour[0], tuple(detour))


class TestInterferes:
    def test_relay_detours_interfere(self):
        _, _, r = relay()
        p, q = r.uncovered[(2, 0)], r.uncovered[(4, 2)]
        assert p.detour == (0, 5, 6, 2) and q.detour == (0, 5, 6, 4)
        assert interferes(p, q) and interferes(q, p)

    def test_disjoint(self):
        assert not interferes(fake(5, [0, 1, 5]), fake(6, [0, 2, 6]))

    def test_only_divergence_points_shared(self):
        assert not interferes(fake(5, [1, 3, 5]), fake(6, [3, 4, 6]))

    def test_targets_never_witness(self):
        # the other path's target sits inside this detour: excluded by definition
        assert not interferes(fake(5, [0, 6, 5]), fake(6, [1, 6]))

    def test_same_target_rejected(self):
        with pytest.raises(ValueError, match="same-target"):
            interferes(fake(5, [0, 5]), fake(5, [1, 5]))

    def test_old_ending_rejected(self):
        with pytest.raises(ValueError):
            interferes(fake(5, [0, 5], new_ending=False), fake(6, [1, 6]))


class TestPiIntersects:
    def test_disjoint_from_other_branch(self):
        _, t, r = relay()
        assert not pi_intersects(t, r.uncovered[(2, 0)], r.uncovered[(4, 2)])

    def test_through_target(self):
        _, t, r = crossing()
        p = r.uncovered[(2, 0)]
        assert 4 in p.detour
        assert pi_intersects(t, p, r.uncovered[(4, 2)])

    def test_crossing_branch_below_lca(self):
        _, t, r = crossing()
        p = r.uncovered[(2, 0)]
        assert 3 in p.detour and t.lca(2, 4) == 0
        assert pi_intersects(t, p, r.uncovered[(4, 2)])

    def test_asymmetric_witness_exists(self):
        rng = random.Random(11)
        for _ in range(200):
            g = random_connected_graph(rng.randint(8, 30), "sparse", rng.randrange(10**6))
            t = BfsTree(g, 0)
            up = pcons_all(g, t).uncovered
            idx = InterferenceIndex(t, up)
            for k, partners in idx.nsim.items():
                for q in partners:
                    if pi_intersects(t, up[k], up[q]) != pi_intersects(t, up[q], up[k]):
                        return
        pytest.skip("no asymmetric pi-intersection found in the sampled graphs")


class TestNsim:
    def test_relay_partners(self):
        _, t, r = relay()
        up = r.uncovered
        assert sorted(up) == [(2, 0), (2, 1), (4, 2), (4, 3), (6, 4), (6, 5)]
        assert i_nsim(t, (2, 0), up) == {(4, 2), (4, 3)}
        assert i_nsim(t, (6, 4), up) == set()
        sub = {k: up[k] for k in [(2, 0), (4, 2)]}
        assert i_nsim(t, (2, 0), sub) == {(4, 2)}

    def test_same_target_universe(self):
        g = complete(4)
        t = BfsTree(g, 0)
        up = pcons_all(g, t).uncovered
        v = next(iter(up))[0]
        sub = {k: p for k, p in up.items() if k[0] == v}
        for k in sub:
            assert i_nsim(t, k, sub) == set()

    def test_related_edges_filtered(self):
        # on a single root path every pair of tree edges is related
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 3), (4, 2)])
        t = BfsTree(g, 0)
        up = pcons_all(g, t).uncovered
        for k in up:
            for q in i_nsim(t, k, up):
                assert not t.related(k[1], q[1])


class TestClassify:
    def test_empty(self):
        _, t, r = relay()
        assert classify_types(t, r.uncovered, []) == (frozenset(), frozenset(), frozenset())

    def test_singleton_is_c(self):
        _, t, r = relay()
        a, b, c = classify_types(t, r.uncovered, [(2, 0)])
        assert not a and not b and c == {(2, 0)}

    def test_mutual_interference_is_b(self):
        _, t, r = relay()
        a, b, c = classify_types(t, r.uncovered, [(2, 0), (4, 2)])
        assert not a and b == {(2, 0), (4, 2)} and not c

    def test_census_line(self):
        buf = io.StringIO()
        write_census(buf, 2, 5, 1, 0)
        assert json.loads(buf.getvalue()) == {"iter": 2, "A": 5, "B": 1, "C": 0}


class TestSimSet:
    def test_empty(self):
        _, t, r = relay()
        assert is_sim_set(t, r.uncovered, [])

    def test_relay_pair_is_not(self):
        _, t, r = relay()
        assert not is_sim_set(t, r.uncovered, [(2, 0), (4, 2)])
        assert InterferenceIndex(t, r.uncovered).is_sim_set([(2, 0)])

    def test_triangle_split(self):
        g = triangle()
        t = BfsTree(g, 0)
        idx = InterferenceIndex(t, pcons_all(g, t).uncovered)
        i1, i2 = idx.split()
        assert not i1 and i2 == {(1, 0), (2, 2)}


@given(graphs(min_n=5, max_n=13))
@settings(deadline=None, max_examples=120)
def test_index_matches_brute_force(g):
    t = BfsTree(g, 0)
    up = pcons_all(g, t).uncovered
    idx = InterferenceIndex(t, up)
    for k in up:
        assert idx.i_nsim(k) == i_nsim(t, k, up)
        for q in idx.interfering[k]:
            assert interferes(up[k], up[q]) and interferes(up[q], up[k])
    i1, i2 = idx.split()
    assert i1 | i2 == set(up) and not i1 & i2
    assert is_sim_set(t, up, i2)


@given(graphs(min_n=5, max_n=13))
@settings(deadline=None, max_examples=120)
def test_classification_partition_and_b_mutuality(g):
    t = BfsTree(g, 0)
    up = pcons_all(g, t).uncovered
    idx = InterferenceIndex(t, up)
    members = set(idx.split()[0])
    a, b, c = idx.classify(members)
    assert a | b | c == members
    assert not (a & b or a & c or b & c)
    rest = members - a
    for k in b:
        partners = idx.i_nsim(k, rest)
        assert partners and partners <= b
    assert idx.is_sim_set(c) == is_sim_set(t, up, c)
    assert idx.is_sim_set(c)
