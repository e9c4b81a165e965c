"""Detour interference, pi-intersection and the type A/B/C split of Phase S1."""
from __future__ import annotations

import json
from collections import defaultdict
from typing import Iterable, Mapping, TextIO

from .graph import BfsTree
from .replacement import Pair, ReplacementPath


def interferes(p: ReplacementPath, q: ReplacementPath) -> bool:
    """Detours share a vertex outside {d(P), d(P'), v, t}."""
    if p.target == q.target:
        raise ValueError("same-target paths never interfere; filter them first")
    if not (p.new_ending and q.new_ending):
        raise ValueError("interference is defined for new-ending paths only")
    excluded = {p.divergence, q.divergence, p.target, q.target}
    return bool((p.detour_vertices & q.detour_vertices) - excluded)


def pi_intersects(tree: BfsTree, p: ReplacementPath, q: ReplacementPath) -> bool:
    """D(P) meets pi(LCA(v, t), t) without the LCA itself.  Not symmetric."""
    t = q.target
    w = tree.lca(p.target, t)
    dw = tree.depth[w]
    for x in p.detour_vertices:
        if tree.reachable(x) and tree.depth[x] > dw and tree.is_ancestor(x, t):
            return True
    return False


def i_nsim(tree: BfsTree, pair: Pair, universe: Mapping[Pair, ReplacementPath]) -> set[Pair]:
    """Pairs of ``universe`` whose paths (not-related)-interfere with ``pair``; brute force."""
    p = universe[pair]
    out = set()
    for key, q in universe.items():
        if key[0] == pair[0]:
            continue
        if interferes(p, q) and not tree.related(pair[1], key[1]):
            out.add(key)
    return out


class InterferenceIndex:
    """I^{nsim} for every pair of a fixed universe (usually all of UP).

    Detours are bucketed by their interior vertices; two pairs with distinct
    targets that land in one bucket interfere.
    """

    def __init__(self, tree: BfsTree, universe: Mapping[Pair, ReplacementPath]):
        self.tree = tree
        self.universe = universe
        buckets: dict[int, list[Pair]] = defaultdict(list)
        for key, p in universe.items():
            for z in p.detour_interior:
                buckets[z].append(key)
        interfering: dict[Pair, set[Pair]] = {k: set() for k in universe}
        for members in buckets.values():
            for a in range(len(members)):
                ka = members[a]
                for b in range(a + 1, len(members)):
                    kb = members[b]
                    if ka[0] != kb[0]:
                        interfering[ka].add(kb)
                        interfering[kb].add(ka)
        related = tree.related
        self.nsim: dict[Pair, frozenset[Pair]] = {
            k: frozenset(q for q in others if not related(k[1], q[1]))
            for k, others in interfering.items()
        }
        self.interfering = {k: frozenset(v) for k, v in interfering.items()}

    def i_nsim(self, key: Pair, within: Iterable[Pair] | None = None) -> frozenset[Pair]:
        base = self.nsim[key]
        if within is None:
            return base
        within = within if isinstance(within, (set, frozenset)) else set(within)
        return frozenset(k for k in base if k in within)

    def split(self) -> tuple[frozenset[Pair], frozenset[Pair]]:
        """(I1, I2): pairs with and without a not-related interfering partner."""
        i1 = frozenset(k for k, v in self.nsim.items() if v)
        i2 = frozenset(k for k in self.universe if k not in i1)
        return i1, i2

    def classify(self, pairs: Iterable[Pair]) -> tuple[frozenset[Pair], frozenset[Pair], frozenset[Pair]]:
        return classify_types(self.tree, self.universe, pairs, self)

    def is_sim_set(self, pairs: Iterable[Pair]) -> bool:
        pairs = set(pairs)
        return all(not (self.nsim[k] & pairs) for k in pairs)


def classify_types(
    tree: BfsTree,
    universe: Mapping[Pair, ReplacementPath],
    pairs: Iterable[Pair],
    index: InterferenceIndex | None = None,
) -> tuple[frozenset[Pair], frozenset[Pair], frozenset[Pair]]:
    """Split ``pairs`` into types A, B and C with respect to ``pairs`` itself.

    A is computed first; B is then taken against the frozen set of non-A pairs.
    """
    pairs = sorted(set(pairs))
    members = set(pairs)
    if index is None:
        index = InterferenceIndex(tree, {k: universe[k] for k in pairs})
    type_a = set()
    for k in pairs:
        p = universe[k]
        for q in index.nsim[k]:
            if q in members and pi_intersects(tree, p, universe[q]):
                type_a.add(k)
                break
    rest = members - type_a
    type_b = {k for k in rest if any(q in rest for q in index.nsim[k])}
    type_c = rest - type_b
    return frozenset(type_a), frozenset(type_b), frozenset(type_c)


def is_sim_set(tree: BfsTree, universe: Mapping[Pair, ReplacementPath], pairs: Iterable[Pair]) -> bool:
    """No not-related interference inside ``pairs`` (checked pairwise)."""
    pairs = sorted(set(pairs))
    for a in range(len(pairs)):
        p = universe[pairs[a]]
        for b in range(a + 1, len(pairs)):
            q = universe[pairs[b]]
            if p.target != q.target and not tree.related(p.failed_edge, q.failed_edge) and interferes(p, q):
                return False
    return True


def write_census(fp: TextIO, iteration: int, a: int, b: int, c: int) -> None:
    fp.write(json.dumps({"iter": iteration, "A": a, "B": b, "C": c}, sort_keys=True) + "\n")
