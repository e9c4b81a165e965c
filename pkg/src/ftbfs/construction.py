"""The epsilon FT-BFS construction: Phase S0, the I1/I2 split, Phases S1 and S2,
and the reinforced set computed by last-protection.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .decomposition import (
    TreeDecomposition,
    heavy_path_decompose,
    segment_decompose,
    tree_path_intersections,
    upper_lower_intersect,
)
from .errors import InvariantError
from .graph import INF, BfsTree, Graph
from .interference import InterferenceIndex
from .replacement import Pair, ReplacementPath, Replacements, detour_order, failure_view, pcons_all
from .rounding import ceil_log2, ceil_pow, ceil_snap

# Analytic per-(P, v) cap on distinct last edges added in Phase S2:
# k' light segments (< cap each) + per decomposition path 2*cap + 3 extra pairs,
# with k' and the path count both at most ceil(log2 n) + 1.
S2_CENSUS_FACTOR = 6


def k_eps(epsilon: float) -> int:
    """Number of Phase S1 iterations, ceil(1/eps) + 2."""
    if not (0 < epsilon <= 1):
        raise ValueError("epsilon must lie in (0,1]")
    return ceil_snap(1 / epsilon) + 2


@dataclass
class Prepared:
    """Epsilon-independent state: T0, Pcons output, interference index, decomposition."""

    graph: Graph
    tree: BfsTree
    repl: Replacements
    index: InterferenceIndex
    _td: TreeDecomposition | None = None

    @property
    def td(self) -> TreeDecomposition:
        if self._td is None:
            self._td = heavy_path_decompose(self.tree)
        return self._td

    @property
    def uncovered(self) -> dict[Pair, ReplacementPath]:
        return self.repl.uncovered


def prepare(g: Graph, s: int) -> Prepared:
    tree = BfsTree(g, s)
    repl = pcons_all(g, tree)
    return Prepared(g, tree, repl, InterferenceIndex(tree, repl.uncovered))


@dataclass
class FtBfsStructure:
    n: int
    m: int
    source: int
    epsilon: float
    backup: frozenset[int]
    reinforced: frozenset[int]
    stats: dict = field(default_factory=dict)

    @property
    def edges(self) -> frozenset[int]:
        """H = backup edges plus reinforced edges."""
        return self.backup | self.reinforced

    @property
    def b(self) -> int:
        return len(self.backup)

    @property
    def r(self) -> int:
        return len(self.reinforced)

    def to_json(self, g: Graph) -> dict:
        def pairs(ids: Iterable[int]) -> list[list[int]]:
            return sorted(list(g.endpoints(e)) for e in ids)

        keys = ("b", "r", "k_eps", "phase_s1_added", "phase_s2_added", "wall_ms")
        return {
            "n": self.n,
            "m": self.m,
            "source": self.source,
            "epsilon": self.epsilon,
            "backup_edges": pairs(self.backup),
            "reinforced_edges": pairs(self.reinforced),
            "stats": {k: self.stats.get(k) for k in keys},
        }

    @classmethod
    def from_json(cls, data: Mapping, g: Graph) -> "FtBfsStructure":
        if data["n"] != g.n or data["m"] != g.m:
            raise ValueError(
                f"structure is for n={data['n']}, m={data['m']} but graph has n={g.n}, m={g.m}"
            )

        def ids(pairs: Iterable[Iterable[int]]) -> frozenset[int]:
            out = set()
            for u, v in pairs:
                eid = g.edge_id(u, v)
                if eid is None:
                    raise ValueError(f"structure edge ({u}, {v}) is not in the graph")
                out.add(eid)
            return frozenset(out)

        return cls(
            g.n, g.m, data["source"], data["epsilon"],
            ids(data["backup_edges"]), ids(data["reinforced_edges"]), dict(data.get("stats") or {}),
        )


def split_up(index: InterferenceIndex) -> tuple[frozenset[Pair], frozenset[Pair]]:
    i1, i2 = index.split()
    if not index.is_sim_set(i2):
        raise InvariantError("I2 is not a (~)-set")
    return i1, i2


@dataclass
class PhaseS1Result:
    added: set[int]
    banked: list[frozenset[Pair]]  # P^C_1 .. P^C_K
    iterations: int
    unresolved: frozenset[Pair]  # A/B pairs still new-ending after the last iteration
    census: list[tuple[int, int, int, int]]


def phase_s1(
    tree: BfsTree,
    i1: Iterable[Pair],
    epsilon: float,
    uncovered: Mapping[Pair, ReplacementPath],
    index: InterferenceIndex,
    distinct: str = "pass",
) -> PhaseS1Result:
    """K_eps rounds of A/B/C classification and deepest-first last-edge additions.

    ``distinct="pass"`` counts distinct last edges within one (v, J, round)
    walk; ``distinct="h"`` only counts edges not already in H.
    """
    if distinct not in ("pass", "h"):
        raise ValueError("distinct must be 'pass' or 'h'")
    n = tree.graph.n
    cap = ceil_pow(n, epsilon)
    rounds = k_eps(epsilon)
    h = set(tree.tree_edges)
    added: set[int] = set()
    banked: list[frozenset[Pair]] = []
    census = []
    current = frozenset(i1)
    used = 0
    for i in range(1, rounds + 1):
        if current:
            used = i
        type_a, type_b, type_c = index.classify(current)
        census.append((i, len(type_a), len(type_b), len(type_c)))
        if not index.is_sim_set(type_c):
            raise InvariantError(f"P^C_{i} is not a (~)-set")
        banked.append(type_c)
        snapshot = frozenset(h)
        for group in (type_a, type_b):
            per_target: dict[int, list[Pair]] = {}
            for key in group:
                per_target.setdefault(key[0], []).append(key)
            for v in sorted(per_target):
                seen: set[int] = set()
                for key in detour_order(tree, per_target[v]):
                    if len(seen) >= cap:
                        break
                    last = uncovered[key].last_edge
                    if distinct == "pass" or last not in snapshot:
                        seen.add(last)
                    h.add(last)
                    added.add(last)
        current = frozenset(k for k in type_a | type_b if uncovered[k].last_edge not in h)
    return PhaseS1Result(added, banked, used, current, census)


@dataclass
class PhaseS2Result:
    added: set[int]
    glue_added: set[int]
    max_census: int
    census_bound: int


def _edge_offset(tree: BfsTree, e: int) -> int:
    return tree.depth[tree.child_of(e)] - 1


def select_pairs(
    tree: BfsTree,
    td: TreeDecomposition,
    pairs: Iterable[Pair],
    v: int,
    uncovered: Mapping[Pair, ReplacementPath],
    cap: int,
) -> set[Pair]:
    """Add(P, v): the pairs of one (~)-set and one target whose last edges go into H."""
    mine = sorted((k for k in pairs if k[0] == v), key=lambda k: _edge_offset(tree, k[1]))
    if not mine:
        return set()
    pi = tree.path_to(v)
    seg = segment_decompose(len(pi) - 1)
    chosen: set[Pair] = set()

    # segments of pi(s, v)
    by_segment: dict[int, list[Pair]] = {}
    for key in mine:
        by_segment.setdefault(seg.segment_of(_edge_offset(tree, key[1])), []).append(key)
    for members in by_segment.values():
        if len({uncovered[k].last_edge for k in members}) < cap:
            chosen.update(members)
        chosen.add(members[0])

    # decomposition paths crossed by pi(s, v)
    path_of = td.path_of

    def on_psi(key: Pair, idx: int) -> bool:
        c = tree.child_of(key[1])
        return path_of[c] == idx and path_of[tree.parent[c]] == idx

    _, crossed = tree_path_intersections(td, tree, v)
    for idx in crossed:
        on_path = [k for k in mine if on_psi(k, idx)]
        if on_path:
            chosen.add(on_path[0])
        upper, lower = upper_lower_intersect(seg, pi, idx, td)
        for j in dict.fromkeys(x for x in (upper, lower) if x is not None):
            a, b = seg.segments[j]
            part = [k for k in on_path if a <= _edge_offset(tree, k[1]) < b]
            if not part:
                continue
            if len({uncovered[k].last_edge for k in part}) <= cap:
                chosen.update(part)
            chosen.add(part[0])
    return chosen


def phase_s2(
    tree: BfsTree,
    td: TreeDecomposition,
    sets: Iterable[Iterable[Pair]],
    epsilon: float,
    uncovered: Mapping[Pair, ReplacementPath],
) -> PhaseS2Result:
    n = tree.graph.n
    cap = ceil_pow(n, epsilon)
    bound = S2_CENSUS_FACTOR * cap * (ceil_log2(n) + 1)
    glue_added = {p.last_edge for k, p in uncovered.items() if k[1] in td.glue_edges}
    added = set(glue_added)
    max_census = 0
    for pset in sets:
        per_target: dict[int, list[Pair]] = {}
        for key in pset:
            per_target.setdefault(key[0], []).append(key)
        for v in sorted(per_target):
            chosen = select_pairs(tree, td, per_target[v], v, uncovered, cap)
            lasts = {uncovered[k].last_edge for k in chosen}
            max_census = max(max_census, len(lasts))
            if len(lasts) > bound:
                raise InvariantError(
                    f"Add(P, {v}) contributes {len(lasts)} last edges, above {bound}"
                )
            added |= lasts
    return PhaseS2Result(added, glue_added, max_census, bound)


def compute_unprotected(
    g: Graph, tree: BfsTree, h: Iterable[int], failure_dist: Mapping[int, list[int]] | None = None
) -> frozenset[int]:
    """Tree edges that are v-last-unprotected in H for some vertex v."""
    h = h if isinstance(h, (set, frozenset)) else set(h)
    missing = tree.tree_edges - h
    if missing:
        raise ValueError(f"H lacks {len(missing)} tree edges")
    adj = g.adj
    out = set()
    for e in sorted(tree.tree_edges):
        dist = failure_dist[e] if failure_dist is not None and e in failure_dist else failure_view(g, tree, e).dist
        for v in tree.subtree(tree.child_of(e)):
            dv = dist[v]
            if dv == INF:
                continue
            if not any(eid != e and eid in h and dist[u] == dv - 1 for u, eid in adj[v]):
                out.add(e)
                break
    return frozenset(out)


def baseline_ftbfs(g: Graph, s: int, prepared: Prepared | None = None) -> frozenset[int]:
    """T0 plus the last edge of every uncovered pair."""
    prepared = prepared or prepare(g, s)
    return prepared.tree.tree_edges | {p.last_edge for p in prepared.uncovered.values()}


def _component_is_tree(g: Graph, tree: BfsTree) -> bool:
    reach = sum(1 for v in range(g.n) if tree.reachable(v))
    inner = sum(1 for u, v in g.edges if tree.reachable(u))
    return inner == reach - 1


def build_eps_ftbfs(
    g: Graph,
    s: int,
    epsilon: float,
    *,
    baseline: bool = False,
    force_eps_machinery: bool = False,
    s1_distinct: str = "pass",
    prepared: Prepared | None = None,
    timing: bool = False,
) -> FtBfsStructure:
    """Backup and reinforced edge sets for source ``s``.

    ``prepared`` lets callers reuse the epsilon-independent work across a
    sweep.  Wall time is only recorded with ``timing=True`` so that output
    files stay byte-stable.
    """
    k = k_eps(epsilon)
    if not 0 <= s < g.n:
        raise ValueError(f"source {s} out of range [0, {g.n})")
    start = time.perf_counter()
    stats = {"k_eps": k, "phase_s1_added": 0, "phase_s2_added": 0, "s1_iterations": 0,
             "s1_unresolved": 0, "s2_max_census": 0}
    if prepared is None:
        tree = BfsTree(g, s)
        if _component_is_tree(g, tree):
            prepared = None
        else:
            repl = pcons_all(g, tree)
            prepared = Prepared(g, tree, repl, InterferenceIndex(tree, repl.uncovered))
    else:
        tree = prepared.tree
        if prepared.tree.source != s:
            raise ValueError("prepared state is for another source")

    if prepared is None or not prepared.uncovered:
        route = "trivial"
        h = frozenset(tree.tree_edges)
        reinforced: frozenset[int] = frozenset()
        if prepared is not None:
            reinforced = compute_unprotected(g, tree, h, prepared.repl.failure_dist)
    elif (epsilon >= 0.5 and not force_eps_machinery) or baseline:
        route = "baseline"
        h = baseline_ftbfs(g, s, prepared)
        reinforced = compute_unprotected(g, tree, h, prepared.repl.failure_dist)
    else:
        route = "eps"
        uncovered = prepared.uncovered
        i1, i2 = split_up(prepared.index)
        s1 = phase_s1(tree, i1, epsilon, uncovered, prepared.index, distinct=s1_distinct)
        after_s1 = set(tree.tree_edges) | s1.added
        s2 = phase_s2(tree, prepared.td, [i2, *s1.banked], epsilon, uncovered)
        h = frozenset(after_s1 | s2.added)
        reinforced = compute_unprotected(g, tree, h, prepared.repl.failure_dist)
        stats.update(
            phase_s1_added=len(s1.added),
            phase_s2_added=len(s2.added - after_s1),
            s1_iterations=s1.iterations,
            s1_unresolved=len(s1.unresolved),
            s2_max_census=s2.max_census,
            i1=len(i1),
            i2=len(i2),
            s1_census=s1.census,
        )
    backup = frozenset(h - reinforced)
    stats.update(
        route=route,
        b=len(backup),
        r=len(reinforced),
        up_pairs=len(prepared.uncovered) if prepared is not None else 0,
        wall_ms=round((time.perf_counter() - start) * 1000, 3) if timing else None,
    )
    return FtBfsStructure(g.n, g.m, s, epsilon, backup, reinforced, stats)


def reinforcement_envelope(n: int, epsilon: float) -> float:
    """(1/eps) * n^(1-eps) * log2(n+1)."""
    return (1 / epsilon) * n ** (1 - epsilon) * math.log2(n + 1)


def size_envelope(n: int, epsilon: float) -> float:
    """min{(1/eps) * n^(1+eps) * log2(n+1), n^(3/2)}."""
    return min((1 / epsilon) * n ** (1 + epsilon) * math.log2(n + 1), n ** 1.5)
