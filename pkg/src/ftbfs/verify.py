"""Brute-force verification of fault-tolerant structures and small enumeration oracles.

Distances here come from scipy's compiled BFS, which keeps the verifier
independent of the pure-Python searches the construction uses.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as _csgraph_sp

from .graph import INF, BfsTree, Graph, bfs_distances


@dataclass(frozen=True, order=True)
class Violation:
    source: int
    failed_edge: int
    vertex: int
    dist_h: int  # INF when unreachable
    dist_g: int

    def to_json(self, g: Graph) -> dict:
        return {
            "source": self.source,
            "failed_edge": list(g.endpoints(self.failed_edge)),
            "vertex": self.vertex,
            "dist_h": None if self.dist_h == INF else self.dist_h,
            "dist_g": None if self.dist_g == INF else self.dist_g,
        }


@dataclass
class VerificationReport:
    violations: list[Violation]
    edges_checked: int
    elapsed: float
    partial: bool = False
    sources: tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def witnesses_at(self, vertex: int) -> list[Violation]:
        return [w for w in self.violations if w.vertex == vertex]

    def to_json(self, g: Graph) -> dict:
        return {
            "ok": self.ok,
            "partial": self.partial,
            "edges_checked": self.edges_checked,
            "violations": [v.to_json(g) for v in self.violations],
        }


class _Distances:
    """Hop BFS over an edge-masked copy of ``g`` via scipy.

    The CSR arrays hold both orientations of every edge, sorted by row once,
    so masking an edge set only needs a boolean filter and a new row index.
    """

    def __init__(self, g: Graph):
        self.n = g.n
        arr = np.asarray(g.edges, dtype=np.int32).reshape(-1, 2)
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        eids = np.concatenate([np.arange(g.m), np.arange(g.m)])
        order = np.lexsort((cols, rows))
        self.rows = rows[order]
        self.cols = cols[order]
        self.entry_edge = eids[order]

    def from_source(self, keep: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
        """(distances with INF, predecessor array with -9999 for none)."""
        mask = keep[self.entry_edge]
        cols = self.cols[mask]
        counts = np.bincount(self.rows[mask], minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int32)
        np.cumsum(counts, out=indptr[1:])
        mat = csr_matrix((np.ones(len(cols)), cols, indptr), shape=(self.n, self.n))
        dist, pred = _csgraph_sp(
            mat, method="D", directed=True, unweighted=True, indices=s, return_predecessors=True
        )
        out = np.where(np.isinf(dist), INF, dist).astype(np.int64)
        return out, pred


def _tree_edges(g: Graph, pred: np.ndarray) -> set[int]:
    out = set()
    for v, p in enumerate(pred):
        if p >= 0:
            out.add(g.edge_id(int(p), v))
    return out


def _check_source(g: Graph, s: int, h: frozenset[int], failures: Sequence[int]) -> list[Violation]:
    dd = _Distances(g)
    keep_g = np.ones(g.m, dtype=bool)
    keep_h = np.zeros(g.m, dtype=bool)
    if h:
        keep_h[list(h)] = True
    dist_g, pred_g = dd.from_source(keep_g, s)
    dist_h, pred_h = dd.from_source(keep_h, s)
    tree_g = _tree_edges(g, pred_g)
    tree_h = _tree_edges(g, pred_h)
    found = []
    for e in failures:
        if e in tree_g:
            keep_g[e] = False
            dg, _ = dd.from_source(keep_g, s)
            keep_g[e] = True
        else:
            dg = dist_g
        if e in tree_h:
            keep_h[e] = False
            dh, _ = dd.from_source(keep_h, s)
            keep_h[e] = True
        else:
            dh = dist_h
        bad = np.nonzero(dg != dh)[0]
        found.extend(Violation(s, e, int(v), int(dh[v]), int(dg[v])) for v in bad)
    return found


def _check_job(args):
    return _check_source(*args)


def verify_structure(
    g: Graph,
    sources: Iterable[int],
    h: Iterable[int],
    reinforced: Iterable[int] = (),
    *,
    sample: float | None = None,
    seed: int = 0,
    workers: int = 1,
) -> VerificationReport:
    """Check every failure of an edge outside ``reinforced``, for every source.

    Edges of G outside H are failed too.  ``sample`` in (0, 1] checks only a
    seeded random fraction of those failures and marks the report partial.
    """
    start = time.perf_counter()
    sources = tuple(sorted(set(sources)))
    h = frozenset(h)
    reinforced = frozenset(reinforced)
    for s in sources:
        if not 0 <= s < g.n:
            raise ValueError(f"source {s} out of range [0, {g.n})")
    if any(not 0 <= e < g.m for e in h):
        raise ValueError("H is not a subset of E(G)")
    if not reinforced <= h:
        raise ValueError("reinforced edges must lie in H")
    failures = [e for e in range(g.m) if e not in reinforced]
    partial = False
    if sample is not None:
        if not 0 < sample <= 1:
            raise ValueError("sample must lie in (0,1]")
        if sample < 1:
            rng = random.Random(seed)
            count = max(1, round(sample * len(failures))) if failures else 0
            failures = sorted(rng.sample(failures, count))
            partial = True
    jobs = [(g, s, h, failures) for s in sources]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_check_job, jobs))
    else:
        parts = [_check_job(j) for j in jobs]
    violations = sorted(v for part in parts for v in part)
    return VerificationReport(violations, len(failures) * len(sources), time.perf_counter() - start, partial, sources)


def enumerate_all_shortest(
    g: Graph, s: int, v: int, removed_edges: Iterable[int] = (), limit: int = 10_000
) -> set[tuple[int, ...]]:
    """Every shortest s-v path of ``g`` minus ``removed_edges``, via the BFS DAG."""
    removed = frozenset(removed_edges)
    ds = bfs_distances(g, s, removed_edges=removed)
    if ds[v] == INF:
        return set()
    dv = bfs_distances(g, v, removed_edges=removed)
    total = ds[v]
    on_dag = [ds[u] != INF and dv[u] != INF and ds[u] + dv[u] == total for u in range(g.n)]

    def successors(u: int) -> list[int]:
        return [w for w, eid in g.adj[u] if eid not in removed and on_dag[w] and ds[w] == ds[u] + 1]

    count = [0] * g.n
    count[v] = 1
    for u in sorted((u for u in range(g.n) if on_dag[u]), key=lambda x: -ds[x]):
        if u != v:
            count[u] = sum(count[w] for w in successors(u))
    if count[s] > limit:
        raise ValueError(f"{count[s]} shortest paths exceed the enumeration limit {limit}")
    paths: set[tuple[int, ...]] = set()
    stack = [(s,)]
    while stack:
        p = stack.pop()
        if p[-1] == v:
            paths.add(p)
            continue
        for w in successors(p[-1]):
            stack.append(p + (w,))
    return paths


def minimal_reinforcement_oracle(g: Graph, s: int, h: Iterable[int]) -> set[int]:
    """Tree edges whose failure changes some distance from ``s`` in H, by double BFS."""
    h = frozenset(h)
    tree = BfsTree(g, s)
    if not tree.tree_edges <= h:
        raise ValueError("H must contain the BFS tree")
    outside = frozenset(e for e in range(g.m) if e not in h)
    out = set()
    for e in sorted(tree.tree_edges):
        dg = bfs_distances(g, s, removed_edges=frozenset((e,)))
        dh = bfs_distances(g, s, removed_edges=outside | {e})
        if dg != dh:
            out.add(e)
    return out
