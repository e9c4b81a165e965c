"""Canonical replacement paths P_{v,e} (algorithm Pcons) and uncovered pairs."""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

from .graph import INF, BfsTree, Graph, bfs_distances, shortest_path

Pair = tuple[int, int]  # (target vertex v, failing tree edge id e)


@dataclass(frozen=True)
class ReplacementPath:
    target: int
    failed_edge: int
    path: tuple[int, ...]
    new_ending: bool
    last_edge: int
    divergence: int | None = None
    detour: tuple[int, ...] | None = None

    @property
    def key(self) -> Pair:
        return (self.target, self.failed_edge)

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @cached_property
    def detour_vertices(self) -> frozenset[int]:
        return frozenset(self.detour or ())

    @cached_property
    def detour_interior(self) -> frozenset[int]:
        """Detour vertices other than the divergence point and the target."""
        if not self.detour:
            return frozenset()
        return frozenset(self.detour[1:-1])


@dataclass
class FailureView:
    """Hop distances and W-shortest parents in G minus one tree edge.

    Only the subtree under the failed edge changes; everything else is T0's.
    """

    edge: int
    dist: list[int]
    perturbation: list[int]
    parent_edge: list[int]

    def trace(self, g: Graph, s: int, v: int) -> list[int]:
        path = [v]
        while v != s:
            a, b = g.edges[self.parent_edge[v]]
            v = a if b == v else b
            path.append(v)
        path.reverse()
        return path


def failure_view(g: Graph, tree: BfsTree, e: int) -> FailureView:
    c = tree.child_of(e)
    sub = tree.subtree(c)
    insub = set(sub)
    depth = tree.depth
    dist = list(depth)
    for v in sub:
        dist[v] = INF
    adj = g.adj
    heap = []
    for v in sub:
        best = None
        for u, eid in adj[v]:
            if eid == e or u in insub:
                continue
            cand = depth[u] + 1
            if best is None or cand < best:
                best = cand
        if best is not None:
            dist[v] = best
            heap.append((best, v))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d != dist[u]:
            continue
        for w, _ in adj[u]:
            if w in insub and (dist[w] == INF or dist[w] > d + 1):
                dist[w] = d + 1
                heapq.heappush(heap, (d + 1, w))
    pert = list(tree.perturbation)
    parent_edge = list(tree.parent_edge)
    reached = sorted((v for v in sub if dist[v] != INF), key=dist.__getitem__)
    for v in sub:
        parent_edge[v] = -1
    for v in reached:
        dv = dist[v] - 1
        best = None
        best_e = -1
        for u, eid in adj[v]:
            if eid != e and dist[u] == dv:
                cand = pert[u] + (1 << eid)
                if best is None or cand < best:
                    best, best_e = cand, eid
        pert[v] = best
        parent_edge[v] = best_e
    return FailureView(e, dist, pert, parent_edge)


def _divergence(pi: tuple[int, ...], path: tuple[int, ...]) -> int:
    i = 0
    while i + 1 < len(path) and i + 1 < len(pi) and path[i + 1] == pi[i + 1]:
        i += 1
    return i


def _pair_from_view(g: Graph, tree: BfsTree, view: FailureView, v: int) -> ReplacementPath | None:
    e = view.edge
    s = tree.source
    target_dist = view.dist[v]
    if target_dist == INF:
        return None
    # step 1: a replacement path entering v through a tree edge
    best = None
    best_u = -1
    best_eid = -1
    neighbours = list(tree.children[v])
    if tree.parent[v] >= 0 and tree.parent_edge[v] != e:
        neighbours.append(tree.parent[v])
    for u in neighbours:
        if view.dist[u] != target_dist - 1:
            continue
        eid = g.edge_id(u, v)
        if eid == e:
            continue
        cand = view.perturbation[u] + (1 << eid)
        if best is None or cand < best:
            best, best_u, best_eid = cand, u, eid
    if best is not None:
        path = tuple(view.trace(g, s, best_u)) + (v,)
        return ReplacementPath(v, e, path, False, best_eid)

    # step 2: leftmost divergence point
    pi = tree.path_to(v)
    k = len(pi) - 1
    i = tree.depth[tree.child_of(e)] - 1
    removed_edges = frozenset((e,))
    for j in range(i + 1):
        removed = frozenset(pi[j + 1:k])
        d = bfs_distances(g, s, removed, removed_edges, target=v)
        if d[v] == target_dist:
            path = shortest_path(g, s, v, removed, removed_edges)
            assert path is not None and len(path) - 1 == target_dist
            last = g.edge_id(path[-2], path[-1])
            idx = _divergence(pi, path)
            return ReplacementPath(
                v, e, path, last not in tree.tree_edges, last,
                divergence=path[idx], detour=path[idx:],
            )
    raise AssertionError(f"no feasible divergence index for pair ({v}, {e})")


def pcons_pair(g: Graph, tree: BfsTree, v: int, e: int) -> ReplacementPath | None:
    """P_{v,e} for a tree edge ``e`` on pi(s, v); ``None`` when ``e`` disconnects ``v``."""
    if not tree.reachable(v):
        raise ValueError(f"vertex {v} is unreachable")
    if e not in tree.tree_edges or not tree.is_ancestor(tree.child_of(e), v):
        raise ValueError(f"edge {e} is not on pi(s, {v})")
    return _pair_from_view(g, tree, failure_view(g, tree, e), v)


def replacement_path(g: Graph, tree: BfsTree, v: int, e: int) -> ReplacementPath | None:
    """Like :func:`pcons_pair`, but any edge off pi(s, v) yields pi(s, v) itself."""
    if e in tree.tree_edges and tree.is_ancestor(tree.child_of(e), v):
        return pcons_pair(g, tree, v, e)
    if not tree.reachable(v):
        return None
    pi = tree.path_to(v)
    last = tree.parent_edge[v]
    return ReplacementPath(v, e, pi, False, last)


@dataclass
class Replacements:
    """Output of Pcons over every (v, e in pi(s, v)).

    ``paths`` maps each pair to its replacement path, or ``None`` for bridge
    pairs.  ``failure_dist[e]`` holds hop distances in G minus ``e``.
    """

    graph: Graph
    tree: BfsTree
    paths: dict[Pair, ReplacementPath | None]
    failure_dist: dict[int, list[int]]
    uncovered: dict[Pair, ReplacementPath] = field(init=False)

    def __post_init__(self) -> None:
        self.uncovered = {k: p for k, p in self.paths.items() if p is not None and p.new_ending}
        by_target: dict[int, list[Pair]] = {}
        for key in self.uncovered:
            by_target.setdefault(key[0], []).append(key)
        self._by_target = by_target

    def up_of(self, v: int) -> list[Pair]:
        return list(self._by_target.get(v, ()))

    @property
    def bridges(self) -> list[Pair]:
        return [k for k, p in self.paths.items() if p is None]

    def dump_jsonl(self, fp: TextIO) -> None:
        g = self.graph
        for (v, e), p in self.paths.items():
            rec = {
                "v": v,
                "e": list(g.endpoints(e)),
                "path": list(p.path) if p is not None else None,
                "new_ending": p.new_ending if p is not None else None,
            }
            fp.write(json.dumps(rec, sort_keys=True) + "\n")


def pcons_all(g: Graph, tree: BfsTree) -> Replacements:
    paths: dict[Pair, ReplacementPath | None] = {}
    failure_dist: dict[int, list[int]] = {}
    for e in sorted(tree.tree_edges):
        view = failure_view(g, tree, e)
        failure_dist[e] = view.dist
        for v in tree.subtree(tree.child_of(e)):
            paths[(v, e)] = _pair_from_view(g, tree, view, v)
    ordered = {k: paths[k] for k in sorted(paths)}
    return Replacements(g, tree, ordered, failure_dist)


def detour_order(tree: BfsTree, pairs: Iterable[Pair]) -> list[Pair]:
    """Same-target pairs sorted by how far the failing edge sits above the target."""
    pairs = list(pairs)
    targets = {v for v, _ in pairs}
    if len(targets) > 1:
        raise ValueError(f"pairs mix targets {sorted(targets)}")
    return sorted(pairs, key=lambda p: tree.edge_distance_from(p[0], p[1]))
