"""Graph representation, tie-broken shortest paths and the BFS tree T0.

Edge ids are the 0-based input order.  Edge ``i`` carries the symbolic weight
``(1 hop, 2**i)``; path weights are compared as ``(hops, perturbation)`` with
exact integers, so the minimum path is unique in every subgraph.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence, TextIO

INF = -1  # sentinel for "unreachable" in hop-distance arrays


class GraphFormatError(ValueError):
    """Malformed graph file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Immutable undirected simple graph with stable edge ids."""

    __slots__ = ("n", "edges", "adj", "_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        norm: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {eid} ({u}, {v}) has a vertex outside [0, {n})")
            if u == v:
                raise ValueError(f"edge {eid} is a self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in index:
                raise ValueError(f"edge {eid} duplicates edge {index[key]} {key}")
            index[key] = eid
            norm.append((u, v))
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        self.adj: tuple[tuple[tuple[int, int], ...], ...] = tuple(tuple(a) for a in adj)
        self._index = index

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int | None:
        return self._index.get((u, v) if u < v else (v, u))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v = self.edges[eid]
        return (u, v) if u < v else (v, u)

    def path_edges(self, path: Sequence[int]) -> list[int]:
        """Edge ids along a vertex sequence; raises if two consecutive vertices are not adjacent."""
        out = []
        for a, b in zip(path, path[1:]):
            eid = self.edge_id(a, b)
            if eid is None:
                raise ValueError(f"({a}, {b}) is not an edge")
            out.append(eid)
        return out

    def subgraph_edges(self, eids: Iterable[int]) -> "Graph":
        """Same vertex set, only the given edges (ids are renumbered in ascending order)."""
        return Graph(self.n, [self.edges[e] for e in sorted(set(eids))])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def parse_graph(stream: TextIO | Iterable[str]) -> Graph:
    """Read the ``p <n> <m>`` / ``e <u> <v>`` text format."""
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "p" or len(parts) != 3:
                raise GraphFormatError("expected header 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("header counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("header counts must be non-negative", lineno)
            continue
        if parts[0] != "e" or len(parts) != 3:
            raise GraphFormatError("expected edge line 'e <u> <v>'", lineno)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range [0, {n})", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v}), first seen at line {seen[key]}", lineno)
        if len(edges) == m:
            raise GraphFormatError(f"more than {m} edge lines", lineno)
        seen[key] = lineno
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("missing header 'p <n> <m>'")
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def bfs_distances(
    g: Graph,
    s: int,
    removed_vertices: frozenset[int] | set[int] = frozenset(),
    removed_edges: frozenset[int] | set[int] = frozenset(),
    target: int | None = None,
) -> list[int]:
    """Plain hop distances from ``s`` in the masked view; ``INF`` marks unreachable.

    With ``target`` set, the search stops once the target is settled (other
    entries may then be incomplete).
    """
    dist = [INF] * g.n
    if s in removed_vertices:
        return dist
    dist[s] = 0
    queue = deque([s])
    adj = g.adj
    while queue:
        u = queue.popleft()
        if u == target:
            break
        du = dist[u] + 1
        for w, eid in adj[u]:
            if dist[w] == INF and eid not in removed_edges and w not in removed_vertices:
                dist[w] = du
                queue.append(w)
    return dist


def _weighted_sp_tree(
    g: Graph,
    s: int,
    removed_vertices: frozenset[int] | set[int],
    removed_edges: frozenset[int] | set[int],
    target: int | None = None,
) -> tuple[list[int], list[int], list[int]]:
    """Hop distance, perturbation and parent edge of the unique W-shortest paths.

    Works layer by layer: a vertex's W-shortest path is the best W-shortest
    path to a predecessor one layer up plus the connecting edge.
    """
    dist = bfs_distances(g, s, removed_vertices, removed_edges)
    pert = [0] * g.n
    parent_edge = [-1] * g.n
    if dist[s] == INF:
        return dist, pert, parent_edge
    order = sorted((v for v in range(g.n) if dist[v] != INF), key=dist.__getitem__)
    limit = dist[target] if target is not None and dist[target] != INF else None
    adj = g.adj
    for v in order:
        dv = dist[v]
        if dv == 0:
            continue
        if limit is not None and dv > limit:
            break
        best = None
        best_e = -1
        for u, eid in adj[v]:
            if dist[u] == dv - 1 and eid not in removed_edges:
                cand = pert[u] + (1 << eid)
                if best is None or cand < best:
                    best, best_e = cand, eid
        pert[v] = best
        parent_edge[v] = best_e
    return dist, pert, parent_edge


def _trace(g: Graph, parent_edge: Sequence[int], s: int, v: int) -> tuple[int, ...]:
    path = [v]
    while v != s:
        a, b = g.edges[parent_edge[v]]
        v = a if b == v else b
        path.append(v)
    path.reverse()
    return tuple(path)


def shortest_path(
    g: Graph,
    s: int,
    v: int,
    removed_vertices: frozenset[int] | set[int] = frozenset(),
    removed_edges: frozenset[int] | set[int] = frozenset(),
) -> tuple[int, ...] | None:
    """The unique W-shortest s-v path in the masked view, or ``None`` if unreachable."""
    if not (0 <= s < g.n and 0 <= v < g.n):
        raise ValueError("vertex out of range")
    if s in removed_vertices or v in removed_vertices:
        return None
    if s == v:
        return (s,)
    dist, _, parent_edge = _weighted_sp_tree(g, s, removed_vertices, removed_edges, target=v)
    if dist[v] == INF:
        return None
    return _trace(g, parent_edge, s, v)


def path_perturbation(g: Graph, path: Sequence[int]) -> int:
    return sum(1 << e for e in g.path_edges(path))


class BfsTree:
    """T0: union of the unique W-shortest paths from ``source``.

    Tree edges are oriented (shallow, deep).  Unreachable vertices have
    ``depth == INF`` and no parent.
    """

    def __init__(self, g: Graph, source: int):
        if not 0 <= source < g.n:
            raise ValueError(f"source {source} out of range")
        self.graph = g
        self.source = source
        dist, pert, parent_edge = _weighted_sp_tree(g, source, frozenset(), frozenset())
        self.depth: list[int] = dist
        self.perturbation: list[int] = pert
        self.parent_edge: list[int] = parent_edge
        self.parent: list[int] = [-1] * g.n
        self.children: list[list[int]] = [[] for _ in range(g.n)]
        for v in range(g.n):
            eid = parent_edge[v]
            if eid >= 0:
                a, b = g.edges[eid]
                p = a if b == v else b
                self.parent[v] = p
        for v in range(g.n):
            if self.parent[v] >= 0:
                self.children[self.parent[v]].append(v)
        for c in self.children:
            c.sort()
        self.tree_edges: frozenset[int] = frozenset(e for e in parent_edge if e >= 0)
        # child endpoint of every tree edge
        self._child_of: dict[int, int] = {parent_edge[v]: v for v in range(g.n) if parent_edge[v] >= 0}
        self._euler()
        self._build_lifting()

    def _euler(self) -> None:
        n = self.graph.n
        self.tin = [-1] * n
        self.tout = [-1] * n
        self.preorder: list[int] = []
        clock = 0
        stack = [(self.source, False)]
        while stack:
            v, done = stack.pop()
            if done:
                self.tout[v] = clock
                continue
            self.tin[v] = clock
            clock += 1
            self.preorder.append(v)
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))

    def _build_lifting(self) -> None:
        n = self.graph.n
        levels = max(1, (max(self.depth) if n else 0).bit_length())
        up = [[p if p >= 0 else v for v, p in enumerate(self.parent)]]
        for _ in range(1, levels):
            prev = up[-1]
            up.append([prev[prev[v]] for v in range(n)])
        self._up = up

    # -- queries -----------------------------------------------------------
    def reachable(self, v: int) -> bool:
        return self.depth[v] != INF

    def is_tree_edge(self, eid: int) -> bool:
        return eid in self.tree_edges

    def child_of(self, eid: int) -> int:
        """Deep endpoint of a tree edge."""
        try:
            return self._child_of[eid]
        except KeyError:
            raise ValueError(f"edge {eid} is not a tree edge") from None

    def orient(self, eid: int) -> tuple[int, int]:
        c = self.child_of(eid)
        return self.parent[c], c

    def is_ancestor(self, a: int, b: int) -> bool:
        """True if ``a`` lies on the tree path from the source to ``b`` (a == b counts)."""
        return self.tin[a] <= self.tin[b] and self.tout[b] <= self.tout[a]

    def subtree(self, v: int) -> list[int]:
        lo, hi = self.tin[v], self.tout[v]
        return self.preorder[lo:hi]

    def subtree_size(self, v: int) -> int:
        return self.tout[v] - self.tin[v]

    def path_to(self, v: int) -> tuple[int, ...]:
        """pi(s, v) as a vertex sequence from the source."""
        if not self.reachable(v):
            raise ValueError(f"vertex {v} is unreachable from {self.source}")
        out = [v]
        while v != self.source:
            v = self.parent[v]
            out.append(v)
        out.reverse()
        return tuple(out)

    def ancestor_at_depth(self, v: int, d: int) -> int:
        k = self.depth[v] - d
        if k < 0:
            raise ValueError("target depth below vertex")
        i = 0
        while k:
            if k & 1:
                v = self._up[i][v]
            k >>= 1
            i += 1
        return v

    def lca(self, u: int, v: int) -> int:
        if not (self.reachable(u) and self.reachable(v)):
            raise ValueError(f"lca of unreachable vertex ({u}, {v})")
        if self.depth[u] < self.depth[v]:
            u, v = v, u
        u = self.ancestor_at_depth(u, self.depth[v])
        if u == v:
            return u
        for row in reversed(self._up):
            if row[u] != row[v]:
                u, v = row[u], row[v]
        return self.parent[u]

    def related(self, e1: int, e2: int) -> bool:
        """The ``~`` relation: both tree edges lie on one root-to-vertex path."""
        b = self.child_of(e1)
        d = self.child_of(e2)
        return self.is_ancestor(b, d) or self.is_ancestor(d, b)

    def edge_distance_from(self, v: int, eid: int) -> int:
        """Edges from the upper endpoint of ``eid`` down to ``v`` along pi(s, v)."""
        c = self.child_of(eid)
        if not self.is_ancestor(c, v):
            raise ValueError(f"edge {eid} is not on pi(s, {v})")
        return self.depth[v] - self.depth[c] + 1


def build_bfs_tree(g: Graph, s: int) -> BfsTree:
    return BfsTree(g, s)


def lca(tree: BfsTree, u: int, v: int) -> int:
    return tree.lca(u, v)


def related(tree: BfsTree, e1: int, e2: int) -> bool:
    return tree.related(e1, e2)

