"""Heavy-path decomposition of T0 and exponential segmentation of pi(s, v)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

from .graph import BfsTree


@dataclass(frozen=True)
class HeavyPath:
    vertices: tuple[int, ...]  # top (shallow) to bottom
    level: int
    glue_edge: int | None  # tree edge attaching the path's top to its parent path
    input_size: int  # vertex count of the subtree the recursion call received

    @property
    def top(self) -> int:
        return self.vertices[0]

    @property
    def bottom(self) -> int:
        return self.vertices[-1]


@dataclass
class TreeDecomposition:
    paths: list[HeavyPath]
    path_of: list[int]  # vertex -> index into paths, -1 if unreachable
    glue_edges: frozenset[int]
    covered_edges: frozenset[int]

    @property
    def max_level(self) -> int:
        return max((p.level for p in self.paths), default=0)

    def hanging_subtrees(self, tree: BfsTree) -> list[tuple[int, int, int]]:
        """(path index, hanging-root, size) for every subtree glued below a path."""
        out = []
        for idx, p in enumerate(self.paths):
            on_path = set(p.vertices)
            for u in p.vertices:
                for c in tree.children[u]:
                    if c not in on_path:
                        out.append((idx, c, tree.subtree_size(c)))
        return out

    def dump(self, fp: TextIO, tree: BfsTree) -> None:
        for p in self.paths:
            fp.write(f"psi {p.level} {' '.join(map(str, p.vertices))}\n")
        for eid in sorted(self.glue_edges):
            u, v = tree.orient(eid)
            fp.write(f"glue {u} {v}\n")


def heavy_path_decompose(tree: BfsTree) -> TreeDecomposition:
    """Recursive heavy-path split; heavy-child ties go to the smaller vertex id."""
    n = tree.graph.n
    path_of = [-1] * n
    paths: list[HeavyPath] = []
    glue: set[int] = set()
    covered: set[int] = set()
    stack = [(tree.source, 0, None)]
    while stack:
        root, level, glue_edge = stack.pop()
        verts = [root]
        v = root
        while tree.children[v]:
            v = max(tree.children[v], key=lambda c: (tree.subtree_size(c), -c))
            covered.add(tree.parent_edge[v])
            verts.append(v)
        idx = len(paths)
        paths.append(HeavyPath(tuple(verts), level, glue_edge, tree.subtree_size(root)))
        on_path = set(verts)
        hanging = []
        for u in verts:
            path_of[u] = idx
            for c in tree.children[u]:
                if c not in on_path:
                    glue.add(tree.parent_edge[c])
                    hanging.append((c, level + 1, tree.parent_edge[c]))
        stack.extend(reversed(hanging))
    return TreeDecomposition(paths, path_of, frozenset(glue), frozenset(covered))


def tree_path_intersections(td: TreeDecomposition, tree: BfsTree, v: int) -> tuple[list[int], list[int]]:
    """Glue edges on pi(s, v) and the decomposition paths sharing a vertex with it."""
    pi = tree.path_to(v)
    glue = [tree.parent_edge[u] for u in pi[1:] if tree.parent_edge[u] in td.glue_edges]
    seen: list[int] = []
    for u in pi:
        idx = td.path_of[u]
        if not seen or seen[-1] != idx:
            seen.append(idx)
    return glue, seen


@dataclass(frozen=True)
class SegmentDecomposition:
    """Segments of a path of ``length`` edges, as half-open edge-offset ranges."""

    length: int
    bounds: tuple[int, ...]  # 0 = b_0 < b_1 < ... < b_k' = length

    @property
    def k(self) -> int:
        return len(self.bounds) - 1

    @property
    def segments(self) -> list[tuple[int, int]]:
        return list(zip(self.bounds, self.bounds[1:]))

    def lengths(self) -> list[int]:
        return [b - a for a, b in self.segments]

    def segment_of(self, offset: int) -> int:
        """Index of the segment holding edge ``offset`` (edge between pi[offset] and pi[offset+1])."""
        for j, (a, b) in enumerate(self.segments):
            if a <= offset < b:
                return j
        raise ValueError(f"edge offset {offset} outside path of length {self.length}")


def raw_boundaries(length: int) -> list[int]:
    """Cumulative-ceiling boundaries ceil(sum_{l<=j} length/2^l), j = 1..floor(log2 length)."""
    k = length.bit_length() - 1
    return [length - (length >> j) for j in range(1, k + 1)]


def segment_decompose(length: int) -> SegmentDecomposition:
    """Split a path of ``length`` edges into halving segments.

    The trailing edge left past the last boundary is merged into the last segment.
    """
    if length < 1:
        raise ValueError("cannot segment an empty path")
    raw = raw_boundaries(length)
    bounds = [0] + raw
    if len(bounds) == 1:
        bounds.append(length)
    else:
        bounds[-1] = length
    return SegmentDecomposition(length, tuple(bounds))


def upper_lower_intersect(
    seg: SegmentDecomposition, pi: tuple[int, ...], psi_index: int, td: TreeDecomposition
) -> tuple[int | None, int | None]:
    """Indices of the first and last segments that partially overlap path ``psi_index``.

    Overlap is counted in edges; an edge of pi lies on psi iff both endpoints do.
    """
    partial = []
    path_of = td.path_of
    for j, (a, b) in enumerate(seg.segments):
        inside = sum(
            1 for t in range(a, b) if path_of[pi[t]] == psi_index and path_of[pi[t + 1]] == psi_index
        )
        if 0 < inside < b - a:
            partial.append(j)
    if not partial:
        return None, None
    return partial[0], partial[-1]
