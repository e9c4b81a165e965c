"""Generators for the lower-bound graph families and the forced-edge audit.

Every costly path edge has a fan of bipartite edges that any verified
structure must contain unless the path edge itself is reinforced.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import AuditError, InfeasibleParameters
from .graph import Graph
from .rounding import floor_snap, power
from .verify import VerificationReport, verify_structure


@dataclass(frozen=True)
class CostlyEdge:
    """One path edge together with the fan it forces and the route that forces it."""

    label: tuple[int, ...]  # (copy, position) or (source, block, position), 1-based
    edge: int
    source: int
    z: int
    ladder: tuple[int, ...]  # path vertex, ladder interior, z
    forced: tuple[int, ...]  # edge ids (x, z) for x in the copy's X block
    xs: tuple[int, ...]


@dataclass
class LowerBoundInstance:
    graph: Graph
    sources: tuple[int, ...]
    epsilon: float
    params: dict
    costly: list[CostlyEdge]
    roles: dict = field(default_factory=dict)

    @property
    def pi_edges(self) -> list[int]:
        return [c.edge for c in self.costly]

    @property
    def min_fan(self) -> int:
        return min((len(c.forced) for c in self.costly), default=0)

    @property
    def budget(self) -> int:
        """Reinforcement budget floor(K^eps * n^(1-eps) / 6)."""
        k = len(self.sources)
        n = self.graph.n
        return floor_snap(power(k, self.epsilon) * power(n, 1 - self.epsilon) / 6)

    def designated_path(self, c: CostlyEdge, x: int) -> tuple[int, ...]:
        """The route source -> path start -> ladder -> x that survives the edge's failure."""
        prefix = self._path_prefix(c)
        return prefix + c.ladder[1:] + (x,)

    def _path_prefix(self, c: CostlyEdge) -> tuple[int, ...]:
        pi = tuple(self.roles["paths"][self._copy_key(c)])
        stop = pi.index(c.ladder[0])
        return (c.source,) + pi[: stop + 1]

    def _copy_key(self, c: CostlyEdge) -> str:
        return ",".join(map(str, c.label[:-1]))

    def sidecar(self) -> dict:
        g = self.graph
        return {
            "epsilon": self.epsilon,
            "sources": list(self.sources),
            "params": self.params,
            "roles": self.roles,
            "pi": [
                {
                    "label": list(c.label),
                    "edge": list(g.endpoints(c.edge)),
                    "source": c.source,
                    "z": c.z,
                    "ladder": list(c.ladder),
                    "xs": list(c.xs),
                }
                for c in self.costly
            ],
        }

    def write_sidecar(self, fp: TextIO) -> None:
        json.dump(self.sidecar(), fp, sort_keys=True, indent=1)
        fp.write("\n")


def read_sidecar(fp: TextIO, g: Graph) -> LowerBoundInstance:
    data = json.load(fp)
    costly = []
    for rec in data["pi"]:
        z = rec["z"]
        xs = tuple(rec["xs"])
        eid = g.edge_id(*rec["edge"])
        if eid is None:
            raise ValueError(f"sidecar edge {rec['edge']} is not in the graph")
        forced = tuple(g.edge_id(x, z) for x in xs)
        if None in forced:
            raise ValueError("sidecar fan edge missing from the graph")
        costly.append(CostlyEdge(tuple(rec["label"]), eid, rec["source"], z, tuple(rec["ladder"]), forced, xs))
    return LowerBoundInstance(g, tuple(data["sources"]), data["epsilon"], data["params"], costly, data["roles"])


def ladder_length(d: int, j: int) -> int:
    """Edge count of the j-th ladder path (1-based)."""
    return 6 + 2 * (d - j)


def copy_fixed_size(d: int) -> int:
    """Vertices of one copy besides its X block: the path plus all ladder vertices."""
    return (d + 1) + d * d + 5 * d


def single_source_params(n: int, epsilon: float) -> tuple[int, int, int]:
    """(d, k, total X) for the single-source family."""
    d = floor_snap(power(n, epsilon) / 4)
    k = floor_snap(power(n, 1 - 2 * epsilon))
    return d, k, n - 1 - k * copy_fixed_size(d)


def multi_source_params(n: int, sources: int, epsilon: float) -> tuple[int, int, int]:
    """(d, k, total X) for the multi-source family."""
    d = floor_snap(power(n / (4 * sources), epsilon))
    k = floor_snap(power(n / sources, 1 - 2 * epsilon))
    return d, k, n - sources - k - sources * k * copy_fixed_size(d)


def _feasible(d: int, k: int, x_total: int) -> bool:
    return d >= 1 and k >= 1 and x_total >= k


def is_feasible(n: int, epsilon: float, sources: int | None = None) -> bool:
    if sources is None:
        return _feasible(*single_source_params(n, epsilon))
    return _feasible(*multi_source_params(n, sources, epsilon))


def min_feasible_n(
    epsilon: float, sources: int | None = None, above: int | None = None, cap: int = 10_000_000
) -> int | None:
    """Smallest n (optionally greater than ``above``) whose instance gives every
    copy or block a non-empty X set.

    Feasibility is not monotone in n: d can step up before k does and
    swallow the X budget, so a larger n may be infeasible.
    """
    if sources is None:
        start = max(2, math.floor(4 ** (1 / epsilon)) - 2)
    else:
        start = max(2, 4 * sources)
    if above is not None:
        start = max(start, above + 1)
    for n in range(start, cap + 1):
        if is_feasible(n, epsilon, sources):
            return n
    return None


def _infeasible(message: str, n: int, epsilon: float, sources: int | None) -> InfeasibleParameters:
    nxt = min_feasible_n(epsilon, sources, above=n)
    if nxt is not None:
        message = f"{message}; next feasible n above {n} is {nxt}"
    return InfeasibleParameters(message, min_feasible_n(epsilon, sources))


def _split(total: int, parts: int) -> list[int]:
    """Round-robin distribution of ``total`` into ``parts`` near-equal sizes."""
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def vertices(self, count: int) -> list[int]:
        return [self.vertex() for _ in range(count)]

    def edge(self, u: int, v: int) -> int:
        self.edges.append((u, v))
        return len(self.edges) - 1


def _build_copy(b: _Builder, d: int):
    """Path of d edges plus its d ladders; returns (path, path edge ids, ladders)."""
    path = b.vertices(d + 1)
    path_edges = [b.edge(path[j], path[j + 1]) for j in range(d)]
    ladders = []
    for j in range(1, d + 1):
        t = ladder_length(d, j)
        rest = b.vertices(t)  # t - 1 interior vertices, then z
        walk = [path[j - 1]] + rest
        for a, c in zip(walk, walk[1:]):
            b.edge(a, c)
        ladders.append(tuple(walk))
    return path, path_edges, ladders


def gen_single_source(n: int, epsilon: float) -> LowerBoundInstance:
    if not 0 < epsilon < 0.5:
        raise InfeasibleParameters("single-source epsilon must lie in (0,1/2)")
    d, k, x_total = single_source_params(n, epsilon)
    if not _feasible(d, k, x_total):
        raise _infeasible(f"n={n}, epsilon={epsilon} gives d={d}, k={k}, |X| total={x_total}", n, epsilon, None)
    b = _Builder()
    s = b.vertex()
    x_sizes = _split(x_total, k)
    costly = []
    roles: dict = {"paths": {}, "x": {}, "z": {}, "ladders": {}, "terminal": {}}
    for i in range(1, k + 1):
        path, path_edges, ladders = _build_copy(b, d)
        b.edge(s, path[0])
        xs = b.vertices(x_sizes[i - 1])
        star = path[-1]
        for x in xs:
            b.edge(star, x)
        zs = [lad[-1] for lad in ladders]
        fans = {z: [b.edge(x, z) for x in xs] for z in zs}
        key = str(i)
        roles["paths"][key] = path
        roles["x"][key] = xs
        roles["z"][key] = zs
        roles["ladders"][key] = [list(lad) for lad in ladders]
        roles["terminal"][key] = star
        for j in range(1, d + 1):
            z = zs[j - 1]
            costly.append(CostlyEdge((i, j), path_edges[j - 1], s, z, ladders[j - 1], tuple(fans[z]), tuple(xs)))
    g = Graph(b.n, b.edges)
    assert g.n == n, (g.n, n)
    params = {"d": d, "k": k, "x_sizes": x_sizes, "ladder_lengths": [ladder_length(d, j) for j in range(1, d + 1)],
              "q_size": d * d + 5 * d, "sources": 1}
    return LowerBoundInstance(g, (s,), epsilon, params, costly, roles)


def gen_multi_source(n: int, sources: int, epsilon: float) -> LowerBoundInstance:
    if not 0 < epsilon <= 0.5:
        raise InfeasibleParameters("multi-source epsilon must lie in (0,1/2]")
    if not 1 <= sources <= n:
        raise InfeasibleParameters(f"source count {sources} must lie in [1, {n}]")
    d, k, x_total = multi_source_params(n, sources, epsilon)
    if not _feasible(d, k, x_total):
        raise _infeasible(
            f"n={n}, K={sources}, epsilon={epsilon} gives d={d}, k={k}, |X| total={x_total}", n, epsilon, sources
        )
    b = _Builder()
    srcs = b.vertices(sources)
    x_sizes = _split(x_total, k)
    costly = []
    roles: dict = {"paths": {}, "x": {}, "z": {}, "ladders": {}, "terminal": {}, "relay": {}}
    for j in range(1, k + 1):
        relay = b.vertex()
        xs = b.vertices(x_sizes[j - 1])
        for x in xs:
            b.edge(relay, x)
        roles["relay"][str(j)] = relay
        roles["x"][str(j)] = xs
        for i in range(1, sources + 1):
            path, path_edges, ladders = _build_copy(b, d)
            b.edge(srcs[i - 1], path[0])
            b.edge(relay, path[-1])
            zs = [lad[-1] for lad in ladders]
            key = f"{i},{j}"
            roles["paths"][key] = path
            roles["z"][key] = zs
            roles["ladders"][key] = [list(lad) for lad in ladders]
            roles["terminal"][key] = path[-1]
            for ell in range(1, d + 1):
                z = zs[ell - 1]
                fan = tuple(b.edge(x, z) for x in xs)
                costly.append(CostlyEdge((i, j, ell), path_edges[ell - 1], srcs[i - 1], z, ladders[ell - 1], fan, tuple(xs)))
    g = Graph(b.n, b.edges)
    assert g.n == n, (g.n, n)
    params = {"d": d, "k": k, "x_sizes": x_sizes, "ladder_lengths": [ladder_length(d, j) for j in range(1, d + 1)],
              "q_size": d * d + 5 * d, "sources": sources}
    return LowerBoundInstance(g, tuple(srcs), epsilon, params, costly, roles)


@dataclass
class AuditReport:
    unreinforced: int
    floor: int  # |Pi minus E'| times the smallest fan
    backup: int  # |H minus E'|
    budget: int
    within_budget: bool
    verification: VerificationReport

    @property
    def meets_floor(self) -> bool:
        return self.backup >= self.floor


def audit_lb(
    inst: LowerBoundInstance,
    h: Iterable[int],
    reinforced: Iterable[int],
    *,
    report: VerificationReport | None = None,
    workers: int = 1,
) -> AuditReport:
    """Check that every unreinforced costly edge has its whole fan inside H."""
    h = frozenset(h)
    reinforced = frozenset(reinforced)
    if report is None:
        report = verify_structure(inst.graph, inst.sources, h, reinforced, workers=workers)
    if not report.ok or report.partial:
        raise ValueError("audit needs a structure that passed full verification")
    open_edges = [c for c in inst.costly if c.edge not in reinforced]
    for c in open_edges:
        missing = [e for e in c.forced if e not in h]
        if missing:
            raise AuditError(
                f"costly edge {c.label} is unreinforced but {len(missing)} of its forced edges are absent"
            )
    floor = len(open_edges) * inst.min_fan
    return AuditReport(
        len(open_edges), floor, len(h - reinforced), inst.budget, len(reinforced) <= inst.budget, report
    )
