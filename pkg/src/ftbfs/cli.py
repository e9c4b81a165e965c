"""Command-line front end: build, verify, gen-lb, audit and sweep."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

from .construction import FtBfsStructure, build_eps_ftbfs, k_eps, prepare
from .errors import AuditError, InfeasibleParameters, InvariantError
from .graph import Graph, GraphFormatError, format_graph, parse_graph
from .interference import write_census
from .lowerbound import audit_lb, gen_multi_source, gen_single_source, read_sidecar
from .verify import verify_structure

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _epsilon(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"bad epsilon {text!r}") from None
    if not 0 < value <= 1:
        raise UsageError("epsilon must lie in (0,1]")
    return value


def _read_graph(path: str) -> Graph:
    try:
        with open(path) as fp:
            return parse_graph(fp)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write_json(path: str, data) -> None:
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")


def _workers(args) -> int:
    return max(1, args.threads or os.cpu_count() or 1)


def _check_source(g: Graph, s: int) -> None:
    if not 0 <= s < g.n:
        raise UsageError(f"source {s} out of range [0, {g.n})")


def cmd_build(args) -> int:
    eps = _epsilon(args.epsilon)
    g = _read_graph(args.graph)
    _check_source(g, args.source)
    prepared = None
    if args.dump:
        prepared = prepare(g, args.source)
    st = build_eps_ftbfs(
        g, args.source, eps,
        baseline=args.baseline,
        force_eps_machinery=args.force_eps_machinery,
        prepared=prepared,
        timing=args.timing,
    )
    _write_json(args.out, st.to_json(g))
    if args.dump:
        _dump(args.dump, prepared, st)
    wall = st.stats.get("wall_ms")
    extra = f" wall_ms={wall}" if wall is not None else ""
    print(f"b={st.b} r={st.r} k_eps={st.stats['k_eps']} route={st.stats['route']}{extra}")
    return EXIT_OK


def _dump(prefix: str, prepared, st: FtBfsStructure) -> None:
    with open(f"{prefix}.replacements.jsonl", "w") as fp:
        prepared.repl.dump_jsonl(fp)
    with open(f"{prefix}.decomposition.txt", "w") as fp:
        prepared.td.dump(fp, prepared.tree)
    with open(f"{prefix}.census.jsonl", "w") as fp:
        for row in st.stats.get("s1_census", ()):
            write_census(fp, *row)


def _read_structure(path: str, g: Graph) -> FtBfsStructure:
    try:
        data = json.loads(Path(path).read_text())
        return FtBfsStructure.from_json(data, g)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _parse_sources(text: str | None, default: int, g: Graph) -> list[int]:
    if text is None:
        return [default]
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad source list {text!r}") from None
    if not out:
        raise UsageError("empty source list")
    for s in out:
        _check_source(g, s)
    return out


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    st = _read_structure(args.structure, g)
    sources = _parse_sources(args.sources, st.source, g)
    if args.sample is not None and not 0 < args.sample <= 1:
        raise UsageError("--sample must lie in (0,1]")
    report = verify_structure(
        g, sources, st.edges, st.reinforced, sample=args.sample, seed=args.seed, workers=_workers(args)
    )
    if report.partial:
        print(f"PARTIAL: checked {report.edges_checked} sampled failures (fraction {args.sample})")
    for v in report.violations:
        print(json.dumps(v.to_json(g), sort_keys=True))
    print(f"ok={str(report.ok).lower()} violations={len(report.violations)} checked={report.edges_checked}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_gen_lb(args) -> int:
    try:
        eps = float(args.epsilon)
    except ValueError:
        raise UsageError(f"bad epsilon {args.epsilon!r}") from None
    try:
        if args.sources and args.sources > 1:
            inst = gen_multi_source(args.n, args.sources, eps)
        else:
            inst = gen_single_source(args.n, eps)
    except InfeasibleParameters as exc:
        raise UsageError(str(exc)) from None
    Path(f"{args.out}.graph").write_text(format_graph(inst.graph))
    with open(f"{args.out}.json", "w") as fp:
        inst.write_sidecar(fp)
    p = inst.params
    fans = sorted(set(p["x_sizes"]))
    print(f"d={p['d']} k={p['k']} |Pi|={len(inst.costly)} fan={fans[0]}..{fans[-1]} n={inst.graph.n} m={inst.graph.m}")
    return EXIT_OK


def cmd_audit(args) -> int:
    g = _read_graph(args.graph)
    try:
        with open(args.sidecar) as fp:
            inst = read_sidecar(fp, g)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"{args.sidecar}: {exc}") from None
    st = _read_structure(args.structure, g)
    report = verify_structure(g, inst.sources, st.edges, st.reinforced, workers=_workers(args))
    if not report.ok:
        for v in report.violations:
            print(json.dumps(v.to_json(g), sort_keys=True))
        print("audit skipped: structure fails verification")
        return EXIT_VERIFY
    try:
        audit = audit_lb(inst, st.edges, st.reinforced, report=report)
    except AuditError as exc:
        print(f"audit failed: {exc}")
        return EXIT_INTERNAL
    print(
        f"unreinforced={audit.unreinforced} floor={audit.floor} backup={audit.backup} "
        f"budget={audit.budget} within_budget={str(audit.within_budget).lower()}"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    items = [t for t in args.epsilons.split(",") if t.strip()]
    if not items:
        raise UsageError("empty epsilon list")
    epsilons = [_epsilon(t) for t in items]
    g = _read_graph(args.graph)
    _check_source(g, args.source)
    prepared = prepare(g, args.source)
    rows = []
    for eps in epsilons:
        start = time.perf_counter()
        st = build_eps_ftbfs(g, args.source, eps, prepared=prepared, timing=args.timing)
        report = verify_structure(g, [args.source], st.edges, st.reinforced, workers=_workers(args))
        if not report.ok:
            print(f"epsilon={eps}: structure failed verification with {len(report.violations)} violations",
                  file=sys.stderr)
            return EXIT_INTERNAL
        wall = round((time.perf_counter() - start) * 1000, 3) if args.timing else ""
        cost = args.costB * st.b + args.costR * st.r
        rows.append([f"{eps:g}", st.b, st.r, k_eps(eps), wall, f"{cost:g}"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epsilon", "b", "r", "k_eps", "wall_ms", "cost"])
    writer.writerows(rows)
    Path(args.csv).write_text(buf.getvalue())
    best = min(rows, key=lambda r: float(r[5]))
    print(f"rows={len(rows)} best_epsilon={best[0]} best_cost={best[5]}")
    if args.costR > args.costB > 0 and g.n > 1:
        print(f"informational eps_star~{math.log(args.costR / args.costB) / math.log(g.n):.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftbfs", description="Fault-tolerant BFS structures with reinforcement.")
    parser.add_argument("--threads", type=int, default=None, help="worker cap (default: all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a backup/reinforced structure")
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--baseline", action="store_true", help="T0 plus every uncovered last edge")
    p.add_argument("--force-eps-machinery", action="store_true", help="run the phases even for epsilon >= 1/2")
    p.add_argument("--out", required=True)
    p.add_argument("--timing", action="store_true", help="record wall time in the output")
    p.add_argument("--dump", metavar="PREFIX", help="write replacement paths, decomposition and census")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check a structure by brute force")
    p.add_argument("--graph", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--sources", help="comma-separated source list")
    p.add_argument("--sample", type=float, help="verify a random fraction of failures")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-lb", help="generate a lower-bound instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--sources", type=int, default=1)
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_gen_lb)

    p = sub.add_parser("audit", help="check forced-edge containment on a lower-bound instance")
    p.add_argument("--graph", required=True)
    p.add_argument("--sidecar", required=True)
    p.add_argument("--structure", required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", help="build and verify across several epsilons")
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--epsilons", required=True, help="comma-separated list")
    p.add_argument("--costB", type=float, default=1.0)
    p.add_argument("--costR", type=float, default=1.0)
    p.add_argument("--csv", required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
