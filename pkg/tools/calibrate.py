"""Calibrate the reinforcement and size envelope constants.

Runs the construction on the calibration corpus (seeded random graphs plus
the comb family, whose ladders force reinforced edges) and prints the largest
observed ratio against each envelope, rounded up to four significant digits.
The acceptance suite freezes the printed values.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from ftbfs.construction import build_eps_ftbfs, prepare, reinforcement_envelope, size_envelope
from ftbfs.generators import corpus
from ftbfs.graph import Graph

CALIBRATION_SEED = 99_001
CALIBRATION_COUNT = 200
EPSILONS = (0.2, 0.34)
COMBS = [(d, t) for d in (3, 5, 8, 12, 20) for t in (1, 3, 6)]


def comb(d: int, targets: int) -> Graph:
    """Path of d edges, shrinking ladders to hubs z_j, and targets joined to every hub."""
    edges = [(j, j + 1) for j in range(d)]
    n = d + 1
    zs = []
    for j in range(1, d + 1):
        prev = j - 1
        for _ in range(6 + 2 * (d - j)):
            edges.append((prev, n))
            prev = n
            n += 1
        zs.append(prev)
    for _ in range(targets):
        x = n
        n += 1
        edges.append((d, x))
        edges.extend((x, z) for z in zs)
    return Graph(n, edges)


def calibration_graphs(count: int = CALIBRATION_COUNT, seed: int = CALIBRATION_SEED) -> list[tuple[str, Graph]]:
    graphs = corpus(count, seed)
    graphs += [(f"comb-d{d}-t{t}", comb(d, t)) for d, t in COMBS]
    return graphs


def ceil_sig(x: float, digits: int = 4) -> float:
    if x <= 0:
        return 0.0
    scale = 10 ** (digits - 1 - math.floor(math.log10(x)))
    return math.ceil(x * scale) / scale


def calibrate(graphs) -> tuple[float, float]:
    c_r = c_b = 0.0
    for _, g in graphs:
        prepared = prepare(g, 0)
        for eps in EPSILONS:
            st = build_eps_ftbfs(g, 0, eps, prepared=prepared)
            c_r = max(c_r, st.r / reinforcement_envelope(g.n, eps))
            c_b = max(c_b, len(st.edges) / size_envelope(g.n, eps))
    return c_r, c_b


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=CALIBRATION_COUNT)
    parser.add_argument("--seed", type=int, default=CALIBRATION_SEED)
    args = parser.parse_args(argv)
    c_r, c_b = calibrate(calibration_graphs(args.count, args.seed))
    print(f"raw C_r={c_r!r} C_b={c_b!r}")
    print(f"C_R = {ceil_sig(c_r)}")
    print(f"C_B = {ceil_sig(c_b)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
