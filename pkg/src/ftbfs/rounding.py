"""Reproducible integer rounding of real powers such as n**eps."""
from __future__ import annotations

import math

SNAP = 1e-9


def snap(x: float) -> float:
    """Pull ``x`` onto the nearest integer when it is within 1e-9 of it."""
    r = round(x)
    return float(r) if abs(x - r) < SNAP else x


def ceil_snap(x: float) -> int:
    return math.ceil(snap(x))


def floor_snap(x: float) -> int:
    return math.floor(snap(x))


def power(n: float, eps: float) -> float:
    if n <= 0:
        raise ValueError("base must be positive")
    return math.exp(eps * math.log(n))


def ceil_pow(n: float, eps: float) -> int:
    """ceil(n**eps) with the snap guard."""
    return ceil_snap(power(n, eps))


def floor_pow(n: float, eps: float) -> int:
    return floor_snap(power(n, eps))


def ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length())
