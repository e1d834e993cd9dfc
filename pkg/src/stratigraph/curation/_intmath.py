"""Exact integer helpers shared by the policy algorithms.

Everything here stays in integer arithmetic; the policies depend on
monotone, exactly reproducible quantities and must never round through
floating point.
"""

from __future__ import annotations


def bit_floor(x: int) -> int:
    """Largest power of two <= ``x``; 0 for ``x == 0``."""
    if x < 0:
        raise ValueError(f"bit_floor of negative value {x}")
    return 1 << (x.bit_length() - 1) if x else 0


def floor_log2(x: int) -> int:
    if x <= 0:
        raise ValueError(f"floor_log2 requires positive input, got {x}")
    return x.bit_length() - 1


def iroot_floor(x: int, k: int) -> int:
    """Largest integer ``y`` with ``y ** k <= x``."""
    if x < 0 or k < 1:
        raise ValueError(f"iroot_floor({x}, {k}) undefined")
    if x < 2 or k == 1:
        return x
    # initial guess from the bit length is always >= the true root
    hi = 1 << -(-x.bit_length() // k)
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


def iroot_ceil(x: int, k: int) -> int:
    """Smallest integer ``y`` with ``y ** k >= x``."""
    y = iroot_floor(x, k)
    return y if y ** k == x else y + 1


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
