"""Geometric sequence nth root.

The record keeps ``a + 1`` target ages ``n**(x/a)`` for ``x = 0..a``.  For
each target a small set of ranks is held: multiples of a power-of-two
cadence at or after a backstop placed 1.5 target-ages behind the newest
rank.  All fractional powers are evaluated with exact integer roots.
"""

from __future__ import annotations

from functools import lru_cache

from ._intmath import bit_floor, iroot_ceil, iroot_floor


@lru_cache(maxsize=1 << 12)
def target_params(a: int, x: int, n: int) -> tuple[int, int]:
    """Return ``(cadence, backstop)`` for target ``x`` at depth ``n``."""
    # floor(log2(y / 2)) only depends on floor(y) because powers of two are integral
    root = iroot_floor(n ** x, a)
    cadence = max(bit_floor(root) >> 1, 1)
    # ceil(3y / 2) == ceil(ceil(3y) / 2) with 3y == (3**a * n**x) ** (1/a)
    reach = -(-iroot_ceil(3 ** a * n ** x, a) // 2)
    floor_ = max(n - reach, 0)
    backstop = floor_ + (-floor_ % cadence)
    return cadence, backstop


def target_ranks(a: int, x: int, n: int) -> range:
    cadence, backstop = target_params(a, x, n)
    return range(backstop, n, cadence)


def retained(a: int, n: int) -> list[int]:
    if n == 0:
        return []
    ranks: set[int] = set()
    for x in range(a + 1):
        ranks.update(target_ranks(a, x, n))
    return sorted(ranks)


def predicate(a: int, rank: int, n: int) -> bool:
    for x in range(a + 1):
        cadence, backstop = target_params(a, x, n)
        if rank >= backstop and rank % cadence == 0:
            return True
    return False


def gap_bound(a: int, rank: int, n: int) -> int:
    return iroot_ceil(n, a) * max(n - rank, 1)
