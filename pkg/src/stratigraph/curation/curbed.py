"""Curbed recency-proportional resolution.

Given a hard cap ``c`` on retained items, the record runs the densest
RPR resolution whose size ceiling still fits under ``c``.  The ceiling
grows monotonically with depth, so the active resolution only ever steps
down, and because RPR sets are nested in ``r`` each step down is
self-consistent.  Once even ``r = 0`` no longer fits, the record hands
over to GSNR with ``a = (c - 2) // 6`` levels (at most ``6a + 2 <= c``
items), intersected with the last RPR record so that no discarded rank
is ever resurrected.

Everything is a function of ``(c, n)``: the handover depth is located by
an exponential-then-binary search over the monotone ceiling.
"""

from __future__ import annotations

from functools import lru_cache

from . import geometric, recency


def gsnr_levels(c: int) -> int:
    return (c - 2) // 6


@lru_cache(maxsize=1 << 12)
def active_resolution(c: int, n: int) -> int | None:
    """Densest RPR resolution in force at depth ``n``; None once past handover."""
    if recency.count_ceiling(0, n) > c:
        return None
    lo, hi = 0, c
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if recency.count_ceiling(mid, n) <= c:
            lo = mid
        else:
            hi = mid - 1
    return lo


@lru_cache(maxsize=None)
def handover_depth(c: int) -> int:
    """Last depth governed by RPR (the ceiling for r=0 first exceeds c after it)."""
    hi = 1
    while recency.count_ceiling(0, hi) <= c:
        hi *= 2
    lo = hi // 2  # ceiling(0, lo) <= c
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if recency.count_ceiling(0, mid) <= c:
            lo = mid
        else:
            hi = mid
    return lo


@lru_cache(maxsize=64)
def _handover_record(c: int) -> frozenset[int]:
    last = handover_depth(c)
    return frozenset(recency.retained(active_resolution(c, last), last))


def retained(c: int, n: int) -> list[int]:
    if n == 0:
        return []
    r = active_resolution(c, n)
    if r is not None:
        return recency.retained(r, n)
    last = handover_depth(c)
    keep = _handover_record(c)
    return [t for t in geometric.retained(gsnr_levels(c), n) if t >= last or t in keep]


def predicate(c: int, rank: int, n: int) -> bool:
    r = active_resolution(c, n)
    if r is not None:
        return recency.predicate(r, rank, n)
    last = handover_depth(c)
    if rank < last and not recency.predicate(active_resolution(c, last), rank, last):
        return False
    return geometric.predicate(gsnr_levels(c), rank, n)


def gap_bound(c: int, rank: int, n: int) -> int:
    r = active_resolution(c, n)
    if r is not None:
        return recency.gap_bound(r, rank, n)
    # past handover the only guarantee is the trivial one
    return max(n - rank, 1)
