"""Depth-proportional resolution, plain and tapered.

Both variants space retained ranks at a power-of-two cadence ``u(n)``
that is the binary floor of ``n // r`` (at least 1).  Because the cadence
only ever doubles, multiples of the new cadence are a subset of the old
ones and the record stays self-consistent.

The plain variant discards every odd multiple of the old cadence the
moment the cadence doubles.  The tapered variant instead retires those
phased-out ranks one per deposit, oldest first, so the record size never
drops by more than one item at a time.
"""

from __future__ import annotations

from ._intmath import bit_floor


def cadence(r: int, n: int) -> int:
    return max(bit_floor(n // r), 1)


# -- plain DPR -------------------------------------------------------------


def retained(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    ranks = list(range(0, n, cadence(r, n)))
    if ranks[-1] != n - 1:
        ranks.append(n - 1)
    return ranks


def predicate(r: int, rank: int, n: int) -> bool:
    return rank == n - 1 or rank % cadence(r, n) == 0


def dropped(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    old, new = cadence(r, n), cadence(r, n + 1)
    drops = set()
    if new != old:
        drops.update(range(old, n, 2 * old))
    if (n - 1) % new:
        drops.add(n - 1)
    return sorted(drops)


# -- tapered DPR -----------------------------------------------------------


def _retired(r: int, u: int, n: int) -> int:
    """How many phased-out ranks of the current epoch are gone at depth n."""
    return min(r, n - u * r + 1)


def tapered_retained(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    u = cadence(r, n)
    ranks = set(range(0, n, u))
    if u >= 2:
        half = u // 2
        # phased-out ranks are the r odd multiples of u/2 below u*r
        first_kept = _retired(r, u, n)
        ranks.update((2 * p + 1) * half for p in range(first_kept, r))
    ranks.add(n - 1)
    return sorted(ranks)


def tapered_predicate(r: int, rank: int, n: int) -> bool:
    if rank == n - 1:
        return True
    u = cadence(r, n)
    if rank % u == 0:
        return True
    if u < 2:
        return False
    half = u // 2
    if rank % half or rank >= u * r:
        return False
    position = (rank // half - 1) // 2
    return position >= _retired(r, u, n)


def tapered_dropped(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    drops = set()
    if not tapered_predicate(r, n - 1, n + 1):
        drops.add(n - 1)
    u = cadence(r, n + 1)
    if u >= 2:
        half = u // 2
        before = _retired(r, u, n) if cadence(r, n) == u else 0
        after = _retired(r, u, n + 1)
        drops.update((2 * p + 1) * half for p in range(max(before, 0), after))
    # with r == 1 the first phased-out rank can be the deposit arriving now
    return sorted(t for t in drops if t < n)
