"""MRCA-recency-proportional resolution.

Starting from rank 0, each step forward is the binary floor of the
remaining distance to the newest rank divided by ``r + 1`` (at least 1).
Step sizes therefore never grow along the walk, every visited rank is a
multiple of the current step, and the visited set at depth ``n + 1`` is
contained in the set at depth ``n`` plus the newest rank.  Sets are also
nested in ``r``: a smaller resolution keeps a subset of a larger one.
"""

from __future__ import annotations

from ._intmath import bit_floor


def _step(r: int, cur: int, n: int) -> int:
    return max(bit_floor((n - 1 - cur) // (r + 1)), 1)


def retained(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    ranks = []
    cur = 0
    while cur < n - 1:
        ranks.append(cur)
        cur += _step(r, cur, n)
    ranks.append(n - 1)
    return ranks


def predicate(r: int, rank: int, n: int) -> bool:
    if rank == n - 1:
        return True
    # jump over each run of equal steps instead of walking it
    cur = 0
    while cur < rank:
        step = _step(r, cur, n)
        if step == 1:
            return True
        last = n - 1 - step * (r + 1)  # final position still taking this step
        end = cur + step * ((last - cur) // step + 1)
        if rank < end:
            return (rank - cur) % step == 0
        cur = end
    return cur == rank


def _log_sum(r: int, m: int) -> int:
    """sum_{i=1..r} floor(log2(m // i)) over terms with m // i >= 1.

    Counted per power of two: m // i >= 2**k exactly when i <= m >> k.
    """
    total = 0
    k = 1
    while m >> k:
        total += min(r, m >> k)
        k += 1
    return total


def count(r: int, n: int) -> int:
    """Closed-form retained count at depth ``n``.

    popcount(n - 1) + sum_{i=1..r} floor(log2((n - 1) // i)) + 1
    """
    if n <= 1:
        return n
    m = n - 1
    return m.bit_count() + _log_sum(r, m) + 1


def count_ceiling(r: int, n: int) -> int:
    """Upper bound on ``count`` that is monotone non-decreasing in ``n``."""
    if n <= 1:
        return n
    m = n - 1
    return m.bit_length() + _log_sum(r, m) + 1


def gap_bound(r: int, rank: int, n: int) -> int:
    age = n - rank
    if r == 0:
        return max(1, age)
    return max(1, -(-age // r))
