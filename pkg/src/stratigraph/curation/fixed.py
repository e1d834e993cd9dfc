"""Fixed resolution: keep every ``r``-th time point, plus the newest."""

from __future__ import annotations


def retained(r: int, n: int) -> list[int]:
    if n == 0:
        return []
    ranks = list(range(0, n, r))
    if ranks[-1] != n - 1:
        ranks.append(n - 1)
    return ranks


def predicate(r: int, rank: int, n: int) -> bool:
    return rank == n - 1 or rank % r == 0


def dropped(r: int, n: int) -> list[int]:
    # only the previous newest rank can fall out
    if n >= 1 and (n - 1) % r:
        return [n - 1]
    return []


def count(r: int, n: int) -> int:
    if n == 0:
        return 0
    return -(-n // r) + (1 if (n - 1) % r else 0)


def rank_at(r: int, index: int, n: int) -> int:
    rank = index * r
    return rank if rank < n else n - 1
