"""Family-dispatching front end for the policy algorithms.

Every function here is a pure function of ``(policy, arguments)``.  The
retained-rank enumeration is memoized, which matters because a
synchronous population asks for the same ``(policy, n)`` many times.
"""

from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache

from . import curbed, depth, fixed, geometric, recency
from ._intmath import ceil_div
from .spec import Family, PolicyError, PolicySpec

_RETAINED = {
    Family.FR: fixed.retained,
    Family.DPR: depth.retained,
    Family.TAPERED_DPR: depth.tapered_retained,
    Family.RPR: recency.retained,
    Family.GSNR: geometric.retained,
    Family.CRPR: curbed.retained,
}

_PREDICATE = {
    Family.FR: fixed.predicate,
    Family.DPR: depth.predicate,
    Family.TAPERED_DPR: depth.tapered_predicate,
    Family.RPR: recency.predicate,
    Family.GSNR: geometric.predicate,
    Family.CRPR: curbed.predicate,
}

# families with a dedicated drop generator; the rest use set subtraction
_DROPPED = {
    Family.FR: fixed.dropped,
    Family.DPR: depth.dropped,
    Family.TAPERED_DPR: depth.tapered_dropped,
}


def _check_depth(n: int) -> None:
    if n < 0:
        raise PolicyError(f"record depth must be nonnegative, got {n}")


def _check_rank(rank: int, n: int) -> None:
    if not 0 <= rank < n:
        raise PolicyError(f"rank {rank} outside [0, {n})")


# entries can hold ~n ranks each, so keep only a few recent depths
@lru_cache(maxsize=1 << 8)
def retained_ranks(policy: PolicySpec, n: int) -> tuple[int, ...]:
    """Sorted ranks retained at record depth ``n``."""
    _check_depth(n)
    return tuple(_RETAINED[policy.family](policy.param, n))


@lru_cache(maxsize=1 << 14)
def dropped_ranks(policy: PolicySpec, n: int) -> tuple[int, ...]:
    """Ranks discarded when deposit ``n`` arrives (depth ``n`` -> ``n + 1``).

    Equals ``retained_ranks(policy, n)`` minus ``retained_ranks(policy, n + 1)``.
    """
    _check_depth(n)
    gen = _DROPPED.get(policy.family)
    if gen is not None:
        return tuple(gen(policy.param, n))
    after = set(retained_ranks(policy, n + 1))
    return tuple(t for t in retained_ranks(policy, n) if t not in after)


def retention_predicate(policy: PolicySpec, rank: int, n: int) -> bool:
    _check_rank(rank, n)
    return _PREDICATE[policy.family](policy.param, rank, n)


def retained_count(policy: PolicySpec, n: int) -> int:
    _check_depth(n)
    if policy.family is Family.FR:
        return fixed.count(policy.param, n)
    if policy.family is Family.RPR:
        return recency.count(policy.param, n)
    return len(retained_ranks(policy, n))


def rank_at_index(policy: PolicySpec, index: int, n: int) -> int:
    """Deposit rank of the stratum stored at ``index`` (no ranks are stored)."""
    size = retained_count(policy, n)
    if not 0 <= index < size:
        raise PolicyError(f"index {index} outside [0, {size})")
    if policy.family is Family.FR:
        return fixed.rank_at(policy.param, index, n)
    return retained_ranks(policy, n)[index]


def index_of_rank(policy: PolicySpec, rank: int, n: int) -> int:
    ranks = retained_ranks(policy, n)
    i = bisect_left(ranks, rank)
    if i == len(ranks) or ranks[i] != rank:
        raise PolicyError(f"rank {rank} not retained at depth {n}")
    return i


def gap_bound(policy: PolicySpec, rank: int, n: int) -> int:
    """Guaranteed ceiling on the spacing between retained ranks bracketing ``rank``."""
    _check_rank(rank, n)
    if rank == n - 1:
        return 1
    fam, p = policy.family, policy.param
    if fam is Family.FR:
        return p
    if fam in (Family.DPR, Family.TAPERED_DPR):
        return ceil_div(n, p)
    if fam is Family.RPR:
        return recency.gap_bound(p, rank, n)
    if fam is Family.GSNR:
        return geometric.gap_bound(p, rank, n)
    return curbed.gap_bound(p, rank, n)


@lru_cache(maxsize=1 << 14)
def drop_indices(policy: PolicySpec, n: int) -> tuple[int, ...]:
    """Storage indices (descending) to delete after appending deposit ``n``.

    Indices refer to the column as it stands right after the append, i.e.
    ``retained_ranks(policy, n) + (n,)``.
    """
    ranks = retained_ranks(policy, n)
    return tuple(sorted((bisect_left(ranks, t) for t in dropped_ranks(policy, n)),
                        reverse=True))
