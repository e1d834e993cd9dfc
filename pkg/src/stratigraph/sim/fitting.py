"""Parameterize a retention policy to a memory budget.

The fitted parameter keeps as many strata as possible at the final depth
without the payload exceeding the budget.  When even the sparsest
parameterization is too big it is used anyway and ``fits`` is False.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..curation import Family, PolicyError, PolicySpec, retained_count
from ..curation.spec import MIN_PARAM


@dataclass(frozen=True)
class FitResult:
    policy: PolicySpec
    count: int
    bits: int
    fits: bool


def _count(family: Family, param: int, depth: int) -> int:
    return retained_count(PolicySpec(family, param), depth)


def sparsest_param(family: Family, depth: int) -> int:
    # a fixed-resolution interval at least the depth keeps only the two ends
    return max(depth, 1) if family is Family.FR else MIN_PARAM[family]


def fit_policy_to_footprint(family: Family | str, width: int, target_bits: int,
                            depth: int) -> FitResult:
    """Best parameter for ``depth`` deposits of ``width``-bit differentia within ``target_bits``."""
    try:
        family = Family(str(family).lower())
    except ValueError:
        raise PolicyError(f"unsupported policy family {family!r}") from None
    if width < 1 or target_bits < 0 or depth < 0:
        raise ValueError("width must be positive; target and depth nonnegative")
    cap = target_bits // width

    if family is Family.FR:
        # coarser intervals keep fewer strata: find the finest interval that fits
        lo, hi = 1, sparsest_param(family, depth)
        if _count(family, hi, depth) > cap:
            return _fallback(family, width, depth)
        while lo < hi:
            mid = (lo + hi) // 2
            if _count(family, mid, depth) <= cap:
                hi = mid
            else:
                lo = mid + 1
        return _result(family, hi, width, depth)

    # every other family keeps more strata as its parameter grows
    lo = MIN_PARAM[family]
    if _count(family, lo, depth) > cap:
        return _fallback(family, width, depth)
    hi = max(lo, cap)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _count(family, mid, depth) <= cap:
            lo = mid
        else:
            hi = mid - 1
    # once the whole record fits, larger parameters change nothing: take the least one
    best = _count(family, lo, depth)
    least = MIN_PARAM[family]
    while least < lo:
        mid = (least + lo) // 2
        if _count(family, mid, depth) >= best:
            lo = mid
        else:
            least = mid + 1
    return _result(family, lo, width, depth)


def _result(family: Family, param: int, width: int, depth: int, fits: bool = True) -> FitResult:
    count = _count(family, param, depth)
    return FitResult(PolicySpec(family, param), count, count * width, fits)


def _fallback(family: Family, width: int, depth: int) -> FitResult:
    return _result(family, sparsest_param(family, depth), width, depth, fits=False)
