"""Pairwise MRCA estimation between two columns.

Strata deposited before two lineages split are shared verbatim, so the
first rank at which retained differentia disagree is a hard upper bound
on the split.  Matching strata are weaker evidence: with ``w``-bit
differentia any single match may be a chance collision with probability
``2**-w``.  Backtracking ``k`` aligned strata from the first mismatch,
where ``k`` consecutive collisions are no more likely than ``1 -
confidence``, gives the lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..column import Column


class IncompatibleColumnsError(ValueError):
    pass


@dataclass(frozen=True)
class MrcaBounds:
    """Rank bounds on the most recent common ancestor.

    ``upper_rank`` is None when the columns show no disparity and
    ``lower_rank`` is None when the lower bound falls before the first
    retained stratum (pre-origin).
    """

    upper_rank: int | None
    lower_rank: int | None
    confidence: float

    @property
    def no_disparity(self) -> bool:
        return self.upper_rank is None

    @property
    def pre_origin(self) -> bool:
        return self.lower_rank is None


def check_compatible(a: Column, b: Column) -> None:
    if a.policy != b.policy:
        raise IncompatibleColumnsError(f"policies differ: {a.policy} vs {b.policy}")
    if a.width != b.width:
        raise IncompatibleColumnsError(f"differentia widths differ: {a.width} vs {b.width}")


def _check_confidence(confidence: float) -> None:
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")


def align_columns(a: Column, b: Column) -> list[tuple[int, int, int]]:
    """``(rank, differentia_a, differentia_b)`` for ranks both columns hold below the shallower depth."""
    check_compatible(a, b)
    limit = min(a.deposit_count, b.deposit_count)
    ra, rb = a.ranks, b.ranks
    da, db = a.differentia, b.differentia
    out = []
    i = j = 0
    while i < len(ra) and j < len(rb):
        x, y = ra[i], rb[j]
        if x >= limit or y >= limit:
            break
        if x == y:
            out.append((x, da[i], db[j]))
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


def required_matches(width: int, confidence: float) -> int:
    """Least ``k`` with ``(2**-width)**k <= 1 - confidence``, evaluated exactly."""
    _check_confidence(confidence)
    tail = 1 - Fraction(confidence)
    k = 1
    while Fraction(1, 1 << (width * k)) > tail:
        k += 1
    return k


def _bounds_from_mismatch(ranks: Sequence[int], j: int, k: int) -> tuple[int | None, int | None]:
    upper = ranks[j] if j < len(ranks) else None
    lower = ranks[j - k] if j >= k else None
    return upper, lower


def mrca_bounds(a: Column, b: Column, confidence: float = 0.95) -> MrcaBounds:
    aligned = align_columns(a, b)
    k = required_matches(a.width, confidence)
    j = next((i for i, (_, x, y) in enumerate(aligned) if x != y), len(aligned))
    upper, lower = _bounds_from_mismatch([t for t, _, _ in aligned], j, k)
    return MrcaBounds(upper, lower, confidence)


def expected_collision_bias(width: int, confidence: float | None = None) -> float:
    """Mean count of spuriously matching aligned strata past the true split.

    Collisions past the split are independent with probability ``p =
    2**-width`` each, so the run length is geometric with mean ``p / (1 -
    p)``.  Multiply by the local gap between retained ranks to express it
    in generations.  ``confidence`` does not enter; it is accepted for
    call-site symmetry.
    """
    if width < 1:
        raise ValueError("width must be at least 1")
    p = 2.0 ** -width
    return p / (1 - p)


def _distance(depth_a: int, depth_b: int, upper: int | None, lower: int | None) -> float:
    if upper is None:
        m = min(depth_a, depth_b)
    else:
        # a pre-origin lower bound is clamped to the first rank
        m = ((lower if lower is not None else 0) + upper) / 2
    return (depth_a - m) + (depth_b - m)


def pairwise_distance(a: Column, b: Column, confidence: float = 0.95) -> float:
    """Generations from each column back to the midpoint MRCA estimate, summed."""
    bounds = mrca_bounds(a, b, confidence)
    return _distance(a.deposit_count, b.deposit_count, bounds.upper_rank, bounds.lower_rank)


def _packed(col: Column) -> int:
    """All differentia as one integer, first stratum in the most significant bits."""
    if col.width == 1:
        return int("".join("1" if d else "0" for d in col.differentia) or "0", 2)
    if col.width == 8:
        return int.from_bytes(bytes(col.differentia), "big")
    return int.from_bytes(b"".join(d.to_bytes(8, "big") for d in col.differentia), "big")


def distance_matrix(columns: Sequence[Column], confidence: float = 0.95) -> np.ndarray:
    """Symmetric matrix of ``pairwise_distance`` over a population."""
    n = len(columns)
    out = np.zeros((n, n))
    if n < 2:
        return out
    first = columns[0]
    for col in columns[1:]:
        check_compatible(first, col)
    depth = first.deposit_count
    if any(c.deposit_count != depth for c in columns):
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = pairwise_distance(columns[i], columns[j], confidence)
        return out

    # equal depths share one rank list; the first mismatch comes from an XOR
    ranks = first.ranks
    length, width = len(ranks), first.width
    k = required_matches(width, confidence)
    by_mismatch = [
        _distance(depth, depth, *_bounds_from_mismatch(ranks, j, k)) for j in range(length + 1)
    ]
    top = length - 1
    packed = [_packed(c) for c in columns]
    for i in range(n - 1):
        pi = packed[i]
        row = []
        for pj in packed[i + 1:]:
            x = pi ^ pj
            row.append(by_mismatch[top - (x.bit_length() - 1) // width] if x else by_mismatch[length])
        out[i, i + 1:] = row
    return out + out.T
