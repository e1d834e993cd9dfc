"""Stateless stream-curation retention policies."""

from .api import (
    drop_indices,
    dropped_ranks,
    gap_bound,
    index_of_rank,
    rank_at_index,
    retained_count,
    retained_ranks,
    retention_predicate,
)
from .spec import Family, PolicyError, PolicySpec

__all__ = [
    "Family",
    "PolicyError",
    "PolicySpec",
    "drop_indices",
    "dropped_ranks",
    "gap_bound",
    "index_of_rank",
    "rank_at_index",
    "retained_count",
    "retained_ranks",
    "retention_predicate",
]
