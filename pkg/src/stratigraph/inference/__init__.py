"""Relatedness estimation and phylogeny reconstruction from columns."""

from __future__ import annotations

from typing import Sequence

from ..column import Column
from ..phylo.tree import PhyloTree
from .pairwise import (
    IncompatibleColumnsError,
    MrcaBounds,
    align_columns,
    distance_matrix,
    expected_collision_bias,
    mrca_bounds,
    pairwise_distance,
    required_matches,
)
from .trie import EmptyPopulationError, StratumTrie, trie_reconstruct
from .upgma import DistanceMatrixError, upgma, upgma_merges

METHODS = ("upgma", "trie")


def reconstruct(columns: Sequence[Column], method: str = "trie",
                labels: Sequence[str] | None = None, confidence: float = 0.95,
                **options) -> PhyloTree:
    """Reconstruct a phylogeny of ``columns`` with either method."""
    if method == "trie":
        return trie_reconstruct(columns, labels, **options)
    if method == "upgma":
        if not columns:
            raise EmptyPopulationError("cannot reconstruct an empty population")
        if len(columns) == 1:
            return trie_reconstruct(columns, labels)
        leaf_time = max(c.deposit_count for c in columns) - 1
        return upgma(distance_matrix(columns, confidence), labels, leaf_time=leaf_time)
    raise ValueError(f"unknown reconstruction method {method!r}; choose from {METHODS}")


__all__ = [
    "METHODS",
    "DistanceMatrixError",
    "EmptyPopulationError",
    "IncompatibleColumnsError",
    "MrcaBounds",
    "StratumTrie",
    "align_columns",
    "distance_matrix",
    "expected_collision_bias",
    "mrca_bounds",
    "pairwise_distance",
    "reconstruct",
    "required_matches",
    "trie_reconstruct",
    "upgma",
    "upgma_merges",
]
