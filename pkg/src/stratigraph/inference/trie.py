"""Trie-based phylogeny reconstruction.

Columns descended from a common ancestor share a prefix of strata up to
the point their lineages split, so inserting every column into a trie
keyed on ``(rank, differentia)`` reproduces the branching structure.
Columns go in shallowest first: a deeper column's retained ranks below
an older column's depth are a subset of that column's, so no insertion
ever needs a node spliced in above existing ones.

A deeper column may have pruned a rank an earlier column still holds.
That trie rank is then a wildcard.  Among the wildcard edges the insert
follows the one opening the longest run of consecutive matches with the
column's next strata, breaking ties toward the smaller differentia and
then the older edge.  If no wildcard edge yields a single match the
column branches off where it stands.
"""

from __future__ import annotations

import logging
from typing import Sequence

from ..column import Column
from ..phylo.tree import PhyloTree
from .pairwise import check_compatible, expected_collision_bias

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10_000


class EmptyPopulationError(ValueError):
    pass


class _Node:
    __slots__ = ("rank", "differentia", "parent", "children", "order", "leaves")

    def __init__(self, rank: int, differentia: int, parent: _Node | None, order: int):
        self.rank = rank
        self.differentia = differentia
        self.parent = parent
        self.children: dict[tuple[int, int], _Node] = {}
        self.order = order
        self.leaves: list[tuple[str, int]] = []


class StratumTrie:
    def __init__(self, search_budget: int = DEFAULT_SEARCH_BUDGET):
        self.root = _Node(-1, -1, None, 0)
        self.size = 1
        self.search_budget = search_budget
        self.budget_exhaustions = 0

    def _new_child(self, parent: _Node, rank: int, differentia: int) -> _Node:
        node = _Node(rank, differentia, parent, self.size)
        self.size += 1
        parent.children[(rank, differentia)] = node
        return node

    def _streak(self, start: _Node, strata: list[tuple[int, int]], i: int,
                budget: list[int]) -> int:
        """Longest run of matches against ``strata[i:]`` along paths below ``start``."""
        best = 0
        goal = len(strata) - i
        stack = [(start, i, 0)]
        while stack:
            node, j, score = stack.pop()
            if score > best:
                best = score
                if best == goal:
                    break
            if j == len(strata):
                continue
            rank, diff = strata[j]
            exact = node.children.get((rank, diff))
            for child in node.children.values():
                if child.rank < rank:
                    stack.append((child, j, score))
            if exact is not None:
                stack.append((exact, j + 1, score + 1))
            budget[0] -= 1
            if budget[0] <= 0:
                self.budget_exhaustions += 1
                log.info("wildcard search budget exhausted; keeping best path found so far")
                break
        return best

    def insert(self, column: Column, label: str) -> _Node:
        strata = [(s.rank, s.differentia) for s in column.strata()]
        node = self.root
        i = 0
        budget = [self.search_budget]
        while i < len(strata):
            rank, diff = strata[i]
            child = node.children.get((rank, diff))
            if child is not None:
                node = child
                i += 1
                continue
            wild = [c for c in node.children.values() if c.rank < rank]
            if not wild:
                break
            if budget[0] > 0:
                scored = [(self._streak(c, strata, i, budget), c) for c in wild]
            else:
                # greedy fallback: credit any wildcard whose next edge matches outright
                scored = [(int((rank, diff) in c.children), c) for c in wild]
            score, best = min(scored, key=lambda sc: (-sc[0], sc[1].differentia, sc[1].order))
            if score < 1:
                break
            node = best
        for rank, diff in strata[i:]:
            node = self._new_child(node, rank, diff)
        node.leaves.append((label, max(column.deposit_count - 1, 0)))
        return node

    def to_tree(self, collision_bias: float = 0.0) -> PhyloTree:
        """Tree of trie nodes with labeled leaves hung off their terminal nodes.

        Internal node times are ranks, pulled back by ``collision_bias``
        times the gap to the parent rank when a bias is given.
        """
        tree = PhyloTree()
        ids: dict[int, int] = {}
        next_id = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node is self.root:
                if len(node.children) == 1 and not node.leaves:
                    # a lone first stratum is the root; no virtual node needed
                    stack.extend(node.children.values())
                    continue
                parent_id, time = None, 0
            else:
                parent = node.parent
                parent_id = ids.get(parent.order)
                parent_rank = max(parent.rank, 0)
                time = node.rank - collision_bias * (node.rank - parent_rank)
            ids[node.order] = next_id
            tree.add_node(next_id, parent_id, time)
            next_id += 1
            for label, leaf_time in node.leaves:
                tree.add_node(next_id, ids[node.order], max(leaf_time, time), label)
                next_id += 1
            stack.extend(sorted(node.children.values(), key=lambda c: -c.order))
        return tree


def trie_reconstruct(columns: Sequence[Column], labels: Sequence[str] | None = None, *,
                     resolve_polytomies: bool = False, correct_collision_bias: bool = False,
                     search_budget: int = DEFAULT_SEARCH_BUDGET) -> PhyloTree:
    if not columns:
        raise EmptyPopulationError("cannot reconstruct an empty population")
    for col in columns[1:]:
        check_compatible(columns[0], col)
    labels = [str(i) for i in range(len(columns))] if labels is None else [str(x) for x in labels]
    if len(labels) != len(columns):
        raise ValueError("one label per column is required")
    trie = StratumTrie(search_budget)
    order = sorted(range(len(columns)), key=lambda i: columns[i].deposit_count)
    for i in order:
        trie.insert(columns[i], labels[i])
    bias = expected_collision_bias(columns[0].width) if correct_collision_bias else 0.0
    tree = trie.to_tree(bias).collapse_unifurcations()
    if resolve_polytomies:
        tree = tree.resolve_polytomies()
    return tree
