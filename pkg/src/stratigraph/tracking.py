"""Perfect phylogenetic tracking.

Every birth appends a node holding a parent pointer, so the forest is an
exact record of descent.  In naive mode nothing is ever forgotten.  In
pruning mode a removal also frees the maximal run of dead, childless
nodes walking up from the removed taxon; the forest then holds only
living taxa and their ancestors.

Node storage is a slot arena (parallel lists plus a free list) with an
id-to-slot map, giving constant-time birth and per-node removal work.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Hashable, Iterable

from .phylo.tree import PhyloTree


class TrackingError(ValueError):
    pass


class Mode(str, Enum):
    NAIVE = "naive"
    PRUNING = "pruning"


_NONE = -1


class TrackerForest:
    def __init__(self, founders: Iterable[int], mode: Mode | str = Mode.PRUNING,
                 time: float = 0):
        self.mode = Mode(mode)
        self._ids: list[int] = []
        self._parent: list[int] = []
        self._origin: list[float] = []
        self._destroyed: list[float] = []
        self._alive: list[bool] = []
        self._nchildren: list[int] = []
        self._free: list[int] = []
        self._slot: dict[Hashable, int] = {}
        self.founders: list[int] = []
        self.births = 0
        self.removals = 0
        self.pruning_work = 0
        for fid in founders:
            if fid in self._slot:
                raise TrackingError(f"duplicate founder id {fid}")
            self._alloc(fid, _NONE, time)
            self.founders.append(fid)
        if not self.founders:
            raise TrackingError("at least one founder is required")

    def _alloc(self, taxon_id: int, parent_slot: int, time: float) -> int:
        if self._free:
            slot = self._free.pop()
            self._ids[slot] = taxon_id
            self._parent[slot] = parent_slot
            self._origin[slot] = time
            self._destroyed[slot] = math.inf
            self._alive[slot] = True
            self._nchildren[slot] = 0
        else:
            slot = len(self._ids)
            self._ids.append(taxon_id)
            self._parent.append(parent_slot)
            self._origin.append(time)
            self._destroyed.append(math.inf)
            self._alive.append(True)
            self._nchildren.append(0)
        self._slot[taxon_id] = slot
        return slot

    def __len__(self) -> int:
        """Number of nodes currently stored."""
        return len(self._slot)

    def __contains__(self, taxon_id: int) -> bool:
        return taxon_id in self._slot

    def is_alive(self, taxon_id: int) -> bool:
        return self._alive[self._slot[taxon_id]]

    def living(self) -> list[int]:
        return [i for i, s in self._slot.items() if self._alive[s]]

    def on_birth(self, parent_id: int, child_id: int, time: float) -> None:
        parent = self._slot.get(parent_id)
        if parent is None:
            raise TrackingError(f"unknown parent {parent_id}")
        if child_id in self._slot:
            raise TrackingError(f"duplicate taxon id {child_id}")
        if time < self._origin[parent]:
            raise TrackingError("child cannot originate before its parent")
        self._alloc(child_id, parent, time)
        self._nchildren[parent] += 1
        self.births += 1

    def on_removal(self, taxon_id: int, time: float | None = None) -> int:
        """Mark a taxon dead; in pruning mode free its dead lineage tail.  Returns nodes freed."""
        slot = self._slot.get(taxon_id)
        if slot is None:
            raise TrackingError(f"unknown taxon {taxon_id}")
        if not self._alive[slot]:
            raise TrackingError(f"taxon {taxon_id} was already removed")
        self._alive[slot] = False
        self._destroyed[slot] = math.inf if time is None else time
        self.removals += 1
        if self.mode is Mode.NAIVE:
            return 0
        freed = 0
        self.pruning_work += 1  # the check that stops the walk
        while slot != _NONE and not self._alive[slot] and self._nchildren[slot] == 0:
            self.pruning_work += 1
            parent = self._parent[slot]
            del self._slot[self._ids[slot]]
            self._free.append(slot)
            if parent != _NONE:
                self._nchildren[parent] -= 1
            freed += 1
            slot = parent
        return freed

    def extract_tree(self, collapse_unifurcations: bool = False,
                     prune_stem: bool = False) -> PhyloTree:
        """Phylogeny of living taxa and their ancestors; living taxa are labeled by id."""
        keep: set[int] = set()
        for slot in self._slot.values():
            if not self._alive[slot]:
                continue
            while slot != _NONE and slot not in keep:
                keep.add(slot)
                slot = self._parent[slot]
        if not keep:
            raise TrackingError("no living taxa")
        records = [
            (
                self._ids[s],
                None if self._parent[s] == _NONE else self._ids[self._parent[s]],
                self._origin[s],
                str(self._ids[s]) if self._alive[s] else None,
                self._destroyed[s],
            )
            for s in sorted(keep, key=lambda s: (self._origin[s], self._ids[s]))
        ]
        tree = PhyloTree.from_records(records)
        if collapse_unifurcations:
            tree = tree.collapse_unifurcations()
        if prune_stem:
            tree = tree.prune_stem()
        return tree
