"""Rooted phylogenies with node origin times.

A ``PhyloTree`` maps node ids to ``Node`` records.  It may hold several
roots (a forest), which is what perfect tracking produces before
coalescence.  Labels mark taxa of interest, normally the extant
population; unlabeled nodes are inferred or extinct ancestors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class TreeError(ValueError):
    pass


@dataclass
class Node:
    id: int
    parent: int | None
    origin_time: float
    label: str | None = None
    destruction_time: float = math.inf
    children: list[int] = field(default_factory=list)


class PhyloTree:
    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: int) -> bool:
        return node_id in self.nodes

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes.values())

    def __repr__(self) -> str:
        return f"PhyloTree(nodes={len(self.nodes)}, leaves={len(self.leaves())})"

    def add_node(self, node_id: int, parent: int | None, origin_time: float,
                 label: str | None = None, destruction_time: float = math.inf) -> Node:
        """Add a node; the parent must already be present."""
        if node_id in self.nodes:
            raise TreeError(f"duplicate node id {node_id}")
        if parent is not None:
            if parent not in self.nodes:
                raise TreeError(f"node {node_id} refers to missing parent {parent}")
            self.nodes[parent].children.append(node_id)
        node = Node(node_id, parent, origin_time, label, destruction_time)
        self.nodes[node_id] = node
        return node

    @classmethod
    def from_records(cls, records: Iterable[tuple]) -> PhyloTree:
        """Build from ``(id, parent, origin_time, label, destruction_time)`` rows in any order."""
        rows = {}
        for rec in records:
            node_id = rec[0]
            if node_id in rows:
                raise TreeError(f"duplicate node id {node_id}")
            rows[node_id] = rec
        tree = cls()
        state: dict[int, int] = {}  # 1 = on the current path, 2 = added
        for start in rows:
            path = []
            cur = start
            while cur is not None and state.get(cur) != 2:
                if state.get(cur) == 1:
                    raise TreeError(f"cycle through node {cur}")
                if cur not in rows:
                    raise TreeError(f"node {path[-1]} refers to missing parent {cur}")
                state[cur] = 1
                path.append(cur)
                cur = rows[cur][1]
            for node_id in reversed(path):
                rec = rows[node_id]
                label = rec[3] if len(rec) > 3 else None
                dtime = rec[4] if len(rec) > 4 else math.inf
                tree.add_node(node_id, rec[1], rec[2], label, dtime)
                state[node_id] = 2
        return tree

    # -- queries --------------------------------------------------------------

    def roots(self) -> list[int]:
        return [n.id for n in self.nodes.values() if n.parent is None]

    @property
    def root(self) -> int:
        roots = self.roots()
        if len(roots) != 1:
            raise TreeError(f"tree has {len(roots)} roots")
        return roots[0]

    def leaves(self) -> list[int]:
        return [n.id for n in self.nodes.values() if not n.children]

    def labels(self) -> list[str]:
        return [n.label for n in self.nodes.values() if n.label is not None]

    def preorder(self) -> Iterator[Node]:
        stack = sorted(self.roots(), reverse=True)
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def postorder(self) -> list[Node]:
        return list(reversed(list(self.preorder())))

    def validate(self) -> None:
        seen_labels = set()
        for node in self.nodes.values():
            if node.parent is not None:
                parent = self.nodes[node.parent]
                if node.origin_time < parent.origin_time:
                    raise TreeError(f"node {node.id} originates before its parent")
            if node.label is not None:
                if node.label in seen_labels:
                    raise TreeError(f"duplicate label {node.label!r}")
                seen_labels.add(node.label)
        if sum(1 for _ in self.preorder()) != len(self.nodes):
            raise TreeError("tree contains a cycle")

    def root_to_leaf_depths(self) -> dict[int, float]:
        """Origin time of every leaf minus the origin time of its root."""
        out = {}
        for root in self.roots():
            base = self.nodes[root].origin_time
            for node in self._subtree(root):
                if not node.children:
                    out[node.id] = node.origin_time - base
        return out

    def _subtree(self, node_id: int) -> Iterator[Node]:
        stack = [node_id]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(node.children)

    # -- transforms (all return new trees) --------------------------------------

    def copy(self) -> PhyloTree:
        out = PhyloTree()
        for node in self.preorder():
            out.add_node(node.id, node.parent, node.origin_time, node.label, node.destruction_time)
        return out

    def restricted(self, keep: set[int]) -> PhyloTree:
        """Subforest on ``keep``, which must be closed under taking parents."""
        out = PhyloTree()
        for node in self.preorder():
            if node.id in keep:
                out.add_node(node.id, node.parent, node.origin_time, node.label,
                             node.destruction_time)
        return out

    def collapse_unifurcations(self) -> PhyloTree:
        """Splice out unlabeled non-root nodes with exactly one child."""
        out = PhyloTree()
        remap: dict[int, int | None] = {}
        for node in self.preorder():
            parent = remap[node.parent] if node.parent is not None else None
            if node.parent is not None and node.label is None and len(node.children) == 1:
                remap[node.id] = parent
                continue
            out.add_node(node.id, parent, node.origin_time, node.label, node.destruction_time)
            remap[node.id] = node.id
        return out

    def prune_stem(self) -> PhyloTree:
        """Drop unlabeled single-child roots so each root sits at its lineages' MRCA."""
        out = self.copy()
        for root in out.roots():
            cur = root
            while out.nodes[cur].label is None and len(out.nodes[cur].children) == 1:
                child = out.nodes[cur].children[0]
                del out.nodes[cur]
                out.nodes[child].parent = None
                cur = child
        return out

    def resolve_polytomies(self, first_id: int | None = None) -> PhyloTree:
        """Split multifurcations into caterpillar bifurcations joined by zero-length edges."""
        out = self.copy()
        next_id = first_id if first_id is not None else max(out.nodes, default=-1) + 1
        for node in list(out.postorder()):
            kids = list(node.children)
            while len(kids) > 2:
                extra = out.add_node(next_id, node.id, node.origin_time)
                next_id += 1
                for child in kids[1:]:
                    out.nodes[child].parent = extra.id
                extra.children = kids[1:]
                node.children = [kids[0], extra.id]
                node, kids = extra, kids[1:]
        return out

    # -- comparison ------------------------------------------------------------

    def canonical(self) -> tuple:
        """Id-free form: equal for trees that differ only in node ids and child order."""

        canon: dict[int, tuple] = {}
        for node in self.postorder():
            kids = tuple(sorted(canon.pop(c) for c in node.children))
            canon[node.id] = (node.origin_time, node.label or "", kids)
        return tuple(sorted(canon[r] for r in self.roots()))

    def structure(self) -> dict[int, tuple]:
        """Id-keyed form used for exact structural equality."""
        return {
            n.id: (n.parent, n.origin_time, n.label, n.destruction_time, tuple(sorted(n.children)))
            for n in self.nodes.values()
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return self.structure() == other.structure()
