"""Robinson-Foulds distance over unrooted bipartitions.

Every edge of a tree splits the labeled taxa in two.  A split is kept in
canonical form as the side that does not contain the smallest label, and
only nontrivial splits (both sides of size at least two) count.  Labeled
internal nodes behave as leaves hanging off that node by a zero-length
edge, and multifurcations contribute only the splits they actually make.
"""

from __future__ import annotations

from .tree import PhyloTree


class LabelMismatchError(ValueError):
    pass


def splits(tree: PhyloTree) -> set[frozenset[str]]:
    labels = tree.labels()
    taxa = frozenset(labels)
    if len(taxa) != len(labels):
        raise LabelMismatchError("tree has duplicate labels")
    anchor = min(taxa) if taxa else None
    below: dict[int, frozenset[str]] = {}
    out = set()
    for node in tree.postorder():
        members = set()
        for child in node.children:
            members |= below.pop(child)
        if node.label is not None:
            members.add(node.label)
        clade = frozenset(members)
        below[node.id] = clade
        side = taxa - clade if anchor in clade else clade
        if 2 <= len(side) <= len(taxa) - 2:
            out.add(side)
    return out


def robinson_foulds(a: PhyloTree, b: PhyloTree) -> tuple[int, float]:
    """Return ``(distance, similarity)`` with similarity ``1 - d / (|A| + |B|)``."""
    if set(a.labels()) != set(b.labels()):
        raise LabelMismatchError("trees cover different taxa")
    sa, sb = splits(a), splits(b)
    distance = len(sa ^ sb)
    total = len(sa) + len(sb)
    return distance, (1.0 - distance / total) if total else 1.0
