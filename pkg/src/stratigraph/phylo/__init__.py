"""Phylogeny containers, file formats and tree comparison."""

from .alife import AlifeFormatError, read_alife, read_alife_csv, write_alife, write_alife_csv
from .newick import NewickError, read_newick, write_newick
from .rf import LabelMismatchError, robinson_foulds, splits
from .tree import Node, PhyloTree, TreeError

__all__ = [
    "AlifeFormatError",
    "LabelMismatchError",
    "NewickError",
    "Node",
    "PhyloTree",
    "TreeError",
    "read_alife",
    "read_alife_csv",
    "read_newick",
    "robinson_foulds",
    "splits",
    "write_alife",
    "write_alife_csv",
    "write_newick",
]
