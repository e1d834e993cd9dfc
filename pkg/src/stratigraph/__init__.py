"""Hereditary stratigraphy: lineage-annotated columns and phylogeny reconstruction."""

from .column import Column, create_column, deserialize, serialize
from .curation import PolicySpec

__all__ = ["Column", "PolicySpec", "create_column", "deserialize", "serialize"]
__version__ = "0.1.0"
