"""ALife data-standard phylogeny CSV.

Required columns are ``id``, ``ancestor_list``, ``origin_time`` and
``destruction_time``.  Roots carry ``[none]`` as their ancestor list and
living taxa carry ``inf`` as destruction time.  An optional
``taxon_label`` column stores labels; it is written only when some node
has one.
"""

from __future__ import annotations

import csv
import math
import os
from typing import IO

from .tree import PhyloTree, TreeError

REQUIRED = ("id", "ancestor_list", "origin_time", "destruction_time")


class AlifeFormatError(ValueError):
    pass


def _fmt_time(value: float) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(value) if isinstance(value, float) else str(value)


def _parse_time(text: str) -> float:
    text = text.strip()
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise AlifeFormatError(f"bad time value {text!r}") from None


def _parse_ancestors(text: str) -> int | None:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    items = [x.strip() for x in body.split(",") if x.strip()]
    if not items or items == ["none"] or items == ["None"]:
        return None
    if len(items) > 1:
        raise AlifeFormatError("multiple ancestors are not supported (asexual lineages only)")
    try:
        return int(items[0])
    except ValueError:
        raise AlifeFormatError(f"bad ancestor id {items[0]!r}") from None


def write_alife(tree: PhyloTree, stream: IO[str]) -> None:
    labeled = any(n.label is not None for n in tree)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REQUIRED + (("taxon_label",) if labeled else ()))
    for node in tree.preorder():
        row = [
            node.id,
            "[none]" if node.parent is None else f"[{node.parent}]",
            _fmt_time(node.origin_time),
            _fmt_time(node.destruction_time),
        ]
        if labeled:
            row.append("" if node.label is None else node.label)
        writer.writerow(row)


def read_alife(stream: IO[str]) -> PhyloTree:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or not set(REQUIRED) <= set(reader.fieldnames):
        raise AlifeFormatError(f"header must contain {', '.join(REQUIRED)}")
    records = []
    for row in reader:
        try:
            node_id = int(row["id"])
        except ValueError:
            raise AlifeFormatError(f"bad id {row['id']!r}") from None
        label = row.get("taxon_label") or None
        records.append((
            node_id,
            _parse_ancestors(row["ancestor_list"]),
            _parse_time(row["origin_time"]),
            label,
            _parse_time(row["destruction_time"]),
        ))
    try:
        tree = PhyloTree.from_records(records)
    except TreeError as exc:
        raise AlifeFormatError(str(exc)) from None
    for node in tree:
        if node.parent is not None and node.origin_time < tree.nodes[node.parent].origin_time:
            raise AlifeFormatError(f"node {node.id} originates before its ancestor")
    return tree


def write_alife_csv(tree: PhyloTree, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_alife(tree, fh)


def read_alife_csv(path: str | os.PathLike) -> PhyloTree:
    with open(path, encoding="utf-8", newline="") as fh:
        return read_alife(fh)
