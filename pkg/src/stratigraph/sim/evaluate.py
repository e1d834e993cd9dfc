"""Score reconstructions against the tracked ground truth."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from typing import IO, Sequence

from ..column import Column
from ..inference import reconstruct
from ..phylo.rf import robinson_foulds
from ..phylo.tree import PhyloTree

REPORT_FIELDS = ("seed", "family", "param", "width", "bits", "rf_distance", "rf_similarity",
                 "wall_ms_reconstruct")


@dataclass
class RunReport:
    seed: int
    family: str
    param: int
    width: int
    bits: int
    rf_distance: int
    rf_similarity: float
    wall_ms_reconstruct: float
    method: str = "trie"

    def row(self) -> dict:
        out = asdict(self)
        return {k: out[k] for k in REPORT_FIELDS}


def comparable(tree: PhyloTree) -> PhyloTree:
    """Reduce a tree for RF: splice unifurcations and drop the stem above the MRCA."""
    return tree.collapse_unifurcations().prune_stem()


def evaluate(ground_truth: PhyloTree, columns: Sequence[Column], labels: Sequence[str],
             method: str = "trie", confidence: float = 0.95, seed: int = 0,
             **options) -> tuple[RunReport, PhyloTree]:
    start = time.perf_counter()
    tree = reconstruct(columns, method, labels, confidence, **options)
    wall_ms = (time.perf_counter() - start) * 1000
    distance, similarity = robinson_foulds(comparable(ground_truth), comparable(tree))
    policy = columns[0].policy
    report = RunReport(
        seed=seed,
        family=policy.family.value,
        param=policy.param,
        width=columns[0].width,
        bits=max(c.payload_bits for c in columns),
        rf_distance=distance,
        rf_similarity=similarity,
        wall_ms_reconstruct=wall_ms,
        method=method,
    )
    return report, tree


def write_reports(reports: Sequence[RunReport], stream: IO[str]) -> None:
    writer = csv.DictWriter(stream, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.row())
