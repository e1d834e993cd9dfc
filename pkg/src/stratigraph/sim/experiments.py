"""Desk-scale experiment drivers: footprint sweeps, policy comparisons, timing."""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..curation import PolicySpec
from ..inference import reconstruct
from .evaluate import RunReport, evaluate
from .fitting import FitResult, fit_policy_to_footprint
from .simulate import SimConfig, simulate

FOOTPRINTS = (64, 512, 4096)


@dataclass
class Trial:
    fit: FitResult
    report: RunReport
    max_column_bits: int


def run_trial(seed: int, family: str, footprint: int, width: int = 1, n: int = 100,
              g: int = 500, method: str = "trie", confidence: float = 0.95,
              selection: str = "drift") -> Trial:
    config = SimConfig(n, g, PolicySpec("fr", 1), width, seed, selection)
    fit = fit_policy_to_footprint(family, width, footprint, config.final_depth)
    config = SimConfig(n, g, fit.policy, width, seed, selection)
    result = simulate(config)
    report, _ = evaluate(result.tree, result.columns, result.labels, method, confidence, seed)
    return Trial(fit, report, max(c.payload_bits for c in result.columns))


def footprint_sweep(seeds: Iterable[int], family: str = "rpr",
                    footprints: Sequence[int] = FOOTPRINTS, **kwargs) -> dict[int, list[Trial]]:
    out: dict[int, list[Trial]] = {fp: [] for fp in footprints}
    for seed in seeds:
        for fp in footprints:
            out[fp].append(run_trial(seed, family, fp, **kwargs))
    return out


def policy_comparison(seeds: Iterable[int], families: Sequence[str] = ("rpr", "tdpr"),
                      footprint: int = 64, **kwargs) -> dict[str, list[Trial]]:
    out: dict[str, list[Trial]] = {f: [] for f in families}
    for seed in seeds:
        for fam in families:
            out[fam].append(run_trial(seed, fam, footprint, **kwargs))
    return out


def time_reconstruction(sizes: Sequence[int], methods: Sequence[str] = ("trie", "upgma"),
                        repeats: int = 3, seed: int = 0, policy: PolicySpec | None = None,
                        width: int = 64, generations: int = 64) -> list[dict]:
    """Best-of-``repeats`` reconstruction wall time on nested subsamples of one population."""
    policy = policy or PolicySpec("rpr", 2)
    result = simulate(SimConfig(max(sizes), generations, policy, width, seed))
    rows = []
    for n in sizes:
        cols, labels = result.columns[:n], result.labels[:n]
        for method in methods:
            best = float("inf")
            for _ in range(repeats):
                gc.collect()
                gc.disable()
                try:
                    start = time.perf_counter()
                    reconstruct(cols, method, labels)
                    best = min(best, time.perf_counter() - start)
                finally:
                    gc.enable()
            rows.append({"n": n, "method": method, "strata": len(cols[0]),
                         "wall_ms": best * 1000})
    return rows


def scaling_exponent(rows: Sequence[dict], method: str) -> float:
    """Slope of log wall time against log n."""
    pts = [(r["n"], r["wall_ms"]) for r in rows if r["method"] == method]
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])
