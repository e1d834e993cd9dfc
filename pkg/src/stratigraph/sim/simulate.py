"""Population simulation over a tracked ground-truth phylogeny.

A single progenitor (id 0, one stratum deposited) seeds the run.  In
synchronous mode each generation draws ``N`` offspring from the previous
generation, which then dies off, so extant columns all sit at depth
``G + 1``.  The asynchronous mode is Moran-style: each of ``N * G`` steps
adds one offspring and removes one other random individual, so extant
depths vary.  Either way a pruning ``TrackerForest`` records descent and
every birth clones the parent's column under a fresh lineage key.

All randomness comes from the run seed through labeled substreams, so
selection, differentia keys and fitness noise never share state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..column import SUPPORTED_WIDTHS, Column, create_column
from ..curation import PolicySpec
from ..phylo.tree import PhyloTree
from ..tracking import Mode, TrackerForest

STREAMS = {"selection": 0, "differentia": 1, "landscape": 2}


class ConfigError(ValueError):
    pass


def substream(seed: int, label: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(STREAMS[label],)))


@dataclass(frozen=True)
class SimConfig:
    population_size: int
    generations: int
    policy: PolicySpec
    width: int = 64
    seed: int = 0
    selection: str = "drift"
    tournament_size: int = 2
    mutation_scale: float = 0.1
    synchronous: bool = True

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError("population size must be at least 2")
        if self.generations < 1:
            raise ConfigError("at least one generation is required")
        if self.width not in SUPPORTED_WIDTHS:
            raise ConfigError(f"differentia width must be one of {SUPPORTED_WIDTHS}")
        if self.selection not in ("drift", "tournament"):
            raise ConfigError("selection must be 'drift' or 'tournament'")
        if self.selection == "tournament" and self.tournament_size < 1:
            raise ConfigError("tournament size must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")

    @property
    def final_depth(self) -> int:
        """Deposit count of extant columns in synchronous mode."""
        return self.generations + 1


@dataclass
class SimResult:
    config: SimConfig
    tree: PhyloTree
    columns: list[Column]
    ids: list[int]
    tracker_nodes: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def labels(self) -> list[str]:
        return [str(i) for i in self.ids]


class _Selector:
    def __init__(self, config: SimConfig):
        self.rng = substream(config.seed, "selection")
        self.noise = substream(config.seed, "landscape")
        self.tournament = config.selection == "tournament"
        self.k = config.tournament_size
        self.scale = config.mutation_scale

    def parents(self, fitness: np.ndarray, count: int) -> np.ndarray:
        pool = len(fitness)
        if not self.tournament:
            return self.rng.integers(0, pool, size=count)
        entrants = self.rng.integers(0, pool, size=(count, self.k))
        winners = np.argmax(fitness[entrants], axis=1)
        return entrants[np.arange(count), winners]

    def inherit(self, parent_fitness: np.ndarray) -> np.ndarray:
        if not self.tournament:
            return parent_fitness
        return parent_fitness + self.noise.normal(0.0, self.scale, size=len(parent_fitness))


def simulate(config: SimConfig) -> SimResult:
    if config.synchronous:
        return _simulate_synchronous(config)
    return _simulate_moran(config)


def _progenitor(config: SimConfig, keys: np.random.Generator) -> Column:
    return create_column(config.policy, config.width, int(keys.integers(0, 2 ** 63))).deposit()


def _simulate_synchronous(config: SimConfig) -> SimResult:
    n = config.population_size
    selector = _Selector(config)
    keys = substream(config.seed, "differentia")
    tracker = TrackerForest([0], Mode.PRUNING)
    ids = [0]
    columns = [_progenitor(config, keys)]
    fitness = np.zeros(1)
    next_id = 1
    for g in range(1, config.generations + 1):
        picks = selector.parents(fitness, n)
        seeds = keys.integers(0, 2 ** 63, size=n)
        new_ids = list(range(next_id, next_id + n))
        next_id += n
        for child, p, s in zip(new_ids, picks.tolist(), seeds.tolist()):
            tracker.on_birth(ids[p], child, g)
        new_columns = [columns[p].clone_for_offspring(s) for p, s in zip(picks.tolist(), seeds.tolist())]
        fitness = selector.inherit(fitness[picks])
        for old in ids:
            tracker.on_removal(old, g)
        ids, columns = new_ids, new_columns
    return SimResult(config, tracker.extract_tree(), columns, ids, len(tracker))


def _simulate_moran(config: SimConfig) -> SimResult:
    n = config.population_size
    selector = _Selector(config)
    keys = substream(config.seed, "differentia")
    tracker = TrackerForest([0], Mode.PRUNING)
    ids = [0]
    columns = [_progenitor(config, keys)]
    fitness = np.zeros(1)
    next_id = 1
    # grow from the progenitor to N, then replace one individual per step
    steps = (n - 1) + n * config.generations
    for _ in range(steps):
        p = int(selector.parents(fitness, 1)[0])
        child = next_id
        next_id += 1
        col = columns[p].clone_for_offspring(int(keys.integers(0, 2 ** 63)))
        # origin time is generational depth, i.e. the newest rank
        tracker.on_birth(ids[p], child, col.deposit_count - 1)
        child_fit = selector.inherit(fitness[[p]])
        if len(ids) < n:
            ids.append(child)
            columns.append(col)
            fitness = np.append(fitness, child_fit)
            continue
        victim = int(selector.rng.integers(0, n))
        tracker.on_removal(ids[victim])
        ids[victim] = child
        columns[victim] = col
        fitness[victim] = child_fit[0]
    return SimResult(config, tracker.extract_tree(), columns, ids, len(tracker))
