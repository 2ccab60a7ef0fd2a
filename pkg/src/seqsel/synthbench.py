"""Synthetic clustered pools with planted outliers, and the coverage benchmark.

The benchmark is a desk-scale proxy for downstream model quality: it plants k
well-separated clusters of sequences on the unit sphere plus a few isolated
outlier sequences, runs each selection strategy under a budget, and measures
how many distinct clusters the selected subset covers and how many outliers
it wastes budget on. First frames are generated noisier than later frames, so
multi-frame fusion measurably denoises the representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ClusterPackingFailed
from .distance import distance_matrix, nn_stats
from .fusion import multi_frame_reps
from .rng import make_rng
from .selection import run_selection
from .types import (
    EmbeddingSet,
    Metric,
    SelectionConfig,
    SequenceEmbedding,
    Strategy,
    _frozen_array,
)

OUTLIER = -1

# First frames carry extra background interference relative to later frames.
_FIRST_FRAME_NOISE_FACTOR = 14.0
# Bounded retries: per-direction rejection draws, and whole-pool regenerations
# when a planted outlier fails the isolation condition.
_PACKING_TRIES_PER_DIRECTION = 512
_MAX_REGENERATIONS = 32


@dataclass(frozen=True)
class SynthConfig:
    """Geometry of a generated pool: k clusters plus isolated outliers."""

    clusters: int
    samples_per_cluster: int
    dim: int
    frames_per_sequence: int = 5
    cluster_spread: float = 0.08
    outliers: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.clusters < 2:
            raise ValueError(f"need at least 2 clusters, got {self.clusters}")
        if self.dim < 2:
            raise ValueError(f"need dim >= 2, got {self.dim}")
        if self.samples_per_cluster < 1:
            raise ValueError("samples_per_cluster must be >= 1")
        if self.frames_per_sequence < 1:
            raise ValueError("frames_per_sequence must be >= 1")
        if not self.cluster_spread > 0:
            raise ValueError(f"cluster_spread must be > 0, got {self.cluster_spread}")
        if self.outliers < 0:
            raise ValueError("outliers must be >= 0")

    @property
    def pool_size(self) -> int:
        return self.clusters * self.samples_per_cluster + self.outliers


@dataclass(frozen=True)
class BenchCell:
    """One (strategy, budget, seed) run of the benchmark."""

    strategy: Strategy
    budget: int
    seed: int
    clusters_covered: int
    outliers_selected: int


@dataclass(frozen=True)
class StrategySummary:
    """Aggregate over seeds for one (strategy, budget) pair."""

    strategy: Strategy
    budget: int
    mean_clusters_covered: float
    coverage_rate: float
    outliers_selected: int


@dataclass(frozen=True)
class BenchReport:
    config: SynthConfig
    strategies: tuple[Strategy, ...]
    budgets: tuple[int, ...]
    seeds: tuple[int, ...]
    interval: int
    cells: tuple[BenchCell, ...]
    summaries: tuple[StrategySummary, ...]

    @property
    def seeds_run(self) -> int:
        return len(self.seeds)

    def cells_for(self, strategy: Strategy, budget: int) -> tuple[BenchCell, ...]:
        """Cells of one (strategy, budget) pair, in seed order."""
        return tuple(
            c for c in self.cells if c.strategy is strategy and c.budget == budget
        )


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.sqrt(np.einsum("i,i->", v, v))


def _pack_direction(
    rng: np.random.Generator, dim: int, others: list[np.ndarray], max_cos: float
) -> np.ndarray:
    """Draw a unit vector whose angle to every `other` is at least the floor."""
    for _ in range(_PACKING_TRIES_PER_DIRECTION):
        cand = _unit(rng.standard_normal(dim))
        if all(float(np.einsum("i,i->", cand, o)) <= max_cos for o in others):
            return cand
    raise ClusterPackingFailed(
        f"could not place a direction at the required separation in dim {dim}; "
        "the dimensionality is too small for this many clusters/outliers"
    )


def generate_pool(config: SynthConfig) -> tuple[EmbeddingSet, np.ndarray]:
    """Generate a labeled pool; labels hold the cluster id or OUTLIER (-1).

    Cluster directions are packed with pairwise angle >= 2 * spread, outlier
    directions with angle >= 4 * spread from every cluster and from each
    other. After generation the planted-outlier condition (each outlier's
    nearest-neighbor distance above the pool average, on fused
    representatives) is asserted; on violation the pool is regenerated from a
    derived sub-seed, a bounded number of times.
    """
    k = config.clusters
    spread = config.cluster_spread
    # Per-component noise scale giving roughly `spread` angular std.
    noise = spread / math.sqrt(config.dim - 1)

    for attempt in range(_MAX_REGENERATIONS):
        rng = make_rng(config.seed, attempt)

        centers: list[np.ndarray] = []
        for _ in range(k):
            centers.append(
                _pack_direction(rng, config.dim, centers, math.cos(2.0 * spread))
            )
        out_dirs: list[np.ndarray] = []
        for _ in range(config.outliers):
            out_dirs.append(
                _pack_direction(
                    rng, config.dim, centers + out_dirs, math.cos(4.0 * spread)
                )
            )

        sequences: list[SequenceEmbedding] = []
        ids: list[str] = []
        labels: list[int] = []

        def make_sequence(direction: np.ndarray) -> SequenceEmbedding:
            frames = np.empty((config.frames_per_sequence, config.dim))
            for t in range(config.frames_per_sequence):
                scale = noise * (_FIRST_FRAME_NOISE_FACTOR if t == 0 else 1.0)
                frames[t] = _unit(direction + scale * rng.standard_normal(config.dim))
            return SequenceEmbedding(frames)

        for c, center in enumerate(centers):
            for s in range(config.samples_per_cluster):
                sequences.append(make_sequence(center))
                ids.append(f"c{c:02d}_s{s:03d}")
                labels.append(c)
        for j, direction in enumerate(out_dirs):
            sequences.append(make_sequence(direction))
            ids.append(f"outlier_{j:02d}")
            labels.append(OUTLIER)

        pool = EmbeddingSet(dim=config.dim, sequences=tuple(sequences), ids=tuple(ids))
        label_arr = _frozen_array(np.asarray(labels, dtype=np.int64))

        if config.outliers == 0:
            return pool, label_arr
        reps = multi_frame_reps(pool, interval=1, count=config.frames_per_sequence)
        stats = nn_stats(distance_matrix(reps.reps, Metric.COSINE))
        outlier_idx = np.flatnonzero(label_arr == OUTLIER)
        if (stats.d[outlier_idx] > stats.ave_d).all():
            return pool, label_arr

    raise ClusterPackingFailed(
        f"planted outliers failed the isolation condition in "
        f"{_MAX_REGENERATIONS} regenerations; increase the spread or pool size"
    )


def run_bench(
    config: SynthConfig,
    budgets: Sequence[int],
    strategies: Sequence[Strategy],
    seeds: Sequence[int],
    interval: int = 1,
) -> BenchReport:
    """Run every (strategy, budget, seed) cell and aggregate coverage.

    Each seed generates its own pool (the config's seed field is replaced) and
    is reused for the selection seed, so the whole report is a deterministic
    function of the arguments.
    """
    budgets = tuple(int(b) for b in budgets)
    seeds = tuple(int(s) for s in seeds)
    strategies = tuple(strategies)
    for b in budgets:
        if b > config.pool_size:
            raise ValueError(f"budget {b} exceeds pool size {config.pool_size}")

    covered: dict[tuple[Strategy, int, int], BenchCell] = {}
    for seed in seeds:
        pool, labels = generate_pool(replace(config, seed=seed))
        for strategy in strategies:
            for budget in budgets:
                sel = run_selection(
                    pool,
                    SelectionConfig(
                        strategy=strategy,
                        budget=budget,
                        interval=interval,
                        frames_per_sequence=config.frames_per_sequence,
                        seed=seed,
                        metric=Metric.COSINE,
                    ),
                )
                chosen = labels[list(sel.selected)]
                covered[(strategy, budget, seed)] = BenchCell(
                    strategy=strategy,
                    budget=budget,
                    seed=seed,
                    clusters_covered=int(np.unique(chosen[chosen != OUTLIER]).size),
                    outliers_selected=int((chosen == OUTLIER).sum()),
                )

    cells = tuple(
        covered[(strategy, budget, seed)]
        for strategy in strategies
        for budget in budgets
        for seed in seeds
    )
    summaries = []
    for strategy in strategies:
        for budget in budgets:
            per_seed = [covered[(strategy, budget, s)] for s in seeds]
            mean_cov = float(np.mean([c.clusters_covered for c in per_seed]))
            summaries.append(
                StrategySummary(
                    strategy=strategy,
                    budget=budget,
                    mean_clusters_covered=mean_cov,
                    coverage_rate=mean_cov / config.clusters,
                    outliers_selected=int(sum(c.outliers_selected for c in per_seed)),
                )
            )
    return BenchReport(
        config=config,
        strategies=strategies,
        budgets=budgets,
        seeds=seeds,
        interval=interval,
        cells=cells,
        summaries=tuple(summaries),
    )


def sign_test_pvalue(wins: int, losses: int) -> float:
    """One-sided exact sign test: P[X >= wins] for X ~ Binomial(wins+losses, 1/2).

    Ties are excluded by the caller. Returns 1.0 when there are no decisive
    pairs.
    """
    m = wins + losses
    if m == 0:
        return 1.0
    total = sum(math.comb(m, i) for i in range(wins, m + 1))
    return total / 2.0**m


def write_bench_report(report: BenchReport, path) -> None:
    """Serialize a report as line-oriented text (tab-separated, byte-deterministic).

    Layout: a `benchreport` version line, header key/value lines, one `cell`
    line per (strategy, budget, seed) in strategy-major order, then one
    `summary` line per (strategy, budget). Field order is documented in the
    README.
    """
    cfg = report.config
    lines = [
        "benchreport\t1",
        f"clusters\t{cfg.clusters}",
        f"samples_per_cluster\t{cfg.samples_per_cluster}",
        f"dim\t{cfg.dim}",
        f"frames_per_sequence\t{cfg.frames_per_sequence}",
        f"cluster_spread\t{cfg.cluster_spread!r}",
        f"outliers\t{cfg.outliers}",
        f"interval\t{report.interval}",
        "strategies\t" + ",".join(s.value for s in report.strategies),
        "budgets\t" + ",".join(str(b) for b in report.budgets),
        "seeds\t" + ",".join(str(s) for s in report.seeds),
    ]
    for c in report.cells:
        lines.append(
            f"cell\t{c.strategy.value}\t{c.budget}\t{c.seed}\t"
            f"{c.clusters_covered}\t{c.outliers_selected}"
        )
    for s in report.summaries:
        lines.append(
            f"summary\t{s.strategy.value}\t{s.budget}\t"
            f"{s.mean_clusters_covered!r}\t{s.coverage_rate!r}\t{s.outliers_selected}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
