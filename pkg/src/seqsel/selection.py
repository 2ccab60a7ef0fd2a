"""Subset selection strategies under a fixed budget.

Four strategies are provided:

* random  -- uniform draw without replacement (baseline),
* sal     -- farthest-point sampling on first-frame representatives,
* mal     -- farthest-point sampling on fused multi-frame representatives,
* kmal    -- mal plus nearest-neighbor validation: a candidate is accepted
             only if its nearest neighbor is not already selected and its
             nearest-neighbor distance does not exceed the pool average,
             which screens out isolated and low-quality sequences.

All strategies are deterministic functions of their inputs and the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import DistanceMatrix, NNStats, distance_matrix, nn_stats
from .errors import BudgetExceedsPool, NoEligibleSeed, PoolTooSmall
from .fusion import first_frame_reps, multi_frame_reps
from .rng import make_rng
from .types import (
    AuditRecord,
    EmbeddingSet,
    RejectionReason,
    SelectionConfig,
    SelectionResult,
    Strategy,
)


@dataclass
class FPSState:
    """Mutable scratch state of a farthest-point sweep.

    min_dist[i] is the distance from sample i to the nearest selected sample;
    it is 0 for selected samples (each row's self-distance is 0).
    """

    selected: list[int]
    min_dist: np.ndarray

    @classmethod
    def start(cls, m: DistanceMatrix, first: int) -> "FPSState":
        return cls(selected=[int(first)], min_dist=m.values[first].copy())

    def add(self, index: int, m: DistanceMatrix) -> None:
        self.selected.append(int(index))
        np.minimum(self.min_dist, m.values[index], out=self.min_dist)


def _check_budget(budget: int, n: int) -> None:
    if budget < 1:
        raise BudgetExceedsPool(f"budget must be >= 1, got {budget}")
    if budget > n:
        raise BudgetExceedsPool(f"budget {budget} exceeds pool size {n}")


def select_random(n: int, budget: int, seed: int) -> SelectionResult:
    """Uniform draw of `budget` distinct indices via a partial Fisher-Yates shuffle."""
    _check_budget(budget, n)
    rng = make_rng(seed)
    idxs = np.arange(n)
    audit = []
    for k in range(budget):
        j = k + int(rng.integers(n - k))
        idxs[k], idxs[j] = idxs[j], idxs[k]
        audit.append(
            AuditRecord(
                step=k,
                candidate_index=int(idxs[k]),
                min_distance_to_selected=None,
                accepted=True,
            )
        )
    return SelectionResult(
        selected=tuple(int(i) for i in idxs[:budget]),
        audit=tuple(audit),
        exhausted=False,
    )


def select_fps(m: DistanceMatrix, budget: int, start: int) -> SelectionResult:
    """Greedy farthest-point sampling from a fixed start index.

    Every subsequent pick maximizes the minimum distance to the selected set;
    ties break to the smallest index, making the output deterministic.
    """
    n = m.n
    _check_budget(budget, n)
    if not 0 <= start < n:
        raise BudgetExceedsPool(f"start index {start} outside pool of size {n}")
    state = FPSState.start(m, start)
    chosen = np.zeros(n, dtype=bool)
    chosen[start] = True
    audit = [AuditRecord(0, int(start), None, True)]
    for step in range(1, budget):
        cand = np.where(chosen, -1.0, state.min_dist)
        nxt = int(np.argmax(cand))  # first maximum, i.e. smallest index on ties
        audit.append(AuditRecord(step, nxt, float(state.min_dist[nxt]), True))
        state.add(nxt, m)
        chosen[nxt] = True
    return SelectionResult(tuple(state.selected), tuple(audit), exhausted=False)


def select_kmal(m: DistanceMatrix, stats: NNStats, budget: int, seed: int) -> SelectionResult:
    """Farthest-point sampling with nearest-neighbor validation.

    The first sample is drawn uniformly (seeded) from those whose
    nearest-neighbor distance does not exceed the pool average. Each later
    round takes the farthest-point candidate among samples not yet selected
    or rejected, and accepts it only if its nearest neighbor is outside the
    selected set and its nearest-neighbor distance is within the pool
    average. Rejected candidates are permanently ineligible, so the loop
    terminates after at most n rounds; if candidates run out early the
    partial result is returned with exhausted=True.
    """
    n = m.n
    if n < 2:
        raise PoolTooSmall(f"validated selection needs n >= 2, got n = {n}")
    _check_budget(budget, n)
    eligible = np.flatnonzero(stats.d <= stats.ave_d)
    if eligible.size == 0:
        raise NoEligibleSeed("no sample has nearest-neighbor distance <= pool average")
    rng = make_rng(seed)
    first = int(eligible[int(rng.integers(eligible.size))])

    state = FPSState.start(m, first)
    selected = np.zeros(n, dtype=bool)
    rejected = np.zeros(n, dtype=bool)
    selected[first] = True
    audit = [AuditRecord(0, first, None, True)]

    step = 1
    while len(state.selected) < budget:
        open_mask = ~(selected | rejected)
        if not open_mask.any():
            break
        cand = np.where(open_mask, state.min_dist, -1.0)
        i_s = int(np.argmax(cand))
        md = float(state.min_dist[i_s])
        if selected[int(stats.nn[i_s])]:
            rejected[i_s] = True
            audit.append(
                AuditRecord(step, i_s, md, False, RejectionReason.NEIGHBOR_SELECTED)
            )
        elif stats.d[i_s] > stats.ave_d:
            rejected[i_s] = True
            audit.append(
                AuditRecord(step, i_s, md, False, RejectionReason.EXCEEDS_AVE_NN)
            )
        else:
            state.add(i_s, m)
            selected[i_s] = True
            audit.append(AuditRecord(step, i_s, md, True))
        step += 1

    return SelectionResult(
        selected=tuple(state.selected),
        audit=tuple(audit),
        exhausted=len(state.selected) < budget,
    )


def run_selection(pool: EmbeddingSet, config: SelectionConfig) -> SelectionResult:
    """Dispatch a selection run over a pool according to the configuration.

    For sal/mal the farthest-point start index is drawn from the seeded
    generator over all pool samples, mirroring the seeded first pick of the
    validated strategy.
    """
    n = pool.n
    _check_budget(config.budget, n)
    if config.strategy is Strategy.RANDOM:
        return select_random(n, config.budget, config.seed)
    if config.strategy is Strategy.SAL:
        reps = first_frame_reps(pool)
    else:
        reps = multi_frame_reps(pool, config.interval, config.frames_per_sequence)
    m = distance_matrix(reps.reps, config.metric)
    if config.strategy is Strategy.KMAL:
        return select_kmal(m, nn_stats(m), config.budget, config.seed)
    start = int(make_rng(config.seed).integers(n))
    return select_fps(m, config.budget, start)
