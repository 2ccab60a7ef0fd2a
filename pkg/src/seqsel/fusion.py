"""Per-sequence representative vectors: first frame, or fused multi-frame.

Multi-frame fusion averages frames sampled at a fixed stride and then
L2-normalizes, which keeps cosine geometry consistent between single-frame
and fused representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distance import ZERO_NORM_EPS
from .errors import ZeroNormVector
from .types import EmbeddingSet, _frozen_array


class FusionMode(Enum):
    FIRST_FRAME = "first_frame"
    MULTI_FRAME = "multi_frame"


@dataclass(frozen=True)
class RepresentativeSet:
    """One representative vector per pool sequence, in pool order."""

    reps: np.ndarray
    mode: FusionMode
    interval: int
    frames_used: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "reps", _frozen_array(np.asarray(self.reps, dtype=np.float64))
        )
        object.__setattr__(
            self, "frames_used", tuple(tuple(int(i) for i in f) for f in self.frames_used)
        )

    @property
    def n(self) -> int:
        return self.reps.shape[0]


def sample_frame_indices(frame_count: int, interval: int, count: int) -> tuple[int, ...]:
    """Stride indices 0, a, 2a, ... clamped to the final frame, duplicates dropped.

    Short sequences clamp rather than error so every sequence still gets a
    representative.
    """
    if interval < 1 or count < 1:
        raise ValueError(f"interval and count must be >= 1, got {interval}, {count}")
    picked: list[int] = []
    for k in range(count):
        idx = min(k * interval, frame_count - 1)
        if not picked or picked[-1] != idx:
            picked.append(idx)
    return tuple(picked)


def first_frame_reps(pool: EmbeddingSet) -> RepresentativeSet:
    """Each sequence is represented by its first frame, unmodified."""
    reps = np.stack([seq.frames[0] for seq in pool.sequences])
    return RepresentativeSet(
        reps=reps,
        mode=FusionMode.FIRST_FRAME,
        interval=1,
        frames_used=((0,),) * pool.n,
    )


def multi_frame_reps(pool: EmbeddingSet, interval: int = 10, count: int = 5) -> RepresentativeSet:
    """Fuse strided frames into one unit-norm representative per sequence.

    The representative is the arithmetic mean of the sampled frame vectors,
    L2-normalized. Raises ZeroNormVector (with the sequence index) when the
    mean cancels to norm below 1e-12.
    """
    reps = np.empty((pool.n, pool.dim), dtype=np.float64)
    frames_used = []
    for i, seq in enumerate(pool.sequences):
        idx = sample_frame_indices(seq.frame_count, interval, count)
        frames_used.append(idx)
        mean = seq.frames[list(idx)].mean(axis=0)
        norm = float(np.sqrt(np.einsum("i,i->", mean, mean)))
        if norm < ZERO_NORM_EPS:
            raise ZeroNormVector(
                f"fused representative of sequence {pool.ids[i]!r} has norm below "
                f"{ZERO_NORM_EPS}",
                index=i,
            )
        reps[i] = mean / norm
    return RepresentativeSet(
        reps=reps,
        mode=FusionMode.MULTI_FRAME,
        interval=interval,
        frames_used=tuple(frames_used),
    )
