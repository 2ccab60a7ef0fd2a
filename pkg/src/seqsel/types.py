"""Shared data model: embedding pools, selection configuration and results, boxes.

All types validate their invariants on construction and are immutable
afterwards (arrays are marked read-only), so instances are safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateId,
    EmptyPool,
    InvalidBox,
    NonFiniteValue,
    PoolValidationError,
)

MAX_SEED = 2**64 - 1


class Strategy(Enum):
    """Subset selection strategies, from uniform baseline to validated FPS."""

    RANDOM = "random"
    SAL = "sal"    # farthest-point sampling on first-frame representatives
    MAL = "mal"    # farthest-point sampling on fused multi-frame representatives
    KMAL = "kmal"  # MAL plus nearest-neighbor validation of every candidate


class Metric(Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"


class RejectionReason(Enum):
    """Why a validated-FPS candidate was discarded (serialization tokens)."""

    NEIGHBOR_SELECTED = "NEIGHBOR_SELECTED"
    EXCEEDS_AVE_NN = "EXCEEDS_AVE_NN"


def _frozen_array(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SequenceEmbedding:
    """Per-frame feature vectors of one video sequence, shape (frame_count, dim)."""

    frames: np.ndarray

    def __post_init__(self):
        try:
            arr = np.asarray(self.frames, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise DimensionMismatch(f"ragged or non-numeric frame data: {exc}") from exc
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionMismatch(
                f"frames must have shape (frame_count, dim), got {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyPool(f"sequence must have at least one non-empty frame, got shape {arr.shape}")
        object.__setattr__(self, "frames", _frozen_array(arr))

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True)
class EmbeddingSet:
    """Unlabeled pool of sequence embeddings, one entry per video sequence."""

    dim: int
    sequences: tuple[SequenceEmbedding, ...]
    ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "sequences", tuple(self.sequences))
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        validate_pool(self)

    @property
    def n(self) -> int:
        return len(self.sequences)


def validate_pool(pool: EmbeddingSet) -> None:
    """Check every pool invariant, raising a specific error on the first violation.

    Returns None when the pool is well formed. Total: any malformed input maps
    to a PoolValidationError subclass, never an unrelated exception.
    """
    if pool.dim < 1:
        raise DimensionMismatch(f"dim must be a positive integer, got {pool.dim}")
    if len(pool.sequences) < 1:
        raise EmptyPool("pool contains no sequences")
    if len(pool.ids) != len(pool.sequences):
        raise PoolValidationError(
            f"{len(pool.ids)} ids for {len(pool.sequences)} sequences"
        )
    seen: set[str] = set()
    for sid in pool.ids:
        if sid in seen:
            raise DuplicateId(f"duplicate sequence id {sid!r}")
        seen.add(sid)
    for sid, seq in zip(pool.ids, pool.sequences):
        if not isinstance(seq, SequenceEmbedding):
            raise PoolValidationError(f"sequence {sid!r} is not a SequenceEmbedding")
        if seq.dim != pool.dim:
            raise DimensionMismatch(
                f"sequence {sid!r}: frame length {seq.dim} != pool dim {pool.dim}"
            )
        if not np.isfinite(seq.frames).all():
            raise NonFiniteValue(f"sequence {sid!r} contains non-finite components")


def pool_from_arrays(
    frames_per_sequence: Sequence[np.ndarray],
    ids: Optional[Sequence[str]] = None,
) -> EmbeddingSet:
    """Build a pool from per-sequence (frame_count, dim) arrays.

    Ids default to "seq-<index>". The dimensionality is taken from the first
    sequence; mismatches surface as DimensionMismatch.
    """
    sequences = tuple(SequenceEmbedding(f) for f in frames_per_sequence)
    if not sequences:
        raise EmptyPool("pool contains no sequences")
    if ids is None:
        ids = tuple(f"seq-{i}" for i in range(len(sequences)))
    return EmbeddingSet(dim=sequences[0].dim, sequences=sequences, ids=tuple(ids))


@dataclass(frozen=True)
class SelectionConfig:
    """Parameters of one selection run.

    Defaults follow the reference setup: frame interval 10, five cooperating
    frames per sequence, cosine distance.
    """

    strategy: Strategy
    budget: int
    interval: int = 10
    frames_per_sequence: int = 5
    seed: int = 0
    metric: Metric = Metric.COSINE

    def __post_init__(self):
        if not isinstance(self.strategy, Strategy):
            raise ValueError(f"strategy must be a Strategy, got {self.strategy!r}")
        if not isinstance(self.metric, Metric):
            raise ValueError(f"metric must be a Metric, got {self.metric!r}")
        for name in ("budget", "interval", "frames_per_sequence"):
            v = getattr(self, name)
            if int(v) != v or int(v) < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class AuditRecord:
    """One step of a selection run, accepted or rejected.

    min_distance_to_selected is None for the very first pick (nothing is
    selected yet) and for uniform-random draws, where it is not defined.
    """

    step: int
    candidate_index: int
    min_distance_to_selected: Optional[float]
    accepted: bool
    rejection_reason: Optional[RejectionReason] = None


@dataclass(frozen=True)
class SelectionResult:
    """Ordered selected pool indices plus the per-step audit trail.

    exhausted is True when eligible candidates ran out before the budget was
    reached; in that case len(selected) < budget.
    """

    selected: tuple[int, ...]
    audit: tuple[AuditRecord, ...] = field(repr=False)
    exhausted: bool = False

    def __post_init__(self):
        sel = tuple(int(i) for i in self.selected)
        if len(set(sel)) != len(sel):
            raise ValueError("selected indices contain duplicates")
        object.__setattr__(self, "selected", sel)
        object.__setattr__(self, "audit", tuple(self.audit))
        object.__setattr__(self, "exhausted", bool(self.exhausted))


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in pixel coordinates; zero-area boxes are permitted."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise InvalidBox(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.x2 < self.x1 or self.y2 < self.y1:
            raise InvalidBox(
                f"box corners are inverted: ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.y1, self.x2, self.y2], dtype=np.float64)


@dataclass(frozen=True)
class LossParams:
    """Overlap-loss weights: alpha/beta for the two error areas, eta for the
    classification term in the total loss."""

    alpha: float = 0.4
    beta: float = 0.6
    eta: float = 100.0

    def __post_init__(self):
        for name in ("alpha", "beta", "eta"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)
