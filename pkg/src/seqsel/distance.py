"""Pairwise distances, the dense distance matrix, and nearest-neighbor statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, PoolTooSmall, ZeroNormVector
from .types import Metric, _frozen_array

ZERO_NORM_EPS = 1e-12


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise distances with an exactly-zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {v.shape}")
        if np.diagonal(v).any():
            raise ValueError("distance matrix diagonal must be exactly zero")
        if not (v == v.T).all():
            raise ValueError("distance matrix must be exactly symmetric")
        if (v < 0).any():
            raise ValueError("distances must be non-negative")
        object.__setattr__(self, "values", _frozen_array(v))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class NNStats:
    """Per-sample nearest neighbor, its distance, and the pool average.

    nn[i] is the smallest index attaining min over j != i of values[i][j];
    d[i] is that minimum; ave_d is the mean of d.
    """

    nn: np.ndarray
    d: np.ndarray
    ave_d: float

    def __post_init__(self):
        object.__setattr__(self, "nn", _frozen_array(np.asarray(self.nn, dtype=np.int64)))
        object.__setattr__(self, "d", _frozen_array(np.asarray(self.d, dtype=np.float64)))
        object.__setattr__(self, "ave_d", float(self.ave_d))


def _as_vector(u, name: str) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be a 1-D vector, got shape {arr.shape}")
    return arr


def cosine_distance(u, v) -> float:
    """1 - cos(u, v), clamped to [0, 2].

    Raises ZeroNormVector when either norm is below 1e-12: a degenerate
    embedding would silently corrupt every statistic built on top.
    """
    u = _as_vector(u, "u")
    v = _as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionMismatch(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu = float(np.sqrt(np.einsum("i,i->", u, u)))
    nv = float(np.sqrt(np.einsum("i,i->", v, v)))
    if nu < ZERO_NORM_EPS or nv < ZERO_NORM_EPS:
        raise ZeroNormVector(f"vector norm below {ZERO_NORM_EPS}")
    val = 1.0 - float(np.einsum("i,i->", u, v)) / (nu * nv)
    return min(max(val, 0.0), 2.0)


def euclidean_distance(u, v) -> float:
    u = _as_vector(u, "u")
    v = _as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionMismatch(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    diff = u - v
    return float(np.sqrt(np.einsum("i,i->", diff, diff)))


def distance_matrix(reps, metric: Metric = Metric.COSINE) -> DistanceMatrix:
    """Dense pairwise distances between representative vectors.

    Entries above the diagonal are computed once and mirrored, so the matrix
    is exactly symmetric. All reductions go through einsum, whose summation
    order is fixed regardless of BLAS threading, keeping results bitwise
    independent of parallelism.
    """
    try:
        x = np.ascontiguousarray(np.asarray(reps, dtype=np.float64))
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"representatives must share one length: {exc}") from exc
    if x.ndim != 2:
        raise DimensionMismatch(f"expected (n, dim) representatives, got shape {x.shape}")
    n = x.shape[0]

    if metric is Metric.COSINE:
        norms = np.sqrt(np.einsum("ij,ij->i", x, x))
        bad = np.flatnonzero(norms < ZERO_NORM_EPS)
        if bad.size:
            i = int(bad[0])
            raise ZeroNormVector(f"representative {i} has norm below {ZERO_NORM_EPS}", index=i)
        xn = x / norms[:, None]
        d = 1.0 - np.einsum("ik,jk->ij", xn, xn)
        np.clip(d, 0.0, 2.0, out=d)
    elif metric is Metric.EUCLIDEAN:
        d = np.empty((n, n), dtype=np.float64)
        for i in range(n):
            diff = x - x[i]
            d[i] = np.sqrt(np.einsum("jk,jk->j", diff, diff))
    else:
        raise ValueError(f"unknown metric: {metric!r}")

    upper = np.triu(d, 1)
    return DistanceMatrix(upper + upper.T)


def nn_stats(m: DistanceMatrix) -> NNStats:
    """Nearest-neighbor index/distance per sample and the pool mean distance.

    Ties break to the smallest index. Requires at least two samples.
    """
    n = m.n
    if n < 2:
        raise PoolTooSmall(f"nearest-neighbor statistics need n >= 2, got n = {n}")
    vals = m.values.copy()
    np.fill_diagonal(vals, np.inf)
    nn = np.argmin(vals, axis=1)  # first minimum, i.e. smallest index on ties
    d = vals[np.arange(n), nn]
    return NNStats(nn=nn, d=d, ave_d=float(d.mean()))
