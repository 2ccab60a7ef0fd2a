"""Overlap-based bounding-box losses with analytic gradients.

The asymmetric overlap coefficient

    T = I / (I + alpha * |B - Bgt| + beta * |Bgt - B|)

weights the two error areas separately: |B - Bgt| is predicted area outside
the ground truth (background treated as target), |Bgt - B| is ground-truth
area missed by the prediction (target treated as background). alpha = beta =
0.5 reduces T to the Dice coefficient, alpha = beta = 1 to Jaccard (IoU), so
1 - T(1, 1) recovers the plain IoU loss.

No epsilon smoothing is applied to the denominator; a vanishing denominator
signals corrupt annotation and raises DegeneratePair instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegeneratePair
from .types import BBox, LossParams, _frozen_array


@dataclass(frozen=True)
class BoxDecomposition:
    """Areas of the overlap decomposition: I, |B - Bgt|, |Bgt - B|, union."""

    inter: float
    b_minus_gt: float
    gt_minus_b: float
    union: float


@dataclass(frozen=True)
class LossValue:
    """A loss evaluation; grad holds d(loss)/d(x1, y1, x2, y2) when requested."""

    value: float
    grad: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if self.grad is not None:
            g = np.asarray(self.grad, dtype=np.float64)
            if g.shape != (4,) or not np.isfinite(g).all():
                raise ValueError(f"grad must be a finite 4-vector, got {g!r}")
            object.__setattr__(self, "grad", _frozen_array(g))
        if not np.isfinite(self.value):
            raise ValueError(f"loss value must be finite, got {self.value!r}")


def decompose(b: BBox, gt: BBox) -> BoxDecomposition:
    """Intersection, the two difference areas, and the union of a box pair."""
    iw = min(b.x2, gt.x2) - max(b.x1, gt.x1)
    ih = min(b.y2, gt.y2) - max(b.y1, gt.y1)
    inter = max(iw, 0.0) * max(ih, 0.0)
    b_minus_gt = b.area - inter
    gt_minus_b = gt.area - inter
    return BoxDecomposition(
        inter=inter,
        b_minus_gt=b_minus_gt,
        gt_minus_b=gt_minus_b,
        union=inter + b_minus_gt + gt_minus_b,
    )


def iou_loss(b: BBox, gt: BBox) -> LossValue:
    """1 - I/U. Raises DegeneratePair when both boxes have zero area."""
    dec = decompose(b, gt)
    if dec.union == 0.0:
        raise DegeneratePair("both boxes have zero area; IoU is undefined")
    return LossValue(value=1.0 - dec.inter / dec.union)


def tversky(b: BBox, gt: BBox, alpha: float, beta: float) -> float:
    """Asymmetric overlap coefficient in [0, 1].

    Swapping the boxes maps (alpha, beta) to (beta, alpha) exactly.
    """
    dec = decompose(b, gt)
    # grouping keeps the box swap bitwise symmetric (addition commutes)
    denom = dec.inter + (alpha * dec.b_minus_gt + beta * dec.gt_minus_b)
    if denom == 0.0:
        raise DegeneratePair("overlap coefficient denominator vanishes")
    return dec.inter / denom


def _tversky_gradient(b: BBox, gt: BBox, alpha: float, beta: float) -> np.ndarray:
    """d(1 - T)/d(x1, y1, x2, y2) of the predicted box.

    The area formulas are piecewise linear; at ties (edges exactly touching,
    or aligned with the ground truth) the one-sided derivative from the
    interior of the overlapping configuration is used, so optimizers passing
    through touching configurations always receive a finite value.
    """
    w = b.x2 - b.x1
    h = b.y2 - b.y1
    iw = min(b.x2, gt.x2) - max(b.x1, gt.x1)
    ih = min(b.y2, gt.y2) - max(b.y1, gt.y1)
    iwp = max(iw, 0.0)
    ihp = max(ih, 0.0)
    inter = iwp * ihp
    denom = inter + (alpha * (b.area - inter) + beta * (gt.area - inter))
    if denom == 0.0:
        raise DegeneratePair("overlap coefficient denominator vanishes")

    # Overlap-width derivatives: active only when the b edge is the binding
    # one; ties resolve as if b's edge were inside the ground truth.
    gate_x = 1.0 if iw >= 0.0 else 0.0
    gate_y = 1.0 if ih >= 0.0 else 0.0
    d_inter = np.array(
        [
            gate_x * (-1.0 if b.x1 >= gt.x1 else 0.0) * ihp,
            gate_y * (-1.0 if b.y1 >= gt.y1 else 0.0) * iwp,
            gate_x * (1.0 if b.x2 <= gt.x2 else 0.0) * ihp,
            gate_y * (1.0 if b.y2 <= gt.y2 else 0.0) * iwp,
        ]
    )
    d_area = np.array([-h, -w, h, w])
    d_denom = (1.0 - alpha - beta) * d_inter + alpha * d_area
    # L = 1 - inter/denom
    return -(d_inter * denom - inter * d_denom) / (denom * denom)


def tversky_loss(
    b: BBox, gt: BBox, params: LossParams, with_grad: bool = False
) -> LossValue:
    """1 - T(b, gt) under the configured alpha/beta weights.

    With with_grad=True, also returns the analytic derivative with respect to
    the predicted box corners (see _tversky_gradient for the tie convention).
    """
    value = 1.0 - tversky(b, gt, params.alpha, params.beta)
    grad = _tversky_gradient(b, gt, params.alpha, params.beta) if with_grad else None
    return LossValue(value=value, grad=grad)


def combine_total_loss(l_tbb: float, l_cl: float, eta: float) -> float:
    """Total training loss: box term plus eta-weighted classification term."""
    for name, v in (("l_tbb", l_tbb), ("l_cl", l_cl), ("eta", eta)):
        if not np.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
    if l_tbb < 0 or l_cl < 0:
        raise ValueError(f"loss terms must be >= 0, got l_tbb={l_tbb}, l_cl={l_cl}")
    return float(l_tbb) + float(eta) * float(l_cl)
