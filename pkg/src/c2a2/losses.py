"""Supervision losses over condition coordinates and AU activations, plus
composition of full 3D labels from planar annotations and an estimated lift.

Both losses return the value together with the analytic gradient w.r.t. the
prediction; batch variants reduce by arithmetic mean in input order.
"""

from __future__ import annotations

import math

import numpy as np

from c2a2._kernels import impl as _impl
from c2a2.aus import EPSILON
from c2a2.errors import DimensionMismatchError, OutOfBallError, RangeViolationError
from c2a2.geometry import AVPoint, EmotionPoint


def _coerce_coords(pred) -> np.ndarray:
    if isinstance(pred, EmotionPoint):
        return pred.as_array()
    if isinstance(pred, AVPoint):
        return np.array([pred.valence, pred.arousal])
    arr = np.asarray(pred, dtype=float)
    if arr.shape not in {(2,), (3,)}:
        raise DimensionMismatchError(f"coordinate prediction has shape {arr.shape}")
    return arr


def av_loss(pred, label: AVPoint) -> tuple[float, np.ndarray]:
    """Squared planar distance between a coordinate prediction and its AV
    label. 3D predictions are projected to the plane first; the gradient
    then carries a zero in the lift slot."""
    coords = _coerce_coords(pred)
    if isinstance(label, AVPoint):
        target = np.array([label.valence, label.arousal])
    else:
        target = np.asarray(label, dtype=float)
        if target.shape != (2,):
            raise DimensionMismatchError(f"AV label has shape {target.shape}")
    diff = coords[:2] - target
    value = float(diff @ diff)
    grad = np.zeros_like(coords)
    grad[:2] = 2.0 * diff
    return value, grad


def av_loss_batch(pred: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row squared planar distances and gradients for (n, 2|3) predictions
    against (n, 2) labels."""
    pred = np.asarray(pred, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if pred.ndim != 2 or pred.shape[1] not in (2, 3):
        raise DimensionMismatchError(f"prediction batch has shape {pred.shape}")
    if labels.shape != (pred.shape[0], 2):
        raise DimensionMismatchError(f"label batch has shape {labels.shape}")
    diff = pred[:, :2] - labels
    values = np.sum(diff * diff, axis=1)
    grads = np.zeros_like(pred)
    grads[:, :2] = 2.0 * diff
    return values, grads


def _check_probs(name: str, arr: np.ndarray) -> None:
    if arr.min() < EPSILON or arr.max() > 1.0 - EPSILON:
        raise RangeViolationError(f"{name} entries must lie in [{EPSILON}, {1.0 - EPSILON}]")


def au_kl_loss(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Symmetric Bernoulli KL between a predicted and a target 15-unit
    activation vector, with the analytic gradient w.r.t. the prediction.

    Per unit: KL(p||q) + KL(q||p) = (p - q) * (logit(p) - logit(q)), summed
    over the 15 units. Zero exactly when the vectors coincide, and symmetric
    in its arguments."""
    values, grads = au_kl_loss_batch(np.atleast_2d(pred), np.atleast_2d(target))
    return float(values[0]), grads[0]


def au_kl_loss_batch(pred: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise symmetric Bernoulli KL and gradients over (n, 15) batches."""
    pred = np.ascontiguousarray(pred, dtype=float)
    target = np.ascontiguousarray(target, dtype=float)
    if pred.ndim != 2 or pred.shape != target.shape:
        raise DimensionMismatchError(
            f"prediction shape {pred.shape} does not match target shape {target.shape}"
        )
    _check_probs("prediction", pred)
    _check_probs("target", target)
    return _impl.sym_kl(pred, target)


def compose_z_label(av: AVPoint, zhat: float) -> EmotionPoint:
    """Attach an estimated lift to a ground-truth planar annotation.

    The planar coordinates are authoritative and never altered; the lift is
    shrunk just enough to keep the point inside the unit ball:
    z = sign(zhat) * min(|zhat|, sqrt(1 - valence^2 - arousal^2)).

    The annotation must lie inside the unit disk; planar points outside it
    cannot carry any lift without leaving the ball.
    """
    planar_sq = av.valence * av.valence + av.arousal * av.arousal
    if planar_sq > 1.0 + 1e-9:
        raise OutOfBallError(
            f"AV point ({av.valence}, {av.arousal}) lies outside the unit disk"
        )
    head = math.sqrt(max(0.0, 1.0 - planar_sq))
    z = math.copysign(min(abs(zhat), head), zhat)
    return EmotionPoint(av.valence, av.arousal, z)
