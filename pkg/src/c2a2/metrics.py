"""Evaluation metrics over the condition space.

* Fréchet distance between Gaussians fitted to two emotion-feature sets.
* Reconstruction error of a target emotion under a budgeted uniform search
  against a classifier oracle.
* Smoothness of oracle outputs along rays of increasing intensity.

A classifier oracle is any callable mapping an (n, 3) array of condition
points to an (n, 7) array of class probabilities over
[neutral, happy, sad, fearful, angry, surprised, disgusted].
SyntheticOracle provides a frame-aware softmax stand-in for tests and the
CLI.

Oracle evaluations are batched; reductions run in index order so repeated
runs are bit-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from c2a2.categories import AXIS_BASICS, BasicEmotion
from c2a2.errors import (
    DimensionMismatchError,
    NumericalFailureError,
    OutOfRangeError,
    TooFewSamplesError,
)
from c2a2.geometry import AxisFrame, _uniform_ball, _uniform_disk

#: Oracle output class order.
ORACLE_CLASSES: tuple[BasicEmotion, ...] = (BasicEmotion.NEUTRAL,) + AXIS_BASICS

_CLASS_INDEX = {b: i for i, b in enumerate(ORACLE_CLASSES)}

#: Eigenvalues above this (negative) floor are treated as rounding noise.
_EIG_FLOOR = -1e-8

#: Jitter escalation ladder for the matrix square root.
_JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@dataclass(frozen=True, eq=False)
class FeatureStats:
    """Mean and covariance of one feature set."""

    mean: np.ndarray
    cov: np.ndarray
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise TooFewSamplesError(f"need at least 2 samples, got {self.count}")
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or cov.shape != (mean.shape[0], mean.shape[0]):
            raise DimensionMismatchError(
                f"mean shape {mean.shape} does not match cov shape {cov.shape}"
            )
        if np.max(np.abs(cov - cov.T)) > 1e-9:
            raise OutOfRangeError("covariance is not symmetric")
        if float(np.linalg.eigvalsh(cov).min()) < _EIG_FLOOR * 10:
            raise OutOfRangeError("covariance has a significantly negative eigenvalue")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def fit_gaussian(features: np.ndarray) -> FeatureStats:
    """Column means and unbiased sample covariance of an (n, d) matrix,
    symmetrized as (C + C^T) / 2."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2:
        raise DimensionMismatchError(f"feature matrix has shape {features.shape}")
    n = features.shape[0]
    if n < 2:
        raise TooFewSamplesError(f"need at least 2 rows, got {n}")
    if not np.all(np.isfinite(features)):
        raise OutOfRangeError("feature matrix contains non-finite entries")
    mean = features.mean(axis=0)
    cov = np.atleast_2d(np.cov(features, rowvar=False, ddof=1))
    cov = (cov + cov.T) / 2.0
    return FeatureStats(mean=mean, cov=cov, count=n)


def _psd_sqrt_eigs(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Eigendecomposition with tiny negatives clipped; None signals failure
    (either LinAlgError or an eigenvalue below the rounding floor)."""
    try:
        eigvals, eigvecs = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError:
        return None
    if eigvals.min() < _EIG_FLOOR:
        return None
    return np.clip(eigvals, 0.0, None), eigvecs


def frechet_distance(s1: FeatureStats, s2: FeatureStats) -> float:
    """Fréchet distance between two Gaussians:

        ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2})

    with the cross term evaluated through the symmetric form
    sqrt(S1) S2 sqrt(S1) so only symmetric eigendecompositions are needed.
    On eigen-failure a jitter delta*I is added, escalating tenfold from
    1e-10 to 1e-6 before giving up."""
    if s1.mean.shape != s2.mean.shape:
        raise DimensionMismatchError(
            f"feature dimensions differ: {s1.mean.shape[0]} vs {s2.mean.shape[0]}"
        )
    diff = s1.mean - s2.mean
    mean_term = float(diff @ diff)
    eye = np.eye(s1.cov.shape[0])
    for delta in _JITTERS:
        cov1 = s1.cov + delta * eye
        cov2 = s2.cov + delta * eye
        first = _psd_sqrt_eigs(cov1)
        if first is None:
            continue
        eigvals1, eigvecs1 = first
        root1 = eigvecs1 @ (np.sqrt(eigvals1)[:, None] * eigvecs1.T)
        inner = root1 @ cov2 @ root1
        inner = (inner + inner.T) / 2.0
        second = _psd_sqrt_eigs(inner)
        if second is None:
            continue
        eigvals2, _ = second
        trace_term = float(np.trace(cov1) + np.trace(cov2) - 2.0 * np.sum(np.sqrt(eigvals2)))
        return mean_term + trace_term
    raise NumericalFailureError("matrix square root failed at every jitter level")


def fed(features_real: np.ndarray, features_gen: np.ndarray) -> float:
    """Fréchet distance between Gaussians fitted to two feature matrices."""
    return frechet_distance(fit_gaussian(features_real), fit_gaussian(features_gen))


@dataclass(frozen=True, eq=False)
class SyntheticOracle:
    """Frame-aware softmax classifier stand-in.

    Basic-class logits scale the intensity-weighted cosine similarity to the
    unit basic axes, with the margin to off-axis directions stretched
    threefold (3*dot - 2*||y||) so off-axis classes stay suppressed through
    the handoff; the neutral logit is sharpness * (1 - ||y||). Along an axis
    ray the output therefore hands off from neutral to the aligned class
    around half intensity, and the handoff steepens with sharpness.
    """

    frame: AxisFrame
    sharpness: float = 10.0

    def __post_init__(self):
        if self.sharpness <= 0.0:
            raise OutOfRangeError("sharpness must be > 0")

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        axes = np.vstack([self.frame.axis(b) for b in AXIS_BASICS])
        dots = points @ axes.T
        norms = np.sqrt(np.sum(points * points, axis=1))
        sims = 3.0 * dots - 2.0 * norms[:, None]
        logits = self.sharpness * np.column_stack([1.0 - norms, sims])
        logits -= logits.max(axis=1, keepdims=True)
        expd = np.exp(logits)
        return expd / expd.sum(axis=1, keepdims=True)


def ere(
    oracle,
    targets=AXIS_BASICS,
    budget: int = 500,
    runs: int = 10,
    seed: int = 0,
    frame: AxisFrame | None = None,
    mode: str = "3d",
) -> float:
    """Emotion reconstruction error under budgeted uniform search.

    For each target and run, draw `budget` conditions uniformly (over the
    unit ball in 3d mode, over the unit disk in 2d mode), score them with
    the oracle, and keep the run's best (lowest) error 1 - p_target; the
    result averages those minima over runs and targets.

    Each (target, run) pair owns its own generator stream seeded from
    (seed, target index, run index), and samples are drawn prefix-stably,
    so for matched seeds a larger budget searches a superset and the error
    never increases.
    """
    if budget < 1 or runs < 1:
        raise OutOfRangeError("budget and runs must be >= 1")
    targets = sorted(set(targets), key=_CLASS_INDEX.__getitem__)
    if BasicEmotion.NEUTRAL in targets:
        raise OutOfRangeError("Neutral cannot be an ERE target")
    if not targets:
        raise OutOfRangeError("at least one target emotion required")
    if mode not in ("2d", "3d"):
        raise OutOfRangeError(f"mode must be '2d' or '3d', got {mode!r}")
    minima = []
    for t_idx, target in enumerate(targets):
        col = _CLASS_INDEX[target]
        for run in range(runs):
            rng = np.random.default_rng([seed, t_idx, run])
            points = _uniform_ball(rng, budget) if mode == "3d" else _uniform_disk(rng, budget)
            probs = np.asarray(oracle(points))
            errors = 1.0 - probs[:, col]
            minima.append(float(errors.min()))
    return float(np.mean(minima))


def smoothness(
    oracle,
    frame: AxisFrame,
    n_steps: int = 10,
    directions=None,
) -> float:
    """Mean total variation of oracle outputs along intensity rays.

    Each direction (default: the six basic axes) is sampled at
    rho = k/n_steps for k = 1..n_steps; the score averages the L1 distance
    between consecutive probability vectors, then averages over directions.
    Lower is smoother."""
    if n_steps < 2:
        raise OutOfRangeError("n_steps must be >= 2")
    if directions is None:
        directions = [frame.axis(b) for b in AXIS_BASICS]
    rhos = np.arange(1, n_steps + 1) / n_steps
    per_direction = []
    for direction in directions:
        direction = np.asarray(direction, dtype=float)
        points = rhos[:, None] * direction[None, :]
        probs = np.asarray(oracle(points))
        steps = np.abs(np.diff(probs, axis=0)).sum(axis=1)
        per_direction.append(float(steps.mean()))
    return float(np.mean(per_direction))


def class_index(emotion: BasicEmotion) -> int:
    """Column of a basic emotion in oracle outputs."""
    return _CLASS_INDEX[emotion]
