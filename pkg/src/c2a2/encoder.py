"""MLP number encoder: maps a 3D emotion condition to a 768-dim embedding
that can be appended to a text-token embedding sequence.

The final layer is initialized to zeros so a fresh encoder contributes a
zero token, i.e. conditioning starts as a no-op; the all-zero condition is
reserved for "no emotion". The hidden nonlinearity is tanh, which fixes 0
so the zero condition with zero biases also embeds to zero.

Forward and backward are pure given a parameter set; training does plain
full-batch gradient descent and is bit-reproducible.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from c2a2.errors import (
    DimensionMismatchError,
    DivergenceDetectedError,
    NonFiniteError,
    OutOfRangeError,
)
from c2a2.geometry import EmotionPoint

INPUT_DIM = 3
EMBED_DIM = 768
DEFAULT_DIMS = (3, 64, 256, 768)

MAGIC = b"C2A2MLP1"


@dataclass(frozen=True, eq=False)
class MlpParams:
    """Weights (out x in) and biases per layer; hidden layers use tanh, the
    final layer is linear."""

    layer_dims: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    activation: str = "tanh"

    def __post_init__(self):
        dims = self.layer_dims
        if len(dims) < 2 or dims[0] != INPUT_DIM or dims[-1] != EMBED_DIM:
            raise DimensionMismatchError(
                f"layer dims must run from {INPUT_DIM} to {EMBED_DIM}, got {dims}"
            )
        if self.activation != "tanh":
            raise OutOfRangeError(f"unsupported activation {self.activation!r}")
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise DimensionMismatchError("one weight matrix and bias vector per layer required")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (dims[i + 1], dims[i]) or b.shape != (dims[i + 1],):
                raise DimensionMismatchError(f"layer {i} has shape {w.shape}/{b.shape}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise NonFiniteError(f"layer {i} contains non-finite parameters")


def init_params(layer_dims: tuple[int, ...] = DEFAULT_DIMS, seed: int = 0) -> MlpParams:
    """Random hidden layers (scaled normal), zero biases, zero final layer."""
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for i in range(len(layer_dims) - 1):
        fan_in, fan_out = layer_dims[i], layer_dims[i + 1]
        if i == len(layer_dims) - 2:
            w = np.zeros((fan_out, fan_in))
        else:
            w = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_out, fan_in))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return MlpParams(tuple(layer_dims), tuple(weights), tuple(biases))


def _as_input(y) -> np.ndarray:
    if isinstance(y, EmotionPoint):
        return y.as_array()
    arr = np.asarray(y, dtype=float)
    if arr.shape != (INPUT_DIM,):
        raise DimensionMismatchError(f"condition must be a 3-vector, got shape {arr.shape}")
    return arr


def _forward_cached(x: np.ndarray, params: MlpParams):
    # Hidden activations are cached for the backward pass: pre[i] is the
    # pre-activation of layer i, act[i] its input.
    acts = [x]
    pres = []
    h = x
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        pre = w @ h + b
        pres.append(pre)
        h = pre if i == last else np.tanh(pre)
        acts.append(h)
    return acts, pres


def encode_emotion(y, params: MlpParams) -> np.ndarray:
    """Forward pass: 3D condition -> 768-dim embedding."""
    acts, _ = _forward_cached(_as_input(y), params)
    out = acts[-1]
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("forward pass overflowed")
    return out


def fuse(text: np.ndarray, embedding: np.ndarray) -> np.ndarray:
    """Append the emotion embedding as one extra token after an (L, 768)
    text-token sequence. Inputs are never mutated."""
    text = np.asarray(text, dtype=float)
    embedding = np.asarray(embedding, dtype=float)
    if text.ndim != 2 or text.shape[1] != EMBED_DIM or text.shape[0] < 1:
        raise DimensionMismatchError(f"token sequence has shape {text.shape}")
    if embedding.shape != (EMBED_DIM,):
        raise DimensionMismatchError(f"embedding has shape {embedding.shape}")
    return np.vstack([text, embedding])


def encoder_backward(y, params: MlpParams, upstream_grad: np.ndarray):
    """Exact reverse-mode gradients of the forward pass.

    Returns (weight_grads, bias_grads, input_grad) matching the parameter
    layout."""
    x = _as_input(y)
    upstream = np.asarray(upstream_grad, dtype=float)
    if upstream.shape != (params.layer_dims[-1],):
        raise DimensionMismatchError(f"upstream gradient has shape {upstream.shape}")
    acts, pres = _forward_cached(x, params)
    n_layers = len(params.weights)
    w_grads: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    b_grads: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    delta = upstream
    for i in range(n_layers - 1, -1, -1):
        if i != n_layers - 1:
            delta = delta * (1.0 - np.tanh(pres[i]) ** 2)
        w_grads[i] = np.outer(delta, acts[i])
        b_grads[i] = delta.copy()
        delta = params.weights[i].T @ delta
    return tuple(w_grads), tuple(b_grads), delta


def train_toy_regression(
    dataset,
    params: MlpParams | None = None,
    steps: int = 500,
    learning_rate: float = 0.1,
    seed: int = 0,
) -> tuple[MlpParams, list[float]]:
    """Full-batch gradient descent on mean squared embedding error.

    `dataset` is a sequence of (condition, 768-target) pairs. When `params`
    is None a fresh encoder is initialized from `seed`. Returns the trained
    parameters and the loss curve (initial loss plus one entry per step).
    Raises DivergenceDetectedError if the loss becomes non-finite.
    """
    if not dataset:
        raise DimensionMismatchError("dataset must be nonempty")
    if params is None:
        params = init_params(seed=seed)
    inputs = np.stack([_as_input(y) for y, _ in dataset])
    targets = np.stack([np.asarray(t, dtype=float) for _, t in dataset])
    if targets.shape[1] != params.layer_dims[-1]:
        raise DimensionMismatchError(f"targets have shape {targets.shape}")

    n = inputs.shape[0]
    weights = [w.copy() for w in params.weights]
    biases = [b.copy() for b in params.biases]
    n_layers = len(weights)
    last = n_layers - 1
    curve: list[float] = []

    for _ in range(steps + 1):
        # Batched forward; overflow is reported as divergence, not a warning.
        with np.errstate(over="ignore", invalid="ignore"):
            acts = [inputs]
            pres = []
            h = inputs
            for i in range(n_layers):
                pre = h @ weights[i].T + biases[i]
                pres.append(pre)
                h = pre if i == last else np.tanh(pre)
                acts.append(h)
            residual = acts[-1] - targets
            loss = float(np.mean(residual * residual))
        if not np.isfinite(loss):
            raise DivergenceDetectedError(f"loss diverged after {len(curve)} steps")
        curve.append(loss)
        if len(curve) == steps + 1:
            break
        # Batched backward on the mean-squared loss.
        delta = residual * (2.0 / residual.size)
        for i in range(last, -1, -1):
            if i != last:
                delta = delta * (1.0 - np.tanh(pres[i]) ** 2)
            w_grad = delta.T @ acts[i]
            b_grad = delta.sum(axis=0)
            delta = delta @ weights[i]
            weights[i] = weights[i] - learning_rate * w_grad
            biases[i] = biases[i] - learning_rate * b_grad

    trained = MlpParams(params.layer_dims, tuple(weights), tuple(biases))
    return trained, curve


def save_params(params: MlpParams, path) -> None:
    """Serialize to the flat binary format: the magic tag, the number of
    layer-dimension entries and the dimensions as little-endian uint32,
    then per layer the row-major float64 weight matrix and bias vector."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(params.layer_dims)))
        fh.write(struct.pack(f"<{len(params.layer_dims)}I", *params.layer_dims))
        for w, b in zip(params.weights, params.biases):
            fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def load_params(path) -> MlpParams:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise OutOfRangeError(f"bad parameter file magic {magic!r}")
        (n_dims,) = struct.unpack("<I", fh.read(4))
        dims = struct.unpack(f"<{n_dims}I", fh.read(4 * n_dims))
        weights = []
        biases = []
        for i in range(n_dims - 1):
            out_dim, in_dim = dims[i + 1], dims[i]
            w = np.frombuffer(fh.read(8 * out_dim * in_dim), dtype="<f8").reshape(out_dim, in_dim)
            b = np.frombuffer(fh.read(8 * out_dim), dtype="<f8")
            weights.append(w.astype(float))
            biases.append(b.astype(float))
    return MlpParams(tuple(int(d) for d in dims), tuple(weights), tuple(biases))
