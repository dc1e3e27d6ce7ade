"""Number encoder: forward, fusion, exact backprop, toy training, and the
binary parameter format."""

import numpy as np
import pytest

from c2a2 import (
    EmotionPoint,
    encode_emotion,
    encoder_backward,
    fuse,
    init_params,
    load_params,
    save_params,
    train_toy_regression,
)
from c2a2.encoder import DEFAULT_DIMS, EMBED_DIM, MAGIC, MlpParams
from c2a2.errors import (
    DimensionMismatchError,
    DivergenceDetectedError,
    OutOfRangeError,
)


def small_params(seed=0, dims=(3, 6, 4, 768)):
    base = init_params(dims, seed=seed)
    rng = np.random.default_rng(seed + 1)
    # Give the final layer real values so gradients flow everywhere.
    weights = list(base.weights)
    weights[-1] = rng.normal(0, 0.05, size=weights[-1].shape)
    biases = list(base.biases)
    biases[-1] = rng.normal(0, 0.05, size=biases[-1].shape)
    return MlpParams(base.layer_dims, tuple(weights), tuple(biases))


class TestForward:
    def test_output_dimension(self):
        params = small_params()
        out = encode_emotion(EmotionPoint(0.2, -0.1, 0.4), params)
        assert out.shape == (EMBED_DIM,)

    def test_zero_final_layer_gives_zero_embedding(self, rng):
        params = init_params(seed=3)
        for _ in range(20):
            vec = rng.uniform(-0.5, 0.5, size=3)
            assert np.all(encode_emotion(vec, params) == 0.0)

    def test_zero_input_zero_biases_gives_zero(self):
        params = small_params()
        biases = tuple(np.zeros_like(b) for b in params.biases)
        params = MlpParams(params.layer_dims, params.weights, biases)
        np.testing.assert_array_equal(encode_emotion(np.zeros(3), params), np.zeros(EMBED_DIM))

    def test_deterministic(self):
        params = small_params(seed=9)
        y = EmotionPoint(0.1, 0.2, -0.3)
        first = encode_emotion(y, params)
        second = encode_emotion(y, params)
        np.testing.assert_array_equal(first, second)

    def test_dims_contract(self):
        with pytest.raises(DimensionMismatchError):
            init_params((4, 10, 768))
        with pytest.raises(DimensionMismatchError):
            init_params((3, 10, 512))


class TestFuse:
    def test_append(self):
        text = np.zeros((1, EMBED_DIM))
        out = fuse(text, np.zeros(EMBED_DIM))
        assert out.shape == (2, EMBED_DIM)
        assert np.all(out[1] == 0.0)

    def test_fuse_then_drop_is_identity(self, rng):
        text = rng.normal(size=(5, EMBED_DIM))
        emb = rng.normal(size=EMBED_DIM)
        out = fuse(text, emb)
        np.testing.assert_array_equal(out[:-1], text)
        np.testing.assert_array_equal(out[-1], emb)

    def test_clip_length_convention(self, rng):
        out = fuse(rng.normal(size=(77, EMBED_DIM)), rng.normal(size=EMBED_DIM))
        assert out.shape == (78, EMBED_DIM)

    def test_no_mutation(self, rng):
        text = rng.normal(size=(4, EMBED_DIM))
        snapshot = text.copy()
        fuse(text, rng.normal(size=EMBED_DIM))
        np.testing.assert_array_equal(text, snapshot)


class TestBackward:
    def test_zero_upstream_zero_grads(self):
        params = small_params()
        w_grads, b_grads, y_grad = encoder_backward(
            EmotionPoint(0.1, 0.1, 0.1), params, np.zeros(EMBED_DIM)
        )
        assert all(np.all(g == 0.0) for g in w_grads)
        assert all(np.all(g == 0.0) for g in b_grads)
        assert np.all(y_grad == 0.0)

    def test_duplicate_call_identical(self, rng):
        params = small_params(seed=4)
        y = rng.uniform(-0.5, 0.5, size=3)
        upstream = rng.normal(size=EMBED_DIM)
        first = encoder_backward(y, params, upstream)
        second = encoder_backward(y, params, upstream)
        for a, b in zip(first[0], second[0]):
            np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(first[2], second[2])

    def test_finite_differences_every_layer(self, rng):
        # Scalar probe: loss = upstream . encode(y); FD step 1e-4.
        params = small_params(seed=7)
        y = rng.uniform(-0.5, 0.5, size=3)
        upstream = rng.normal(size=EMBED_DIM)
        w_grads, b_grads, y_grad = encoder_backward(y, params, upstream)
        step = 1e-4

        def loss_with(weights, biases, point):
            probe = MlpParams(params.layer_dims, tuple(weights), tuple(biases))
            return float(upstream @ encode_emotion(point, probe))

        for layer in range(len(params.weights)):
            w = params.weights[layer]
            flat_idx = [0, w.size // 2, w.size - 1]
            for idx in flat_idx:
                i, j = np.unravel_index(idx, w.shape)
                for container, grads, coords in ((params.weights, w_grads, (i, j)),):
                    perturbed_up = [m.copy() for m in container]
                    perturbed_dn = [m.copy() for m in container]
                    perturbed_up[layer][coords] += step
                    perturbed_dn[layer][coords] -= step
                    numeric = (
                        loss_with(perturbed_up, params.biases, y)
                        - loss_with(perturbed_dn, params.biases, y)
                    ) / (2 * step)
                    assert grads[layer][coords] == pytest.approx(numeric, rel=1e-4, abs=1e-7)
            b = params.biases[layer]
            for idx in (0, b.size - 1):
                up = [m.copy() for m in params.biases]
                dn = [m.copy() for m in params.biases]
                up[layer][idx] += step
                dn[layer][idx] -= step
                numeric = (
                    loss_with(params.weights, up, y) - loss_with(params.weights, dn, y)
                ) / (2 * step)
                assert b_grads[layer][idx] == pytest.approx(numeric, rel=1e-4, abs=1e-7)
        for idx in range(3):
            up, dn = y.copy(), y.copy()
            up[idx] += step
            dn[idx] -= step
            numeric = (
                loss_with(params.weights, params.biases, up)
                - loss_with(params.weights, params.biases, dn)
            ) / (2 * step)
            assert y_grad[idx] == pytest.approx(numeric, rel=1e-4, abs=1e-7)


def toy_dataset(n=8, seed=0):
    rng = np.random.default_rng(seed)
    dataset = []
    for _ in range(n):
        vec = rng.normal(size=3)
        vec = 0.8 * vec / np.linalg.norm(vec)
        dataset.append((EmotionPoint(*vec), rng.normal(0, 0.5, size=EMBED_DIM)))
    return dataset


class TestToyRegression:
    def test_loss_drops_tenfold(self):
        _, curve = train_toy_regression(toy_dataset(), steps=500, learning_rate=5.0, seed=1)
        assert len(curve) == 501
        assert curve[-1] < 0.1 * curve[0]

    def test_zero_learning_rate_constant_curve(self):
        _, curve = train_toy_regression(toy_dataset(), steps=50, learning_rate=0.0, seed=1)
        assert len(set(curve)) == 1

    def test_same_seed_identical_curve(self):
        _, first = train_toy_regression(toy_dataset(), steps=100, learning_rate=5.0, seed=2)
        _, second = train_toy_regression(toy_dataset(), steps=100, learning_rate=5.0, seed=2)
        assert first == second

    def test_divergence_detected(self):
        with pytest.raises(DivergenceDetectedError):
            train_toy_regression(toy_dataset(), steps=200, learning_rate=1000.0, seed=1)

    def test_empty_dataset_rejected(self):
        with pytest.raises(DimensionMismatchError):
            train_toy_regression([], steps=10)


class TestSerialization:
    def test_round_trip_bitwise(self, tmp_path):
        params = small_params(seed=12, dims=(3, 5, 768))
        path = tmp_path / "encoder.bin"
        save_params(params, path)
        loaded = load_params(path)
        assert loaded.layer_dims == params.layer_dims
        for a, b in zip(loaded.weights, params.weights):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(loaded.biases, params.biases):
            np.testing.assert_array_equal(a, b)

    def test_header_layout(self, tmp_path):
        params = init_params((3, 4, 768), seed=0)
        path = tmp_path / "encoder.bin"
        save_params(params, path)
        raw = path.read_bytes()
        assert raw[:8] == MAGIC
        assert int.from_bytes(raw[8:12], "little") == 3
        dims = [int.from_bytes(raw[12 + 4 * i : 16 + 4 * i], "little") for i in range(3)]
        assert dims == [3, 4, 768]
        payload = 8 * (4 * 3 + 4 + 768 * 4 + 768)
        assert len(raw) == 8 + 4 + 12 + payload

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTMAGIC" + b"\0" * 16)
        with pytest.raises(OutOfRangeError):
            load_params(path)

    def test_default_dims(self):
        params = init_params(seed=0)
        assert params.layer_dims == DEFAULT_DIMS
        assert np.all(params.weights[-1] == 0.0)
