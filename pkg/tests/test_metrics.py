"""Gaussian statistics, the Fréchet metric, budgeted reconstruction error,
and ray smoothness."""

import numpy as np
import pytest

from c2a2 import (
    BasicEmotion,
    FeatureStats,
    SyntheticOracle,
    ere,
    fed,
    fit_gaussian,
    frechet_distance,
    smoothness,
)
from c2a2.errors import (
    DimensionMismatchError,
    NumericalFailureError,
    OutOfRangeError,
    TooFewSamplesError,
)
from c2a2.metrics import ORACLE_CLASSES, class_index

from conftest import perfect_oracle_for, uniform_oracle


class TestFitGaussian:
    def test_identical_rows(self):
        row = np.array([1.0, -2.0, 0.5])
        stats = fit_gaussian(np.tile(row, (6, 1)))
        np.testing.assert_array_equal(stats.mean, row)
        np.testing.assert_array_equal(stats.cov, np.zeros((3, 3)))
        assert stats.count == 6

    def test_unbiased_1d(self):
        stats = fit_gaussian(np.array([[0.0], [2.0]]))
        assert stats.mean[0] == 1.0
        assert stats.cov[0, 0] == 2.0  # divisor n-1

    def test_cov_symmetric_psd(self, rng):
        stats = fit_gaussian(rng.normal(size=(200, 6)))
        np.testing.assert_allclose(stats.cov, stats.cov.T, atol=0)
        assert np.linalg.eigvalsh(stats.cov).min() > -1e-12

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            fit_gaussian(np.zeros((1, 4)))


class TestFrechetDistance:
    def test_identical_stats_zero(self, rng):
        stats = fit_gaussian(rng.normal(size=(50, 5)))
        assert abs(frechet_distance(stats, stats)) < 1e-8

    def test_1d_analytic(self):
        s1 = FeatureStats(np.array([0.0]), np.array([[1.0]]), 10)
        s2 = FeatureStats(np.array([1.0]), np.array([[1.0]]), 10)
        assert frechet_distance(s1, s2) == pytest.approx(1.0, abs=1e-9)

    def test_commuting_2d_closed_form(self):
        s1 = FeatureStats(np.zeros(2), np.diag([1.0, 4.0]), 10)
        s2 = FeatureStats(np.zeros(2), np.diag([4.0, 1.0]), 10)
        # Commuting covariances: trace term sums (sqrt(s1_i) - sqrt(s2_i))^2.
        assert frechet_distance(s1, s2) == pytest.approx(2.0, abs=1e-9)

    def test_symmetric_in_arguments(self, rng):
        s1 = fit_gaussian(rng.normal(size=(60, 4)))
        s2 = fit_gaussian(rng.normal(loc=0.3, size=(60, 4)))
        assert frechet_distance(s1, s2) == pytest.approx(frechet_distance(s2, s1), rel=1e-10)

    def test_rotation_invariance(self, rng):
        d = 8
        base = rng.normal(size=(300, d)) @ rng.normal(size=(d, d)) * 0.3
        shifted = rng.normal(loc=0.2, size=(300, d))
        q, _ = np.linalg.qr(rng.normal(size=(d, d)))
        plain = fed(base, shifted)
        rotated = fed(base @ q, shifted @ q)
        assert rotated == pytest.approx(plain, abs=1e-6)

    def test_dimension_mismatch(self):
        s1 = FeatureStats(np.zeros(2), np.eye(2), 5)
        s2 = FeatureStats(np.zeros(3), np.eye(3), 5)
        with pytest.raises(DimensionMismatchError):
            frechet_distance(s1, s2)

    def test_singular_covariances_handled(self):
        # Rank-deficient but PSD on both sides.
        s1 = FeatureStats(np.zeros(3), np.diag([1.0, 0.0, 0.0]), 5)
        s2 = FeatureStats(np.zeros(3), np.diag([0.0, 1.0, 0.0]), 5)
        value = frechet_distance(s1, s2)
        assert value == pytest.approx(2.0, abs=1e-8)

    def test_numerical_failure_after_jitter_ladder(self, monkeypatch):
        def always_fail(*args, **kwargs):
            raise np.linalg.LinAlgError("no convergence")

        monkeypatch.setattr(np.linalg, "eigh", always_fail)
        s1 = FeatureStats(np.zeros(2), np.eye(2), 5)
        with pytest.raises(NumericalFailureError):
            frechet_distance(s1, s1)

    def test_feature_stats_validation(self):
        with pytest.raises(OutOfRangeError):
            FeatureStats(np.zeros(2), np.array([[1.0, 0.5], [0.2, 1.0]]), 5)
        with pytest.raises(TooFewSamplesError):
            FeatureStats(np.zeros(2), np.eye(2), 1)
        with pytest.raises(OutOfRangeError):
            FeatureStats(np.zeros(2), np.diag([1.0, -1.0]), 5)


class TestFed:
    def test_identical_sets(self, rng):
        feats = rng.normal(size=(100, 4))
        assert abs(fed(feats, feats)) < 1e-8

    def test_row_permutation_invariance(self, rng):
        feats = rng.normal(size=(100, 4))
        shuffled = feats[rng.permutation(100)]
        assert abs(fed(feats, shuffled)) < 1e-8

    def test_shifted_gaussians_monte_carlo(self):
        # Independent oracle: for N(0, I) vs N(s e1, I) the distance is s^2.
        rng = np.random.default_rng(2024)
        shift = 1.0
        real = rng.normal(size=(10_000, 4))
        gen = rng.normal(size=(10_000, 4))
        gen[:, 0] += shift
        assert fed(real, gen) == pytest.approx(shift**2, rel=0.05)


class TestEre:
    def test_perfect_oracle(self, frame):
        oracle = perfect_oracle_for(class_index(BasicEmotion.HAPPY))
        value = ere(oracle, targets=[BasicEmotion.HAPPY], budget=20, runs=3, seed=0, frame=frame)
        assert value == 0.0

    def test_uniform_oracle_six_sevenths(self, frame):
        value = ere(uniform_oracle, budget=30, runs=2, seed=1, frame=frame)
        assert value == pytest.approx(6.0 / 7.0, abs=1e-12)

    def test_budget_monotone_over_matched_seeds(self, frame):
        oracle = SyntheticOracle(frame, sharpness=5.0)
        for seed in range(50):
            small = ere(oracle, budget=10, runs=1, seed=seed, frame=frame)
            large = ere(oracle, budget=500, runs=1, seed=seed, frame=frame)
            assert large <= small + 1e-15

    def test_budget_gap_shrinks_with_sharpness(self, frame):
        # Past the handoff regime the best reachable error flattens, so the
        # small-vs-large budget gap declines along 10 -> 20 -> 50 -> 100.
        gaps = []
        for sharpness in (10.0, 20.0, 50.0, 100.0):
            oracle = SyntheticOracle(frame, sharpness=sharpness)
            diffs = [
                ere(oracle, budget=10, runs=1, seed=seed, frame=frame)
                - ere(oracle, budget=500, runs=1, seed=seed, frame=frame)
                for seed in range(50)
            ]
            gaps.append(np.mean(diffs))
        assert gaps[0] > gaps[1] > gaps[2] > gaps[3]

    def test_deterministic(self, frame):
        oracle = SyntheticOracle(frame, sharpness=8.0)
        first = ere(oracle, budget=40, runs=3, seed=9, frame=frame)
        second = ere(oracle, budget=40, runs=3, seed=9, frame=frame)
        assert first == second

    def test_2d_mode_samples_plane(self, frame):
        seen = []

        def probe(points):
            seen.append(np.array(points))
            return uniform_oracle(points)

        ere(probe, budget=25, runs=1, seed=4, frame=frame, mode="2d")
        for batch in seen:
            assert np.all(batch[:, 2] == 0.0)
            assert np.all(np.hypot(batch[:, 0], batch[:, 1]) <= 1.0)

    def test_neutral_target_rejected(self, frame):
        with pytest.raises(OutOfRangeError):
            ere(uniform_oracle, targets=[BasicEmotion.NEUTRAL], frame=frame)


class TestSmoothness:
    def test_constant_oracle_zero(self, frame):
        assert smoothness(uniform_oracle, frame, n_steps=10) == 0.0

    def test_alternating_one_hot_is_two(self, frame):
        state = {"count": 0}

        def flipper(points):
            points = np.atleast_2d(points)
            out = np.zeros((points.shape[0], 7))
            for i in range(points.shape[0]):
                out[i, (state["count"] + i) % 2] = 1.0
            state["count"] += points.shape[0]
            return out

        # Careful: the oracle is called once per direction with all steps.
        value = smoothness(flipper, frame, n_steps=10)
        assert value == 2.0

    def test_sharper_oracle_scores_larger(self, frame):
        smooth = smoothness(SyntheticOracle(frame, sharpness=5.0), frame, n_steps=10)
        sharp = smoothness(SyntheticOracle(frame, sharpness=50.0), frame, n_steps=10)
        assert smooth < sharp

    def test_reversal_invariance(self, frame):
        oracle = SyntheticOracle(frame, sharpness=7.0)
        n = 12
        rhos = np.arange(1, n + 1) / n
        direction = frame.axis(BasicEmotion.HAPPY)
        probs = oracle(rhos[:, None] * direction[None, :])
        forward_steps = np.abs(np.diff(probs, axis=0)).sum(axis=1)
        backward_steps = np.abs(np.diff(probs[::-1], axis=0)).sum(axis=1)
        # The same step values in reverse order; means agree to rounding.
        np.testing.assert_array_equal(np.sort(forward_steps), np.sort(backward_steps))
        assert forward_steps.mean() == pytest.approx(backward_steps.mean(), rel=1e-12)

    def test_needs_two_steps(self, frame):
        with pytest.raises(OutOfRangeError):
            smoothness(uniform_oracle, frame, n_steps=1)


class TestSyntheticOracle:
    def test_valid_probability_vectors(self, frame, rng):
        from c2a2.geometry import _uniform_ball

        oracle = SyntheticOracle(frame, sharpness=12.0)
        points = _uniform_ball(rng, 500)
        probs = oracle(points)
        assert probs.shape == (500, 7)
        assert np.all(probs >= 0.0)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_neutral_dominates_origin(self, frame):
        probs = SyntheticOracle(frame, sharpness=10.0)(np.zeros((1, 3)))
        assert ORACLE_CLASSES[int(np.argmax(probs))] is BasicEmotion.NEUTRAL

    def test_on_axis_dominates_at_full_intensity(self, frame):
        oracle = SyntheticOracle(frame, sharpness=20.0)
        for basic in ORACLE_CLASSES[1:]:
            point = frame.axis(basic)[None, :]
            probs = oracle(point)
            assert ORACLE_CLASSES[int(np.argmax(probs))] is basic

    def test_sharpness_validated(self, frame):
        with pytest.raises(OutOfRangeError):
            SyntheticOracle(frame, sharpness=0.0)
