import numpy as np
import pytest

from c2a2 import AVPoint, BasicEmotion, calibrate_axes

# Cluster means roughly matching published affect-annotation statistics:
# counter-clockwise circumplex order happy, surprised, fearful, angry,
# disgusted, sad, so every adjacent pair has a planar compound.
CLUSTER_MEANS = {
    BasicEmotion.HAPPY: (0.80, 0.25),
    BasicEmotion.SURPRISED: (0.15, 0.85),
    BasicEmotion.FEARFUL: (-0.30, 0.78),
    BasicEmotion.ANGRY: (-0.62, 0.50),
    BasicEmotion.DISGUSTED: (-0.75, 0.22),
    BasicEmotion.SAD: (-0.70, -0.42),
}


def make_samples(jitter: float = 0.0, per_basic: int = 1, seed: int = 0):
    rng = np.random.default_rng(seed)
    samples = []
    for basic, (valence, arousal) in CLUSTER_MEANS.items():
        offsets = rng.uniform(-jitter, jitter, size=(per_basic, 2)) if jitter else np.zeros((per_basic, 2))
        offsets -= offsets.mean(axis=0)  # keep the cluster mean exact
        for dv, da in offsets:
            samples.append((basic, AVPoint(valence + dv, arousal + da)))
    return samples


@pytest.fixture(scope="session")
def frame():
    return calibrate_axes(make_samples(jitter=0.05, per_basic=5), neutral_rho=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def uniform_oracle(points):
    points = np.atleast_2d(points)
    return np.full((points.shape[0], 7), 1.0 / 7.0)


def perfect_oracle_for(class_col: int):
    def oracle(points):
        points = np.atleast_2d(points)
        probs = np.zeros((points.shape[0], 7))
        probs[:, class_col] = 1.0
        return probs

    return oracle
