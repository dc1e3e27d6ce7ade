"""Region labeling against an independent angular-partition oracle."""

import math

import numpy as np
import pytest

from c2a2 import (
    AVPoint,
    BasicEmotion,
    CompoundEmotion,
    EmotionPoint,
    av_region_label,
    c2a2_region_label,
    compound_direction,
)
from c2a2.categories import (
    AXIS_BASICS,
    CONSTITUENTS,
    REPRESENTABLE_2D,
    REPRESENTABLE_3D,
)
from c2a2.geometry import TWO_PI
from c2a2.regions import av_region_labels, c2a2_region_labels, reachable_labels
from c2a2.categories import CODE_TO_CATEGORY


def oracle_partition(frame):
    """Independent re-derivation of the planar partition as explicit arcs.

    Returns a list of (start, end, category) with angles in [0, 2*pi + gap),
    the last arcs wrapping past 2*pi."""
    basics = sorted(AXIS_BASICS, key=frame.azimuth)
    arcs = []
    for i, basic in enumerate(basics):
        nxt = basics[(i + 1) % len(basics)]
        lo = frame.azimuth(basic)
        hi = frame.azimuth(nxt) + (TWO_PI if i == len(basics) - 1 else 0.0)
        compound = None
        for comp in REPRESENTABLE_2D:
            if set(CONSTITUENTS[comp]) == {basic, nxt}:
                compound = comp
        gap = hi - lo
        if compound is not None:
            arcs.append((lo, lo + gap / 4, basic))
            arcs.append((lo + gap / 4, hi - gap / 4, compound))
            arcs.append((hi - gap / 4, hi, nxt))
        else:
            arcs.append((lo, lo + gap / 2, basic))
            arcs.append((lo + gap / 2, hi, nxt))
    return arcs


def oracle_label(theta, frame):
    arcs = oracle_partition(frame)
    lo0 = arcs[0][0]
    if theta < lo0:
        theta += TWO_PI
    for start, end, category in arcs:
        if start <= theta < end:
            return category
    return arcs[-1][2]  # theta == last arc's end


class TestPlanarPartition:
    def test_on_axis_points(self, frame):
        for basic in AXIS_BASICS:
            axis = frame.axis(basic)
            p = AVPoint(0.8 * axis[0] / math.hypot(axis[0], axis[1]),
                        0.8 * axis[1] / math.hypot(axis[0], axis[1]))
            assert av_region_label(p, frame) is basic

    def test_neutral_threshold(self, frame):
        assert av_region_label(AVPoint(0.03, 0.04), frame) is BasicEmotion.NEUTRAL
        assert av_region_label(AVPoint(0.0, 0.0), frame) is BasicEmotion.NEUTRAL

    def test_bisector_point_is_compound(self, frame):
        bisector = (frame.azimuth(BasicEmotion.HAPPY) + frame.azimuth(BasicEmotion.SURPRISED)) / 2
        p = AVPoint(0.8 * math.cos(bisector), 0.8 * math.sin(bisector))
        assert av_region_label(p, frame) is CompoundEmotion.HAPPILY_SURPRISED
        assert oracle_label(bisector, frame) is CompoundEmotion.HAPPILY_SURPRISED

    def test_quarter_boundaries_against_oracle_sweep(self, frame):
        # 0.1-degree grid over the full circle.
        thetas = np.radians(np.arange(0.0, 360.0, 0.1))
        codes = av_region_labels(0.8 * np.cos(thetas), 0.8 * np.sin(thetas), frame)
        got = [CODE_TO_CATEGORY[int(c)] for c in codes]
        expected = [oracle_label(t, frame) for t in thetas]
        assert got == expected

    def test_exactly_twelve_labels(self, frame):
        labels = reachable_labels(frame)
        assert len(labels) == 12
        basics = {l for l in labels if isinstance(l, BasicEmotion)}
        compounds = {l for l in labels if isinstance(l, CompoundEmotion)}
        assert basics == set(AXIS_BASICS)
        assert compounds == set(REPRESENTABLE_2D)

    def test_no_3d_only_compound_appears(self, frame):
        labels = reachable_labels(frame, n_grid=7200)
        assert not any(l in (REPRESENTABLE_3D - REPRESENTABLE_2D) for l in labels)

    def test_scale_invariance(self, frame, rng):
        thetas = rng.uniform(0, TWO_PI, size=300)
        base = av_region_labels(0.5 * np.cos(thetas), 0.5 * np.sin(thetas), frame)
        for rho in (0.15, 0.35, 0.99):
            scaled = av_region_labels(rho * np.cos(thetas), rho * np.sin(thetas), frame)
            np.testing.assert_array_equal(base, scaled)


class TestLiftedLabels:
    def test_on_axis(self, frame):
        point = EmotionPoint(*(0.7 * frame.axis(BasicEmotion.FEARFUL)))
        assert c2a2_region_label(point, frame) is BasicEmotion.FEARFUL

    def test_on_compound_direction(self, frame):
        direction = compound_direction(CompoundEmotion.SADLY_ANGRY, frame)
        point = EmotionPoint(*(0.7 * direction))
        assert c2a2_region_label(point, frame) is CompoundEmotion.SADLY_ANGRY

    def test_every_representable_direction_labels_itself(self, frame):
        dirs, cats = frame.candidate_directions
        for direction, cat in zip(dirs, cats):
            if direction[2] == 0.0 and cat not in REPRESENTABLE_2D and not isinstance(cat, BasicEmotion):
                # Sadly fearful lands in the plane, where the angular
                # partition knows only planar categories; no self-label there.
                continue
            point = EmotionPoint(*(0.8 * direction))
            assert c2a2_region_label(point, frame) is cat

    def test_neutral(self, frame):
        assert c2a2_region_label(EmotionPoint(0.0, 0.0, 0.05), frame) is BasicEmotion.NEUTRAL

    def test_planar_agreement_on_random_points(self, frame, rng):
        # Cross-check on 10^4 uniform in-plane samples.
        theta = rng.uniform(0, TWO_PI, size=10_000)
        rho = rng.uniform(0, 1, size=10_000)
        a, v = rho * np.cos(theta), rho * np.sin(theta)
        planar = av_region_labels(a, v, frame)
        lifted = c2a2_region_labels(a, v, np.zeros_like(a), frame)
        np.testing.assert_array_equal(planar, lifted)

    def test_batch_matches_scalar(self, frame, rng):
        points = rng.uniform(-0.5, 0.5, size=(100, 3))
        codes = c2a2_region_labels(points[:, 0], points[:, 1], points[:, 2], frame)
        for row, code in zip(points, codes):
            got = c2a2_region_label(EmotionPoint(*row), frame)
            assert got is CODE_TO_CATEGORY[int(code)]
