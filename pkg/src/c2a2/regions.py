"""Angular region labeling: which emotion category a condition point falls in.

In the plane, the gap between two adjacent basic azimuths is split
quarter/half/quarter when the pair has a 2D-expressible compound (the
compound takes the middle half) and at the bisector otherwise; exactly 12
non-Neutral labels are reachable for a circumplex-ordered frame. Out of the
plane, a point takes the label of the nearest basic axis or expressible
compound direction by cosine similarity, ties resolved in table order.
In-plane points always use the angular partition, so the 3D labeler agrees
with the planar one wherever z = 0.
"""

from __future__ import annotations

import numpy as np

from c2a2._kernels import impl as _impl
from c2a2.categories import (
    CATEGORY_CODES,
    CODE_TO_CATEGORY,
    BasicEmotion,
    Category,
)
from c2a2.geometry import AVPoint, AxisFrame, EmotionPoint


def _partition_arrays(frame: AxisFrame):
    azimuths, basics, compounds = frame.planar_partition
    basic_codes = np.array([CATEGORY_CODES[b] for b in basics], dtype=np.int64)
    comp_codes = np.array(
        [CATEGORY_CODES[c] if c is not None else -1 for c in compounds], dtype=np.int64
    )
    return azimuths, basic_codes, comp_codes


def _direction_arrays(frame: AxisFrame):
    dirs, cats = frame.candidate_directions
    codes = np.array([CATEGORY_CODES[c] for c in cats], dtype=np.int64)
    return np.ascontiguousarray(dirs), codes


def av_region_labels(valence: np.ndarray, arousal: np.ndarray, frame: AxisFrame) -> np.ndarray:
    """Vectorized planar labels as integer category codes."""
    azimuths, basic_codes, comp_codes = _partition_arrays(frame)
    a = np.ascontiguousarray(valence, dtype=float)
    v = np.ascontiguousarray(arousal, dtype=float)
    return _impl.planar_region_codes(a, v, azimuths, basic_codes, comp_codes, frame.neutral_rho)


def av_region_label(p: AVPoint, frame: AxisFrame) -> Category:
    """Planar region label of a single annotation point."""
    codes = av_region_labels(np.array([p.valence]), np.array([p.arousal]), frame)
    return CODE_TO_CATEGORY[int(codes[0])]


def c2a2_region_labels(
    a: np.ndarray, v: np.ndarray, z: np.ndarray, frame: AxisFrame
) -> np.ndarray:
    """Vectorized 3D labels as integer category codes."""
    azimuths, basic_codes, comp_codes = _partition_arrays(frame)
    dirs, dir_codes = _direction_arrays(frame)
    return _impl.region_codes(
        np.ascontiguousarray(a, dtype=float),
        np.ascontiguousarray(v, dtype=float),
        np.ascontiguousarray(z, dtype=float),
        azimuths,
        basic_codes,
        comp_codes,
        dirs,
        dir_codes,
        frame.neutral_rho,
    )


def c2a2_region_label(y: EmotionPoint, frame: AxisFrame) -> Category:
    """3D region label of a single condition point."""
    codes = c2a2_region_labels(
        np.array([y.a]), np.array([y.v]), np.array([y.z]), frame
    )
    return CODE_TO_CATEGORY[int(codes[0])]


def nearest_codes(a: np.ndarray, v: np.ndarray, z: np.ndarray, frame: AxisFrame) -> np.ndarray:
    """Vectorized nearest-direction codes (no planar special case)."""
    dirs, dir_codes = _direction_arrays(frame)
    return _impl.argmax_codes(
        np.ascontiguousarray(a, dtype=float),
        np.ascontiguousarray(v, dtype=float),
        np.ascontiguousarray(z, dtype=float),
        dirs,
        dir_codes,
        frame.neutral_rho,
    )


def reachable_labels(frame: AxisFrame, n_grid: int = 3600, rho: float = 0.8) -> set[Category]:
    """All non-Neutral labels the planar partition can emit, found by a dense
    azimuth sweep."""
    theta = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    codes = av_region_labels(rho * np.cos(theta), rho * np.sin(theta), frame)
    return {CODE_TO_CATEGORY[int(c)] for c in set(codes.tolist())} - {BasicEmotion.NEUTRAL}
