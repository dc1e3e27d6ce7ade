"""The 3D emotion-condition geometry.

Conditions live in the closed unit ball. The first two coordinates are the
valence/arousal plane; the third is the lift axis. Four basic emotions sit
in the plane at unit length, while Fearful is lifted 60 degrees above the
plane and Sad 60 degrees below, each keeping its calibrated planar azimuth.
Compound emotions point along the normalized sum of their constituents'
axes.

All types are immutable values and all operations are pure functions, so
everything here is safe for concurrent use; sampling depends only on its
arguments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from c2a2.categories import (
    AXIS_BASICS,
    CATEGORY_ORDER,
    CONSTITUENTS,
    REPRESENTABLE_2D,
    REPRESENTABLE_3D,
    BasicEmotion,
    Category,
    CompoundEmotion,
)
from c2a2.errors import (
    DegenerateSumError,
    MissingCategoryError,
    OutOfBallError,
    OutOfRangeError,
)

TWO_PI = 2.0 * math.pi
BALL_TOL = 1e-9

#: Planar magnitude and height of the lifted axes: cos/sin of 60 degrees.
LIFT_COS = 0.5
LIFT_SIN = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class AVPoint:
    """A 2D arousal-valence annotation; each coordinate in [-1, 1]."""

    valence: float
    arousal: float

    def __post_init__(self):
        for name in ("valence", "arousal"):
            x = getattr(self, name)
            if not math.isfinite(x) or not -1.0 <= x <= 1.0:
                raise OutOfRangeError(f"{name} {x} outside [-1, 1]")

    def norm(self) -> float:
        return math.hypot(self.valence, self.arousal)

    def azimuth(self) -> float:
        """Planar angle in [0, 2*pi); 0 points at positive valence."""
        phi = math.atan2(self.arousal, self.valence)
        return phi + TWO_PI if phi < 0.0 else phi


@dataclass(frozen=True)
class PolarCondition:
    """Polar parameterization of the plane: angle theta, intensity rho."""

    theta: float
    rho: float

    def __post_init__(self):
        if not 0.0 <= self.theta < TWO_PI:
            raise OutOfRangeError(f"theta {self.theta} outside [0, 2*pi)")
        if not 0.0 <= self.rho <= 1.0:
            raise OutOfRangeError(f"rho {self.rho} outside [0, 1]")


@dataclass(frozen=True)
class EmotionPoint:
    """A 3D emotion condition in the closed unit ball.

    Fields follow the file schemas: ``a`` is the valence coordinate, ``v``
    the arousal coordinate, ``z`` the lift coordinate.
    """

    a: float
    v: float
    z: float = 0.0

    def __post_init__(self):
        for name in ("a", "v", "z"):
            if not math.isfinite(getattr(self, name)):
                raise OutOfRangeError(f"coordinate {name} is not finite")
        if self.a * self.a + self.v * self.v + self.z * self.z > 1.0 + BALL_TOL:
            raise OutOfBallError(f"point ({self.a}, {self.v}, {self.z}) outside the unit ball")

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + self.v * self.v + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.v, self.z])


def polar_to_av(p: PolarCondition) -> AVPoint:
    """(theta, rho) -> (rho*cos(theta), rho*sin(theta))."""
    return AVPoint(p.rho * math.cos(p.theta), p.rho * math.sin(p.theta))


def project_to_av(y: EmotionPoint) -> AVPoint:
    """Drop the lift coordinate; identity on in-plane points."""
    return AVPoint(y.a, y.v)


def embed_av(p: AVPoint, z: float = 0.0) -> EmotionPoint:
    """Embed a planar point at a given height (must stay inside the ball)."""
    return EmotionPoint(p.valence, p.arousal, z)


def _unit(x: float, y: float) -> tuple[float, float]:
    n = math.hypot(x, y)
    return x / n, y / n


@dataclass(frozen=True, eq=False)
class AxisFrame:
    """Calibrated unit axis directions for the six basic emotions plus the
    neutral-intensity threshold.

    Happy/Surprised/Disgusted/Angry lie exactly in the plane; Fearful and
    Sad sit at +60/-60 degrees elevation with planar magnitude cos(60).
    """

    axes: dict[BasicEmotion, np.ndarray]
    neutral_rho: float = 0.1

    def __post_init__(self):
        if set(self.axes) != set(AXIS_BASICS):
            raise MissingCategoryError("frame must carry exactly the six basic axes")
        if not 0.0 < self.neutral_rho < 0.5:
            raise OutOfRangeError(f"neutral_rho {self.neutral_rho} outside (0, 0.5)")
        frozen: dict[BasicEmotion, np.ndarray] = {}
        for basic in AXIS_BASICS:
            vec = np.array(self.axes[basic], dtype=float)
            if vec.shape != (3,):
                raise OutOfRangeError(f"{basic.value} axis must be a 3-vector")
            if abs(float(vec @ vec) - 1.0) > 2e-12:
                raise OutOfRangeError(f"{basic.value} axis is not unit length")
            want_z = {BasicEmotion.FEARFUL: LIFT_SIN, BasicEmotion.SAD: -LIFT_SIN}.get(basic, 0.0)
            if abs(vec[2] - want_z) > 1e-12:
                raise OutOfRangeError(f"{basic.value} axis has lift {vec[2]}, expected {want_z}")
            vec.flags.writeable = False
            frozen[basic] = vec
        object.__setattr__(self, "axes", frozen)

    def axis(self, basic: BasicEmotion) -> np.ndarray:
        return self.axes[basic]

    def azimuth(self, basic: BasicEmotion) -> float:
        vec = self.axes[basic]
        phi = math.atan2(vec[1], vec[0])
        return phi + TWO_PI if phi < 0.0 else phi

    @cached_property
    def candidate_directions(self) -> tuple[np.ndarray, tuple[Category, ...]]:
        """Unit directions for the 6 basics and the 15 expressible compounds,
        in tie-break order (basics first, then compounds in table order)."""
        dirs: list[np.ndarray] = []
        cats: list[Category] = []
        for cat in CATEGORY_ORDER:
            if isinstance(cat, BasicEmotion):
                dirs.append(self.axes[cat])
                cats.append(cat)
            elif cat in REPRESENTABLE_3D:
                dirs.append(compound_direction(cat, self))
                cats.append(cat)
        stacked = np.vstack(dirs)
        stacked.flags.writeable = False
        return stacked, tuple(cats)

    @cached_property
    def planar_partition(self) -> tuple[np.ndarray, tuple[BasicEmotion, ...], tuple[CompoundEmotion | None, ...]]:
        """Basics sorted by azimuth, plus the 2D-expressible compound (if any)
        of each adjacent pair, for the angular region partition."""
        order = sorted(AXIS_BASICS, key=self.azimuth)
        azimuths = np.array([self.azimuth(b) for b in order])
        compounds: list[CompoundEmotion | None] = []
        for i, basic in enumerate(order):
            pair = {basic, order[(i + 1) % len(order)]}
            match = None
            for comp in REPRESENTABLE_2D:
                if set(CONSTITUENTS[comp]) == pair:
                    match = comp
                    break
            compounds.append(match)
        azimuths.flags.writeable = False
        return azimuths, tuple(order), tuple(compounds)


def calibrate_axes(
    samples: list[tuple[BasicEmotion, AVPoint]], neutral_rho: float = 0.1
) -> AxisFrame:
    """Calibrate the six basic axes from labelled AV annotations.

    Each basic's azimuth is atan2(mean arousal, mean valence) over its
    samples. Happy/Surprised/Disgusted/Angry go in-plane at unit length;
    Fearful and Sad keep their azimuth but are lifted to +/-60 degrees.
    Neutral samples are ignored (Neutral has no axis).

    Raises MissingCategoryError if any basic has no samples, OutOfRangeError
    for coordinates outside [-1, 1].
    """
    sums: dict[BasicEmotion, list[float]] = {b: [0.0, 0.0, 0.0] for b in AXIS_BASICS}
    for basic, point in samples:
        if basic is BasicEmotion.NEUTRAL:
            continue
        if not isinstance(point, AVPoint):
            point = AVPoint(*point)
        acc = sums[basic]
        acc[0] += point.valence
        acc[1] += point.arousal
        acc[2] += 1.0
    axes: dict[BasicEmotion, np.ndarray] = {}
    for basic in AXIS_BASICS:
        sv, sa, count = sums[basic]
        if count == 0.0:
            raise MissingCategoryError(f"no calibration samples for {basic.value}")
        ux, uy = _unit(sv / count, sa / count)
        if basic is BasicEmotion.FEARFUL:
            axes[basic] = np.array([LIFT_COS * ux, LIFT_COS * uy, LIFT_SIN])
        elif basic is BasicEmotion.SAD:
            axes[basic] = np.array([LIFT_COS * ux, LIFT_COS * uy, -LIFT_SIN])
        else:
            axes[basic] = np.array([ux, uy, 0.0])
    return AxisFrame(axes=axes, neutral_rho=neutral_rho)


def compound_direction(compound: CompoundEmotion, frame: AxisFrame) -> np.ndarray:
    """Unit direction of a compound: the normalized sum of its constituents'
    axes. Raises DegenerateSumError if the constituents cancel."""
    total = np.zeros(3)
    for basic in CONSTITUENTS[compound]:
        total = total + frame.axis(basic)
    norm = math.sqrt(float(total @ total))
    if norm < 1e-9:
        raise DegenerateSumError(f"constituent axes of {compound.value} cancel")
    return total / norm


def nearest_emotion(y: EmotionPoint, frame: AxisFrame) -> tuple[Category, float]:
    """Closest category by cosine similarity against the 6 basic axes and the
    15 expressible compound directions, with the point's norm as intensity.
    Below the neutral threshold the category is Neutral. Ties go to the
    earliest candidate in table order."""
    intensity = y.norm()
    if intensity < frame.neutral_rho:
        return BasicEmotion.NEUTRAL, intensity
    dirs, cats = frame.candidate_directions
    scores = dirs @ y.as_array()
    return cats[int(np.argmax(scores))], intensity


class SampleMode(str, Enum):
    UNIFORM_2D = "uniform2d"
    AXIS_PROXIMITY_3D = "axis3d"


def _cone_basis(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0])
    if abs(float(direction @ helper)) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = np.cross(direction, helper)
    e1 /= math.sqrt(float(e1 @ e1))
    e2 = np.cross(direction, e1)
    return e1, e2


def sample_conditions(
    mode: SampleMode,
    n: int,
    seed: int,
    frame: AxisFrame,
    jitter_deg: float = 10.0,
) -> list[EmotionPoint]:
    """Draw condition points, deterministically for a given argument tuple.

    UNIFORM_2D draws theta ~ U[0, 2*pi), rho ~ U[0, 1] in the plane.
    AXIS_PROXIMITY_3D picks one of the basic/compound directions uniformly,
    tilts it within a cone of half-angle jitter_deg, and scales by
    rho ~ U[0, 1].
    """
    if n < 0:
        raise OutOfRangeError("n must be >= 0")
    if not 0.0 <= jitter_deg <= 30.0:
        raise OutOfRangeError(f"jitter_deg {jitter_deg} outside [0, 30]")
    rng = np.random.default_rng(seed)
    points: list[EmotionPoint] = []
    if mode is SampleMode.UNIFORM_2D:
        u = rng.random((n, 2))
        for theta_u, rho in u:
            theta = TWO_PI * theta_u
            points.append(EmotionPoint(rho * math.cos(theta), rho * math.sin(theta), 0.0))
        return points
    dirs, _ = frame.candidate_directions
    cos_cap = math.cos(math.radians(jitter_deg))
    picks = rng.integers(0, dirs.shape[0], size=n)
    u = rng.random((n, 3))
    for pick, (u_alpha, u_psi, rho) in zip(picks, u):
        d = dirs[pick]
        cos_alpha = 1.0 - u_alpha * (1.0 - cos_cap)
        sin_alpha = math.sqrt(max(0.0, 1.0 - cos_alpha * cos_alpha))
        psi = TWO_PI * u_psi
        e1, e2 = _cone_basis(d)
        tilted = cos_alpha * d + sin_alpha * (math.cos(psi) * e1 + math.sin(psi) * e2)
        x, y_, z = rho * tilted
        points.append(EmotionPoint(float(x), float(y_), float(z)))
    return points


def circle_scan(
    z_level: float, n_theta: int, radius: float, frame: AxisFrame
) -> list[tuple[float, EmotionPoint]]:
    """Evenly spaced ring of conditions at a fixed height: n_theta angles
    starting at theta = 0, planar radius `radius`, lift `z_level`."""
    if n_theta < 1:
        raise OutOfRangeError("n_theta must be >= 1")
    if radius < 0.0:
        raise OutOfRangeError("radius must be >= 0")
    if radius * radius + z_level * z_level > 1.0 + BALL_TOL:
        raise OutOfBallError(f"radius {radius} with z {z_level} leaves the unit ball")
    out = []
    for k in range(n_theta):
        theta = TWO_PI * k / n_theta
        out.append(
            (theta, EmotionPoint(radius * math.cos(theta), radius * math.sin(theta), z_level))
        )
    return out


def _uniform_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    """(n, 3) in-plane points with theta ~ U[0, 2*pi), rho ~ U[0, 1].

    Draws one (theta, rho) row per point so that for a fixed generator state
    the first k points do not depend on n (budget-prefix stability)."""
    u = rng.random((n, 2))
    theta = TWO_PI * u[:, 0]
    rho = u[:, 1]
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), np.zeros(n)])


def _uniform_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    """(n, 3) points uniform in the unit ball via rejection from the cube.

    Candidates are drawn in fixed-size chunks so the accepted sequence is a
    prefix-stable function of the generator state, independent of n."""
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        cand = rng.uniform(-1.0, 1.0, size=(128, 3))
        keep = cand[(cand * cand).sum(axis=1) <= 1.0]
        take = min(n - filled, keep.shape[0])
        out[filled : filled + take] = keep[:take]
        filled += take
    return out


# --- frame serialization ---------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def frame_to_json(frame: AxisFrame) -> str:
    """Render a frame as JSON with 17-significant-digit coordinates, so a
    write/read round trip is bit-exact."""
    parts = []
    for basic in AXIS_BASICS:
        vec = frame.axis(basic)
        parts.append(f'"{basic.value}": [{_fmt(vec[0])}, {_fmt(vec[1])}, {_fmt(vec[2])}]')
    axes = ", ".join(parts)
    return f'{{"axes": {{{axes}}}, "neutral_rho": {_fmt(frame.neutral_rho)}}}'


def frame_from_json(text: str) -> AxisFrame:
    doc = json.loads(text)
    axes = {BasicEmotion(name): np.array(vec, dtype=float) for name, vec in doc["axes"].items()}
    return AxisFrame(axes=axes, neutral_rho=float(doc["neutral_rho"]))


def save_frame(frame: AxisFrame, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(frame_to_json(frame))
        fh.write("\n")


def load_frame(path) -> AxisFrame:
    with open(path, "r", encoding="utf-8") as fh:
        return frame_from_json(fh.read())
