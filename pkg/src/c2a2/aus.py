"""Action-unit catalogue, the category→AU lookup table, and AU probability
targets.

The detector whose output files we ingest scores 41 action units: 27 whole-face
units plus left/right halves of 7 of them. Ids are integers; a left half of
unit n is stored as 100+n and a right half as 200+n so the whole catalogue
stays integer-keyed. Only 15 whole-face units matter for deciding emotion
categories; targets and losses live on that 15-slot vector, in ascending id
order.
"""

from __future__ import annotations

import numpy as np

from c2a2.categories import (
    AXIS_BASICS,
    BasicEmotion,
    Category,
    CompoundEmotion,
)
from c2a2.errors import NeutralHasNoAUsError, RangeViolationError

#: Probability floor/ceiling keeping KL terms finite.
EPSILON = 1e-4

#: Full 41-unit catalogue in detector output order.
AU_CATALOGUE: tuple[int, ...] = (
    1, 2, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
    22, 23, 24, 25, 26, 27, 32, 38, 39,
    101, 201, 102, 202, 104, 204, 106, 206, 110, 210, 112, 212, 114, 214,
)

#: The 15 units that decide emotion categories, ascending id order.
RELEVANT_AUS: tuple[int, ...] = (1, 2, 4, 5, 6, 7, 9, 10, 12, 15, 17, 20, 24, 25, 26)

#: Position of each relevant id inside the 41-entry catalogue.
_RELEVANT_POSITIONS = np.array([AU_CATALOGUE.index(au) for au in RELEVANT_AUS])

#: Slot of each relevant id inside the 15-entry target vector.
RELEVANT_INDEX: dict[int, int] = {au: i for i, au in enumerate(RELEVANT_AUS)}

#: Category → active action units (23 rows: 6 basics + 17 compounds).
AU_TABLE: dict[Category, frozenset[int]] = {
    BasicEmotion.HAPPY: frozenset({12, 25}),
    BasicEmotion.SAD: frozenset({4, 15}),
    BasicEmotion.FEARFUL: frozenset({1, 4, 20, 25}),
    BasicEmotion.ANGRY: frozenset({4, 7, 24}),
    BasicEmotion.SURPRISED: frozenset({1, 2, 25, 26}),
    BasicEmotion.DISGUSTED: frozenset({9, 10, 17}),
    CompoundEmotion.HAPPILY_SAD: frozenset({4, 6, 12, 25}),
    CompoundEmotion.HAPPILY_SURPRISED: frozenset({1, 2, 12, 25}),
    CompoundEmotion.HAPPILY_DISGUSTED: frozenset({10, 12, 25}),
    CompoundEmotion.SADLY_FEARFUL: frozenset({1, 4, 15, 25}),
    CompoundEmotion.SADLY_ANGRY: frozenset({4, 7, 15}),
    CompoundEmotion.SADLY_SURPRISED: frozenset({1, 4, 25, 26}),
    CompoundEmotion.SADLY_DISGUSTED: frozenset({4, 10}),
    CompoundEmotion.FEARFULLY_ANGRY: frozenset({4, 20, 25}),
    CompoundEmotion.FEARFULLY_SURPRISED: frozenset({1, 2, 5, 20, 25}),
    CompoundEmotion.FEARFULLY_DISGUSTED: frozenset({1, 4, 10, 20, 25}),
    CompoundEmotion.ANGRILY_SURPRISED: frozenset({4, 25, 26}),
    CompoundEmotion.DISGUSTEDLY_SURPRISED: frozenset({1, 2, 5, 10}),
    CompoundEmotion.HAPPILY_FEARFUL: frozenset({1, 2, 12, 25, 26}),
    CompoundEmotion.ANGRILY_DISGUSTED: frozenset({4, 10, 17}),
    CompoundEmotion.AWED: frozenset({1, 2, 5, 25}),
    CompoundEmotion.APPALLED: frozenset({4, 9, 10}),
    CompoundEmotion.HATRED: frozenset({4, 7, 10}),
}


def category_to_aus(cat: Category) -> frozenset[int]:
    """Active action units of a category.

    Neutral carries no AU set and raises NeutralHasNoAUsError.
    """
    if cat is BasicEmotion.NEUTRAL:
        raise NeutralHasNoAUsError("Neutral has no action-unit set")
    return AU_TABLE[cat]


def make_au_target(cat: Category, intensity: float) -> np.ndarray:
    """Build the 15-slot activation target for a category at an intensity.

    Active units get clamp(intensity, eps, 1-eps), inactive ones eps, and
    Neutral maps to the all-eps vector.
    """
    if not 0.0 <= intensity <= 1.0:
        raise RangeViolationError(f"intensity {intensity} outside [0, 1]")
    target = np.full(len(RELEVANT_AUS), EPSILON)
    if cat is not BasicEmotion.NEUTRAL:
        level = min(max(intensity, EPSILON), 1.0 - EPSILON)
        for au in AU_TABLE[cat]:
            target[RELEVANT_INDEX[au]] = level
    return target


def make_au_targets(codes: np.ndarray, intensities: np.ndarray) -> np.ndarray:
    """Vectorized make_au_target over category codes (see CATEGORY_CODES)."""
    from c2a2.categories import CODE_TO_CATEGORY

    codes = np.asarray(codes)
    intensities = np.asarray(intensities, dtype=float)
    out = np.full((codes.shape[0], len(RELEVANT_AUS)), EPSILON)
    levels = np.clip(intensities, EPSILON, 1.0 - EPSILON)
    for code in np.unique(codes):
        cat = CODE_TO_CATEGORY[int(code)]
        if cat is BasicEmotion.NEUTRAL:
            continue
        rows = codes == code
        slots = [RELEVANT_INDEX[au] for au in AU_TABLE[cat]]
        for s in slots:
            out[rows, s] = levels[rows]
    return out


def restrict_activation(probs: np.ndarray) -> np.ndarray:
    """Select the 15 relevant entries from a 41-unit activation vector (or an
    (n, 41) batch), in ascending id order, clamped to [eps, 1-eps]."""
    probs = np.asarray(probs, dtype=float)
    if probs.shape[-1] != len(AU_CATALOGUE):
        raise RangeViolationError(
            f"expected {len(AU_CATALOGUE)} activation entries, got {probs.shape[-1]}"
        )
    if not np.all(np.isfinite(probs)) or probs.min() < 0.0 or probs.max() > 1.0:
        raise RangeViolationError("activation probabilities must lie in [0, 1]")
    return np.clip(probs[..., _RELEVANT_POSITIONS], EPSILON, 1.0 - EPSILON)


def au_table_rows() -> list[tuple[Category, tuple[int, ...]]]:
    """The 23 table rows in canonical order, ids sorted ascending."""
    order: list[Category] = list(AXIS_BASICS) + list(CompoundEmotion)
    return [(cat, tuple(sorted(AU_TABLE[cat]))) for cat in order]
