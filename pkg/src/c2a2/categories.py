"""Emotion categories: the 6 basics, the 17 compounds, and which of the
compounds each representation space can express.

The compound list, its decomposition into basic constituents, and the 2D/3D
representability pattern are fixed domain tables; everything downstream
(AU lookup, region partitioning, tie-breaking) keys off the canonical order
defined here: basics first, then compounds, each in table order.
"""

from __future__ import annotations

from enum import Enum


class BasicEmotion(str, Enum):
    NEUTRAL = "neutral"
    HAPPY = "happy"
    SAD = "sad"
    FEARFUL = "fearful"
    ANGRY = "angry"
    SURPRISED = "surprised"
    DISGUSTED = "disgusted"


class CompoundEmotion(str, Enum):
    HAPPILY_SAD = "happily_sad"
    HAPPILY_SURPRISED = "happily_surprised"
    HAPPILY_DISGUSTED = "happily_disgusted"
    SADLY_FEARFUL = "sadly_fearful"
    SADLY_ANGRY = "sadly_angry"
    SADLY_SURPRISED = "sadly_surprised"
    SADLY_DISGUSTED = "sadly_disgusted"
    FEARFULLY_ANGRY = "fearfully_angry"
    FEARFULLY_SURPRISED = "fearfully_surprised"
    FEARFULLY_DISGUSTED = "fearfully_disgusted"
    ANGRILY_SURPRISED = "angrily_surprised"
    DISGUSTEDLY_SURPRISED = "disgustedly_surprised"
    HAPPILY_FEARFUL = "happily_fearful"
    ANGRILY_DISGUSTED = "angrily_disgusted"
    AWED = "awed"
    APPALLED = "appalled"
    HATRED = "hatred"


Category = BasicEmotion | CompoundEmotion

#: The six basics that carry an axis direction (everything but Neutral).
AXIS_BASICS: tuple[BasicEmotion, ...] = (
    BasicEmotion.HAPPY,
    BasicEmotion.SAD,
    BasicEmotion.FEARFUL,
    BasicEmotion.ANGRY,
    BasicEmotion.SURPRISED,
    BasicEmotion.DISGUSTED,
)

#: Constituents of each compound. Awed, Hatred and Appalled decompose into
#: basics (happy+surprise+fear, disgust+anger+fear, disgust+surprise); every
#: other compound is the two basics its name spells out.
CONSTITUENTS: dict[CompoundEmotion, tuple[BasicEmotion, ...]] = {
    CompoundEmotion.HAPPILY_SAD: (BasicEmotion.HAPPY, BasicEmotion.SAD),
    CompoundEmotion.HAPPILY_SURPRISED: (BasicEmotion.HAPPY, BasicEmotion.SURPRISED),
    CompoundEmotion.HAPPILY_DISGUSTED: (BasicEmotion.HAPPY, BasicEmotion.DISGUSTED),
    CompoundEmotion.SADLY_FEARFUL: (BasicEmotion.SAD, BasicEmotion.FEARFUL),
    CompoundEmotion.SADLY_ANGRY: (BasicEmotion.SAD, BasicEmotion.ANGRY),
    CompoundEmotion.SADLY_SURPRISED: (BasicEmotion.SAD, BasicEmotion.SURPRISED),
    CompoundEmotion.SADLY_DISGUSTED: (BasicEmotion.SAD, BasicEmotion.DISGUSTED),
    CompoundEmotion.FEARFULLY_ANGRY: (BasicEmotion.FEARFUL, BasicEmotion.ANGRY),
    CompoundEmotion.FEARFULLY_SURPRISED: (BasicEmotion.FEARFUL, BasicEmotion.SURPRISED),
    CompoundEmotion.FEARFULLY_DISGUSTED: (BasicEmotion.FEARFUL, BasicEmotion.DISGUSTED),
    CompoundEmotion.ANGRILY_SURPRISED: (BasicEmotion.ANGRY, BasicEmotion.SURPRISED),
    CompoundEmotion.DISGUSTEDLY_SURPRISED: (BasicEmotion.DISGUSTED, BasicEmotion.SURPRISED),
    CompoundEmotion.HAPPILY_FEARFUL: (BasicEmotion.HAPPY, BasicEmotion.FEARFUL),
    CompoundEmotion.ANGRILY_DISGUSTED: (BasicEmotion.ANGRY, BasicEmotion.DISGUSTED),
    CompoundEmotion.AWED: (BasicEmotion.HAPPY, BasicEmotion.SURPRISED, BasicEmotion.FEARFUL),
    CompoundEmotion.HATRED: (BasicEmotion.DISGUSTED, BasicEmotion.ANGRY, BasicEmotion.FEARFUL),
    CompoundEmotion.APPALLED: (BasicEmotion.DISGUSTED, BasicEmotion.SURPRISED),
}

#: Compounds expressible in the flat arousal-valence plane (6 of 17).
REPRESENTABLE_2D: frozenset[CompoundEmotion] = frozenset(
    {
        CompoundEmotion.SADLY_DISGUSTED,
        CompoundEmotion.FEARFULLY_ANGRY,
        CompoundEmotion.FEARFULLY_SURPRISED,
        CompoundEmotion.ANGRILY_DISGUSTED,
        CompoundEmotion.HAPPILY_SURPRISED,
        CompoundEmotion.HAPPILY_SAD,
    }
)

#: Compounds expressible once fear/sad are lifted out of the plane (15 of 17);
#: only Appalled and Disgustedly surprised remain out of reach.
REPRESENTABLE_3D: frozenset[CompoundEmotion] = frozenset(CompoundEmotion) - {
    CompoundEmotion.APPALLED,
    CompoundEmotion.DISGUSTEDLY_SURPRISED,
}

#: Tie-breaking and serialization order: basics first, then compounds, each
#: in table order.
CATEGORY_ORDER: tuple[Category, ...] = AXIS_BASICS + tuple(CompoundEmotion)

#: Stable integer codes: 0 = Neutral, 1..6 basics, 7..23 compounds.
CATEGORY_CODES: dict[Category, int] = {BasicEmotion.NEUTRAL: 0}
CATEGORY_CODES.update({cat: i + 1 for i, cat in enumerate(CATEGORY_ORDER)})
CODE_TO_CATEGORY: dict[int, Category] = {v: k for k, v in CATEGORY_CODES.items()}


class Space(str, Enum):
    """Which representation space a query refers to."""

    TWO_D = "2d"
    THREE_D = "3d"


def is_representable(compound: CompoundEmotion, space: Space) -> bool:
    """True if `compound` is expressible in the given space."""
    if space is Space.TWO_D:
        return compound in REPRESENTABLE_2D
    return compound in REPRESENTABLE_3D


def display_name(cat: Category) -> str:
    """Human-readable name, e.g. 'Happily surprised'."""
    return cat.value.replace("_", " ").capitalize()


_BASIC_SYNONYMS = {
    "happiness": BasicEmotion.HAPPY,
    "joy": BasicEmotion.HAPPY,
    "sadness": BasicEmotion.SAD,
    "fear": BasicEmotion.FEARFUL,
    "anger": BasicEmotion.ANGRY,
    "surprise": BasicEmotion.SURPRISED,
    "disgust": BasicEmotion.DISGUSTED,
}


def parse_category(name: str) -> Category:
    """Parse a category name, tolerating case, spaces, hyphens and the common
    single-word basic-emotion synonyms (e.g. 'anger' for Angry).

    Raises ValueError for unknown names.
    """
    key = name.strip().lower().replace("-", "_").replace(" ", "_")
    if key in _BASIC_SYNONYMS:
        return _BASIC_SYNONYMS[key]
    for enum_cls in (BasicEmotion, CompoundEmotion):
        try:
            return enum_cls(key)
        except ValueError:
            pass
    raise ValueError(f"unknown emotion category: {name!r}")
