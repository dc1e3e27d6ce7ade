"""Exception hierarchy.

Every domain failure raises a subclass of :class:`C2A2Error`; the CLI maps
these to exit code 1 and plain ``OSError`` to exit code 2.
"""


class C2A2Error(Exception):
    """Base class for all domain errors raised by this package."""


class MissingCategoryError(C2A2Error):
    """A basic emotion has no calibration samples."""


class OutOfRangeError(C2A2Error):
    """A coordinate lies outside its documented range."""


class OutOfBallError(C2A2Error):
    """A 3D condition point lies outside the unit ball."""


class DegenerateSumError(C2A2Error):
    """Constituent axis vectors cancel; no direction can be formed."""


class NeutralHasNoAUsError(C2A2Error):
    """Neutral carries no action-unit set."""


class DimensionMismatchError(C2A2Error):
    """Vector or matrix dimensions disagree."""


class RangeViolationError(C2A2Error):
    """A probability entry lies outside its clamped range."""


class NonFiniteError(C2A2Error):
    """A computation produced NaN or infinity."""


class DivergenceDetectedError(C2A2Error):
    """Training loss became non-finite."""


class TooFewSamplesError(C2A2Error):
    """Not enough rows to fit statistics."""


class NumericalFailureError(C2A2Error):
    """A numerical routine failed after all recovery attempts."""


class ParseError(C2A2Error):
    """A CSV row could not be parsed; the message names the line."""


class RangeError(C2A2Error):
    """A CSV value lies outside its documented range; names the line."""


class DuplicateIdError(C2A2Error):
    """An image id appears more than once in one file."""


class EmptyJoinError(C2A2Error):
    """Joining label files produced no common image ids."""
