"""Exception types raised across the toolkit.

Every error the library raises deliberately derives from
:class:`CurrikitError`, so callers (and the CLI) can catch one base class
and still report the specific failure by its class name.
"""


class CurrikitError(Exception):
    """Base class for all toolkit errors."""


class EmptyDatasetError(CurrikitError):
    """An operation received zero samples."""


class UnknownFineLabelError(CurrikitError):
    """A fine-grained label is absent from the active score table."""

    def __init__(self, label: str, message: str | None = None):
        self.label = label
        super().__init__(message or f"unknown fine label: {label!r}")


class InvalidProbabilityError(CurrikitError):
    """A probability was non-positive or otherwise out of range."""


class ScheduleExhaustedError(CurrikitError):
    """Attempted to advance a schedule past its final epoch."""


class ReversalOutOfRangeError(CurrikitError):
    """Score reversal would produce a score of 0, which is not allowed."""


class InvalidWeightError(CurrikitError):
    """A sampling weight was non-positive or non-finite."""


class ProfileError(CurrikitError):
    """A synthetic dataset profile is inconsistent."""


class ManifestParseError(CurrikitError):
    """A dataset manifest row could not be parsed or violates an invariant."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class PlanMismatchError(CurrikitError):
    """An epoch plan does not cover the dataset it is applied to."""


class ShapeError(CurrikitError):
    """Array dimensions do not match what a model expects."""


class NumericalDivergenceError(CurrikitError):
    """Model weights became NaN or infinite during training."""


class DegenerateLabelsError(CurrikitError):
    """Ranking metrics need at least one positive and one negative label."""


class UnfairComparisonError(CurrikitError):
    """Compared configurations differ in more than the ordering strategy."""


class ConfigError(CurrikitError):
    """An experiment configuration is invalid."""
