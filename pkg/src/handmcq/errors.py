"""Exception types shared across the toolkit."""


class HandMcqError(Exception):
    """Base class for all toolkit errors."""


class NotAnAngleJoint(HandMcqError):
    """Raised when a bending angle is requested at the wrist or a fingertip."""


class DegeneratePose(HandMcqError):
    """Raised when a pose cannot be normalized (zero extent on every axis)."""


class DegenerateBone(HandMcqError):
    """Raised when a bone vector is too short to define an angle."""


class OutOfRange(HandMcqError):
    """Raised when a continuous value lies outside its categorizable domain."""


class AlignedNotRenderable(HandMcqError):
    """Raised when asked to render a sentence for the 'aligned' category."""


class AlignedGroundTruth(HandMcqError):
    """Raised when a relative-position target's true category is 'aligned'.

    Such targets are excluded from question generation because the visual
    cue is ambiguous; callers must skip or resample.
    """


# The oracle raises the same condition under this name.
AlignedTruth = AlignedGroundTruth


class ParseError(HandMcqError):
    """A malformed line in a manifest, dataset, or prediction file."""

    def __init__(self, line_no: int, reason: str):
        # args must mirror the signature so the exception survives pickling
        # across multiprocessing workers.
        super().__init__(line_no, reason)
        self.line_no = line_no
        self.reason = reason

    def __str__(self) -> str:
        return f"line {self.line_no}: {self.reason}"


class DuplicateImageId(HandMcqError):
    """Two manifest records share the same image_id."""


class NoMatchingOption(HandMcqError):
    """The true category's statement is missing from an option set."""


class MissingPose(HandMcqError):
    """A dataset question references an image_id absent from the manifest."""


class NotOrdinal(HandMcqError):
    """Ordinal index requested for a kind without an ordinal metric."""


class UnknownQuestionId(HandMcqError):
    """A prediction references a question_id absent from the gold dataset."""


class DuplicatePrediction(HandMcqError):
    """Two predictions share the same question_id."""


class MissingConfidence(HandMcqError):
    """A calibration computation encountered a prediction without confidence."""
