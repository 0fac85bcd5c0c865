# src/errors.py

"""Exception hierarchy. Every error is a ValueError so callers can keep catching that."""

from __future__ import annotations


class ReductionError(ValueError):
    """Root of all errors raised by the toolkit."""


# --- input / parsing -----------------------------------------------------

class InputFormatError(ReductionError):
    pass


class UnknownVertexError(ReductionError):
    pass


class RepeatedVertexError(ReductionError):
    pass


class ConsecutiveDuplicateError(ReductionError):
    pass


class LengthMismatchError(ReductionError):
    pass


class UnknownDirectionError(ReductionError):
    pass


class NameCollisionError(ReductionError):
    pass


class MissingVertexError(ReductionError):
    pass


# --- geometry ------------------------------------------------------------

class DegenerateTriangleError(ReductionError):
    pass


class CollinearTripleError(ReductionError):
    pass


class ZeroLengthSegmentError(ReductionError):
    pass


class PerturbationFailure(ReductionError):
    pass


# --- constraints ---------------------------------------------------------

class DegenerateTripleError(ReductionError):
    """A walk turn over a repeated endpoint (u_i == u_{i+2})."""


class InconsistentConstraintsError(ReductionError):
    def __init__(self, inconsistent):
        self.inconsistent = inconsistent
        super().__init__(f"Constraints contradict each other: {inconsistent.describe()}")


class NotDegenerateError(ReductionError):
    pass


class CollinearConstraintUnsupported(ReductionError):
    pass


# --- reductions ----------------------------------------------------------

class RealizationInvalidError(ReductionError):
    """The supplied embedding does not realize the walk it should."""


class SimultaneityViolation(ReductionError):
    """The supplied embedding is not a simultaneous embedding of the instance."""


class SoundnessViolation(ReductionError):
    """A backward construction produced something that fails verification."""


class PlacementFailure(ReductionError):
    pass


# --- search --------------------------------------------------------------

class UniverseTooLargeError(ReductionError):
    pass


class RejectionBudgetExhausted(ReductionError):
    pass
