"""Exception hierarchy for the invariant pipeline.

Every error carries the pipeline stage it belongs to, so the CLI can emit a
structured ``{stage, error, message}`` object without a lookup table.
"""

from typing import Any, Dict, Optional


class QHIError(Exception):
    """Base class for all pipeline errors."""

    stage = "internal"

    def to_dict(self) -> Dict[str, Any]:
        """Structured error object for reports and exit payloads."""
        return {
            "stage": self.stage,
            "error": type(self).__name__,
            "message": str(self),
        }


class InvalidParameter(QHIError, ValueError):
    """A scalar or configuration value is outside its admissible range."""

    stage = "config"


class NotPseudoAnosov(QHIError):
    """The mapping class has |trace| <= 2 or the word misses a letter."""

    stage = "word"


class MatrixOverflowError(QHIError, OverflowError):
    """Integer matrix entries left the signed 64-bit range."""

    stage = "word"


class DegenerateWeight(QHIError):
    """A shear coordinate hit a pole or zero (0 or -1) of the recursion."""

    stage = "solve"

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["step"] = self.step
        return payload


class NoSolutionFound(QHIError):
    stage = "solve"


class NoGeometricCandidate(QHIError):
    stage = "select"


class NonPeriodicTrajectory(QHIError):
    stage = "roots"


class SingularFactor(QHIError):
    """A factor (1 + q^a X) of an automorphism or intertwiner is not invertible."""

    stage = "representation"


class InconsistentCentrals(QHIError):
    """Central values violate the admissibility constraint h^2 = p1 p2 p3 p4."""

    stage = "representation"


class IllConditioned(QHIError):
    stage = "assemble"
