"""Exception types raised across the package."""

from __future__ import annotations


class EllwkError(ValueError):
    """Base class; ``str(err)`` is the stable diagnostic string."""

    message = "ellwk error"

    def __init__(self, detail: str | None = None):
        self.detail = detail
        super().__init__(self.message if detail is None else f"{self.message}: {detail}")


class UnsupportedBaseType(EllwkError):
    message = "unsupported base type"


class IsotropicVector(EllwkError):
    message = "isotropic vector has no reflection"


class FlagViolation(EllwkError):
    message = "element does not preserve F"


class BudgetExhausted(EllwkError):
    message = "budget exhausted"


class NotInvertible(EllwkError):
    message = "not invertible"


class NotInCStar(EllwkError):
    message = "not in C*"


class OnRemovedDivisor(EllwkError):
    message = "point on the removed divisor {f = 0}"


class SamplingFailed(EllwkError):
    message = "sampling failed"


class NotTangent(EllwkError):
    message = "not tangent to the quadric"


class NotOnSection(EllwkError):
    message = "not on the a-section"


class NonConvergentTruncation(EllwkError):
    message = "non-convergent truncation"


class MetricDegenerate(EllwkError):
    message = "metric degenerate"


class DeformationSingular(EllwkError):
    message = "deformation singular on box"


class MetricSingular(EllwkError):
    message = "metric singular at sample"


class RatioSingular(EllwkError):
    message = "ratio singular"


class SpecFileError(EllwkError):
    """Malformed spec or chart file; carries the offending field/line."""

    message = "malformed input file"
