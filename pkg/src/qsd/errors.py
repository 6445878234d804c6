"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): bad input that a
user can fix (`ValidationError`) and numerical failures where the inputs were
acceptable but the computation could not honour its contract
(`NumericalError`).
"""

from __future__ import annotations


class QSDError(Exception):
    """Base class for every error raised by this package."""

    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ValidationError(QSDError, ValueError):
    code = "validation"


class NumericalError(QSDError, ArithmeticError):
    code = "numerical"


# -- validation -------------------------------------------------------------


class InvalidStrategy(ValidationError):
    code = "InvalidStrategy"


class BadWeights(ValidationError):
    code = "BadWeights"


class NotPure(ValidationError):
    code = "NotPure"


class EmptyInput(ValidationError):
    code = "EmptyInput"


class MalformedRow(ValidationError):
    """One or more CSV rows could not be parsed.

    ``rows`` holds every ``(row_index, reason)`` pair found, so nothing is
    silently dropped; ``row`` is the first offending index (1-based, header
    excluded).
    """

    code = "MalformedRow"

    def __init__(self, rows: list[tuple[int, str]]):
        self.rows = list(rows)
        self.row = self.rows[0][0]
        detail = "; ".join(f"row {i}: {why}" for i, why in self.rows)
        super().__init__(f"malformed transaction rows: {detail}")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["rows"] = [{"row": i, "reason": why} for i, why in self.rows]
        return d


class TooFewRecords(ValidationError):
    code = "TooFewRecords"


class DegenerateRisk(ValidationError):
    code = "DegenerateRisk"


# -- numerical ---------------------------------------------------------------


class DomainTooNarrow(NumericalError):
    code = "DomainTooNarrow"


class NotNormalized(NumericalError):
    code = "NotNormalized"


class NotADensity(NumericalError):
    code = "NotADensity"


class ConvergenceFailure(NumericalError):
    code = "ConvergenceFailure"

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["index"] = self.index
        return d


class LeakyDomain(NumericalError):
    code = "LeakyDomain"


class SliceDegenerate(NumericalError):
    code = "SliceDegenerate"


class IoFailure(QSDError, OSError):
    code = "IoFailure"
