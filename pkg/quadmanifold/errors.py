"""
Exception hierarchy for the quadmanifold package.

Everything derives from ValueError so callers that only catch ValueError keep working.
"""

from typing import Optional


class QuadManifoldError(ValueError):
    """Base class for all domain errors raised by quadmanifold"""


class DimensionMismatchError(QuadManifoldError):
    def __init__(self, expected: int, actual: int, what: str = "point"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch: expected {what} of dimension {expected}, got {actual}")


class EmptyInputError(QuadManifoldError):
    pass


class NotOrthogonalError(QuadManifoldError):
    pass


class ModelFormatError(QuadManifoldError):
    pass


class DegenerateQuadricError(QuadManifoldError):
    pass


class DivergenceError(QuadManifoldError):
    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"Training diverged at epoch {epoch}: loss is {loss}")


class NoFeasiblePointError(QuadManifoldError):
    pass


class ConfigError(QuadManifoldError):
    pass


class CloudFormatError(QuadManifoldError):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        location = ""
        if row is not None:
            location = f" (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{location}")


class UsageError(QuadManifoldError):
    """Invalid or inconsistent command-line arguments"""
