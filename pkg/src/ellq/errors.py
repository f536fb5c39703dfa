"""Exception hierarchy shared by every module of the workbench."""

from __future__ import annotations


class EllqError(Exception):
    """Base class for all workbench errors."""


class InvalidParameterError(EllqError, ValueError):
    """A numeric configuration is outside its domain (e.g. Im eta <= 0)."""


class EmptySpaceError(EllqError):
    """The requested space of sections is zero-dimensional."""


class NearPoleError(EllqError, ArithmeticError):
    """Evaluation hit a denominator too close to zero.

    ``indices`` lists the offending sample positions when evaluation was
    vectorized, so callers can drop those points and resample.
    """

    def __init__(self, message: str, indices=None):
        super().__init__(message)
        self.indices = indices


class DegenerateSamplingError(EllqError):
    """Admissible sample points could not be found."""


class ContourError(EllqError):
    """A contour integral could not be placed away from zeros."""


class ExprSyntaxError(EllqError, SyntaxError):
    """Malformed expression text; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownIdentifierError(EllqError, NameError):
    def __init__(self, name: str, context):
        ctx = ", ".join(sorted(context)) if context else "<empty>"
        super().__init__(f"unknown identifier {name!r}; declared context: {ctx}")
        self.name = name
        self.context = tuple(sorted(context or ()))


class ContextError(EllqError, KeyError):
    """An assignment does not cover every variable of an expression."""


class RankMismatchError(EllqError, ValueError):
    """Grades or weight vectors do not match the rank of the root data."""


class DeskScaleError(EllqError):
    """A computation exceeded the desk-scale guard limits."""


class UnsupportedError(EllqError):
    """The requested configuration is outside what the formulas cover."""
