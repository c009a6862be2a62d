"""Exception types raised across the package."""

from __future__ import annotations


class CircSynthError(Exception):
    """Base class for all package errors."""


class SingularMatrix(CircSynthError, ValueError):
    pass


class NotPowerOfTwo(CircSynthError, ValueError):
    pass


class ZeroRow(CircSynthError, ValueError):
    pass


class NotCirculantAtBlockSize(CircSynthError, ValueError):
    pass


class NotUnitUpperTriangular(CircSynthError, ValueError):
    pass


class DepthBudgetExceeded(CircSynthError, RuntimeError):
    pass


class NoCandidateSucceeded(CircSynthError, RuntimeError):
    pass


class FixtureMismatch(CircSynthError, RuntimeError):
    pass


class ParseError(CircSynthError, ValueError):
    """Malformed matrix or circuit text. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
