"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class FidePiaError(Exception):
    """Base class for all errors raised by :mod:`fidepia`."""


class DomainError(FidePiaError, ValueError):
    """An operation was applied outside the class of series it supports."""


class PoleError(DomainError):
    """A special function was evaluated at one of its poles."""


class ParseError(FidePiaError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the source where parsing stopped.
    """

    def __init__(self, message: str, offset: int, source: str = "") -> None:
        self.message = message
        self.offset = offset
        self.source = source
        super().__init__(f"{message} (at offset {offset})")


class ValidationError(FidePiaError, ValueError):
    """Input is well formed but violates a semantic constraint."""


class SchemaError(ValidationError):
    """A problem document has missing, extra or mistyped fields."""


class IterationError(FidePiaError, RuntimeError):
    """Failure inside one perturbation-iteration step."""

    def __init__(self, message: str, n: int, unknown: int | None = None) -> None:
        self.n = n
        self.unknown = unknown
        where = f"iteration {n}" if unknown is None else f"iteration {n}, unknown {unknown}"
        super().__init__(f"{where}: {message}")


class NoConvergence(FidePiaError, ArithmeticError):
    """Adaptive quadrature hit its subdivision limit above tolerance."""
