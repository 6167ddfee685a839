# domain/errors.py
from __future__ import annotations

from typing import Optional

__all__ = [
    "AlgebraError",
    "SpecParseError",
    "DomainError",
    "DivisionByZero",
    "InvariantViolation",
]


class AlgebraError(RuntimeError):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 2
    kind = "error"


class SpecParseError(AlgebraError):
    exit_code = 1
    kind = "parse"

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position} in {text!r})"
        super().__init__(message)


class DomainError(AlgebraError):
    exit_code = 2
    kind = "domain"


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class InvariantViolation(AlgebraError):
    """A proven identity failed: always an implementation bug."""

    exit_code = 3
    kind = "invariant"
