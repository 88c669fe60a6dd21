from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class StratakitError(Exception):
    """Base class for every failure raised by the package."""


class DimensionMismatch(StratakitError):
    pass


class UnsupportedField(StratakitError):
    pass


class NonAdmissible(StratakitError):
    pass


class NotEI(StratakitError):
    pass


class NotSkeletal(StratakitError):
    pass


class NotAssociative(StratakitError):
    pass


class NotIdempotent(StratakitError):
    pass


class NotSplit(StratakitError):
    def __init__(self, message: str, simple: str | None = None) -> None:
        super().__init__(message)
        self.simple = simple


class NotAStratification(StratakitError):
    def __init__(self, message: str, evidence: Any = None) -> None:
        super().__init__(message)
        self.evidence = evidence


class NotAnIdeal(StratakitError):
    pass


class NotMinimalObject(StratakitError):
    pass


class NotParallel(StratakitError):
    pass


class InvalidObstructionPair(StratakitError):
    pass


class InvalidModule(StratakitError):
    pass


class UsageError(StratakitError):
    """Unknown command, argument or module reference."""


class InvariantViolation(StratakitError):
    """An internal certificate failed to re-verify."""


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class DocumentError(StratakitError):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics
