# qverify/errors.py
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class QVerifyError(Exception):
    """Base class for every diagnosable failure. Carries an optional source span."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.span}: {self.message}"


# -----------------------------
# Front end
# -----------------------------
class ParseError(QVerifyError):
    pass


class TypeCheckError(QVerifyError):
    pass


class UnboundVariable(TypeCheckError):
    pass


class WellFormednessError(QVerifyError):
    pass


class UnknownProcedure(QVerifyError):
    pass


class ArityMismatch(QVerifyError):
    pass


class DirectionMismatch(QVerifyError):
    pass


class RecursionDetected(QVerifyError):
    pass


# -----------------------------
# Evaluation
# -----------------------------
class EvaluationError(QVerifyError):
    pass


class NonEnumerableQuantifier(EvaluationError):
    pass


class StateSpaceTooLarge(EvaluationError):
    pass


# -----------------------------
# pGCL encodings
# -----------------------------
class LoopFound(QVerifyError):
    pass


class ObserveOutsideCwp(QVerifyError):
    pass


class WrongAnnotation(QVerifyError):
    pass


class MissingPastWitness(WrongAnnotation):
    pass


class AnnotationConstraintError(WrongAnnotation):
    pass


class ZeroNormalizer(QVerifyError):
    pass


# -----------------------------
# SMT backend
# -----------------------------
class UnsupportedConstruct(QVerifyError):
    pass


class SolverSpawnFailure(QVerifyError):
    pass


class MalformedSolverOutput(QVerifyError):
    pass


class ConfigError(QVerifyError):
    pass
