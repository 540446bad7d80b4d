"""Exception hierarchy shared by every stage of the toolchain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Position:
    """A location in a source file (1-based line and column)."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class QasmError(Exception):
    """Base class for all language-level errors.

    ``rule`` is a short machine-readable id; ``position`` may be missing for
    errors that are not tied to a source location.
    """

    rule = "error"

    def __init__(self, message: str, position: Optional[Position] = None, rule: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.position = position
        if rule is not None:
            self.rule = rule

    def __str__(self) -> str:
        where = f"{self.position}: " if self.position else ""
        return f"{where}error[{self.rule}]: {self.message}"


class LexError(QasmError):
    rule = "lex"


class ParseError(QasmError):
    rule = "syntax"


class IncludeError(QasmError):
    rule = "include"


class EvalError(QasmError):
    """Parameter expression could not be evaluated to a finite real."""

    rule = "eval"


class UnrollError(QasmError):
    rule = "unroll"


class SimulationError(QasmError):
    rule = "sim"
