"""Open QASM 2.0 toolchain: parse, check, unroll, format and simulate."""

from .errors import (
    EvalError,
    IncludeError,
    LexError,
    ParseError,
    Position,
    QasmError,
    SimulationError,
    UnrollError,
)
from .expr import evaluate
from .formatter import format_expr, format_program
from .parser import parse, parse_expression, parse_file
from .semantics import Diagnostic, build_symbol_table, check
from .sim import circuit_unitary, enumerate_branches, simulate, statevector
from .unroll import FlatCircuit, Instruction, unroll

__version__ = "0.1.0"

__all__ = [
    "Diagnostic",
    "EvalError",
    "FlatCircuit",
    "IncludeError",
    "Instruction",
    "LexError",
    "ParseError",
    "Position",
    "QasmError",
    "SimulationError",
    "UnrollError",
    "build_symbol_table",
    "check",
    "circuit_unitary",
    "enumerate_branches",
    "evaluate",
    "format_expr",
    "format_program",
    "parse",
    "parse_expression",
    "parse_file",
    "simulate",
    "statevector",
    "unroll",
]
