"""Symbol table construction and static validity checks.

Rule ids reported in diagnostics:

    a  register declared before use; index within range
    b  register size at least 1
    c  gate declared before use; parameter/argument arity; no recursion
    d  gate bodies: only own params/qargs, no indexing, only U/CX/calls/barrier
    e  operand kinds: qubits where quantum operands are expected, bits otherwise
    f  measure: both registers (of equal size) or both bits
    g  register operands of one application have equal sizes
    h  qubits of one gate application are pairwise distinct
    i  if: condition names a classical register
    j  warning: if-comparison constant can never match
    k  duplicate declaration
    l  unbound parameter name in a top-level expression
    m  constant parameter expression cannot be evaluated
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from . import nodes as n
from .errors import EvalError, Position, UnrollError
from .expr import evaluate, free_variables
from .unroll import broadcast

ERROR = "error"
WARNING = "warning"

RULES = {
    "a": "register declared before use; index within range",
    "b": "register size at least 1",
    "c": "gate declared before use with matching arity; no recursion",
    "d": "gate body refers only to its own parameters and unindexed arguments",
    "e": "operand has the wrong kind (quantum vs classical)",
    "f": "measure operands are both registers of equal size or both bits",
    "g": "register operands of one application have the same size",
    "h": "qubit arguments of one application are distinct",
    "i": "if condition names a declared classical register",
    "j": "if comparison value is out of range for the register",
    "k": "name declared more than once",
    "l": "parameter name used outside a gate body",
    "m": "parameter expression cannot be evaluated",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    rule: str
    message: str
    position: Optional[Position] = None

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def __str__(self) -> str:
        where = f"{self.position}: " if self.position else ""
        return f"{where}{self.severity}[{self.rule}]: {self.message}"


@dataclass
class Symbol:
    name: str
    kind: str  # qreg, creg, gate, opaque
    position: Optional[Position] = None
    size: int = 0  # registers
    offset: int = 0  # registers: start of this register in global index order
    n_params: int = 0  # gates
    n_qargs: int = 0  # gates
    decl: object = field(default=None, repr=False)


class SymbolTable:
    """Flat global namespace, filled strictly in source order."""

    def __init__(self):
        self.entries: Dict[str, Symbol] = {}
        self._next_offset = {"qreg": 0, "creg": 0}

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def get(self, name: str) -> Optional[Symbol]:
        return self.entries.get(name)

    def declare(self, stmt) -> Symbol:
        if isinstance(stmt, n.RegDecl):
            offset = self._next_offset[stmt.kind]
            self._next_offset[stmt.kind] += max(stmt.size, 0)
            sym = Symbol(stmt.name, stmt.kind, stmt.position, size=stmt.size, offset=offset, decl=stmt)
        else:
            kind = "gate" if isinstance(stmt, n.GateDecl) else "opaque"
            sym = Symbol(
                stmt.name, kind, stmt.position,
                n_params=len(stmt.params), n_qargs=len(stmt.qargs), decl=stmt,
            )
        self.entries[stmt.name] = sym
        return sym

    def registers(self, kind: str) -> List[Symbol]:
        return [s for s in self.entries.values() if s.kind == kind]


def build_symbol_table(program: n.Program) -> SymbolTable:
    """Symbol table of all declarations; the first declaration of a name wins."""
    table = SymbolTable()
    for stmt in program.statements:
        if isinstance(stmt, (n.RegDecl, n.GateDecl, n.OpaqueDecl)) and stmt.name not in table:
            table.declare(stmt)
    return table


class Checker:
    def __init__(self):
        self.table = SymbolTable()
        self.diagnostics: List[Diagnostic] = []

    def report(self, rule: str, message: str, position=None, severity: str = ERROR) -> None:
        self.diagnostics.append(Diagnostic(severity, rule, message, position))

    def run(self, program: n.Program) -> List[Diagnostic]:
        for stmt in program.statements:
            self.statement(stmt)
        return self.diagnostics

    # -- declarations ------------------------------------------------------

    def statement(self, stmt) -> None:
        if isinstance(stmt, n.RegDecl):
            if stmt.size < 1:
                self.report("b", f"register {stmt.name!r} must have size at least 1", stmt.position)
            if self._fresh(stmt):
                self.table.declare(stmt)
        elif isinstance(stmt, (n.GateDecl, n.OpaqueDecl)):
            self.gate_decl(stmt)
        elif isinstance(stmt, n.If):
            self.if_statement(stmt)
        else:
            self.operation(stmt)

    def _fresh(self, stmt) -> bool:
        prior = self.table.get(stmt.name)
        if prior is None:
            return True
        where = f" (first declared at {prior.position})" if prior.position else ""
        self.report("k", f"{stmt.name!r} is already declared as a {prior.kind}{where}", stmt.position)
        return False

    def gate_decl(self, decl) -> None:
        fresh = self._fresh(decl)
        formals = list(decl.params) + list(decl.qargs)
        seen = set()
        for name in formals:
            if name in seen:
                self.report("k", f"gate {decl.name!r} lists {name!r} more than once", decl.position)
            seen.add(name)
        if isinstance(decl, n.GateDecl):
            for stmt in decl.body:
                self.body_statement(decl, stmt)
        if fresh:
            self.table.declare(decl)

    # -- gate bodies -------------------------------------------------------

    def _body_exprs(self, decl, exprs) -> None:
        for e in exprs:
            for var in free_variables(e):
                if var.name not in decl.params:
                    self.report(
                        "d", f"{var.name!r} is not a parameter of gate {decl.name!r}", var.position
                    )

    def _body_args(self, decl, args) -> bool:
        ok = True
        for a in args:
            if a.index is not None:
                self.report("d", f"gate argument {a} cannot be indexed inside gate {decl.name!r}", a.position)
                ok = False
            elif a.name not in decl.qargs:
                self.report("d", f"{a.name!r} is not an argument of gate {decl.name!r}", a.position)
                ok = False
        return ok

    def _distinct_names(self, args, position) -> None:
        names = [a.name for a in args]
        if len(set(names)) != len(names):
            self.report("h", f"repeated qubit argument in {', '.join(names)}", position)

    def body_statement(self, decl, stmt) -> None:
        if isinstance(stmt, n.UGate):
            if len(stmt.params) != 3:
                self.report("c", f"U takes 3 parameters, got {len(stmt.params)}", stmt.position)
            self._body_exprs(decl, stmt.params)
            self._body_args(decl, [stmt.target])
        elif isinstance(stmt, n.CXGate):
            if self._body_args(decl, [stmt.control, stmt.target]):
                self._distinct_names([stmt.control, stmt.target], stmt.position)
        elif isinstance(stmt, n.GateCall):
            if stmt.name == decl.name:
                self.report("c", f"gate {decl.name!r} cannot call itself", stmt.position)
            else:
                self._gate_signature(stmt)
            self._body_exprs(decl, stmt.params)
            if self._body_args(decl, stmt.args):
                self._distinct_names(stmt.args, stmt.position)
        elif isinstance(stmt, n.Barrier):
            self._body_args(decl, stmt.args)
        else:
            what = type(stmt).__name__.lower()
            self.report("d", f"{what} statements are not allowed inside gate {decl.name!r}", stmt.position)

    def _gate_signature(self, call: n.GateCall) -> bool:
        sym = self.table.get(call.name)
        if sym is None:
            self.report("c", f"gate {call.name!r} is not declared before use", call.position)
            return False
        if sym.kind not in ("gate", "opaque"):
            self.report("c", f"{call.name!r} is a {sym.kind}, not a gate", call.position)
            return False
        ok = True
        if len(call.params) != sym.n_params:
            self.report(
                "c", f"gate {call.name!r} takes {sym.n_params} parameter(s), got {len(call.params)}", call.position
            )
            ok = False
        if len(call.args) != sym.n_qargs:
            self.report(
                "c", f"gate {call.name!r} takes {sym.n_qargs} qubit argument(s), got {len(call.args)}", call.position
            )
            ok = False
        return ok

    # -- top-level operations ----------------------------------------------

    def _closed_exprs(self, exprs) -> None:
        for e in exprs:
            free = list(free_variables(e))
            for var in free:
                self.report("l", f"unbound parameter {var.name!r} outside a gate body", var.position)
            if not free:
                try:
                    evaluate(e)
                except EvalError as exc:
                    self.report("m", exc.message, exc.position or getattr(e, "position", None))

    def resolve(self, arg: n.Argument, kind: str):
        """Operand for ``broadcast``: global index or list of indices; None on error."""
        sym = self.table.get(arg.name)
        if sym is None:
            self.report("a", f"{arg.name!r} is not declared", arg.position)
            return None
        if sym.kind != kind:
            want = "quantum register/qubit" if kind == "qreg" else "classical register/bit"
            self.report("e", f"{arg.name!r} is a {sym.kind}; expected a {want}", arg.position)
            return None
        if arg.index is None:
            return list(range(sym.offset, sym.offset + sym.size))
        if not 0 <= arg.index < sym.size:
            self.report(
                "a", f"index {arg.index} out of range for {arg.name!r} (size {sym.size})", arg.position
            )
            return None
        return sym.offset + arg.index

    def _application(self, args, stmt) -> None:
        operands = [self.resolve(a, "qreg") for a in args]
        if any(op is None for op in operands):
            return
        try:
            tuples = broadcast(operands)
        except UnrollError:
            sizes = ", ".join(
                f"{a.name}[{len(op)}]" for a, op in zip(args, operands) if not isinstance(op, int)
            )
            self.report("g", f"register arguments have different sizes: {sizes}", stmt.position)
            return
        for t in tuples:
            if len(set(t)) != len(t):
                self.report("h", "arguments refer to the same qubit", stmt.position)
                return

    def operation(self, stmt) -> None:
        if isinstance(stmt, n.UGate):
            if len(stmt.params) != 3:
                self.report("c", f"U takes 3 parameters, got {len(stmt.params)}", stmt.position)
            self._closed_exprs(stmt.params)
            self.resolve(stmt.target, "qreg")
        elif isinstance(stmt, n.CXGate):
            self._application([stmt.control, stmt.target], stmt)
        elif isinstance(stmt, n.GateCall):
            self._closed_exprs(stmt.params)
            if self._gate_signature(stmt):
                self._application(stmt.args, stmt)
        elif isinstance(stmt, n.Measure):
            src = self.resolve(stmt.source, "qreg")
            dst = self.resolve(stmt.dest, "creg")
            if src is None or dst is None:
                return
            if isinstance(src, int) != isinstance(dst, int):
                self.report(
                    "f", "measure arguments must both be registers or both be single bits", stmt.position
                )
            elif not isinstance(src, int) and len(src) != len(dst):
                self.report(
                    "f", f"measure registers differ in size ({len(src)} vs {len(dst)})", stmt.position
                )
        elif isinstance(stmt, n.Reset):
            self.resolve(stmt.target, "qreg")
        elif isinstance(stmt, n.Barrier):
            for a in stmt.args:
                self.resolve(a, "qreg")
        else:
            self.report("i", f"{type(stmt).__name__} cannot appear here", getattr(stmt, "position", None))

    def if_statement(self, stmt: n.If) -> None:
        sym = self.table.get(stmt.creg)
        if sym is None:
            self.report("i", f"condition register {stmt.creg!r} is not declared", stmt.position)
        elif sym.kind != "creg":
            self.report("i", f"condition register {stmt.creg!r} is a {sym.kind}, not a creg", stmt.position)
        elif stmt.value >= 2 ** max(sym.size, 0):
            self.report(
                "j",
                f"{stmt.creg}=={stmt.value} can never hold for a {sym.size}-bit register",
                stmt.position,
                severity=WARNING,
            )
        if not isinstance(stmt.op, (n.UGate, n.CXGate, n.GateCall, n.Measure, n.Reset)):
            self.report("i", "only quantum operations may be conditioned", stmt.position)
            return
        self.operation(stmt.op)


def check(program: n.Program) -> List[Diagnostic]:
    """All diagnostics for ``program`` in source order; no errors means valid."""
    return Checker().run(program)


def errors(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diagnostics if d.is_error]
