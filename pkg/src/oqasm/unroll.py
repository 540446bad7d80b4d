"""Gate expansion and register broadcasting into a flat instruction list."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from . import nodes as n
from .errors import EvalError, UnrollError
from .expr import evaluate
from .formatter import format_real, format_statement

Operand = Union[int, Sequence[int]]

U, CX, MEASURE, RESET, BARRIER, OPAQUE = "U", "CX", "measure", "reset", "barrier", "opaque"


@dataclass(frozen=True)
class Instruction:
    """One flat operation over global qubit/clbit indices.

    ``OPAQUE`` instructions carry the gate ``name``; they are produced for
    opaque gates and for gates listed in the unroller's stop basis.
    """

    kind: str
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()
    clbit: Optional[int] = None
    name: Optional[str] = None
    condition: Optional[Tuple[str, int]] = None


@dataclass
class FlatCircuit:
    qubits: List[Tuple[str, int]] = field(default_factory=list)
    clbits: List[Tuple[str, int]] = field(default_factory=list)
    qregs: Dict[str, Tuple[int, int]] = field(default_factory=dict)  # name -> (offset, size)
    cregs: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    instructions: List[Instruction] = field(default_factory=list)
    # Declarations needed to give OPAQUE instructions a meaning when the
    # circuit is written back out as source.
    declarations: List[Union[n.GateDecl, n.OpaqueDecl]] = field(default_factory=list)

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def num_clbits(self) -> int:
        return len(self.clbits)

    def qubit_label(self, q: int) -> str:
        name, idx = self.qubits[q]
        return f"{name}[{idx}]"

    def clbit_label(self, c: int) -> str:
        name, idx = self.clbits[c]
        return f"{name}[{idx}]"

    def dump(self) -> str:
        """Line-oriented debug listing over global indices (``q3``, ``c0``)."""
        lines = []
        for ins in self.instructions:
            qs = ",".join(f"q{q}" for q in ins.qubits)
            if ins.kind == MEASURE:
                text = f"measure {qs} -> c{ins.clbit};"
            elif ins.kind in (U, OPAQUE):
                name = "U" if ins.kind == U else ins.name
                params = f"({','.join(format_real(p) for p in ins.params)})" if ins.params or ins.kind == U else ""
                text = f"{name}{params} {qs};"
            else:
                text = f"{ins.kind} {qs};"
            if ins.condition:
                text += f" if({ins.condition[0]}=={ins.condition[1]})"
            lines.append(text)
        return "\n".join(lines) + ("\n" if lines else "")

    def to_qasm(self) -> str:
        """Open QASM 2.0 source for the circuit (built-in basis plus any OPAQUE gates)."""
        out = ["OPENQASM 2.0;"]
        for decl in self.declarations:
            out.append(format_statement(decl))
        for name, (_, size) in self.qregs.items():
            out.append(f"qreg {name}[{size}];")
        for name, (_, size) in self.cregs.items():
            out.append(f"creg {name}[{size}];")
        for ins in self.instructions:
            qs = ", ".join(self.qubit_label(q) for q in ins.qubits)
            if ins.kind == U:
                text = f"U({', '.join(format_real(p) for p in ins.params)}) {qs};"
            elif ins.kind == CX:
                text = f"CX {qs};"
            elif ins.kind == MEASURE:
                text = f"measure {qs} -> {self.clbit_label(ins.clbit)};"
            elif ins.kind == RESET:
                text = f"reset {qs};"
            elif ins.kind == BARRIER:
                text = f"barrier {qs};"
            else:
                params = f"({', '.join(format_real(p) for p in ins.params)})" if ins.params else ""
                text = f"{ins.name}{params} {qs};"
            if ins.condition:
                text = f"if({ins.condition[0]}=={ins.condition[1]}) {text}"
            out.append(text)
        return "\n".join(out) + "\n"


def broadcast(operands: Sequence[Operand]) -> List[Tuple[int, ...]]:
    """Expand register operands elementwise.

    Each operand is a single index (``int``) or a register given as a
    sequence of indices. Single operands repeat in every tuple; registers,
    which must all have the same size, contribute their j-th element to the
    j-th tuple.
    """
    sizes = {len(op) for op in operands if not isinstance(op, int)}
    if not sizes:
        return [tuple(operands)]
    if len(sizes) > 1:
        raise UnrollError(f"register operands have different sizes {sorted(sizes)}")
    (size,) = sizes
    return [
        tuple(op if isinstance(op, int) else op[j] for op in operands)
        for j in range(size)
    ]


class Unroller:
    def __init__(self, program: n.Program, stop_basis: Iterable[str] = ()):
        self.program = program
        self.stop_basis: Set[str] = set(stop_basis)
        self.defs: Dict[str, Union[n.GateDecl, n.OpaqueDecl]] = {}
        self.circuit = FlatCircuit()
        self._used_named: Set[str] = set()

    # -- operand resolution ----------------------------------------------

    def _reg(self, regs, arg: n.Argument) -> Operand:
        try:
            offset, size = regs[arg.name]
        except KeyError:
            raise UnrollError(f"undeclared register {arg.name!r}", arg.position) from None
        if arg.index is None:
            return range(offset, offset + size)
        if not 0 <= arg.index < size:
            raise UnrollError(f"index {arg} out of range for register of size {size}", arg.position)
        return offset + arg.index

    def qubit_operand(self, arg: n.Argument) -> Operand:
        return self._reg(self.circuit.qregs, arg)

    def clbit_operand(self, arg: n.Argument) -> Operand:
        return self._reg(self.circuit.cregs, arg)

    # -- expansion ---------------------------------------------------------

    def emit(self, ins: Instruction) -> None:
        self.circuit.instructions.append(ins)

    def expand_call(
        self,
        name: str,
        params: Sequence[float],
        qubits: Sequence[int],
        condition: Optional[Tuple[str, int]] = None,
        stack: Tuple[str, ...] = (),
    ) -> List[Instruction]:
        """Instructions for applying gate ``name`` to concrete qubits."""
        out: List[Instruction] = []
        self._expand(name, tuple(params), tuple(qubits), condition, stack, out)
        return out

    def _expand(self, name, params, qubits, condition, stack, out) -> None:
        decl = self.defs.get(name)
        if decl is None:
            raise UnrollError(f"gate {name!r} is not defined")
        if len(params) != len(decl.params) or len(qubits) != len(decl.qargs):
            raise UnrollError(
                f"gate {name!r} expects {len(decl.params)} parameter(s) and {len(decl.qargs)} qubit(s)"
            )
        if isinstance(decl, n.OpaqueDecl):
            self._used_named.add(name)
            out.append(Instruction(OPAQUE, qubits, params, name=name, condition=condition))
            return
        if name in stack:
            raise UnrollError(f"recursive gate definition: {' -> '.join(stack + (name,))}")
        env = dict(zip(decl.params, params))
        qmap = dict(zip(decl.qargs, qubits))
        frame = stack + (name,)
        for stmt in decl.body:
            try:
                self._body_statement(stmt, env, qmap, condition, frame, out)
            except EvalError as exc:
                raise UnrollError(
                    f"{exc.message} (while expanding {' -> '.join(frame)})", exc.position
                ) from None

    def _body_statement(self, stmt, env, qmap, condition, frame, out) -> None:
        def q(arg: n.Argument) -> int:
            try:
                return qmap[arg.name]
            except KeyError:
                raise UnrollError(f"unknown qubit argument {arg.name!r} in gate body", arg.position) from None

        if isinstance(stmt, n.UGate):
            vals = tuple(evaluate(p, env) for p in stmt.params)
            out.append(Instruction(U, (q(stmt.target),), vals, condition=condition))
        elif isinstance(stmt, n.CXGate):
            out.append(Instruction(CX, (q(stmt.control), q(stmt.target)), condition=condition))
        elif isinstance(stmt, n.GateCall):
            vals = tuple(evaluate(p, env) for p in stmt.params)
            self._named(stmt.name, vals, tuple(q(a) for a in stmt.args), condition, frame, out)
        elif isinstance(stmt, n.Barrier):
            out.append(Instruction(BARRIER, tuple(q(a) for a in stmt.args)))
        else:
            raise UnrollError(f"statement not allowed in gate body: {format_statement(stmt)}", stmt.position)

    def _named(self, name, params, qubits, condition, stack, out) -> None:
        if name in self.stop_basis and name in self.defs:
            self._used_named.add(name)
            out.append(Instruction(OPAQUE, qubits, params, name=name, condition=condition))
        else:
            self._expand(name, params, qubits, condition, stack, out)

    # -- top level ---------------------------------------------------------

    def run(self) -> FlatCircuit:
        c = self.circuit
        for stmt in self.program.statements:
            if isinstance(stmt, n.RegDecl):
                if stmt.kind == "qreg":
                    c.qregs[stmt.name] = (len(c.qubits), stmt.size)
                    c.qubits.extend((stmt.name, j) for j in range(stmt.size))
                else:
                    c.cregs[stmt.name] = (len(c.clbits), stmt.size)
                    c.clbits.extend((stmt.name, j) for j in range(stmt.size))
            elif isinstance(stmt, (n.GateDecl, n.OpaqueDecl)):
                self.defs[stmt.name] = stmt
            elif isinstance(stmt, n.If):
                if stmt.creg not in c.cregs:
                    raise UnrollError(f"undeclared classical register {stmt.creg!r}", stmt.position)
                self.operation(stmt.op, (stmt.creg, stmt.value))
            else:
                self.operation(stmt, None)
        c.declarations = self._declarations()
        return c

    def operation(self, stmt, condition) -> None:
        try:
            self._operation(stmt, condition)
        except EvalError as exc:
            raise UnrollError(exc.message, exc.position) from None

    def _operation(self, stmt, condition) -> None:
        if isinstance(stmt, n.UGate):
            vals = tuple(evaluate(p) for p in stmt.params)
            for (qb,) in broadcast([self.qubit_operand(stmt.target)]):
                self.emit(Instruction(U, (qb,), vals, condition=condition))
        elif isinstance(stmt, n.CXGate):
            for a, b in self._broadcast([self.qubit_operand(stmt.control), self.qubit_operand(stmt.target)], stmt):
                self.emit(Instruction(CX, (a, b), condition=condition))
        elif isinstance(stmt, n.GateCall):
            vals = tuple(evaluate(p) for p in stmt.params)
            operands = [self.qubit_operand(a) for a in stmt.args]
            for qs in self._broadcast(operands, stmt):
                out: List[Instruction] = []
                self._named(stmt.name, vals, qs, condition, (), out)
                # Conditions guard unitary instructions only; a fence stays a fence.
                for ins in out:
                    self.emit(ins if ins.kind != BARRIER else Instruction(BARRIER, ins.qubits))
        elif isinstance(stmt, n.Measure):
            src = self.qubit_operand(stmt.source)
            dst = self.clbit_operand(stmt.dest)
            if isinstance(src, int) != isinstance(dst, int):
                raise UnrollError("measure needs two registers or two bits", stmt.position)
            for qb, cb in self._broadcast([src, dst], stmt):
                self.emit(Instruction(MEASURE, (qb,), clbit=cb, condition=condition))
        elif isinstance(stmt, n.Reset):
            for (qb,) in broadcast([self.qubit_operand(stmt.target)]):
                self.emit(Instruction(RESET, (qb,), condition=condition))
        elif isinstance(stmt, n.Barrier):
            seen: Dict[int, None] = {}
            for a in stmt.args:
                op = self.qubit_operand(a)
                for qb in [op] if isinstance(op, int) else op:
                    seen.setdefault(qb)
            self.emit(Instruction(BARRIER, tuple(seen)))
        else:
            raise UnrollError(f"unexpected statement {stmt!r}", getattr(stmt, "position", None))

    def _broadcast(self, operands, stmt):
        try:
            return broadcast(operands)
        except UnrollError as exc:
            raise UnrollError(exc.message, stmt.position) from None

    def _declarations(self) -> List[Union[n.GateDecl, n.OpaqueDecl]]:
        """Declarations (with dependencies) of every gate emitted by name."""
        needed: Set[str] = set()
        todo = list(self._used_named)
        while todo:
            name = todo.pop()
            if name in needed:
                continue
            needed.add(name)
            decl = self.defs[name]
            if isinstance(decl, n.GateDecl):
                todo.extend(s.name for s in decl.body if isinstance(s, n.GateCall))
        return [d for d in self.defs.values() if d.name in needed]


def unroll(program: n.Program, stop_basis: Iterable[str] = ()) -> FlatCircuit:
    """Flatten a checked program into U/CX/measure/reset/barrier instructions.

    Gates named in ``stop_basis`` are not expanded and appear as ``OPAQUE``
    instructions with numeric parameters; so do opaque gates.
    """
    return Unroller(program, stop_basis).run()


def expand_call(
    name: str,
    params: Sequence[float],
    qubits: Sequence[int],
    defs: Mapping[str, Union[n.GateDecl, n.OpaqueDecl]],
    stop_basis: Iterable[str] = (),
) -> List[Instruction]:
    """Expand one gate application given a table of gate declarations."""
    u = Unroller(n.Program((2, 0), ()), stop_basis)
    u.defs.update(defs)
    out: List[Instruction] = []
    u._named(name, tuple(params), tuple(qubits), None, (), out)
    return out
