"""Canonical text rendering of programs and expressions."""

from __future__ import annotations

from typing import List

from . import nodes as n

# Binding strength; larger binds tighter.
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3
_ATOM_PREC = 5


def _prec(e) -> int:
    if isinstance(e, n.BinOp):
        return _PREC[e.op]
    if isinstance(e, n.Neg):
        return _NEG_PREC
    return _ATOM_PREC


def format_real(value: float) -> str:
    """Render a finite double so that it lexes back to the same value.

    Integral values print without a fraction (``0``, ``2``); everything else
    uses the shortest round-tripping repr, forced into the real-literal shape
    (a ``.`` is always present). Negative values get a leading ``-``.
    """
    if value == 0:
        return "0"
    if value < 0:
        return "-" + format_real(-value)
    if value.is_integer() and value < 1e16:
        return str(int(value))
    text = repr(value)
    if "e" in text and "." not in text.split("e")[0]:
        mantissa, exp = text.split("e")
        text = f"{mantissa}.0e{exp}"
    return text


def format_expr(e: n.Expr) -> str:
    if isinstance(e, n.Real):
        return e.text if e.text is not None else format_real(e.value)
    if isinstance(e, n.Int):
        return str(e.value)
    if isinstance(e, n.Pi):
        return "pi"
    if isinstance(e, n.Var):
        return e.name
    if isinstance(e, n.Call):
        return f"{e.func}({format_expr(e.arg)})"
    if isinstance(e, n.Neg):
        inner = format_expr(e.operand)
        if _prec(e.operand) < _NEG_PREC:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, n.BinOp):
        p = _PREC[e.op]
        left, right = format_expr(e.left), format_expr(e.right)
        if e.op == "^":
            # Right-associative; the exponent is parsed as a unary expression.
            if _prec(e.left) <= p:
                left = f"({left})"
            if _prec(e.right) < _NEG_PREC:
                right = f"({right})"
        else:
            if _prec(e.left) < p:
                left = f"({left})"
            if _prec(e.right) <= p:
                right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def _params(params) -> str:
    return f"({', '.join(format_expr(p) for p in params)})" if params else ""


def _args(args) -> str:
    return ", ".join(str(a) for a in args)


def format_statement(s: n.Statement) -> str:
    """Render a statement on one line (gate declarations may span several)."""
    if isinstance(s, n.RegDecl):
        return f"{s.kind} {s.name}[{s.size}];"
    if isinstance(s, n.UGate):
        return f"U{_params(s.params)} {s.target};"
    if isinstance(s, n.CXGate):
        return f"CX {s.control}, {s.target};"
    if isinstance(s, n.GateCall):
        return f"{s.name}{_params(s.params)} {_args(s.args)};"
    if isinstance(s, n.Measure):
        return f"measure {s.source} -> {s.dest};"
    if isinstance(s, n.Reset):
        return f"reset {s.target};"
    if isinstance(s, n.Barrier):
        return f"barrier {_args(s.args)};"
    if isinstance(s, n.If):
        return f"if({s.creg}=={s.value}) {format_statement(s.op)}"
    if isinstance(s, (n.GateDecl, n.OpaqueDecl)):
        kw = "gate" if isinstance(s, n.GateDecl) else "opaque"
        header = f"{kw} {s.name}"
        if s.params:
            header += f"({', '.join(s.params)})"
        header += " " + ", ".join(s.qargs)
        if isinstance(s, n.OpaqueDecl):
            return header + ";"
        if not s.body:
            return header + " { }"
        lines = [header + " {"]
        lines.extend("  " + format_statement(b) for b in s.body)
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(f"not a statement node: {s!r}")


def format_program(program: n.Program, keep_includes: bool = True) -> str:
    """Deterministic canonical text for ``program``.

    With ``keep_includes`` (the default) statements that came from a
    top-level ``include`` are written back as the include directive instead
    of being inlined. Comments are not preserved.
    """
    major, minor = program.version
    lines: List[str] = [f"OPENQASM {major}.{minor};"]
    origins = program.origins or (None,) * len(program.statements)
    last_origin = None
    for stmt, origin in zip(program.statements, origins):
        if keep_includes and origin is not None:
            if origin != last_origin:
                lines.append(f'include "{origin[1]}";')
            last_origin = origin
            continue
        last_origin = origin
        lines.append(format_statement(stmt))
    return "\n".join(lines) + "\n"
