"""Evaluation of parameter expressions in IEEE-754 double precision."""

from __future__ import annotations

import math
from typing import Mapping

from . import nodes as n
from .errors import EvalError


def _fail(message: str, node) -> EvalError:
    return EvalError(message, getattr(node, "position", None))


def _check(value: float, node) -> float:
    if not math.isfinite(value):
        raise _fail(f"expression evaluates to a non-finite value ({value})", node)
    return value


def _ln(x: float, node) -> float:
    if x <= 0:
        raise _fail(f"ln of non-positive value {x!r}", node)
    return math.log(x)


def _sqrt(x: float, node) -> float:
    if x < 0:
        raise _fail(f"sqrt of negative value {x!r}", node)
    return math.sqrt(x)


def _exp(x: float, node) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        raise _fail(f"exp({x!r}) overflows", node) from None


_FUNCS = {
    "sin": lambda x, node: math.sin(x),
    "cos": lambda x, node: math.cos(x),
    # Poles are not detected; the finite double result stands.
    "tan": lambda x, node: math.tan(x),
    "exp": _exp,
    "ln": _ln,
    "sqrt": _sqrt,
}


def _pow(base: float, exponent: float, node) -> float:
    if base < 0 and not float(exponent).is_integer():
        raise _fail(f"negative base {base!r} raised to non-integer power {exponent!r}", node)
    if base == 0 and exponent < 0:
        raise _fail("division by zero (zero raised to a negative power)", node)
    try:
        return base**exponent
    except OverflowError:
        raise _fail(f"{base!r}^{exponent!r} overflows", node) from None


def evaluate(expr: n.Expr, bindings: Mapping[str, float] = None) -> float:
    """Evaluate ``expr`` with gate parameters bound from ``bindings``.

    Raises :class:`EvalError` for unbound names, division by zero, domain
    errors and non-finite results.
    """
    env = bindings or {}
    return _eval(expr, env)


def _eval(e, env) -> float:
    if isinstance(e, n.Real):
        return _check(e.value, e)
    if isinstance(e, n.Int):
        return float(e.value)
    if isinstance(e, n.Pi):
        return math.pi
    if isinstance(e, n.Var):
        try:
            return env[e.name]
        except KeyError:
            raise _fail(f"unbound parameter {e.name!r}", e) from None
    if isinstance(e, n.Neg):
        return -_eval(e.operand, env)
    if isinstance(e, n.Call):
        return _check(_FUNCS[e.func](_eval(e.arg, env), e), e)
    if isinstance(e, n.BinOp):
        a = _eval(e.left, env)
        b = _eval(e.right, env)
        op = e.op
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            if b == 0:
                raise _fail("division by zero", e)
            r = a / b
        elif op == "^":
            r = _pow(a, b, e)
        else:
            raise _fail(f"unknown operator {op!r}", e)
        return _check(r, e)
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(expr: n.Expr):
    """Yield every ``Var`` node in ``expr``."""
    if isinstance(expr, n.Var):
        yield expr
    elif isinstance(expr, n.Neg):
        yield from free_variables(expr.operand)
    elif isinstance(expr, n.Call):
        yield from free_variables(expr.arg)
    elif isinstance(expr, n.BinOp):
        yield from free_variables(expr.left)
        yield from free_variables(expr.right)
