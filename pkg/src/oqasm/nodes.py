"""AST node classes.

Every node carries a ``position`` that is ignored by ``==`` so that two trees
parsed from differently laid out text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from .errors import Position

_NOPOS = Position("<generated>", 0, 0)


def _pos():
    return field(default=_NOPOS, compare=False, repr=False)


# -- parameter expressions ---------------------------------------------------


@dataclass(frozen=True)
class Real:
    value: float
    text: Optional[str] = field(default=None, compare=False)
    position: Position = _pos()


@dataclass(frozen=True)
class Int:
    value: int
    position: Position = _pos()


@dataclass(frozen=True)
class Pi:
    position: Position = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    position: Position = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    position: Position = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"
    position: Position = _pos()


@dataclass(frozen=True)
class Call:
    func: str  # sin cos tan exp ln sqrt
    arg: "Expr"
    position: Position = _pos()


Expr = Union[Real, Int, Pi, Var, Neg, BinOp, Call]


# -- statements --------------------------------------------------------------


@dataclass(frozen=True)
class Argument:
    name: str
    index: Optional[int] = None
    position: Position = _pos()

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}[{self.index}]"


@dataclass(frozen=True)
class RegDecl:
    kind: str  # "qreg" or "creg"
    name: str
    size: int
    position: Position = _pos()


@dataclass(frozen=True)
class UGate:
    params: Tuple[Expr, ...]
    target: Argument
    position: Position = _pos()


@dataclass(frozen=True)
class CXGate:
    control: Argument
    target: Argument
    position: Position = _pos()


@dataclass(frozen=True)
class GateCall:
    name: str
    params: Tuple[Expr, ...]
    args: Tuple[Argument, ...]
    position: Position = _pos()


@dataclass(frozen=True)
class Measure:
    source: Argument
    dest: Argument
    position: Position = _pos()


@dataclass(frozen=True)
class Reset:
    target: Argument
    position: Position = _pos()


@dataclass(frozen=True)
class Barrier:
    args: Tuple[Argument, ...]
    position: Position = _pos()


QuantumOp = Union[UGate, CXGate, GateCall, Measure, Reset]


@dataclass(frozen=True)
class If:
    creg: str
    value: int
    op: QuantumOp
    position: Position = _pos()


@dataclass(frozen=True)
class GateDecl:
    name: str
    params: Tuple[str, ...]
    qargs: Tuple[str, ...]
    body: Tuple["Statement", ...]
    position: Position = _pos()


@dataclass(frozen=True)
class OpaqueDecl:
    name: str
    params: Tuple[str, ...]
    qargs: Tuple[str, ...]
    position: Position = _pos()


Statement = Union[RegDecl, GateDecl, OpaqueDecl, UGate, CXGate, GateCall, Measure, Reset, If, Barrier]


@dataclass(frozen=True)
class Program:
    version: Tuple[int, int]
    statements: Tuple[Statement, ...]
    # Parallel to ``statements``: (include instance, file name) for statements
    # spliced in by a top-level include, None for main-file statements.
    origins: Tuple[Optional[Tuple[int, str]], ...] = field(default=(), compare=False, repr=False)
    position: Position = _pos()

    def main_statements(self) -> Tuple[Statement, ...]:
        """Statements written in the main file itself."""
        if not self.origins:
            return self.statements
        return tuple(s for s, o in zip(self.statements, self.origins) if o is None)


def tree_text(node, indent: int = 0) -> str:
    """Indented one-node-per-line rendering of an AST (positions omitted)."""
    import dataclasses

    pad = "  " * indent
    if not dataclasses.is_dataclass(node):
        return f"{pad}{node!r}"
    scalars, children = [], []
    for f in dataclasses.fields(node):
        if not f.compare:
            continue
        value = getattr(node, f.name)
        if dataclasses.is_dataclass(value):
            children.append((f.name, [value]))
        elif isinstance(value, tuple) and value and all(dataclasses.is_dataclass(v) for v in value):
            children.append((f.name, list(value)))
        else:
            scalars.append(f"{f.name}={value!r}")
    lines = [f"{pad}{type(node).__name__}({', '.join(scalars)})"]
    for name, items in children:
        lines.append(f"{pad}  {name}:")
        lines.extend(tree_text(item, indent + 2) for item in items)
    return "\n".join(lines)
