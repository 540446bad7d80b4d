"""Recursive-descent parser producing :mod:`oqasm.nodes` trees."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from . import nodes as n
from .errors import ParseError
from .lexer import EOF, ID, INT, KEYWORD, REAL, SYMBOL, UNARY_FUNCTIONS, Token, tokenize
from .preprocess import tokenize_file, tokenize_source

SUPPORTED_VERSION = (2, 0)


def _describe(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    return f"{tok.kind} {tok.lexeme!r}"


class Parser:
    """Parses one include-expanded token stream.

    Precedence of parameter expressions, tightest first: function application
    and parentheses, ``^`` (right-associative), unary minus, ``*`` ``/``,
    ``+`` ``-`` (all binary operators except ``^`` are left-associative).
    """

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != EOF:
            self.i += 1
        return tok

    def at(self, kind: str, lexeme: Optional[str] = None) -> bool:
        return self.tok.is_(kind, lexeme)

    def at_sym(self, lexeme: str) -> bool:
        return self.tok.is_(SYMBOL, lexeme)

    def accept_sym(self, lexeme: str) -> bool:
        if self.at_sym(lexeme):
            self.advance()
            return True
        return False

    def error(self, expected: str) -> ParseError:
        return ParseError(f"expected {expected}, found {_describe(self.tok)}", self.tok.position)

    def expect_sym(self, lexeme: str) -> Token:
        if not self.at_sym(lexeme):
            raise self.error(repr(lexeme))
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at(KEYWORD, word):
            raise self.error(repr(word))
        return self.advance()

    def expect_id(self) -> Token:
        if not self.at(ID):
            if self.at(KEYWORD):
                raise ParseError(
                    f"{self.tok.lexeme!r} is a reserved keyword and cannot be used as an identifier",
                    self.tok.position,
                )
            raise self.error("identifier")
        return self.advance()

    def expect_int(self) -> int:
        if not self.at(INT):
            raise self.error("non-negative integer")
        return int(self.advance().lexeme)

    # -- program -------------------------------------------------------------

    def parse_program(self) -> n.Program:
        start = self.tok
        if not start.is_(KEYWORD, "OPENQASM"):
            late = any(t.is_(KEYWORD, "OPENQASM") for t in self.tokens)
            msg = (
                "the OPENQASM version statement must be the first non-comment statement"
                if late
                else "missing OPENQASM version statement"
            )
            raise ParseError(msg, start.position, rule="version")
        if start.origin is not None:
            raise ParseError("OPENQASM version statement inside an included file", start.position, rule="version")
        self.advance()
        vtok = self.tok
        if vtok.kind not in (REAL, INT):
            raise self.error("version number")
        self.advance()
        version = _parse_version(vtok)
        self.expect_sym(";")

        statements: List[n.Statement] = []
        origins: List[Optional[Tuple[int, str]]] = []
        while not self.at(EOF):
            origin = self.tok.origin
            statements.append(self.parse_statement())
            origins.append(origin)
        return n.Program(version, tuple(statements), tuple(origins), start.position)

    def parse_statement(self) -> n.Statement:
        tok = self.tok
        if tok.kind == KEYWORD:
            word = tok.lexeme
            if word in ("qreg", "creg"):
                return self.parse_regdecl()
            if word == "gate":
                return self.parse_gatedecl()
            if word == "opaque":
                return self.parse_opaque()
            if word == "if":
                return self.parse_if()
            if word == "barrier":
                return self.parse_barrier()
            if word == "OPENQASM":
                raise ParseError(
                    "the OPENQASM version statement may appear only once, at the start of the main file",
                    tok.position,
                    rule="version",
                )
        return self.parse_qop()

    def parse_regdecl(self) -> n.RegDecl:
        kw = self.advance()
        name = self.expect_id().lexeme
        self.expect_sym("[")
        size = self.expect_int()
        self.expect_sym("]")
        self.expect_sym(";")
        return n.RegDecl(kw.lexeme, name, size, kw.position)

    def _gate_header(self) -> Tuple[str, Tuple[str, ...], Tuple[str, ...]]:
        name = self.expect_id().lexeme
        params: Tuple[str, ...] = ()
        if self.accept_sym("("):
            if not self.at_sym(")"):
                params = self.parse_idlist()
            self.expect_sym(")")
        qargs = self.parse_idlist()
        return name, params, qargs

    def parse_gatedecl(self) -> n.GateDecl:
        kw = self.advance()
        name, params, qargs = self._gate_header()
        self.expect_sym("{")
        body: List[n.Statement] = []
        while not self.at_sym("}"):
            if self.at(EOF):
                raise self.error("'}' to close gate body")
            body.append(self.parse_body_statement())
        self.advance()
        return n.GateDecl(name, params, qargs, tuple(body), kw.position)

    def parse_body_statement(self) -> n.Statement:
        # Gate bodies only admit U, CX, gate calls and barrier; measure,
        # reset and if are parsed here so the checker can report them with a
        # rule id instead of a bare syntax error.
        if self.at(KEYWORD, "barrier"):
            return self.parse_barrier()
        if self.at(KEYWORD, "if"):
            return self.parse_if()
        if self.at(KEYWORD) and self.tok.lexeme in ("qreg", "creg", "gate", "opaque", "OPENQASM"):
            raise ParseError(f"{self.tok.lexeme!r} is not allowed inside a gate body", self.tok.position)
        return self.parse_qop()

    def parse_opaque(self) -> n.OpaqueDecl:
        kw = self.advance()
        name, params, qargs = self._gate_header()
        self.expect_sym(";")
        return n.OpaqueDecl(name, params, qargs, kw.position)

    def parse_if(self) -> n.If:
        kw = self.advance()
        self.expect_sym("(")
        creg = self.expect_id().lexeme
        self.expect_sym("==")
        value = self.expect_int()
        self.expect_sym(")")
        if self.at(KEYWORD) and self.tok.lexeme not in ("U", "CX", "measure", "reset"):
            raise ParseError(
                f"only quantum operations may follow if(...), found {_describe(self.tok)}",
                self.tok.position,
            )
        op = self.parse_qop()
        return n.If(creg, value, op, kw.position)

    def parse_barrier(self) -> n.Barrier:
        kw = self.advance()
        args = self.parse_anylist()
        self.expect_sym(";")
        return n.Barrier(args, kw.position)

    def parse_qop(self) -> n.QuantumOp:
        tok = self.tok
        if tok.is_(KEYWORD, "U"):
            self.advance()
            self.expect_sym("(")
            params = self.parse_explist()
            self.expect_sym(")")
            target = self.parse_argument()
            self.expect_sym(";")
            return n.UGate(params, target, tok.position)
        if tok.is_(KEYWORD, "CX"):
            self.advance()
            control = self.parse_argument()
            self.expect_sym(",")
            target = self.parse_argument()
            self.expect_sym(";")
            return n.CXGate(control, target, tok.position)
        if tok.is_(KEYWORD, "measure"):
            self.advance()
            source = self.parse_argument()
            # The arrow is two terminals; whitespace between them is allowed.
            self.expect_sym("-")
            self.expect_sym(">")
            dest = self.parse_argument()
            self.expect_sym(";")
            return n.Measure(source, dest, tok.position)
        if tok.is_(KEYWORD, "reset"):
            self.advance()
            target = self.parse_argument()
            self.expect_sym(";")
            return n.Reset(target, tok.position)
        if tok.kind == ID:
            self.advance()
            params: Tuple[n.Expr, ...] = ()
            if self.accept_sym("("):
                if not self.at_sym(")"):
                    params = self.parse_explist()
                self.expect_sym(")")
            args = self.parse_anylist()
            self.expect_sym(";")
            return n.GateCall(tok.lexeme, params, args, tok.position)
        raise self.error("a statement")

    # -- lists ---------------------------------------------------------------

    def parse_idlist(self) -> Tuple[str, ...]:
        names = [self.expect_id().lexeme]
        while self.accept_sym(","):
            names.append(self.expect_id().lexeme)
        return tuple(names)

    def parse_argument(self) -> n.Argument:
        tok = self.expect_id()
        index = None
        if self.accept_sym("["):
            index = self.expect_int()
            self.expect_sym("]")
        return n.Argument(tok.lexeme, index, tok.position)

    def parse_anylist(self) -> Tuple[n.Argument, ...]:
        args = [self.parse_argument()]
        while self.accept_sym(","):
            args.append(self.parse_argument())
        return tuple(args)

    def parse_explist(self) -> Tuple[n.Expr, ...]:
        exprs = [self.parse_expr()]
        while self.accept_sym(","):
            exprs.append(self.parse_expr())
        return tuple(exprs)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> n.Expr:
        left = self.parse_term()
        while self.at_sym("+") or self.at_sym("-"):
            op = self.advance()
            right = self.parse_term()
            left = n.BinOp(op.lexeme, left, right, op.position)
        return left

    def parse_term(self) -> n.Expr:
        left = self.parse_unary()
        while self.at_sym("*") or self.at_sym("/"):
            op = self.advance()
            right = self.parse_unary()
            left = n.BinOp(op.lexeme, left, right, op.position)
        return left

    def parse_unary(self) -> n.Expr:
        if self.at_sym("-"):
            op = self.advance()
            return n.Neg(self.parse_unary(), op.position)
        return self.parse_power()

    def parse_power(self) -> n.Expr:
        base = self.parse_atom()
        if self.at_sym("^"):
            op = self.advance()
            # The exponent may itself carry a unary minus: 2^-1.
            return n.BinOp("^", base, self.parse_unary(), op.position)
        return base

    def parse_atom(self) -> n.Expr:
        tok = self.tok
        if tok.kind == REAL:
            self.advance()
            return n.Real(float(tok.lexeme), tok.lexeme, tok.position)
        if tok.kind == INT:
            self.advance()
            return n.Int(int(tok.lexeme), tok.position)
        if tok.is_(KEYWORD, "pi"):
            self.advance()
            return n.Pi(tok.position)
        if tok.kind == ID:
            self.advance()
            return n.Var(tok.lexeme, tok.position)
        if tok.kind == KEYWORD and tok.lexeme in UNARY_FUNCTIONS:
            self.advance()
            self.expect_sym("(")
            arg = self.parse_expr()
            self.expect_sym(")")
            return n.Call(tok.lexeme, arg, tok.position)
        if self.accept_sym("("):
            inner = self.parse_expr()
            self.expect_sym(")")
            return inner
        raise self.error("an expression")


def _parse_version(tok: Token) -> Tuple[int, int]:
    text = tok.lexeme
    major, _, minor = text.partition(".")
    if not major.isdigit() or (minor and not minor.isdigit()):
        raise ParseError(f"malformed version number {text!r}", tok.position, rule="version")
    version = (int(major), int(minor or 0))
    if version != SUPPORTED_VERSION:
        raise ParseError(f"unsupported OPENQASM version {text} (only 2.0 is supported)", tok.position, rule="version")
    return version


def parse_tokens(tokens: Sequence[Token]) -> n.Program:
    return Parser(tokens).parse_program()


def parse(source: str, file_id: str = "<string>", search_paths: Iterable = (), base_dir=None) -> n.Program:
    """Parse Open QASM source text, resolving includes."""
    return parse_tokens(tokenize_source(source, file_id, search_paths, base_dir))


def parse_file(path, search_paths: Iterable = (), base_dir=None) -> n.Program:
    return parse_tokens(tokenize_file(path, search_paths, base_dir))


def parse_expression(text: str) -> n.Expr:
    """Parse a standalone parameter expression such as ``"pi/2+pi/4"``."""
    p = Parser(tokenize(text, "<expr>"))
    expr = p.parse_expr()
    if not p.at(EOF):
        raise p.error("end of expression")
    return expr
