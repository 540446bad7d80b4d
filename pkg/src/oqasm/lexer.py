"""Tokenizer for Open QASM 2.0 source text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import LexError, Position

KEYWORDS = frozenset(
    {
        "OPENQASM", "qreg", "creg", "gate", "opaque", "if", "measure", "reset",
        "barrier", "include", "pi", "U", "CX", "sin", "cos", "tan", "exp", "ln", "sqrt",
    }
)

UNARY_FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt")

# Kinds of token.
KEYWORD = "keyword"
ID = "id"
REAL = "real"
INT = "int"
SYMBOL = "symbol"
STRING = "string"
EOF = "eof"

ID_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
REAL_RE = re.compile(r"([0-9]+\.[0-9]*|[0-9]*\.[0-9]+)([eE][-+]?[0-9]+)?")
NNINTEGER_RE = re.compile(r"[1-9][0-9]*\Z|0\Z")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DIGITS_RE = re.compile(r"[0-9]+")

SYMBOLS = frozenset("; , [ ] ( ) { } + - * / ^ >".split())


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    position: Position
    # (include instance number, file name as written) for tokens that were
    # spliced in by a top-level include directive; None for main-file tokens.
    origin: Optional[Tuple[int, str]] = field(default=None, compare=False)

    def is_(self, kind: str, lexeme: Optional[str] = None) -> bool:
        return self.kind == kind and (lexeme is None or self.lexeme == lexeme)

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.lexeme!r}, {self.position})"


def tokenize(source: str, file_id: str = "<string>") -> List[Token]:
    """Split ``source`` into tokens, dropping whitespace and ``//`` comments.

    The returned list always ends with an ``eof`` token.
    """
    tokens: List[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(source)

    def pos(at: int) -> Position:
        return Position(file_id, line, at - line_start + 1)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if ch in " \t\r\f\v":
            i += 1
            continue
        if ord(ch) > 127:
            raise LexError(f"non-ASCII character {ch!r}", pos(i))
        if source.startswith("//", i):
            end = source.find("\n", i)
            i = n if end < 0 else end
            continue
        start = i
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = REAL_RE.match(source, i)
            if m:
                tokens.append(Token(REAL, m.group(0), pos(start)))
                i = m.end()
                continue
            m = _DIGITS_RE.match(source, i)
            text = m.group(0)
            if not NNINTEGER_RE.match(text):
                raise LexError(f"malformed integer literal {text!r} (leading zero)", pos(start))
            tokens.append(Token(INT, text, pos(start)))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _WORD_RE.match(source, i)
            word = m.group(0)
            if word in KEYWORDS:
                tokens.append(Token(KEYWORD, word, pos(start)))
            elif ID_RE.match(word):
                tokens.append(Token(ID, word, pos(start)))
            else:
                raise LexError(
                    f"invalid identifier {word!r}: identifiers must start with a lowercase letter",
                    pos(start),
                )
            i = m.end()
            continue
        if ch == '"':
            end = i + 1
            while end < n and source[end] not in '"\n':
                end += 1
            if end >= n or source[end] != '"':
                raise LexError("unterminated string literal", pos(start))
            tokens.append(Token(STRING, source[i + 1 : end], pos(start)))
            i = end + 1
            continue
        if source.startswith("==", i):
            tokens.append(Token(SYMBOL, "==", pos(start)))
            i += 2
            continue
        if ch in SYMBOLS:
            tokens.append(Token(SYMBOL, ch, pos(start)))
            i += 1
            continue
        raise LexError(f"illegal character {ch!r}", pos(start))

    tokens.append(Token(EOF, "", pos(i)))
    return tokens
