"""Textual ``include`` resolution on token streams."""

from __future__ import annotations

import functools
import os
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from . import stdlib
from .errors import IncludeError, LexError, ParseError, Position
from .lexer import EOF, KEYWORD, STRING, SYMBOL, Token, tokenize

MAX_INCLUDE_DEPTH = 64


@functools.lru_cache(maxsize=64)
def _tokenize_cached(text: str, file_id: str) -> Tuple[Token, ...]:
    # Tokens are immutable, so included files are lexed once per content.
    return tuple(tokenize(text, file_id))
_VIRTUAL_QELIB1 = "<builtin>/qelib1.inc"


def decode_source(data: bytes, name: str) -> str:
    """UTF-8 text; non-ASCII is only legal inside comments, which the lexer enforces."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        column = exc.start - (head.rfind(b"\n") + 1) + 1
        raise LexError("file is not valid UTF-8 text", Position(name, line, column)) from None


def read_source(path) -> str:
    return decode_source(Path(path).read_bytes(), str(path))


def _resolve(name: str, base_dir: Path, search_paths: Sequence[Path]) -> Tuple[str, str, str]:
    """Locate an include target. Returns (display name, canonical id, source)."""
    attempts: List[str] = []
    candidate = Path(name) if os.path.isabs(name) else base_dir / name
    attempts.append(str(candidate))
    if candidate.is_file():
        return name, os.path.realpath(candidate), read_source(candidate)
    if name == stdlib.QELIB1_NAME:
        return name, _VIRTUAL_QELIB1, stdlib.qelib1_source()
    attempts.append(f"<builtin>/{name}")
    for directory in search_paths:
        candidate = Path(directory) / name
        attempts.append(str(candidate))
        if candidate.is_file():
            return str(candidate), os.path.realpath(candidate), read_source(candidate)
    raise IncludeError(f"cannot find include file {name!r}; tried: {', '.join(attempts)}")


def expand_includes(
    tokens: Sequence[Token],
    canonical: str,
    search_paths: Iterable = (),
    base_dir=None,
    _stack: Tuple[str, ...] = (),
    _origin: Optional[Tuple[int, str]] = None,
    _counter: Optional[List[int]] = None,
) -> List[Token]:
    """Replace each ``include "file";`` in ``tokens`` by the file's tokens.

    ``canonical`` identifies the file the tokens came from (for cycle
    detection). Files are looked up relative to ``base_dir`` (default: the
    current working directory), then in the embedded standard library, then in
    ``search_paths``. The trailing ``eof`` token is kept only at top level.
    """
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    paths = [Path(p) for p in search_paths]
    stack = _stack + (canonical,)
    if len(stack) > MAX_INCLUDE_DEPTH:
        raise IncludeError(f"include nesting deeper than {MAX_INCLUDE_DEPTH}", tokens[0].position)
    counter = _counter if _counter is not None else [0]
    out: List[Token] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == EOF:
            break
        if not tok.is_(KEYWORD, "include"):
            out.append(tok if _origin is None else Token(tok.kind, tok.lexeme, tok.position, _origin))
            i += 1
            continue
        name_tok = tokens[i + 1]
        if name_tok.kind != STRING:
            raise ParseError('expected a quoted file name after "include"', name_tok.position)
        semi = tokens[i + 2]
        if not semi.is_(SYMBOL, ";"):
            raise ParseError("expected ';' after include file name", semi.position)
        try:
            shown, canon, text = _resolve(name_tok.lexeme, base, paths)
        except IncludeError as exc:
            raise IncludeError(exc.message, tok.position) from None
        if canon in stack:
            raise IncludeError(f"include cycle: {name_tok.lexeme!r} is already being included", tok.position)
        origin = _origin
        if origin is None:
            counter[0] += 1
            origin = (counter[0], name_tok.lexeme)
        out.extend(
            expand_includes(
                _tokenize_cached(text, shown), canon, paths, base,
                _stack=stack, _origin=origin, _counter=counter,
            )
        )
        i += 3
    if not _stack:
        out.append(tokens[-1] if tokens and tokens[-1].kind == EOF else Token(EOF, "", tokens[-1].position))
    return out


def tokenize_source(source: str, file_id: str = "<string>", search_paths: Iterable = (), base_dir=None) -> List[Token]:
    """Tokenize ``source`` and splice in all included files."""
    return expand_includes(tokenize(source, file_id), f"<source>/{file_id}", search_paths, base_dir)


def tokenize_file(path, search_paths: Iterable = (), base_dir=None) -> List[Token]:
    """Read, tokenize and include-expand the file at ``path``."""
    text = read_source(path)
    return expand_includes(tokenize(text, str(path)), os.path.realpath(path), search_paths, base_dir)
