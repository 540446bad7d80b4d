"""Command-line driver.

Exit codes: 0 success, 1 language-level error (lexical, syntax, include,
semantic, evaluation, simulation), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__, stdlib
from .errors import QasmError
from .formatter import format_program
from .nodes import tree_text
from .parser import parse_tokens
from .preprocess import decode_source, expand_includes, read_source
from .lexer import tokenize
from .semantics import check, errors
from .sim import DEFAULT_BRANCH_CAP, counts_json, distribution_json, enumerate_branches, simulate, state_json, statevector
from .unroll import unroll

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

ENV_PATH = "OQASM_PATH"


class _UsageError(Exception):
    pass


def search_paths(extra: List[str]) -> List[str]:
    """``-I`` directories followed by entries of ``$OQASM_PATH``."""
    paths = list(extra)
    env = os.environ.get(ENV_PATH, "")
    paths.extend(p for p in env.split(os.pathsep) if p)
    return paths


def _read(path: str):
    """(source text, display name) for a path or ``-``; I/O failures are usage errors."""
    try:
        if path == "-":
            return decode_source(sys.stdin.buffer.read(), "<stdin>"), "<stdin>"
        return read_source(path), path
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load(args):
    text, name = _read(args.input)
    canonical = os.path.realpath(name) if args.input != "-" else "<stdin>"
    tokens = expand_includes(tokenize(text, name), canonical, search_paths(args.include))
    return text, parse_tokens(tokens)


def _checked(args):
    _, program = _load(args)
    diags = check(program)
    for d in diags:
        print(d, file=sys.stderr)
    if errors(diags):
        raise _Failed()
    return program


class _Failed(Exception):
    """Diagnostics were already printed."""


def cmd_parse(args) -> int:
    _, program = _load(args)
    print(tree_text(program))
    return EXIT_OK


def cmd_check(args) -> int:
    _, program = _load(args)
    diags = check(program)
    for d in diags:
        print(d, file=sys.stderr)
    if errors(diags) or (args.deny_warnings and diags):
        return EXIT_ERROR
    return EXIT_OK


def cmd_unroll(args) -> int:
    program = _checked(args)
    basis = [b for b in (args.basis or "").split(",") if b]
    circuit = unroll(program, basis)
    sys.stdout.write(circuit.dump() if args.dump else circuit.to_qasm())
    return EXIT_OK


def cmd_sim(args) -> int:
    if args.shots < 1:
        raise _UsageError("--shots must be at least 1")
    program = _checked(args)
    circuit = unroll(program)
    if args.dump_state:
        print(state_json(statevector(circuit)))
    elif args.exact:
        print(distribution_json(enumerate_branches(circuit, cap=args.branch_cap)))
    else:
        print(counts_json(simulate(circuit, args.shots, args.seed), args.shots, args.seed))
    return EXIT_OK


def cmd_fmt(args) -> int:
    if args.write and args.input == "-":
        raise _UsageError("--write needs a file path")
    text, program = _load(args)
    out = format_program(program)
    if args.check:
        if out != text:
            print(f"{args.input}: not canonically formatted", file=sys.stderr)
            return EXIT_ERROR
        return EXIT_OK
    if args.write:
        if out != text:
            Path(args.input).write_text(out, encoding="ascii")
        return EXIT_OK
    sys.stdout.write(out)
    return EXIT_OK


def cmd_install_stdlib(args) -> int:
    try:
        path = stdlib.install_qelib1(args.directory, overwrite=args.force)
    except FileExistsError as exc:
        raise _UsageError(f"{exc} already exists (use --force to overwrite)") from None
    except OSError as exc:
        raise _UsageError(f"cannot write {args.directory}: {exc.strerror or exc}") from None
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oqasm", description="Open QASM 2.0 toolchain")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def source_command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("input", help="source file, or - for standard input")
        p.add_argument(
            "-I", dest="include", action="append", default=[], metavar="DIR",
            help=f"extra include directory (repeatable; also ${ENV_PATH})",
        )
        p.set_defaults(func=func)
        return p

    source_command("parse", cmd_parse, "parse and print the syntax tree")
    p = source_command("check", cmd_check, "report static errors and warnings")
    p.add_argument("--deny-warnings", action="store_true", help="treat warnings as errors")
    p = source_command("unroll", cmd_unroll, "expand gates into the built-in basis")
    p.add_argument("--basis", help="comma-separated gate names to keep unexpanded")
    p.add_argument("--dump", action="store_true", help="print the flat instruction listing instead of QASM")
    p = source_command("sim", cmd_sim, "simulate and print counts as JSON")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="print the exact outcome distribution")
    p.add_argument("--branch-cap", type=int, default=DEFAULT_BRANCH_CAP, help="max measure/reset count for --exact")
    p.add_argument("--dump-state", action="store_true", help="print the final state (measurement-free circuits only)")
    p = source_command("fmt", cmd_fmt, "print canonical formatting")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--write", action="store_true", help="rewrite the file in place")
    mode.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical")
    p = sub.add_parser("install-stdlib", help="write qelib1.inc to a directory")
    p.add_argument("directory", nargs="?", default=".")
    p.add_argument("--force", action="store_true", help="overwrite an existing file")
    p.set_defaults(func=cmd_install_stdlib)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"oqasm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Failed:
        return EXIT_ERROR
    except QasmError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
