import pytest

from oqasm import nodes as n
from oqasm.errors import IncludeError, LexError, ParseError
from oqasm.parser import parse, parse_file
from oqasm.preprocess import MAX_INCLUDE_DEPTH, tokenize_source


def write(path, text):
    path.write_text(text)
    return path


def test_builtin_qelib1_without_file(tmp_path):
    program = parse('OPENQASM 2.0;\ninclude "qelib1.inc";', base_dir=tmp_path)
    assert program.statements[0].name == "u3"


def test_local_file_shadows_builtin(tmp_path):
    write(tmp_path / "qelib1.inc", "gate mine a { }\n")
    program = parse('OPENQASM 2.0;\ninclude "qelib1.inc";', base_dir=tmp_path)
    assert [s.name for s in program.statements] == ["mine"]


def test_search_path_after_builtin(tmp_path):
    lib = tmp_path / "lib"
    lib.mkdir()
    write(lib / "extra.inc", "gate extra a { }\n")
    program = parse('OPENQASM 2.0;\ninclude "extra.inc";', base_dir=tmp_path, search_paths=[lib])
    assert program.statements[0].name == "extra"


def test_missing_include_lists_attempts(tmp_path):
    with pytest.raises(IncludeError) as info:
        parse('OPENQASM 2.0;\ninclude "nope.inc";', base_dir=tmp_path, search_paths=[tmp_path / "x"])
    msg = info.value.message
    assert "nope.inc" in msg and str(tmp_path / "x") in msg
    assert info.value.position.line == 2


def test_include_cycle(tmp_path):
    write(tmp_path / "a.inc", 'include "b.inc";\n')
    write(tmp_path / "b.inc", 'include "a.inc";\n')
    with pytest.raises(IncludeError) as info:
        parse('OPENQASM 2.0;\ninclude "a.inc";', base_dir=tmp_path)
    assert "cycle" in info.value.message


def test_self_include_of_main_file(tmp_path):
    main = write(tmp_path / "main.qasm", 'OPENQASM 2.0;\ninclude "main.qasm";\n')
    with pytest.raises(IncludeError):
        parse_file(main, base_dir=tmp_path)


def test_same_file_twice_is_not_a_cycle(tmp_path):
    write(tmp_path / "regs.inc", "qreg q[1];\n")
    write(tmp_path / "more.inc", "creg c[1];\n")
    program = parse('OPENQASM 2.0;\ninclude "regs.inc";\ninclude "more.inc";', base_dir=tmp_path)
    assert len(program.statements) == 2


def test_nested_include_origin_is_outermost_directive(tmp_path):
    write(tmp_path / "outer.inc", 'include "inner.inc";\ngate o a { }\n')
    write(tmp_path / "inner.inc", "gate i a { }\n")
    program = parse('OPENQASM 2.0;\ninclude "outer.inc";\nqreg q[1];', base_dir=tmp_path)
    assert [s.name for s in program.statements] == ["i", "o", "q"]
    assert program.origins[0] == program.origins[1] == (1, "outer.inc")
    assert program.origins[2] is None


def test_included_tokens_report_their_own_file(tmp_path):
    write(tmp_path / "bad.inc", "\n\ngate g a { U(0,0,0) a }\n")
    with pytest.raises(ParseError) as info:
        parse('OPENQASM 2.0;\ninclude "bad.inc";', base_dir=tmp_path)
    assert info.value.position.file.endswith("bad.inc")
    assert info.value.position.line == 3


def test_empty_include(tmp_path):
    write(tmp_path / "empty.inc", "// nothing here\n")
    program = parse('OPENQASM 2.0;\ninclude "empty.inc";\nqreg q[1];', base_dir=tmp_path)
    assert program.statements == (n.RegDecl("qreg", "q", 1),)


def test_version_inside_include_rejected(tmp_path):
    write(tmp_path / "v.inc", "OPENQASM 2.0;\n")
    with pytest.raises(ParseError) as info:
        parse('OPENQASM 2.0;\ninclude "v.inc";', base_dir=tmp_path)
    assert info.value.rule == "version"


def test_include_first_then_version_rejected(tmp_path):
    write(tmp_path / "g.inc", "gate g a { }\n")
    with pytest.raises(ParseError) as info:
        parse('include "g.inc";\nOPENQASM 2.0;', base_dir=tmp_path)
    assert info.value.rule == "version"


def test_depth_cap(tmp_path):
    for k in range(MAX_INCLUDE_DEPTH + 1):
        write(tmp_path / f"d{k}.inc", f'include "d{k + 1}.inc";\n')
    write(tmp_path / f"d{MAX_INCLUDE_DEPTH + 1}.inc", "")
    with pytest.raises(IncludeError) as info:
        parse('OPENQASM 2.0;\ninclude "d0.inc";', base_dir=tmp_path)
    assert "deeper" in info.value.message


def test_malformed_include_directive():
    with pytest.raises(ParseError):
        tokenize_source("include qelib1;")
    with pytest.raises(ParseError):
        tokenize_source('include "qelib1.inc"')


def test_non_ascii_allowed_only_in_comments(tmp_path):
    (tmp_path / "c.inc").write_bytes("// caf\u00e9\ngate g a { }\n".encode("utf-8"))
    assert parse('OPENQASM 2.0;\ninclude "c.inc";', base_dir=tmp_path).statements[0].name == "g"
    (tmp_path / "u.inc").write_bytes("gate caf\u00e9 a { }\n".encode("utf-8"))
    with pytest.raises(LexError) as info:
        parse('OPENQASM 2.0;\ninclude "u.inc";', base_dir=tmp_path)
    assert info.value.position.file.endswith("u.inc")


def test_invalid_utf8_is_a_lex_error(tmp_path):
    path = tmp_path / "bad.qasm"
    path.write_bytes(b"OPENQASM 2.0;\nqreg \xff[1];\n")
    with pytest.raises(LexError) as info:
        parse_file(path)
    assert (info.value.position.line, info.value.position.column) == (2, 6)
