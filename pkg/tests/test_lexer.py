import pytest

from conftest import DATA
from oqasm.errors import LexError
from oqasm.lexer import EOF, ID, INT, KEYWORD, REAL, STRING, SYMBOL, tokenize


def kinds(text):
    return [(t.kind, t.lexeme) for t in tokenize(text)[:-1]]


def test_simple_statement():
    assert kinds("qreg q[5];") == [
        (KEYWORD, "qreg"), (ID, "q"), (SYMBOL, "["), (INT, "5"), (SYMBOL, "]"), (SYMBOL, ";"),
    ]


def test_always_ends_with_eof():
    toks = tokenize("")
    assert len(toks) == 1 and toks[0].kind == EOF


@pytest.mark.parametrize("text", ["0.5", "1.", ".25", "3.0e-2", "1.5E+10", "2.e3", "00.5"])
def test_real_literals(text):
    assert kinds(text) == [(REAL, text)]


@pytest.mark.parametrize("text", ["0", "7", "10", "123456789"])
def test_nonnegative_integers(text):
    assert kinds(text) == [(INT, text)]


@pytest.mark.parametrize("text", ["00", "01", "007"])
def test_leading_zero_is_rejected(text):
    with pytest.raises(LexError) as info:
        tokenize(text)
    assert info.value.rule == "lex"


def test_exponent_without_dot_is_not_a_real():
    # "2e3" is the integer 2 followed by the identifier e3.
    assert kinds("2e3") == [(INT, "2"), (ID, "e3")]


@pytest.mark.parametrize("word", ["pi", "sin", "cos", "tan", "exp", "ln", "sqrt", "U", "CX", "measure", "OPENQASM"])
def test_keywords(word):
    assert kinds(word) == [(KEYWORD, word)]


@pytest.mark.parametrize("word", ["q", "qr0", "a_b", "cAmel", "x9"])
def test_identifiers(word):
    assert kinds(word) == [(ID, word)]


@pytest.mark.parametrize("word", ["Q", "Alpha", "_x", "CZ"])
def test_identifiers_must_start_lowercase(word):
    with pytest.raises(LexError):
        tokenize(word)


def test_comments_and_whitespace_are_dropped():
    assert kinds("h // comment ; ignored\n  q;\t// tail") == [(ID, "h"), (ID, "q"), (SYMBOL, ";")]


def test_equality_and_arrow_pieces():
    assert kinds("c==1") == [(ID, "c"), (SYMBOL, "=="), (INT, "1")]
    assert kinds("->") == [(SYMBOL, "-"), (SYMBOL, ">")]


def test_lone_equals_is_illegal():
    with pytest.raises(LexError):
        tokenize("c=1")


def test_string_literal():
    assert kinds('include "qelib1.inc";') == [(KEYWORD, "include"), (STRING, "qelib1.inc"), (SYMBOL, ";")]


def test_unterminated_string():
    with pytest.raises(LexError):
        tokenize('include "qelib1.inc;\n')


def test_non_ascii_rejected_with_position():
    with pytest.raises(LexError) as info:
        tokenize("qreg q[1];\nh qé;", "f.qasm")
    pos = info.value.position
    assert (pos.file, pos.line, pos.column) == ("f.qasm", 2, 4)


def test_positions_are_one_based():
    toks = tokenize("OPENQASM 2.0;\n  qreg q[1];", "x")
    by_lexeme = {t.lexeme: t.position for t in toks}
    assert (by_lexeme["OPENQASM"].line, by_lexeme["OPENQASM"].column) == (1, 1)
    assert (by_lexeme["qreg"].line, by_lexeme["qreg"].column) == (2, 3)
    assert (by_lexeme["q"].line, by_lexeme["q"].column) == (2, 8)


def test_token_positions_increase():
    source = (DATA / "adder.qasm").read_text()
    toks = tokenize(source)
    keys = [(t.position.line, t.position.column) for t in toks]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
