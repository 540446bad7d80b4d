import math

import pytest

import oqasm
from conftest import DATA
from oqasm.errors import UnrollError
from oqasm.unroll import BARRIER, CX, MEASURE, OPAQUE, RESET, U, Instruction, broadcast, expand_call, unroll

HEAD = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def flat(source):
    return unroll(oqasm.parse(HEAD + source))


@pytest.fixture(scope="module")
def defs():
    return {s.name: s for s in oqasm.parse(HEAD).statements}


# -- broadcast ----------------------------------------------------------------


def test_broadcast_register_pair():
    # CX q,r with |q| = |r| = 2; q -> 0,1 and r -> 2,3
    assert broadcast([[0, 1], [2, 3]]) == [(0, 2), (1, 3)]


def test_broadcast_single_repeated():
    assert broadcast([0, [2, 3]]) == [(0, 2), (0, 3)]


def test_broadcast_mixed_four_operands():
    # g qr0[0],qr1,qr2[0],qr3 with |qr1| = |qr3| = 2
    assert broadcast([0, [1, 2], 3, [6, 7]]) == [(0, 1, 3, 6), (0, 2, 3, 7)]


def test_broadcast_all_single():
    assert broadcast([4, 5]) == [(4, 5)]


def test_broadcast_size_mismatch():
    with pytest.raises(UnrollError):
        broadcast([[0, 1], [2, 3, 4]])


# -- expand_call --------------------------------------------------------------


def test_expand_cu1(defs):
    got = expand_call("cu1", [math.pi / 2], (0, 1), defs)
    q = math.pi / 4
    assert got == [
        Instruction(U, (0,), (0.0, 0.0, q)),
        Instruction(CX, (0, 1)),
        Instruction(U, (1,), (0.0, 0.0, -q)),
        Instruction(CX, (0, 1)),
        Instruction(U, (1,), (0.0, 0.0, q)),
    ]


def test_expand_empty_body():
    program = oqasm.parse("OPENQASM 2.0;\ngate g a { }")
    assert expand_call("g", [], (0,), {"g": program.statements[0]}) == []


def test_expand_hadamard(defs):
    assert expand_call("h", [], (3,), defs) == [Instruction(U, (3,), (math.pi / 2, 0.0, math.pi))]


def test_expand_ccx_size(defs):
    got = expand_call("ccx", [], (0, 1, 2), defs)
    assert all(i.kind in (U, CX) for i in got)
    assert sum(i.kind == CX for i in got) == 6


def test_expand_stops_at_basis(defs):
    got = expand_call("ccx", [], (0, 1, 2), defs, stop_basis={"h", "t", "tdg", "cx"})
    assert len(got) == 15
    assert {i.name for i in got} == {"h", "t", "tdg", "cx"}
    assert all(i.kind == OPAQUE for i in got)


def test_expand_parameter_binding(defs):
    # cu3 body begins u1((lambda-phi)/2) t
    first = expand_call("cu3", [0.3, 0.2, 0.1], (0, 1), defs)[0]
    assert first.qubits == (1,) and first.params == (0.0, 0.0, (0.1 - 0.2) / 2)


def test_evaluation_error_names_call_stack():
    program = oqasm.parse("OPENQASM 2.0;\ngate inner(x) a { U(1/x,0,0) a; }\ngate outer(y) a { inner(y*0) a; }")
    d = {s.name: s for s in program.statements}
    with pytest.raises(UnrollError) as info:
        expand_call("outer", [1.0], (0,), d)
    assert "outer -> inner" in info.value.message
    assert "division by zero" in info.value.message


def test_unknown_gate(defs):
    with pytest.raises(UnrollError):
        expand_call("nope", [], (0,), defs)


# -- unroll -------------------------------------------------------------------


def test_adder_layout():
    c = unroll(oqasm.parse_file(DATA / "adder.qasm"))
    assert (c.num_qubits, c.num_clbits) == (10, 5)
    assert c.qregs == {"cin": (0, 1), "a": (1, 4), "b": (5, 4), "cout": (9, 1)}
    assert c.qubit_label(5) == "b[0]" and c.clbit_label(4) == "ans[4]"


def test_only_builtin_kinds_after_full_unroll():
    c = unroll(oqasm.parse_file(DATA / "teleport.qasm"))
    assert {i.kind for i in c.instructions} <= {U, CX, MEASURE, RESET, BARRIER}


def test_conditioned_builtin():
    c = flat("qreg q[1]; creg c[2]; if(c==3) U(0.1,0.2,0.3) q[0];")
    assert c.instructions == [Instruction(U, (0,), (0.1, 0.2, 0.3), condition=("c", 3))]


def test_measure_register():
    c = flat("qreg q[4]; creg c[4]; measure q -> c;")
    assert [(i.kind, i.qubits, i.clbit) for i in c.instructions] == [(MEASURE, (j,), j) for j in range(4)]


def test_condition_distribution():
    plain = flat("qreg q[3]; ccx q[0],q[1],q[2];").instructions
    cond = flat("qreg q[3]; creg c[1]; if(c==1) ccx q[0],q[1],q[2];").instructions
    assert len(cond) == len(plain)
    assert all(i.condition == ("c", 1) for i in cond)
    assert [i.params for i in cond] == [i.params for i in plain]


def test_barrier_covers_full_registers_without_duplicates():
    c = flat("qreg q[2]; qreg r[2]; barrier r, q[0], r[1];")
    assert c.instructions == [Instruction(BARRIER, (2, 3, 0))]


def test_barrier_inside_conditioned_gate_is_unconditioned():
    c = flat("qreg q[1]; creg c[1]; gate g a { barrier a; U(0,0,0) a; } if(c==0) g q[0];")
    assert c.instructions[0] == Instruction(BARRIER, (0,))
    assert c.instructions[1].condition == ("c", 0)


def test_reset_broadcast():
    c = flat("qreg q[3]; reset q;")
    assert [i.qubits for i in c.instructions] == [(0,), (1,), (2,)]


def test_opaque_application():
    c = flat("opaque magic(x) a, b; qreg q[2]; magic(2*pi) q[0], q[1];")
    (ins,) = c.instructions
    assert ins.kind == OPAQUE and ins.name == "magic" and ins.params == (2 * math.pi,)
    assert "opaque magic(x) a, b;" in c.to_qasm()


def test_qelib1_body_equals_listed_sequence():
    listed = (
        "gate myccx a,b,c { h c; cx b,c; tdg c; cx a,c; t c; cx b,c; tdg c; cx a,c; "
        "t b; t c; h c; cx a,b; t a; tdg b; cx a,b; }"
    )
    a = flat("qreg q[3]; ccx q[0],q[1],q[2];")
    b = flat(listed + " qreg q[3]; myccx q[0],q[1],q[2];")
    assert a.instructions == b.instructions


def test_dump_format():
    c = flat("qreg q[3]; creg c[1]; h q[1]; if(c==1) CX q[0],q[2]; measure q[2] -> c[0];")
    assert c.dump().splitlines() == [
        "U(1.5707963267948966,0,3.141592653589793) q1;",
        "CX q0,q2; if(c==1)",
        "measure q2 -> c0;",
    ]


def test_to_qasm_round_trip_basis():
    src = (DATA / "qft.qasm").read_text()
    c = unroll(oqasm.parse(src))
    text = c.to_qasm()
    again = oqasm.parse(text)
    assert oqasm.check(again) == []
    assert unroll(again).instructions == c.instructions


def test_to_qasm_with_stop_basis_reparses_to_same_circuit():
    program = oqasm.parse_file(DATA / "qft.qasm")
    partial = unroll(program, stop_basis={"cx", "u1", "u2", "u3"})
    assert {i.name for i in partial.instructions if i.kind == OPAQUE} <= {"cx", "u1", "u2", "u3"}
    assert "cu1" not in {i.name for i in partial.instructions}
    again = oqasm.parse(partial.to_qasm())
    assert oqasm.check(again) == []
    assert unroll(again).instructions == unroll(program).instructions
