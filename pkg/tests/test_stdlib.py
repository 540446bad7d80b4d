import math

import numpy as np
import pytest

import oqasm
import oracles
from oqasm import nodes as n
from oqasm.sim import circuit_unitary
from oqasm.stdlib import (
    QELIB1_GATES,
    QELIB1_SOURCE,
    install_qelib1,
    qelib1_source,
    reference_arity,
    reference_unitary,
    to_little_endian,
)
from oqasm.unroll import unroll


def header_gates():
    program = oqasm.parse("OPENQASM 2.0;\n" + QELIB1_SOURCE)
    return [s for s in program.statements if isinstance(s, n.GateDecl)]


def test_header_declares_23_gates_matching_table():
    gates = header_gates()
    assert len(gates) == 23
    assert [(g.name, len(g.params), len(g.qargs)) for g in gates] == list(QELIB1_GATES)


def test_header_is_clean_and_ascii():
    assert oqasm.check(oqasm.parse("OPENQASM 2.0;\n" + qelib1_source())) == []
    QELIB1_SOURCE.encode("ascii")


def test_every_header_body_uses_only_earlier_gates():
    seen = {"U", "CX"}
    for g in header_gates():
        for op in g.body:
            assert getattr(op, "name", "U") in seen | {"U", "CX"}
        seen.add(g.name)


def test_install(tmp_path):
    path = install_qelib1(tmp_path)
    assert path == tmp_path / "qelib1.inc"
    assert path.read_text() == QELIB1_SOURCE
    with pytest.raises(FileExistsError):
        install_qelib1(tmp_path)
    path.write_text("// stale\n")
    install_qelib1(tmp_path, overwrite=True)
    assert path.read_text() == QELIB1_SOURCE


def test_installed_copy_is_used_from_disk(tmp_path):
    install_qelib1(tmp_path)
    (tmp_path / "a.qasm").write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nh q[0];\n')
    program = oqasm.parse_file(tmp_path / "a.qasm")
    assert [s.name for s in program.statements if isinstance(s, n.GateDecl)][:2] == ["u3", "u2"]


def test_reference_arity():
    assert reference_arity("cu3") == (3, 2)
    assert reference_arity("ccx") == (0, 3)
    with pytest.raises(KeyError):
        reference_arity("nope")


def test_reference_unitary_argument_checks():
    with pytest.raises(ValueError):
        reference_unitary("rx", ())
    with pytest.raises(KeyError):
        reference_unitary("U")


def test_to_little_endian_cnot():
    # control-first MSB CNOT becomes the control-at-bit-0 permutation
    le = to_little_endian(reference_unitary("cx"))
    assert np.array_equal(le, oracles.cnot(2, 0, 1))


def test_to_little_endian_is_involution():
    m = np.arange(64).reshape(8, 8)
    assert np.array_equal(to_little_endian(to_little_endian(m)), m)
    assert np.array_equal(to_little_endian(np.eye(2)), np.eye(2))


def test_reference_matrices_are_unitary():
    rng = np.random.default_rng(0)
    for name, n_params, n_qubits in QELIB1_GATES:
        m = reference_unitary(name, rng.uniform(-3, 3, n_params))
        assert m.shape == (2**n_qubits,) * 2
        assert np.allclose(m.conj().T @ m, np.eye(2**n_qubits), atol=1e-12)


def test_u_family_relations():
    rng = np.random.default_rng(1)
    for phi, lam in rng.uniform(-3, 3, (50, 2)):
        assert np.allclose(reference_unitary("u2", (phi, lam)), reference_unitary("u3", (math.pi / 2, phi, lam)))
        assert np.allclose(reference_unitary("u1", (lam,)), reference_unitary("u3", (0, 0, lam)))


def test_header_unrolls_to_reference_up_to_phase():
    rng = np.random.default_rng(2)
    for name, n_params, n_qubits in QELIB1_GATES:
        params = rng.uniform(-3, 3, n_params)
        args = ",".join(f"q[{i}]" for i in range(n_qubits))
        plist = "(" + ",".join(repr(float(p)) for p in params) + ")" if n_params else ""
        src = f'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[{n_qubits}];\n{name}{plist} {args};\n'
        got = circuit_unitary(unroll(oqasm.parse(src)))
        want = to_little_endian(reference_unitary(name, params))
        assert oracles.equal_up_to_phase(got, want, 1e-10), name
