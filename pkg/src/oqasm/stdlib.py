"""The Quantum Experience standard header and closed-form reference unitaries.

Reference matrices are written out directly from textbook definitions; they
deliberately do not reuse the simulator's ``U``/``CX`` kernels so that they
can serve as an independent oracle for the unrolled gate definitions.

Multi-qubit reference matrices use the textbook ordering in which the FIRST
gate argument is the MOST significant bit of the basis index (the ordering of
the CNOT matrix ``[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]`` with control
first).  The simulator is little-endian; use :func:`to_little_endian` to
convert before comparing against ``circuit_unitary`` output.
"""

from __future__ import annotations

import cmath
import math
from pathlib import Path
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

QELIB1_NAME = "qelib1.inc"

QELIB1_SOURCE = """// Quantum Experience (QE) Standard Header
// file: qelib1.inc

// --- QE Hardware primitives ---

// 3-parameter 2-pulse single qubit gate
gate u3(theta,phi,lambda) q { U(theta,phi,lambda) q; }
// 2-parameter 1-pulse single qubit gate
gate u2(phi,lambda) q { U(pi/2,phi,lambda) q; }
// 1-parameter 0-pulse single qubit gate
gate u1(lambda) q { U(0,0,lambda) q; }
// controlled-NOT
gate cx c,t { CX c,t; }
// idle gate (identity)
gate id a { U(0,0,0) a; }

// --- QE Standard Gates ---

// Pauli gate: bit-flip
gate x a { u3(pi,0,pi) a; }
// Pauli gate: bit and phase flip
gate y a { u3(pi,pi/2,pi/2) a; }
// Pauli gate: phase flip
gate z a { u1(pi) a; }
// Clifford gate: Hadamard
gate h a { u2(0,pi) a; }
// Clifford gate: sqrt(Z) phase gate
gate s a { u1(pi/2) a; }
// Clifford gate: conjugate of sqrt(Z)
gate sdg a { u1(-pi/2) a; }
// C3 gate: sqrt(S) phase gate
gate t a { u1(pi/4) a; }
// C3 gate: conjugate of sqrt(S)
gate tdg a { u1(-pi/4) a; }

// --- Standard rotations ---
// Rotation around X-axis
gate rx(theta) a { u3(theta,-pi/2,pi/2) a; }
// rotation around Y-axis
gate ry(theta) a { u3(theta,0,0) a; }
// rotation around Z axis
gate rz(phi) a { u1(phi) a; }

// --- QE Standard User-Defined Gates  ---

// controlled-Phase
gate cz a,b { h b; cx a,b; h b; }
// controlled-Y
gate cy a,b { sdg b; cx a,b; s b; }
// controlled-H
gate ch a,b {
h b; sdg b;
cx a,b;
h b; t b;
cx a,b;
t b; h b; s b; x b; s a;
}
// C3 gate: Toffoli
gate ccx a,b,c
{
  h c;
  cx b,c; tdg c;
  cx a,c; t c;
  cx b,c; tdg c;
  cx a,c; t b; t c; h c;
  cx a,b; t a; tdg b;
  cx a,b;
}
// controlled rz rotation
gate crz(lambda) a,b
{
  u1(lambda/2) b;
  cx a,b;
  u1(-lambda/2) b;
  cx a,b;
}
// controlled phase rotation
gate cu1(lambda) a,b
{
  u1(lambda/2) a;
  cx a,b;
  u1(-lambda/2) b;
  cx a,b;
  u1(lambda/2) b;
}
// controlled-U
gate cu3(theta,phi,lambda) c, t
{
  // implements controlled-U(theta,phi,lambda) with  target t and control c
  u1((lambda-phi)/2) t;
  cx c,t;
  u3(-theta/2,0,-(phi+lambda)/2) t;
  cx c,t;
  u3(theta/2,phi,0) t;
}
"""

# (name, number of params, number of qubits) in header order.
QELIB1_GATES: Tuple[Tuple[str, int, int], ...] = (
    ("u3", 3, 1), ("u2", 2, 1), ("u1", 1, 1), ("cx", 0, 2), ("id", 0, 1),
    ("x", 0, 1), ("y", 0, 1), ("z", 0, 1), ("h", 0, 1), ("s", 0, 1),
    ("sdg", 0, 1), ("t", 0, 1), ("tdg", 0, 1), ("rx", 1, 1), ("ry", 1, 1),
    ("rz", 1, 1), ("cz", 0, 2), ("cy", 0, 2), ("ch", 0, 2), ("ccx", 0, 3),
    ("crz", 1, 2), ("cu1", 1, 2), ("cu3", 3, 2),
)


def qelib1_source() -> str:
    return QELIB1_SOURCE


def install_qelib1(directory, overwrite: bool = False) -> Path:
    """Write the embedded header to ``directory/qelib1.inc`` and return the path."""
    path = Path(directory) / QELIB1_NAME
    if path.exists() and not overwrite:
        raise FileExistsError(str(path))
    path.write_text(QELIB1_SOURCE, encoding="ascii")
    return path


# -- reference matrices ------------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_SQ2 = 1 / math.sqrt(2)


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ]
    )


def _u2(phi, lam):
    return _SQ2 * np.array(
        [[1, -cmath.exp(1j * lam)], [cmath.exp(1j * phi), cmath.exp(1j * (phi + lam))]]
    )


def _phase(lam):
    return np.array([[1, 0], [0, cmath.exp(1j * lam)]])


def _controlled(m):
    """Controlled-``m`` with the control as the most significant bit."""
    k = m.shape[0]
    out = np.eye(2 * k, dtype=complex)
    out[k:, k:] = m
    return out


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex)
_S = np.diag([1, 1j])
_T = np.diag([1, cmath.exp(1j * math.pi / 4)])


def _rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(phi):
    return np.diag([cmath.exp(-0.5j * phi), cmath.exp(0.5j * phi)])


def _ccx():
    m = np.eye(8, dtype=complex)
    m[[6, 7]] = m[[7, 6]]
    return m


_REFERENCE: Dict[str, Callable[..., np.ndarray]] = {
    "u3": _u3,
    "u2": _u2,
    "u1": _phase,
    "cx": lambda: _controlled(_X),
    "id": lambda: _I2.copy(),
    "x": lambda: _X.copy(),
    "y": lambda: _Y.copy(),
    "z": lambda: _Z.copy(),
    "h": lambda: _H.copy(),
    "s": lambda: _S.copy(),
    "sdg": lambda: _S.conj(),
    "t": lambda: _T.copy(),
    "tdg": lambda: _T.conj(),
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
    "cz": lambda: np.diag([1, 1, 1, -1]).astype(complex),
    "cy": lambda: _controlled(_Y),
    "ch": lambda: _controlled(_H),
    "ccx": _ccx,
    "crz": lambda lam: np.diag(
        [1, 1, cmath.exp(-0.5j * lam), cmath.exp(0.5j * lam)]
    ),
    "cu1": lambda lam: np.diag([1, 1, 1, cmath.exp(1j * lam)]),
    # The header body leaves the control phase out, so the controlled block is
    # the determinant-one form exp(-i(phi+lam)/2) * u3.
    "cu3": lambda theta, phi, lam: _controlled(cmath.exp(-0.5j * (phi + lam)) * _u3(theta, phi, lam)),
}

_ARITY = {name: (np_, nq) for name, np_, nq in QELIB1_GATES}


def reference_unitary(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """Closed-form matrix of a standard-header gate (first argument most significant)."""
    try:
        builder = _REFERENCE[name]
    except KeyError:
        raise KeyError(f"no reference unitary for gate {name!r}") from None
    n_params, _ = _ARITY[name]
    if len(params) != n_params:
        raise ValueError(f"gate {name!r} takes {n_params} parameter(s), got {len(params)}")
    return np.asarray(builder(*params), dtype=complex)


def reference_arity(name: str) -> Tuple[int, int]:
    """(number of params, number of qubits) for a standard-header gate."""
    return _ARITY[name]


def to_little_endian(matrix: np.ndarray) -> np.ndarray:
    """Reorder a k-qubit matrix so that the first argument is bit 0 of the index."""
    dim = matrix.shape[0]
    k = dim.bit_length() - 1
    perm = np.array([_reverse_bits(i, k) for i in range(dim)])
    return matrix[np.ix_(perm, perm)]


def _reverse_bits(i: int, k: int) -> int:
    return int(format(i, f"0{k}b")[::-1], 2) if k else 0
