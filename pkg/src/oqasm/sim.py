"""Dense statevector execution of flat circuits.

Indexing is little-endian: bit ``k`` of a basis index is the qubit with
global index ``k``. Classical registers read bit 0 as the low-order bit, so
the two conventions line up without permutation.
"""

from __future__ import annotations

import cmath
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import SimulationError
from .unroll import BARRIER, CX, MEASURE, OPAQUE, RESET, U, FlatCircuit, Instruction

MAX_QUBITS = 24
MAX_UNITARY_QUBITS = 10
DEFAULT_BRANCH_CAP = 20
PRUNE_PROBABILITY = 1e-14
_CACHE_BYTES = 64 * 2**20


# -- kernels --------------------------------------------------------------


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """The built-in single-qubit gate Rz(phi) Ry(theta) Rz(lam), an SU(2) element."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [cmath.exp(-0.5j * (phi + lam)) * c, -cmath.exp(-0.5j * (phi - lam)) * s],
            [cmath.exp(0.5j * (phi - lam)) * s, cmath.exp(0.5j * (phi + lam)) * c],
        ]
    )


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[0] = 1
    return state


def _split(state: np.ndarray, q: int) -> np.ndarray:
    """View with axis 1 selecting the value of qubit ``q``.

    Works for state vectors (shape ``(2**n,)``) and for stacks of them
    (shape ``(2**n, k)``), which is how whole unitaries are built.
    """
    lo = 1 << q
    return state.reshape(state.shape[0] // (2 * lo), 2, lo, -1)


def apply_1q(state: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    """Apply 2x2 ``m`` to qubit ``q`` in place and return ``state``."""
    v = _split(state, q)
    a0 = v[:, 0].copy()
    a1 = v[:, 1]
    v[:, 0] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1] = m[1, 0] * a0 + m[1, 1] * a1
    return state


def apply_cx(state: np.ndarray, control: int, target: int) -> np.ndarray:
    """Flip ``target`` wherever ``control`` is 1, in place."""
    if control == target:
        raise SimulationError("CX control and target must differ")
    n = state.shape[0].bit_length() - 1
    v = state.reshape((2,) * n + (-1,))
    ones = [slice(None)] * (n + 1)
    ones[n - 1 - control] = 1
    zero_t, one_t = list(ones), list(ones)
    zero_t[n - 1 - target] = 0
    one_t[n - 1 - target] = 1
    tmp = v[tuple(zero_t)].copy()
    v[tuple(zero_t)] = v[tuple(one_t)]
    v[tuple(one_t)] = tmp
    return state


def _flip(state: np.ndarray, q: int) -> None:
    v = _split(state, q)
    tmp = v[:, 0].copy()
    v[:, 0] = v[:, 1]
    v[:, 1] = tmp


def probabilities(state: np.ndarray, q: int) -> Tuple[float, float]:
    """(P(q=0), P(q=1)) normalised to sum to 1."""
    v = _split(state, q)
    p0 = float(np.sum(np.abs(v[:, 0]) ** 2))
    p1 = float(np.sum(np.abs(v[:, 1]) ** 2))
    total = p0 + p1
    if total <= 0:
        raise SimulationError("state has zero norm")
    p1 = min(max(p1 / total, 0.0), 1.0)
    return 1.0 - p1, p1


def _decide(p1: float, draw: float) -> int:
    return 1 if draw < p1 else 0


def _collapse(state: np.ndarray, q: int, bit: int) -> np.ndarray:
    """Projected and renormalised copy of ``state`` with qubit ``q`` = ``bit``."""
    out = state.copy()
    v = _split(out, q)
    if not np.any(v[:, 1 - bit]):
        return out  # already an eigenstate; keep amplitudes bit-exact
    v[:, 1 - bit] = 0
    norm = math.sqrt(float(np.sum(np.abs(v[:, bit]) ** 2)))
    out /= norm
    return out


def measure(state: np.ndarray, q: int, draw: float) -> Tuple[int, np.ndarray]:
    """Z-basis measurement of qubit ``q``: outcome 1 iff ``draw < P(1)``."""
    _, p1 = probabilities(state, q)
    bit = _decide(p1, draw)
    return bit, _collapse(state, q, bit)


def reset(state: np.ndarray, q: int, draw: float) -> np.ndarray:
    """Measure ``q`` with ``draw`` then flip it back to |0> if needed."""
    bit, out = measure(state, q, draw)
    if bit:
        _flip(out, q)
    return out


# -- classical state -------------------------------------------------------


def creg_value(bits: Sequence[int], offset: int, size: int) -> int:
    return sum(int(bits[offset + k]) << k for k in range(size))


def condition_holds(bits: Sequence[int], cregs: Mapping[str, Tuple[int, int]], creg: str, value: int) -> bool:
    offset, size = cregs[creg]
    return creg_value(bits, offset, size) == value


def format_key(bits: Sequence[int], cregs: Mapping[str, Tuple[int, int]]) -> str:
    """Readout key: cregs in declaration order, each with its highest bit leftmost."""
    groups = []
    for offset, size in cregs.values():
        groups.append("".join(str(int(bits[offset + k])) for k in reversed(range(size))))
    return " ".join(groups)


def parse_key(key: str, cregs: Mapping[str, Tuple[int, int]]) -> Tuple[int, ...]:
    """Inverse of :func:`format_key`: global clbit values in index order."""
    groups = key.split(" ") if key else []
    if len(groups) != len(cregs):
        raise ValueError(f"key {key!r} does not match {len(cregs)} classical registers")
    total = sum(size for _, size in cregs.values())
    bits = [0] * total
    for (offset, size), group in zip(cregs.values(), groups):
        if len(group) != size:
            raise ValueError(f"key group {group!r} should have {size} bits")
        for k, ch in enumerate(reversed(group)):
            bits[offset + k] = int(ch)
    return tuple(bits)


@dataclass(frozen=True)
class ShotRecord:
    bits: Tuple[int, ...]

    def key(self, circuit: FlatCircuit) -> str:
        return format_key(self.bits, circuit.cregs)

    def values(self, circuit: FlatCircuit) -> Dict[str, int]:
        return {name: creg_value(self.bits, off, size) for name, (off, size) in circuit.cregs.items()}


# -- execution -------------------------------------------------------------


class Engine:
    """Executes one flat circuit; shared by sampling and exact enumeration."""

    def __init__(self, circuit: FlatCircuit):
        if circuit.num_qubits > MAX_QUBITS:
            raise SimulationError(f"{circuit.num_qubits} qubits exceeds the simulator limit of {MAX_QUBITS}")
        for ins in circuit.instructions:
            if ins.kind == OPAQUE:
                raise SimulationError(f"cannot simulate opaque gate {ins.name!r}")
        self.circuit = circuit
        self.instructions = circuit.instructions
        self._mats: Dict[Tuple[float, ...], np.ndarray] = {}

    def _enabled(self, ins: Instruction, bits) -> bool:
        return ins.condition is None or condition_holds(bits, self.circuit.cregs, *ins.condition)

    def apply_unitary(self, ins: Instruction, state: np.ndarray) -> None:
        if ins.kind == U:
            m = self._mats.get(ins.params)
            if m is None:
                m = self._mats[ins.params] = u_matrix(*ins.params)
            apply_1q(state, m, ins.qubits[0])
        elif ins.kind == CX:
            apply_cx(state, *ins.qubits)

    def advance(self, pc: int, state: np.ndarray, bits) -> int:
        """Run unitaries in place from ``pc``; stop at the next enabled measure/reset."""
        instrs = self.instructions
        while pc < len(instrs):
            ins = instrs[pc]
            if ins.kind == BARRIER or not self._enabled(ins, bits):
                pc += 1
                continue
            if ins.kind in (MEASURE, RESET):
                return pc
            self.apply_unitary(ins, state)
            pc += 1
        return pc

    def collapse(self, pc: int, state: np.ndarray, bits: List[int], bit: int) -> np.ndarray:
        """Apply the measure/reset at ``pc`` with known outcome ``bit``."""
        ins = self.instructions[pc]
        q = ins.qubits[0]
        out = _collapse(state, q, bit)
        if ins.kind == MEASURE:
            bits[ins.clbit] = bit
        elif bit:
            _flip(out, q)
        return out

    def start(self) -> Tuple[int, np.ndarray, List[int]]:
        state = zero_state(self.circuit.num_qubits)
        bits = [0] * self.circuit.num_clbits
        return self.advance(0, state, bits), state, bits

    def steps(self, draws) -> Iterator[Tuple[Instruction, np.ndarray, List[int]]]:
        """Execute one shot instruction by instruction, yielding after each."""
        state = zero_state(self.circuit.num_qubits)
        bits = [0] * self.circuit.num_clbits
        for pc, ins in enumerate(self.instructions):
            if ins.kind != BARRIER and self._enabled(ins, bits):
                if ins.kind in (MEASURE, RESET):
                    _, p1 = probabilities(state, ins.qubits[0])
                    state = self.collapse(pc, state, bits, _decide(p1, next(draws)))
                else:
                    self.apply_unitary(ins, state)
            yield ins, state, bits

    def run_shot(self, draws) -> ShotRecord:
        """One end-to-end execution consuming uniform draws from iterator ``draws``."""
        pc, state, bits = self.start()
        n = len(self.instructions)
        while pc < n:
            _, p1 = probabilities(state, self.instructions[pc].qubits[0])
            state = self.collapse(pc, state, bits, _decide(p1, next(draws)))
            pc = self.advance(pc + 1, state, bits)
        return ShotRecord(tuple(bits))

    def collapse_count(self) -> int:
        return sum(1 for ins in self.instructions if ins.kind in (MEASURE, RESET))


class _Node:
    __slots__ = ("pc", "state", "bits", "p1")

    def __init__(self, pc, state, bits, p1):
        self.pc, self.state, self.bits, self.p1 = pc, state, bits, p1


class _BranchCache:
    """Memoises the state reached after each measurement-outcome history.

    Every shot with the same outcome history passes through the same states,
    so sampled shots only pay for state evolution on histories not seen yet.
    Results are identical to executing each shot from scratch.
    """

    def __init__(self, engine: Engine):
        self.engine = engine
        self.nodes: Dict[Tuple[int, ...], _Node] = {}
        self.bytes = 0
        pc, state, bits = engine.start()
        self.root = self._node(pc, state, bits)

    def _node(self, pc, state, bits) -> _Node:
        engine = self.engine
        p1 = probabilities(state, engine.instructions[pc].qubits[0])[1] if pc < len(engine.instructions) else 0.0
        return _Node(pc, state, tuple(bits), p1)

    def child(self, history: Tuple[int, ...], node: _Node, bit: int) -> _Node:
        key = history + (bit,)
        hit = self.nodes.get(key)
        if hit is not None:
            return hit
        bits = list(node.bits)
        state = self.engine.collapse(node.pc, node.state, bits, bit)
        pc = self.engine.advance(node.pc + 1, state, bits)
        new = self._node(pc, state, bits)
        if self.bytes + state.nbytes <= _CACHE_BYTES:
            self.nodes[key] = new
            self.bytes += state.nbytes
        return new

    def walk(self, draws: np.ndarray) -> Iterator[Tuple[Tuple[int, ...], int]]:
        """(final clbits, number of rows) for a block of per-shot draw rows.

        Row ``i`` is used exactly as a single shot would use it: column ``d``
        decides the ``d``-th enabled measure/reset. Rows that share an outcome
        history are partitioned together instead of walked one by one.
        """
        n = len(self.engine.instructions)
        stack = [(self.root, (), np.arange(len(draws)))]
        while stack:
            node, history, rows = stack.pop()
            if node.pc >= n:
                yield node.bits, len(rows)
                continue
            ones = draws[rows, len(history)] < node.p1
            for bit, part in ((0, rows[~ones]), (1, rows[ones])):
                if len(part):
                    stack.append((self.child(history, node, bit), history + (bit,), part))


def _rng_draws(rng) -> Iterator[float]:
    while True:
        yield float(rng.random())


def run_shot(circuit: FlatCircuit, rng: np.random.Generator) -> ShotRecord:
    """Execute ``circuit`` once, drawing one uniform number per executed measure/reset."""
    return Engine(circuit).run_shot(_rng_draws(rng))


def simulate(circuit: FlatCircuit, shots: int = 1024, seed: Optional[int] = None) -> Dict[str, int]:
    """Sample ``shots`` independent executions and count readout keys.

    Shot ``i`` consumes row ``i`` of a ``(shots, m)`` matrix of uniform draws
    from a PCG64 stream seeded with ``seed`` (``m`` = number of measure/reset
    instructions), so each shot's randomness is a fixed function of
    ``(seed, i)`` and the counts are reproducible for a given seed.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    engine = Engine(circuit)
    cache = _BranchCache(engine)
    width = max(engine.collapse_count(), 1)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    counts: Dict[str, int] = defaultdict(int)
    chunk = max(1, 2**20 // width)
    done = 0
    while done < shots:
        rows = rng.random((min(chunk, shots - done), width))
        for bits, k in cache.walk(rows):
            counts[format_key(bits, circuit.cregs)] += k
        done += len(rows)
    return dict(sorted(counts.items()))


def enumerate_branches(
    circuit: FlatCircuit, cap: int = DEFAULT_BRANCH_CAP, prune: float = PRUNE_PROBABILITY
) -> Dict[str, float]:
    """Exact readout distribution by exploring both outcomes of every measure/reset."""
    engine = Engine(circuit)
    if engine.collapse_count() > cap:
        raise SimulationError(
            f"circuit has {engine.collapse_count()} measure/reset instructions; branch cap is {cap}"
        )
    acc: Dict[str, List[float]] = defaultdict(list)
    n = len(engine.instructions)

    def explore(pc, state, bits, prob):
        if pc == n:
            acc[format_key(bits, circuit.cregs)].append(prob)
            return
        p0, p1 = probabilities(state, engine.instructions[pc].qubits[0])
        for bit, p in ((0, p0), (1, p1)):
            branch = prob * p
            if branch < prune:
                continue
            nbits = list(bits)
            nstate = engine.collapse(pc, state, nbits, bit)
            explore(engine.advance(pc + 1, nstate, nbits), nstate, nbits, branch)

    pc, state, bits = engine.start()
    explore(pc, state, bits, 1.0)
    return {k: math.fsum(v) for k, v in sorted(acc.items())}


def statevector(circuit: FlatCircuit) -> np.ndarray:
    """Final state of a circuit without enabled measurements or resets."""
    engine = Engine(circuit)
    pc, state, _ = engine.start()
    if pc < len(engine.instructions):
        raise SimulationError("statevector is only defined for measurement-free circuits")
    return state


def circuit_unitary(circuit: FlatCircuit) -> np.ndarray:
    """Dense matrix of an unconditioned U/CX/barrier circuit (little-endian)."""
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise SimulationError(f"circuit_unitary supports at most {MAX_UNITARY_QUBITS} qubits")
    for ins in circuit.instructions:
        if ins.kind not in (U, CX, BARRIER) or ins.condition is not None:
            raise SimulationError(f"instruction {ins.kind} has no unitary matrix")
    engine = Engine(circuit)
    m = np.eye(1 << n, dtype=complex)
    for ins in circuit.instructions:
        engine.apply_unitary(ins, m)
    return m


# -- serialisation ---------------------------------------------------------


def counts_json(counts: Mapping[str, int], shots: int, seed: Optional[int]) -> str:
    return json.dumps({"shots": shots, "seed": seed, "counts": dict(counts)}, indent=2)


def distribution_json(dist: Mapping[str, float]) -> str:
    return json.dumps({"shots": None, "seed": None, "probabilities": dict(dist)}, indent=2)


def state_json(state: np.ndarray) -> str:
    return json.dumps([[float(a.real), float(a.imag)] for a in state])
