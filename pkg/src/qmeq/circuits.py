"""Gate-list circuits, their compilation, and the walk benchmark family.

Bit order: within any register the FIRST listed qubit is the least
significant bit, so a basis label x1...xn denotes index sum(x_i * 2^(i-1)).
Machine matrices put the input register in the most significant position
(index = input * state_dim + state).

The builtin gate named Y is the symmetric coin matrix
(1/sqrt(2)) [[1, i], [i, 1]] used by the walk benchmarks, not the Pauli
rotation; inline matrices cover anything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import DIM_CAP, UNITARY_TOL, as_matrix, is_unitary
from .mealy import QuantumMealyMachine, make_machine

_SQ2 = 1.0 / np.sqrt(2.0)

_ONE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": _SQ2 * np.array([[1, 1j], [1j, 1]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}


def _mcx_matrix(arity: int) -> np.ndarray:
    """X on the last qubit conditioned on all the preceding ones being 1."""
    if arity < 2:
        raise DimensionError("a controlled X needs at least 2 qubits")
    dim = 1 << arity
    m = np.eye(dim, dtype=complex)
    lo = (dim >> 1) - 1  # controls all 1, target 0
    hi = dim - 1
    m[lo, lo] = m[hi, hi] = 0
    m[lo, hi] = m[hi, lo] = 1
    return m

_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


@dataclass(frozen=True, eq=False)
class GateApplication:
    """One gate applied to an ordered tuple of distinct 1-based qubits."""

    name: str
    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix, self.name))
        k = len(self.qubits)
        if k < 1:
            raise DimensionError("gate needs at least one qubit")
        if len(set(self.qubits)) != k:
            raise DimensionError(f"repeated qubit in {self.name}{self.qubits}")
        if any(q < 1 for q in self.qubits):
            raise DimensionError("qubit indices are 1-based")
        if self.matrix.shape != (1 << k, 1 << k):
            raise DimensionError(
                f"gate {self.name} on {k} qubits needs a {1 << k}x{1 << k} matrix"
            )
        if not is_unitary(self.matrix, UNITARY_TOL):
            raise DimensionError(f"gate {self.name} matrix is not unitary")


def gate(name: str, *qubits: int) -> GateApplication:
    """Builtin gate by (case-insensitive) name.

    Multi-qubit gates list controls first and the target last; MCX accepts
    any arity >= 2.
    """
    canon = name.upper()
    if canon == "CX":
        canon = "CNOT"
    if canon == "CCX":
        canon = "TOFFOLI"
    k = len(qubits)
    if canon in _ONE_QUBIT:
        if k != 1:
            raise DimensionError(f"{canon} takes exactly 1 qubit, got {k}")
        return GateApplication(canon, tuple(qubits), _ONE_QUBIT[canon])
    if canon == "SWAP":
        if k != 2:
            raise DimensionError(f"SWAP takes exactly 2 qubits, got {k}")
        return GateApplication(canon, tuple(qubits), _SWAP.copy())
    if canon == "CNOT":
        if k != 2:
            raise DimensionError(f"CNOT takes exactly 2 qubits, got {k}")
        return GateApplication(canon, tuple(qubits), _mcx_matrix(2))
    if canon == "TOFFOLI":
        if k != 3:
            raise DimensionError(f"TOFFOLI takes exactly 3 qubits, got {k}")
        return GateApplication(canon, tuple(qubits), _mcx_matrix(3))
    if canon == "MCX":
        return GateApplication(canon, tuple(qubits), _mcx_matrix(k))
    raise DimensionError(f"unknown gate {name!r}")


def inline_gate(matrix, *qubits: int, name: str = "U") -> GateApplication:
    """Gate given directly by its unitary matrix."""
    return GateApplication(name, tuple(qubits), as_matrix(matrix, name))


@dataclass(frozen=True)
class SequentialCircuit:
    """m input qubits, l memory qubits, and a gate list over all m+l wires.

    Wires are numbered 1..m for the input register, then m+1..m+l for the
    memory register.
    """

    input_count: int
    memory_count: int
    gates: tuple[GateApplication, ...]

    def __post_init__(self):
        if self.input_count < 1:
            raise DimensionError("need at least one input qubit")
        if self.memory_count < 0:
            raise DimensionError("memory qubit count cannot be negative")
        width = self.input_count + self.memory_count
        for g in self.gates:
            if max(g.qubits) > width:
                raise DimensionError(
                    f"gate {g.name}{g.qubits} exceeds circuit width {width}"
                )

    @property
    def width(self) -> int:
        return self.input_count + self.memory_count


def _embed(width: int, g: GateApplication) -> np.ndarray:
    """Extend a gate to the full register (identity on untouched qubits)."""
    k = len(g.qubits)
    dim = 1 << width
    positions = [q - 1 for q in g.qubits]
    rest = [b for b in range(width) if b not in positions]
    gather_g = np.array(
        [sum(((x >> t) & 1) << positions[t] for t in range(k)) for x in range(1 << k)]
    )
    gather_r = np.array(
        [sum(((x >> t) & 1) << rest[t] for t in range(len(rest))) for x in range(1 << len(rest))]
    )
    out = np.zeros((dim, dim), dtype=complex)
    for off in gather_r:
        idx = off + gather_g
        out[np.ix_(idx, idx)] = g.matrix
    return out


def compile_circuit(width: int, gates) -> np.ndarray:
    """Unitary of a gate list: first gate applied first (rightmost factor)."""
    if width < 1:
        raise DimensionError("circuit width must be positive")
    if (1 << width) > DIM_CAP:
        raise DimensionError(f"2^{width} exceeds the {DIM_CAP}-dimensional cap")
    u = np.eye(1 << width, dtype=complex)
    for g in gates:
        if max(g.qubits) > width:
            raise DimensionError(f"gate {g.name}{g.qubits} exceeds circuit width {width}")
        u = _embed(width, g) @ u
    return u


def _bits_label(value: int, width: int) -> str:
    return "".join(str((value >> i) & 1) for i in range(width))


def sequential_to_mealy(circuit: SequentialCircuit) -> QuantumMealyMachine:
    """Machine view of a sequential circuit.

    Input dimension 2^m, state dimension 2^l; outcomes are the 2^m bit
    strings (first input qubit = first character = least significant bit)
    with computational-basis projectors as measurement.  The circuit indexes
    its basis with the input register in the low bits, the machine puts the
    input register in the high position, so the compiled unitary is
    reindexed accordingly.
    """
    m, l = circuit.input_count, circuit.memory_count
    u_circ = compile_circuit(circuit.width, circuit.gates)
    din, ds = 1 << m, 1 << l
    perm = np.array([x + (y << m) for x in range(din) for y in range(ds)])
    u = u_circ[np.ix_(perm, perm)]
    labels = [_bits_label(v, m) for v in range(din)]
    eye = np.eye(din, dtype=complex)
    measures = {lab: np.outer(eye[v], eye[v]) for v, lab in enumerate(labels)}
    return make_machine(din, ds, u, labels, measures)


def _coin_matrix(coin) -> tuple[str, np.ndarray]:
    if isinstance(coin, str):
        canon = coin.upper()
        if canon not in ("H", "Y"):
            raise DimensionError(f"coin must be H, Y, or a 2x2 unitary, got {coin!r}")
        return canon, _ONE_QUBIT[canon]
    mat = as_matrix(coin, "coin")
    if mat.shape != (2, 2) or not is_unitary(mat):
        raise DimensionError("inline coin must be a 2x2 unitary")
    return "U", mat


def build_walk_machine(size: int, coin="H") -> tuple[QuantumMealyMachine, dict[str, np.ndarray]]:
    """Walk-detection machine on a cycle, plus its named initial states.

    One step flips the coin, shifts the position by +1 (coin 0) or -1
    (coin 1) modulo size, then flips the target qubit iff the position is
    size-1; the target qubit is measured in the computational basis.  The
    state register is coin (x) position, coin most significant.  Named kets:
    "<c>c<b>p" for coin basis state c at position b, and "phic<b>p" for the
    balanced coin (|0> + i|1>)/sqrt(2) at position b.
    """
    n = int(size)
    if n < 2 or (n & (n - 1)) != 0:
        raise DimensionError(f"cycle size must be a power of two >= 2, got {size}")
    _, c_mat = _coin_matrix(coin)
    eye_n = np.eye(n, dtype=complex)
    roll_fwd = np.roll(eye_n, 1, axis=0)   # |i> -> |i+1 mod n|
    roll_back = np.roll(eye_n, -1, axis=0)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    eye2 = np.eye(2, dtype=complex)
    detect = np.outer(eye_n[n - 1], eye_n[n - 1])

    coin_step = np.kron(eye2, np.kron(c_mat, eye_n))
    shift_step = np.kron(eye2, np.kron(p0, roll_fwd) + np.kron(p1, roll_back))
    flip_step = np.kron(eye2, np.kron(eye2, eye_n - detect)) + np.kron(
        _ONE_QUBIT["X"], np.kron(eye2, detect)
    )
    u = flip_step @ shift_step @ coin_step

    measures = {"0": p0.copy(), "1": p1.copy()}
    machine = make_machine(2, 2 * n, u, ("0", "1"), measures)

    states: dict[str, np.ndarray] = {}
    eye_s = np.eye(2 * n, dtype=complex)
    for c in (0, 1):
        for b in range(n):
            states[f"{c}c{b}p"] = eye_s[c * n + b].copy()
    for b in range(n):
        states[f"phic{b}p"] = (eye_s[b] + 1j * eye_s[n + b]) / np.sqrt(2.0)
    return machine, states


def walk_circuit(size: int, coin="H") -> SequentialCircuit:
    """The walk machine as an explicit gate list.

    Wire 1 is the measured target; memory wires are the position bits
    (least significant first) followed by the coin.  One step is the coin
    gate, an inline conditional-shift gate, and an X on the target
    controlled on every position bit.
    """
    n = int(size)
    if n < 2 or (n & (n - 1)) != 0:
        raise DimensionError(f"cycle size must be a power of two >= 2, got {size}")
    pos_bits = n.bit_length() - 1
    coin_name, c_mat = _coin_matrix(coin)
    coin_wire = 1 + pos_bits + 1
    pos_wires = tuple(range(2, 2 + pos_bits))

    eye_n = np.eye(n, dtype=complex)
    shift = np.kron(np.roll(eye_n, 1, axis=0), np.diag([1.0, 0.0])) + np.kron(
        np.roll(eye_n, -1, axis=0), np.diag([0.0, 1.0])
    )
    gates = [
        GateApplication(coin_name, (coin_wire,), c_mat),
        inline_gate(shift, coin_wire, *pos_wires, name="SHIFT"),
    ]
    detect_name = {1: "CNOT", 2: "TOFFOLI"}.get(pos_bits, "MCX")
    gates.append(gate(detect_name, *pos_wires, 1))
    return SequentialCircuit(1, pos_bits + 1, tuple(gates))
