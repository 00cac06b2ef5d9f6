"""Line-oriented text formats for machines (.qmm) and circuits (.qc).

Machine files:

    dims <input_dim> <state_dim>
    outcomes <label> <label> ...
    unitary
      <input_dim*state_dim rows of complex entries>
    measure <label>          (one section per outcome)
      <input_dim rows>
    state <name>             (any number of named initial states)
      ket <state_dim amplitudes on one line>   -- or state_dim density rows

Circuit files:

    inputs <m>
    memory <l>
    <GATE> q<i> q<j> ...     (one gate per line, wire 1 = least significant)

'#' starts a comment, blank lines are ignored, and the first keyword of the
file decides which format it is.  Complex entries take the forms a, bi,
a+bi, a-bi with plain decimal floats (optional exponent); the serializer
always emits the full a+bi form with repr precision, so values round-trip
exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .circuits import SequentialCircuit, _bits_label, gate, sequential_to_mealy
from .errors import MachineValidationError, ParseError, ResourceLimitError, UsageError
from .linalg import DIM_CAP, TRACE_TOL, is_density
from .mealy import QuantumMealyMachine, make_machine

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?:(?P<im>[+-]{_NUM})i)?|(?P<imonly>[+-]?{_NUM})i)$"
)
_QUBIT_RE = re.compile(r"^q([1-9]\d*)$")


def format_complex(z: complex) -> str:
    """Full-precision a+bi literal (round-trips exactly through the parser)."""
    z = complex(z)
    sign = "-" if z.imag < 0 else "+"
    return f"{float(z.real)!r}{sign}{abs(float(z.imag))!r}i"


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _token_lines(text: str) -> list[list[_Token]]:
    lines: list[list[_Token]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [
            _Token(m.group(0), lineno, m.start() + 1)
            for m in re.finditer(r"\S+", body)
        ]
        if toks:
            lines.append(toks)
    return lines


def _parse_complex(tok: _Token) -> complex:
    m = _COMPLEX_RE.match(tok.text)
    if not m:
        raise ParseError(f"bad complex literal {tok.text!r}", tok.line, tok.column)
    if m.group("imonly") is not None:
        return complex(0.0, float(m.group("imonly")))
    re_part = float(m.group("re"))
    im_part = float(m.group("im")) if m.group("im") is not None else 0.0
    return complex(re_part, im_part)


def _parse_int(tok: _Token, what: str) -> int:
    if not tok.text.isdigit():
        raise ParseError(f"{what} must be a non-negative integer, got {tok.text!r}", tok.line, tok.column)
    return int(tok.text)


class _Cursor:
    def __init__(self, lines: list[list[_Token]]):
        self.lines = lines
        self.pos = 0

    def peek(self) -> list[_Token] | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self, context: str) -> list[_Token]:
        line = self.peek()
        if line is None:
            raise ParseError(f"unexpected end of file while reading {context}")
        self.pos += 1
        return line


def _read_row(cursor: _Cursor, width: int, context: str) -> np.ndarray:
    toks = cursor.next(context)
    if len(toks) != width:
        raise ParseError(
            f"{context}: expected {width} entries, got {len(toks)}",
            toks[0].line,
            toks[0].column,
        )
    return np.array([_parse_complex(t) for t in toks])


def _read_matrix(cursor: _Cursor, rows: int, cols: int, context: str) -> np.ndarray:
    return np.stack([_read_row(cursor, cols, context) for _ in range(rows)])


@dataclass
class MachineFile:
    """A parsed machine plus its named initial states (as density matrices)."""

    machine: QuantumMealyMachine
    states: dict[str, np.ndarray] = field(default_factory=dict)
    kind: str = "machine"  # "machine" | "circuit"
    circuit: SequentialCircuit | None = None

    def state(self, name: str) -> np.ndarray:
        if name not in self.states:
            known = ", ".join(sorted(self.states)) or "(none)"
            raise UsageError(f"unknown state {name!r}; known states: {known}")
        return self.states[name]


def _parse_machine(cursor: _Cursor) -> MachineFile:
    head = cursor.next("dims header")
    if len(head) != 3:
        raise ParseError("dims needs exactly two integers", head[0].line, head[0].column)
    din = _parse_int(head[1], "input dimension")
    ds = _parse_int(head[2], "state dimension")
    if din < 1 or ds < 1:
        raise ParseError("dimensions must be positive", head[0].line, head[0].column)
    if din * ds > DIM_CAP:
        raise ResourceLimitError(
            f"machine dimension {din}*{ds} exceeds the {DIM_CAP} cap"
        )

    outcomes: tuple[str, ...] | None = None
    unitary: np.ndarray | None = None
    measures: dict[str, np.ndarray] = {}
    states: dict[str, np.ndarray] = {}

    while (line := cursor.peek()) is not None:
        key = line[0]
        if key.text == "outcomes":
            cursor.next("outcomes")
            if outcomes is not None:
                raise ParseError("duplicate outcomes section", key.line, key.column)
            labels = tuple(t.text for t in line[1:])
            if not labels:
                raise ParseError("outcomes line needs at least one label", key.line, key.column)
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate outcome label", key.line, key.column)
            outcomes = labels
        elif key.text == "unitary":
            cursor.next("unitary")
            if unitary is not None:
                raise ParseError("duplicate unitary section", key.line, key.column)
            unitary = _read_matrix(cursor, din * ds, din * ds, "unitary row")
        elif key.text == "measure":
            cursor.next("measure")
            if len(line) != 2:
                raise ParseError("measure needs exactly one label", key.line, key.column)
            label = line[1].text
            if label in measures:
                raise ParseError(f"duplicate measure section for {label!r}", key.line, key.column)
            measures[label] = _read_matrix(cursor, din, din, f"measure {label!r} row")
        elif key.text == "state":
            cursor.next("state")
            if len(line) != 2:
                raise ParseError("state needs exactly one name", key.line, key.column)
            name = line[1].text
            if name in states:
                raise ParseError(f"duplicate state {name!r}", key.line, key.column)
            nxt = cursor.peek()
            if nxt is not None and nxt[0].text == "ket":
                row = cursor.next("ket")
                if len(row) != 1 + ds:
                    raise ParseError(
                        f"ket for state {name!r}: expected {ds} amplitudes, got {len(row) - 1}",
                        row[0].line,
                        row[0].column,
                    )
                v = np.array([_parse_complex(t) for t in row[1:]])
                norm = np.linalg.norm(v)
                if abs(norm - 1.0) > 1e-6:
                    raise MachineValidationError(
                        [f"state {name!r} ket has norm {norm}, expected 1"]
                    )
                v = v / norm
                states[name] = np.outer(v, v.conj())
            else:
                rho = _read_matrix(cursor, ds, ds, f"state {name!r} row")
                if not is_density(rho):
                    raise MachineValidationError(
                        [f"state {name!r} is not a density matrix"]
                    )
                states[name] = rho
        else:
            raise ParseError(f"unknown keyword {key.text!r}", key.line, key.column)

    problems = []
    if outcomes is None:
        problems.append("missing outcomes section")
    if unitary is None:
        problems.append("missing unitary section")
    if outcomes is not None:
        missing = [a for a in outcomes if a not in measures]
        stray = [a for a in measures if a not in outcomes]
        if missing:
            problems.append(f"missing measure sections for {missing}")
        if stray:
            problems.append(f"measure sections for unknown outcomes {stray}")
    if problems:
        raise ParseError("; ".join(problems))
    machine = make_machine(din, ds, unitary, outcomes, measures)
    return MachineFile(machine, states, kind="machine")


def _parse_circuit(cursor: _Cursor) -> MachineFile:
    head = cursor.next("inputs header")
    if len(head) != 2:
        raise ParseError("inputs needs exactly one integer", head[0].line, head[0].column)
    m = _parse_int(head[1], "input qubit count")
    mem = cursor.next("memory header")
    if mem[0].text != "memory" or len(mem) != 2:
        raise ParseError("expected 'memory <l>' after inputs", mem[0].line, mem[0].column)
    l = _parse_int(mem[1], "memory qubit count")
    if m + l > DIM_CAP.bit_length() - 1:
        raise ResourceLimitError(
            f"{m + l}-qubit circuit exceeds the {DIM_CAP}-dimensional cap"
        )
    gates = []
    while (line := cursor.peek()) is not None:
        cursor.next("gate")
        name = line[0]
        qubits = []
        for tok in line[1:]:
            qm = _QUBIT_RE.match(tok.text)
            if not qm:
                raise ParseError(f"expected qubit like q1, got {tok.text!r}", tok.line, tok.column)
            qubits.append(int(qm.group(1)))
        try:
            gates.append(gate(name.text, *qubits))
        except Exception as exc:
            raise ParseError(str(exc), name.line, name.column) from exc
    try:
        circuit = SequentialCircuit(m, l, tuple(gates))
    except Exception as exc:
        raise ParseError(str(exc)) from exc
    machine = sequential_to_mealy(circuit)
    if l == 0:
        states = {"unit": np.array([[1.0 + 0j]])}
    else:
        eye = np.eye(1 << l, dtype=complex)
        states = {
            _bits_label(v, l): np.outer(eye[v], eye[v]) for v in range(1 << l)
        }
    return MachineFile(machine, states, kind="circuit", circuit=circuit)


def parse_machine_text(text: str) -> MachineFile:
    """Parse either format; the leading keyword (dims/inputs) dispatches."""
    cursor = _Cursor(_token_lines(text))
    first = cursor.peek()
    if first is None:
        raise ParseError("empty machine description")
    if first[0].text == "dims":
        return _parse_machine(cursor)
    if first[0].text == "inputs":
        return _parse_circuit(cursor)
    raise ParseError(
        f"expected 'dims' or 'inputs', got {first[0].text!r}",
        first[0].line,
        first[0].column,
    )


def parse_machine_file(path) -> MachineFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_machine_text(fh.read())


def parse_circuit_text(text: str) -> SequentialCircuit:
    parsed = parse_machine_text(text)
    if parsed.kind != "circuit" or parsed.circuit is None:
        raise ParseError("not a circuit description (expected 'inputs <m>')")
    return parsed.circuit


def _check_label(label: str, what: str) -> str:
    if not label or re.search(r"\s", label) or label.startswith("#"):
        raise MachineValidationError([f"{what} {label!r} is not serializable"])
    return label


def _rows(mat: np.ndarray, indent: str = "  ") -> list[str]:
    return [indent + " ".join(format_complex(z) for z in row) for row in np.asarray(mat)]


def serialize_machine(
    machine: QuantumMealyMachine,
    states: dict[str, np.ndarray] | None = None,
    header: str | None = None,
) -> str:
    """Render a machine (and optional named states) in the .qmm format.

    1-D state arrays are written as kets, 2-D ones as density matrices.
    """
    out: list[str] = []
    if header:
        out.extend(f"# {line}".rstrip() for line in header.splitlines())
    out.append(f"dims {machine.input_dim} {machine.state_dim}")
    out.append("outcomes " + " ".join(_check_label(a, "outcome") for a in machine.outcomes))
    out.append("unitary")
    out.extend(_rows(machine.unitary))
    for a in machine.outcomes:
        out.append(f"measure {a}")
        out.extend(_rows(machine.measurements[a]))
    for name, value in (states or {}).items():
        out.append(f"state {_check_label(name, 'state name')}")
        arr = np.asarray(value, dtype=complex)
        if arr.ndim == 1:
            out.append("  ket " + " ".join(format_complex(z) for z in arr))
        else:
            out.extend(_rows(arr))
    return "\n".join(out) + "\n"
