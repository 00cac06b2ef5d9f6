"""Quantum Mealy machines and their single-step / multi-step semantics.

A machine couples an input register to a persistent state register, applies
one fixed unitary per step, then measures the input register.  The core
primitive is the unnormalized post-measurement map on state-register
operators: its trace is the branch probability and its normalization the
post-measurement state, so multi-step outcome distributions fall out of
composing it along an input sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, MachineValidationError
from .linalg import (
    HERMITIAN_TOL,
    PROB_FLOOR,
    UNITARY_TOL,
    as_matrix,
    is_density,
    is_hermitian,
    is_unitary,
    kron,
    partial_trace_left,
)


@dataclass(frozen=True)
class InputState:
    """A named density matrix on the input register."""

    label: str
    matrix: np.ndarray

    @classmethod
    def from_ket(cls, label: str, ket) -> "InputState":
        v = np.asarray(ket, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(label, np.outer(v, v.conj()))


@dataclass(frozen=True)
class ExperimentTrace:
    """One finite experiment: the inputs fed in and the outcomes observed."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        if len(self.inputs) != len(self.outputs):
            raise DimensionError(
                f"trace has {len(self.inputs)} inputs but {len(self.outputs)} outputs"
            )

    def __len__(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True, eq=False)
class QuantumMealyMachine:
    """Step unitary on input (x) state plus a measurement on the input register.

    ``outcomes`` fixes the outcome order everywhere (reports, queues, file
    serialization); ``measurements`` maps each outcome label to its operator
    on the input register.  The matrices are stored input-major: basis index
    x * state_dim + y means input x, state y.
    """

    input_dim: int
    state_dim: int
    unitary: np.ndarray
    outcomes: tuple[str, ...]
    measurements: dict[str, np.ndarray] = field(repr=False)

    def measurement(self, outcome: str) -> np.ndarray:
        try:
            return self.measurements[outcome]
        except KeyError:
            raise KeyError(f"unknown outcome label {outcome!r}") from None


def make_machine(input_dim, state_dim, unitary, outcomes, measurements) -> QuantumMealyMachine:
    """Build and validate a machine in one go."""
    m = QuantumMealyMachine(
        input_dim=int(input_dim),
        state_dim=int(state_dim),
        unitary=as_matrix(unitary, "unitary"),
        outcomes=tuple(outcomes),
        measurements={k: as_matrix(v, f"measurement {k!r}") for k, v in measurements.items()},
    )
    require_valid(m)
    return m


def validate_machine(machine: QuantumMealyMachine) -> list[str]:
    """Collect every defect; an empty list means the machine is well-formed."""
    diags: list[str] = []
    d, s = machine.input_dim, machine.state_dim
    if d < 1 or s < 1:
        diags.append(f"dimensions must be positive, got input {d}, state {s}")
        return diags
    total = d * s
    u = np.asarray(machine.unitary)
    if u.shape != (total, total):
        diags.append(f"unitary shape {u.shape} != ({total}, {total})")
    elif not np.isfinite(u).all():
        diags.append("unitary has non-finite entries")
    elif not is_unitary(u):
        defect = np.linalg.norm(u.conj().T @ u - np.eye(total))
        diags.append(f"unitary defect ||U+U - I|| = {defect:.3e} exceeds {UNITARY_TOL}")
    if not machine.outcomes:
        diags.append("machine has no outcomes")
    if len(set(machine.outcomes)) != len(machine.outcomes):
        diags.append("outcome labels are not unique")
    missing = [a for a in machine.outcomes if a not in machine.measurements]
    extra = [a for a in machine.measurements if a not in machine.outcomes]
    if missing:
        diags.append(f"measurement operators missing for outcomes {missing}")
    if extra:
        diags.append(f"measurement operators for unknown outcomes {extra}")
    if missing or extra:
        return diags
    acc = np.zeros((d, d), dtype=complex)
    for a in machine.outcomes:
        op = np.asarray(machine.measurements[a])
        if op.shape != (d, d):
            diags.append(f"measurement {a!r} has shape {op.shape}, expected ({d}, {d})")
            return diags
        if not np.isfinite(op).all():
            diags.append(f"measurement {a!r} has non-finite entries")
            return diags
        acc += op.conj().T @ op
    defect = np.linalg.norm(acc - np.eye(d))
    if defect > UNITARY_TOL:
        diags.append(f"measurement completeness defect {defect:.3e} exceeds {UNITARY_TOL}")
    return diags


def require_valid(machine: QuantumMealyMachine) -> None:
    diags = validate_machine(machine)
    if diags:
        raise MachineValidationError(diags)


def _input_matrix(machine: QuantumMealyMachine, sigma) -> np.ndarray:
    mat = sigma.matrix if isinstance(sigma, InputState) else np.asarray(sigma, dtype=complex)
    if mat.shape != (machine.input_dim, machine.input_dim):
        raise DimensionError(
            f"input state shape {mat.shape} != ({machine.input_dim}, {machine.input_dim})"
        )
    return mat


def apply_superoperator(machine, outcome, sigma, rho) -> np.ndarray:
    """Unnormalized one-step map on state-register operators.

    Feeds input state sigma, runs the step unitary, projects the input
    register onto the given outcome and traces it out.  The result's trace is
    the branch probability; the map is linear in rho and preserves
    Hermiticity and positivity.
    """
    sig = _input_matrix(machine, sigma)
    rho = np.asarray(rho, dtype=complex)
    d, s = machine.input_dim, machine.state_dim
    if rho.shape != (s, s):
        raise DimensionError(f"state operator shape {rho.shape} != ({s}, {s})")
    if not is_hermitian(rho, HERMITIAN_TOL * max(1.0, float(np.linalg.norm(rho)))):
        raise DimensionError("state operator is not Hermitian")
    m_op = machine.measurement(outcome)
    u = machine.unitary
    projected = kron(m_op, np.eye(s)) @ u @ kron(sig, rho) @ u.conj().T @ kron(
        m_op.conj().T, np.eye(s)
    )
    return partial_trace_left(projected, d, s)


@dataclass(frozen=True)
class StepBranch:
    """Probability of one outcome and the normalized state after it (None

    when the branch is unreachable)."""

    probability: float
    state: np.ndarray | None


def step(machine, sigma, rho) -> dict[str, StepBranch]:
    """All measurement branches of one machine step from density matrix rho."""
    if not is_density(np.asarray(rho, dtype=complex)):
        raise DimensionError("step requires a density matrix")
    branches: dict[str, StepBranch] = {}
    for a in machine.outcomes:
        img = apply_superoperator(machine, a, sigma, rho)
        p = float(np.trace(img).real)
        if p > PROB_FLOOR:
            branches[a] = StepBranch(p, img / p)
        else:
            branches[a] = StepBranch(max(p, 0.0), None)
    return branches


def experiment_distribution(machine, rho0, inputs) -> dict[tuple[str, ...], float]:
    """Joint distribution of outcome sequences for a fixed input sequence.

    The empty experiment yields {(): 1.0}.  Keys are outcome-label tuples in
    step order; values sum to 1 up to floating-point error.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if not is_density(rho0):
        raise DimensionError("experiment_distribution requires a density matrix")
    frontier: dict[tuple[str, ...], np.ndarray] = {(): rho0}
    for sigma in inputs:
        nxt: dict[tuple[str, ...], np.ndarray] = {}
        for seq, img in frontier.items():
            for a in machine.outcomes:
                nxt[seq + (a,)] = apply_superoperator(machine, a, sigma, img)
        frontier = nxt
    return {seq: max(float(np.trace(img).real), 0.0) for seq, img in frontier.items()}


def sample_run(machine, rho0, inputs, seed=None) -> ExperimentTrace:
    """Sample one outcome sequence step by step."""
    rng = np.random.default_rng(seed)
    rho = np.asarray(rho0, dtype=complex)
    if not is_density(rho):
        raise DimensionError("sample_run requires a density matrix")
    in_labels: list[str] = []
    out_labels: list[str] = []
    for sigma in inputs:
        branches = step(machine, sigma, rho)
        probs = np.array([branches[a].probability for a in machine.outcomes])
        probs = probs / probs.sum()
        pick = machine.outcomes[rng.choice(len(machine.outcomes), p=probs)]
        in_labels.append(sigma.label if isinstance(sigma, InputState) else "?")
        out_labels.append(pick)
        rho = branches[pick].state
    return ExperimentTrace(tuple(in_labels), tuple(out_labels))


def sample_counts(machine, rho0, inputs, shots, seed=None) -> dict[tuple[str, ...], int]:
    """Multinomial counts of outcome sequences over many shots."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = experiment_distribution(machine, rho0, inputs)
    keys = list(dist.keys())
    probs = np.array([dist[k] for k in keys])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {k: int(c) for k, c in zip(keys, counts)}
