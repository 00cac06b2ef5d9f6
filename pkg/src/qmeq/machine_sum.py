"""Joint machine built from two machines sharing an input register.

Two machines with the same input space and the same measurement can be run
"side by side" as a single machine whose state space is the direct sum of
the two state spaces.  Block-diagonal state operators stay block-diagonal
under every step, so the difference of the two initial states evolves as a
pair of blocks that never mix -- which is what lets one span search decide
equivalence of both machines at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MachineValidationError
from .linalg import (
    HERMITIAN_TOL,
    UNITARY_TOL,
    hermitian_vectorize,
    is_density,
    is_hermitian,
)
from .mealy import QuantumMealyMachine, apply_superoperator, require_valid


@dataclass(frozen=True, eq=False)
class BlockHermitian:
    """Hermitian operator on a direct-sum space, kept as its two blocks."""

    block1: np.ndarray
    block2: np.ndarray

    def __post_init__(self):
        for blk in (self.block1, self.block2):
            if not is_hermitian(blk, HERMITIAN_TOL * max(1.0, float(np.linalg.norm(blk)))):
                raise DimensionError("BlockHermitian blocks must be Hermitian")

    @property
    def dims(self) -> tuple[int, int]:
        return self.block1.shape[0], self.block2.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.block1).real + np.trace(self.block2).real)

    def vectorize(self) -> np.ndarray:
        return np.concatenate(
            [hermitian_vectorize(self.block1), hermitian_vectorize(self.block2)]
        )

    def embed(self) -> np.ndarray:
        """Monolithic matrix on the direct-sum space (diagnostics/tests)."""
        s1, s2 = self.dims
        out = np.zeros((s1 + s2, s1 + s2), dtype=complex)
        out[:s1, :s1] = self.block1
        out[s1:, s1:] = self.block2
        return out


def split_blocks(mat: np.ndarray, s1: int, s2: int) -> tuple[BlockHermitian, float]:
    """Split a matrix on the direct-sum space; also report the off-block mass."""
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (s1 + s2, s1 + s2):
        raise DimensionError(f"matrix shape {mat.shape} != ({s1 + s2}, {s1 + s2})")
    off = float(np.linalg.norm(mat[:s1, s1:])) + float(np.linalg.norm(mat[s1:, :s1]))
    return BlockHermitian(mat[:s1, :s1].copy(), mat[s1:, s1:].copy()), off


def ensure_summable(m1: QuantumMealyMachine, m2: QuantumMealyMachine) -> None:
    """Check the two machines share input space, outcomes, and measurement."""
    require_valid(m1)
    require_valid(m2)
    problems: list[str] = []
    if m1.input_dim != m2.input_dim:
        problems.append(f"input dimensions differ: {m1.input_dim} vs {m2.input_dim}")
    if m1.outcomes != m2.outcomes:
        problems.append(f"outcome labels differ: {m1.outcomes} vs {m2.outcomes}")
    if not problems:
        for a in m1.outcomes:
            gap = np.linalg.norm(m1.measurements[a] - m2.measurements[a])
            if gap > UNITARY_TOL:
                problems.append(
                    f"measurement {a!r} differs between machines (||diff|| = {gap:.3e})"
                )
    if problems:
        raise MachineValidationError(problems)


def sum_machines(m1: QuantumMealyMachine, m2: QuantumMealyMachine) -> QuantumMealyMachine:
    """Machine on the direct sum of state spaces, same input register.

    The step unitary acts as m1's unitary on input (x) state1 and as m2's on
    input (x) state2; the shared measurement is untouched.
    """
    ensure_summable(m1, m2)
    d = m1.input_dim
    s1, s2 = m1.state_dim, m2.state_dim
    s = s1 + s2
    u = np.zeros((d, s, d, s), dtype=complex)
    u[:, :s1, :, :s1] = m1.unitary.reshape(d, s1, d, s1)
    u[:, s1:, :, s1:] = m2.unitary.reshape(d, s2, d, s2)
    joint = QuantumMealyMachine(
        input_dim=d,
        state_dim=s,
        unitary=u.reshape(d * s, d * s),
        outcomes=m1.outcomes,
        measurements={a: m1.measurements[a].copy() for a in m1.outcomes},
    )
    require_valid(joint)
    return joint


def build_difference_operator(rho1: np.ndarray, rho2: np.ndarray) -> BlockHermitian:
    """Initial operator rho1 (+) (-rho2); its total trace is exactly zero."""
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if not is_density(rho1) or not is_density(rho2):
        raise MachineValidationError("initial states must be density matrices")
    return BlockHermitian(rho1, -rho2)


def apply_superoperator_block(
    m1: QuantumMealyMachine,
    m2: QuantumMealyMachine,
    outcome: str,
    sigma,
    h: BlockHermitian,
) -> BlockHermitian:
    """One joint step applied blockwise (the blocks never mix)."""
    return BlockHermitian(
        apply_superoperator(m1, outcome, sigma, h.block1),
        apply_superoperator(m2, outcome, sigma, h.block2),
    )
