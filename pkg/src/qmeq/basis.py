"""Pure-state bases for the input register.

One check step feeds the machine a basis input state; the family below is a
fixed set of d^2 pure states whose densities span all Hermitian operators on
the d-dimensional input space, which is all the checker needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MachineValidationError
from .linalg import hermitian_vectorize
from .mealy import InputState


@dataclass(frozen=True)
class InputBasis:
    """An ordered, spanning family of input states.

    Construction certifies that the vectorized densities have full rank d^2,
    so experiments ranging over this family see every possible input.
    """

    dim: int
    states: tuple[InputState, ...]

    def __post_init__(self):
        d = self.dim
        if len(self.states) != d * d:
            raise DimensionError(f"need {d * d} states for dimension {d}, got {len(self.states)}")
        rows = np.stack([hermitian_vectorize(s.matrix) for s in self.states])
        rank = np.linalg.matrix_rank(rows)
        if rank != d * d:
            raise MachineValidationError(
                f"basis densities span only rank {rank} of {d * d}"
            )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.states)

    def __len__(self) -> int:
        return len(self.states)


def _pair_labels(d: int, j: int, k: int) -> tuple[str, str]:
    if d == 2:
        return "+", "phi"
    return f"+{j}{k}", f"phi{j}{k}"


def pure_state_basis(d: int) -> InputBasis:
    """The standard spanning family of d^2 pure input states.

    Basis kets |j> first, then for every pair j < k (row-major) the
    superpositions (|j> + |k>)/sqrt(2) and (|j> + i|k>)/sqrt(2).  For d = 2
    the labels are 0, 1, +, phi.
    """
    if d < 1:
        raise DimensionError("input dimension must be positive")
    states: list[InputState] = []
    eye = np.eye(d, dtype=complex)
    for j in range(d):
        label = str(j) if d == 2 else f"e{j}"
        states.append(InputState(label, np.outer(eye[j], eye[j])))
    for j in range(d):
        for k in range(j + 1, d):
            plus_label, phase_label = _pair_labels(d, j, k)
            v = (eye[j] + eye[k]) / np.sqrt(2.0)
            states.append(InputState(plus_label, np.outer(v, v.conj())))
            w = (eye[j] + 1j * eye[k]) / np.sqrt(2.0)
            states.append(InputState(phase_label, np.outer(w, w.conj())))
    return InputBasis(d, tuple(states))
