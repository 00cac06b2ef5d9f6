"""Polynomial-time equivalence decision via a span-basis search.

Two machines started in given states are equivalent iff every finite
experiment on the joint (direct-sum) machine maps the block difference
rho1 (+) (-rho2) to a traceless operator.  The images of that difference
under all experiments live in a real space of dimension at most
state_dim1^2 + state_dim2^2, so it suffices to explore experiments in a
fixed breadth-first order, keep only images that leave the span collected so
far, and check traces of the members: the span (and hence the verdict)
stops changing once a whole level adds nothing new.

Experiments are ordered by length first, then lexicographically by their
(input index, outcome index) pairs; the first basis member with nonzero
trace under that order is the reported witness, which makes reports
deterministic and the early-abort and exhaustive modes agree.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .basis import InputBasis, pure_state_basis
from .errors import DimensionError, MachineValidationError
from .linalg import SPAN_TOL, SpanBasis, is_density
from .machine_sum import (
    BlockHermitian,
    apply_superoperator_block,
    build_difference_operator,
    ensure_summable,
)
from .mealy import ExperimentTrace, QuantumMealyMachine


def trace_key(item: tuple[tuple[int, ...], tuple[int, ...]]):
    """Sort key realizing the experiment order: length, then pairwise lex."""
    pi, a = item
    if len(pi) != len(a):
        raise DimensionError("experiment has mismatched input/outcome lengths")
    return len(pi), tuple(zip(pi, a))


def trace_order(x, y) -> int:
    """Three-way comparison of experiments given as (input, outcome) index tuples."""
    kx, ky = trace_key(x), trace_key(y)
    return -1 if kx < ky else (0 if kx == ky else 1)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one equivalence check.

    On a not-equivalent verdict, ``witness`` is the first experiment (in the
    fixed exploration order) whose outcome probabilities differ, and p1/p2
    are those probabilities under machine 1 and machine 2.
    """

    verdict: str  # "equivalent" | "not-equivalent"
    witness: ExperimentTrace | None
    p1: float | None
    p2: float | None
    basis_size: int
    sequences_examined: int
    elapsed_s: float
    tolerance: float
    early_abort: bool
    basis_labels: tuple[str, ...]
    outcome_labels: tuple[str, ...]

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"


def _as_trace(basis, outcomes, pi, a) -> ExperimentTrace:
    return ExperimentTrace(
        tuple(basis.states[i].label for i in pi),
        tuple(outcomes[i] for i in a),
    )


def _validate_inputs(m1, m2, rho1, rho2, basis):
    ensure_summable(m1, m2)
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != (m1.state_dim, m1.state_dim):
        raise DimensionError(
            f"state 1 shape {rho1.shape} != ({m1.state_dim}, {m1.state_dim})"
        )
    if rho2.shape != (m2.state_dim, m2.state_dim):
        raise DimensionError(
            f"state 2 shape {rho2.shape} != ({m2.state_dim}, {m2.state_dim})"
        )
    if not is_density(rho1) or not is_density(rho2):
        raise MachineValidationError("initial states must be density matrices")
    if basis is None:
        basis = pure_state_basis(m1.input_dim)
    elif basis.dim != m1.input_dim:
        raise DimensionError(
            f"input basis dimension {basis.dim} != machine input dimension {m1.input_dim}"
        )
    return rho1, rho2, basis


def check_equivalence(
    m1: QuantumMealyMachine,
    m2: QuantumMealyMachine,
    rho1,
    rho2,
    basis: InputBasis | None = None,
    *,
    early_abort: bool = True,
    tolerance: float | None = None,
) -> CheckReport:
    """Decide functional equivalence of (m1, rho1) and (m2, rho2).

    With early_abort the search returns at the first image whose trace
    exceeds the tolerance; otherwise it runs until the span is saturated and
    then reports the first offending basis member.  Both modes return the
    same verdict and the same witness.
    """
    t0 = time.perf_counter()
    tol = SPAN_TOL if tolerance is None else float(tolerance)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    rho1, rho2, basis = _validate_inputs(m1, m2, rho1, rho2, basis)
    root = build_difference_operator(rho1, rho2)
    ambient = m1.state_dim**2 + m2.state_dim**2
    span = SpanBasis(ambient, tol)
    n_inputs = len(basis.states)
    n_out = len(m1.outcomes)

    def report(verdict, witness_item=None) -> CheckReport:
        witness = p1 = p2 = None
        if witness_item is not None:
            pi, a, image = witness_item
            witness = _as_trace(basis, m1.outcomes, pi, a)
            p1 = float(np.trace(image.block1).real)
            p2 = -float(np.trace(image.block2).real)
        return CheckReport(
            verdict=verdict,
            witness=witness,
            p1=p1,
            p2=p2,
            basis_size=len(span),
            sequences_examined=examined,
            elapsed_s=time.perf_counter() - t0,
            tolerance=tol,
            early_abort=early_abort,
            basis_labels=basis.labels,
            outcome_labels=m1.outcomes,
        )

    # FIFO queue of experiments in the fixed order; each entry carries its
    # parent's image so the pop computes exactly one superoperator step.
    queue: deque = deque([((), (), None)])
    examined = 0
    while queue:
        pi, a, parent = queue.popleft()
        if parent is None:
            image: BlockHermitian = root
        else:
            image = apply_superoperator_block(
                m1, m2, m1.outcomes[a[-1]], basis.states[pi[-1]], parent
            )
        examined += 1
        if early_abort and abs(image.trace()) > tol:
            return report("not-equivalent", (pi, a, image))
        inside, _ = span.contains(image.vectorize())
        if not inside:
            span.add(image.vectorize(), origin=(pi, a, image))
            assert len(span) <= ambient, "span exceeded its dimension bound"
            for s in range(n_inputs):
                for x in range(n_out):
                    queue.append((pi + (s,), a + (x,), image))

    for origin in span.origins:
        pi, a, image = origin
        if abs(image.trace()) > tol:
            return report("not-equivalent", origin)
    return report("equivalent")
