"""Brute-force cross-validation of the span-basis checker.

The oracle enumerates every experiment up to a length bound and compares
outcome-sequence probabilities directly, with no span reasoning at all.  It
is exponential in the bound and only fit for small instances, which is the
point: it is an independent route to the same answer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import InputBasis, pure_state_basis
from .checker import _validate_inputs, trace_key
from .errors import ResourceLimitError
from .linalg import SPAN_TOL, SpanBasis
from .machine_sum import apply_superoperator_block, build_difference_operator
from .mealy import ExperimentTrace, QuantumMealyMachine


@dataclass(frozen=True)
class OracleReport:
    """Verdict of the bounded brute-force comparison."""

    equivalent: bool
    max_len: int
    witness: ExperimentTrace | None
    p1: float | None
    p2: float | None
    nodes_examined: int


def k_equivalent_bruteforce(
    m1: QuantumMealyMachine,
    m2: QuantumMealyMachine,
    rho1,
    rho2,
    basis: InputBasis | None = None,
    max_len: int = 4,
    *,
    tolerance: float | None = None,
    node_cap: int = 10_000_000,
) -> OracleReport:
    """Compare all experiments of length <= max_len over the given basis.

    Returns the experiment-order-least witness when probabilities differ by
    more than the tolerance.  Refuses to start when the enumeration would
    exceed node_cap images.
    """
    tol = SPAN_TOL if tolerance is None else float(tolerance)
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    rho1, rho2, basis = _validate_inputs(m1, m2, rho1, rho2, basis)
    branching = len(basis.states) * len(m1.outcomes)
    total = 0
    level = 1
    for _ in range(max_len):
        level *= branching
        total += level
        if total > node_cap:
            raise ResourceLimitError(
                f"enumeration of {total}+ experiments exceeds node cap {node_cap}"
            )

    root = build_difference_operator(rho1, rho2)
    nodes = 0
    best: tuple | None = None

    def visit(image, pi, a, depth):
        nonlocal nodes, best
        if abs(image.trace()) > tol:
            cand = (pi, a, image)
            if best is None or trace_key((pi, a)) < trace_key((best[0], best[1])):
                best = cand
        if depth == max_len:
            return
        for s, sigma in enumerate(basis.states):
            for x, outcome in enumerate(m1.outcomes):
                child = apply_superoperator_block(m1, m2, outcome, sigma, image)
                nodes += 1
                visit(child, pi + (s,), a + (x,), depth + 1)

    visit(root, (), (), 0)
    if best is None:
        return OracleReport(True, max_len, None, None, None, nodes)
    pi, a, image = best
    witness = ExperimentTrace(
        tuple(basis.states[i].label for i in pi),
        tuple(m1.outcomes[i] for i in a),
    )
    return OracleReport(
        equivalent=False,
        max_len=max_len,
        witness=witness,
        p1=float(np.trace(image.block1).real),
        p2=-float(np.trace(image.block2).real),
        nodes_examined=nodes,
    )


def span_dimension_profile(
    m1: QuantumMealyMachine,
    m2: QuantumMealyMachine,
    rho1,
    rho2,
    basis: InputBasis | None = None,
    max_len: int = 4,
    *,
    tolerance: float | None = None,
    node_cap: int = 10_000_000,
) -> list[int]:
    """Dimension of the span of all experiment images, level by level.

    Entry k is the span dimension over every experiment of length <= k.  The
    profile is non-decreasing and freezes permanently at the first repeat,
    which is the structural fact the polynomial checker relies on.
    """
    tol = SPAN_TOL if tolerance is None else float(tolerance)
    rho1, rho2, basis = _validate_inputs(m1, m2, rho1, rho2, basis)
    branching = len(basis.states) * len(m1.outcomes)
    if max_len > 0 and branching ** max_len > node_cap:
        raise ResourceLimitError("level enumeration exceeds node cap")
    root = build_difference_operator(rho1, rho2)
    span = SpanBasis(m1.state_dim**2 + m2.state_dim**2, tol)
    profile: list[int] = []
    frontier = [root]
    for level in range(max_len + 1):
        for image in frontier:
            vec = image.vectorize()
            inside, _ = span.contains(vec)
            if not inside:
                span.add(vec)
        profile.append(len(span))
        if level < max_len:
            frontier = [
                apply_superoperator_block(m1, m2, outcome, sigma, image)
                for image in frontier
                for sigma in basis.states
                for outcome in m1.outcomes
            ]
    return profile
