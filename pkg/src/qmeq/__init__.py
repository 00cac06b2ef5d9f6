"""Equivalence checking of sequential quantum circuits.

Circuits with quantum memory are modelled as quantum Mealy machines; two
machines started in given states are equivalent when every finite input
experiment produces every outcome sequence with the same probability.  The
checker decides this exactly (up to floating-point tolerance) in polynomial
time by growing a span basis of reachable difference operators, and a
brute-force oracle cross-validates it on bounded experiment lengths.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    MachineValidationError,
    ParseError,
    QmeqError,
    ResourceLimitError,
    UsageError,
)
from .linalg import SPAN_TOL, SpanBasis, hermitian_vectorize, partial_trace_left
from .basis import InputBasis, pure_state_basis
from .mealy import (
    ExperimentTrace,
    InputState,
    QuantumMealyMachine,
    apply_superoperator,
    experiment_distribution,
    sample_counts,
    sample_run,
    step,
    validate_machine,
)
from .machine_sum import BlockHermitian, build_difference_operator, sum_machines
from .checker import CheckReport, check_equivalence, trace_order
from .oracle import OracleReport, k_equivalent_bruteforce, span_dimension_profile
from .circuits import (
    GateApplication,
    SequentialCircuit,
    build_walk_machine,
    compile_circuit,
    gate,
    inline_gate,
    sequential_to_mealy,
    walk_circuit,
)
from .qmm_format import (
    MachineFile,
    parse_circuit_text,
    parse_machine_file,
    parse_machine_text,
    serialize_machine,
)

__all__ = [
    "BlockHermitian",
    "CheckReport",
    "DimensionError",
    "ExperimentTrace",
    "GateApplication",
    "InputBasis",
    "InputState",
    "MachineFile",
    "MachineValidationError",
    "OracleReport",
    "ParseError",
    "QmeqError",
    "QuantumMealyMachine",
    "ResourceLimitError",
    "SPAN_TOL",
    "SequentialCircuit",
    "SpanBasis",
    "UsageError",
    "apply_superoperator",
    "build_difference_operator",
    "build_walk_machine",
    "check_equivalence",
    "compile_circuit",
    "experiment_distribution",
    "gate",
    "hermitian_vectorize",
    "inline_gate",
    "k_equivalent_bruteforce",
    "parse_circuit_text",
    "parse_machine_file",
    "parse_machine_text",
    "partial_trace_left",
    "pure_state_basis",
    "sample_counts",
    "sample_run",
    "sequential_to_mealy",
    "serialize_machine",
    "span_dimension_profile",
    "step",
    "sum_machines",
    "trace_order",
    "validate_machine",
    "walk_circuit",
]
