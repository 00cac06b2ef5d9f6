"""Request/response models for the HTTP service.

Machine descriptions travel as .qmm/.qc text in request bodies, so the file
format is also the wire format.  Responses carry ``schema_version`` so
clients can detect incompatible changes.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Witness(BaseModel):
    """Distinguishing experiment; both fields are null on equivalence."""

    inputs: list[str] | None = None
    outputs: list[str] | None = None


class CheckRequest(BaseModel):
    machine1: str
    machine2: str
    state1: str
    state2: str
    early_abort: bool = True
    tolerance: float | None = Field(default=None, gt=0)


class CheckResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    verdict: Literal["equivalent", "not-equivalent"]
    witness: Witness
    p1: float | None
    p2: float | None
    basis_size: int
    sequences_examined: int
    elapsed_s: float
    tolerance: float
    early_abort: bool
    basis_labels: list[str]
    outcome_labels: list[str]

    @classmethod
    def from_report(cls, report) -> "CheckResponse":
        witness = Witness()
        if report.witness is not None:
            witness = Witness(
                inputs=list(report.witness.inputs),
                outputs=list(report.witness.outputs),
            )
        return cls(
            verdict=report.verdict,
            witness=witness,
            p1=report.p1,
            p2=report.p2,
            basis_size=report.basis_size,
            sequences_examined=report.sequences_examined,
            elapsed_s=report.elapsed_s,
            tolerance=report.tolerance,
            early_abort=report.early_abort,
            basis_labels=list(report.basis_labels),
            outcome_labels=list(report.outcome_labels),
        )


class OracleCheckRequest(BaseModel):
    machine1: str
    machine2: str
    state1: str
    state2: str
    max_len: int = Field(default=4, ge=0)
    tolerance: float | None = Field(default=None, gt=0)
    node_cap: int = Field(default=10_000_000, ge=1)


class OracleCheckResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    verdict: Literal["equivalent", "not-equivalent"]
    max_len: int
    witness: Witness
    p1: float | None
    p2: float | None
    nodes_examined: int

    @classmethod
    def from_report(cls, report) -> "OracleCheckResponse":
        witness = Witness()
        if report.witness is not None:
            witness = Witness(
                inputs=list(report.witness.inputs),
                outputs=list(report.witness.outputs),
            )
        return cls(
            verdict="equivalent" if report.equivalent else "not-equivalent",
            max_len=report.max_len,
            witness=witness,
            p1=report.p1,
            p2=report.p2,
            nodes_examined=report.nodes_examined,
        )


class SimulateRequest(BaseModel):
    machine: str
    state: str
    inputs: str  # whitespace/comma separated input-state labels
    shots: int = Field(default=1, ge=1)
    seed: int = 0


class SimulateResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    shots: int
    seed: int
    inputs: list[str]
    counts: dict[str, int]
    frequencies: dict[str, float]
    outcome_labels: list[str]


class GenWalkRequest(BaseModel):
    size: int = Field(ge=2)
    coin: Literal["H", "Y"] = "H"


class GenWalkResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    qmm: str
    suggested_name: str


class SelftestRequest(BaseModel):
    cases: list[int] | None = None
    early_abort: bool = True
    tolerance: float | None = Field(default=None, gt=0)


class CaseResult(BaseModel):
    index: int
    size: int
    coin1: str
    state1: str
    coin2: str
    state2: str
    expected: Literal["equivalent", "not-equivalent"]
    verdict: Literal["equivalent", "not-equivalent"]
    passed: bool
    basis_size: int
    elapsed_s: float


class SelftestResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    cases: list[CaseResult]
    all_pass: bool


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    version: str
    schema_version: int = SCHEMA_VERSION


class ErrorInfo(BaseModel):
    category: Literal["parse", "validation", "resource", "usage"]
    message: str
    line: int | None = None
    column: int | None = None
