"""HTTP service wrapping the checker.

All endpoints are plain request/response (no state on the server); machine
descriptions are sent as .qmm/.qc text.  Routes are sync functions on
purpose: FastAPI runs them in its threadpool, so a long check does not
stall the event loop.
"""

from __future__ import annotations

import re

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .basis import pure_state_basis
from .checker import check_equivalence
from .circuits import build_walk_machine
from .errors import (
    DimensionError,
    MachineValidationError,
    ParseError,
    QmeqError,
    ResourceLimitError,
    UsageError,
)
from .mealy import sample_counts
from .oracle import k_equivalent_bruteforce
from .qmm_format import MachineFile, parse_machine_text, serialize_machine
from .schemas import (
    CaseResult,
    CheckRequest,
    CheckResponse,
    ErrorInfo,
    GenWalkRequest,
    GenWalkResponse,
    HealthResponse,
    OracleCheckRequest,
    OracleCheckResponse,
    SelftestRequest,
    SelftestResponse,
    SimulateRequest,
    SimulateResponse,
)
from .selftest import run_case, select_cases


def _error_info(exc: Exception) -> ErrorInfo:
    if isinstance(exc, ParseError):
        return ErrorInfo(category="parse", message=str(exc), line=exc.line, column=exc.column)
    if isinstance(exc, ResourceLimitError):
        return ErrorInfo(category="resource", message=str(exc))
    if isinstance(exc, (MachineValidationError, DimensionError)):
        return ErrorInfo(category="validation", message=str(exc))
    return ErrorInfo(category="usage", message=str(exc))


def _pair(req) -> tuple[MachineFile, MachineFile]:
    return parse_machine_text(req.machine1), parse_machine_text(req.machine2)


def _input_sequence(mf: MachineFile, spec: str):
    """Resolve a whitespace/comma separated label sequence to input states."""
    labels = [t for t in re.split(r"[,\s]+", spec) if t]
    if not labels:
        raise UsageError("empty input sequence")
    by_label = {s.label: s for s in pure_state_basis(mf.machine.input_dim).states}
    seq = []
    for lab in labels:
        if lab not in by_label:
            known = ", ".join(by_label)
            raise UsageError(f"unknown input label {lab!r}; known labels: {known}")
        seq.append(by_label[lab])
    return seq


def _join(labels) -> str:
    return "".join(labels) if all(len(x) == 1 for x in labels) else ",".join(labels)


def create_app() -> FastAPI:
    app = FastAPI(title="qmeq", version=__version__)

    @app.exception_handler(QmeqError)
    async def _qmeq_error(request: Request, exc: QmeqError):
        return JSONResponse(status_code=400, content={"detail": _error_info(exc).model_dump()})

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(version=__version__)

    @app.post("/v1/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        mf1, mf2 = _pair(req)
        report = check_equivalence(
            mf1.machine,
            mf2.machine,
            mf1.state(req.state1),
            mf2.state(req.state2),
            early_abort=req.early_abort,
            tolerance=req.tolerance,
        )
        return CheckResponse.from_report(report)

    @app.post("/v1/oracle-check", response_model=OracleCheckResponse)
    def oracle_check(req: OracleCheckRequest) -> OracleCheckResponse:
        mf1, mf2 = _pair(req)
        report = k_equivalent_bruteforce(
            mf1.machine,
            mf2.machine,
            mf1.state(req.state1),
            mf2.state(req.state2),
            max_len=req.max_len,
            tolerance=req.tolerance,
            node_cap=req.node_cap,
        )
        return OracleCheckResponse.from_report(report)

    @app.post("/v1/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        mf = parse_machine_text(req.machine)
        seq = _input_sequence(mf, req.inputs)
        counts = sample_counts(mf.machine, mf.state(req.state), seq, req.shots, req.seed)
        return SimulateResponse(
            shots=req.shots,
            seed=req.seed,
            inputs=[s.label for s in seq],
            counts={_join(k): v for k, v in counts.items()},
            frequencies={_join(k): v / req.shots for k, v in counts.items()},
            outcome_labels=list(mf.machine.outcomes),
        )

    @app.post("/v1/gen-walk", response_model=GenWalkResponse)
    def gen_walk(req: GenWalkRequest) -> GenWalkResponse:
        machine, kets = build_walk_machine(req.size, req.coin)
        text = serialize_machine(
            machine,
            kets,
            header=f"walk machine: cycle size {req.size}, coin {req.coin}",
        )
        return GenWalkResponse(qmm=text, suggested_name=f"walk{req.size}_{req.coin}.qmm")

    @app.post("/v1/selftest", response_model=SelftestResponse)
    def selftest(req: SelftestRequest) -> SelftestResponse:
        results = []
        for case in select_cases(req.cases):
            report = run_case(case, early_abort=req.early_abort, tolerance=req.tolerance)
            results.append(
                CaseResult(
                    index=case.index,
                    size=case.size,
                    coin1=case.coin1,
                    state1=case.state1,
                    coin2=case.coin2,
                    state2=case.state2,
                    expected=case.expected,
                    verdict=report.verdict,
                    passed=report.verdict == case.expected,
                    basis_size=report.basis_size,
                    elapsed_s=report.elapsed_s,
                )
            )
        return SelftestResponse(cases=results, all_pass=all(r.passed for r in results))

    return app


app = create_app()
