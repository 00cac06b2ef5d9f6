"""Command-line front end.

The CLI is a thin client of the HTTP service: every subcommand (except
``serve``) builds a request, sends it, and formats the response.  By default
requests go to an in-process instance of the app over an ASGI transport, so
no server needs to be running; pass ``--server URL`` to talk to a remote
one instead.

Exit codes: 0 equivalent/success, 1 not equivalent (or failed selftest),
2 usage/parse/validation error, 3 resource cap exceeded.  Stdout output is
deterministic for fixed inputs and seeds; timings go to stderr, and JSON
reports (``--json``) additionally carry the measured ``elapsed_s``.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

from .errors import QmeqError, ResourceLimitError, UsageError
from .linalg import PROB_FLOOR


def _tolerance() -> float | None:
    """Span tolerance override from QMEQ_TOL (affects verdict certification)."""
    raw = os.environ.get("QMEQ_TOL")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise UsageError(f"QMEQ_TOL must be a number, got {raw!r}") from None
    if value <= 0:
        raise UsageError("QMEQ_TOL must be positive")
    return value


def _call(server: str | None, path: str, payload: dict) -> tuple[int, dict]:
    async def go():
        if server:
            client = httpx.AsyncClient(base_url=server.rstrip("/"), timeout=None)
        else:
            from .service import create_app

            client = httpx.AsyncClient(
                transport=httpx.ASGITransport(app=create_app()),
                base_url="http://qmeq.internal",
                timeout=None,
            )
        async with client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(go())


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write_json(path: str, body: dict) -> None:
    text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _handle_error(status: int, body: dict) -> int:
    detail = body.get("detail")
    if isinstance(detail, dict) and "category" in detail:
        print(f"error [{detail['category']}]: {detail['message']}", file=sys.stderr)
        return 3 if detail["category"] == "resource" else 2
    print(f"error: HTTP {status}: {json.dumps(body, sort_keys=True)}", file=sys.stderr)
    return 2


def _join(labels) -> str:
    return "".join(labels) if all(len(x) == 1 for x in labels) else ",".join(labels)


def _num(value: float) -> str:
    """Probability for display; magnitudes under the branch floor print as 0."""
    if abs(value) < PROB_FLOOR:
        value = 0.0
    return format(value, ".12g")


def _print_witness(body: dict) -> None:
    witness = body["witness"]
    if witness["inputs"] is None:
        return
    print(f"witness: {_join(witness['inputs'])} / {_join(witness['outputs'])}")
    print(f"p1: {_num(body['p1'])}")
    print(f"p2: {_num(body['p2'])}")
    print(f"gap: {_num(abs(body['p1'] - body['p2']))}")


def _cmd_check(args) -> int:
    payload = {
        "machine1": _read_file(args.machine1),
        "machine2": _read_file(args.machine2),
        "state1": args.state1,
        "state2": args.state2,
        "early_abort": not args.no_early_abort,
        "tolerance": _tolerance(),
    }
    status, body = _call(args.server, "/v1/check", payload)
    if status != 200:
        return _handle_error(status, body)
    if args.json:
        _write_json(args.json, body)
    print(f"verdict: {body['verdict']}")
    _print_witness(body)
    print(f"basis size: {body['basis_size']}")
    print(f"sequences examined: {body['sequences_examined']}")
    print(f"elapsed: {body['elapsed_s']:.3f} s", file=sys.stderr)
    return 0 if body["verdict"] == "equivalent" else 1


def _cmd_oracle_check(args) -> int:
    payload = {
        "machine1": _read_file(args.machine1),
        "machine2": _read_file(args.machine2),
        "state1": args.state1,
        "state2": args.state2,
        "max_len": args.max_len,
        "node_cap": args.node_cap,
        "tolerance": _tolerance(),
    }
    status, body = _call(args.server, "/v1/oracle-check", payload)
    if status != 200:
        return _handle_error(status, body)
    if args.json:
        _write_json(args.json, body)
    print(f"verdict: {body['verdict']} (experiments up to length {body['max_len']})")
    _print_witness(body)
    print(f"nodes examined: {body['nodes_examined']}")
    return 0 if body["verdict"] == "equivalent" else 1


def _cmd_simulate(args) -> int:
    payload = {
        "machine": _read_file(args.machine),
        "state": args.state,
        "inputs": args.inputs,
        "shots": args.shots,
        "seed": args.seed,
    }
    status, body = _call(args.server, "/v1/simulate", payload)
    if status != 200:
        return _handle_error(status, body)
    if args.json:
        _write_json(args.json, body)
    print(f"inputs: {_join(body['inputs'])}")
    print(f"shots: {body['shots']}")
    print(f"seed: {body['seed']}")
    print("counts:")
    for key, count in body["counts"].items():
        print(f"  {key}  {count}  {_num(body['frequencies'][key])}")
    return 0


def _cmd_gen_walk(args) -> int:
    payload = {"size": args.size, "coin": args.coin}
    status, body = _call(args.server, "/v1/gen-walk", payload)
    if status != 200:
        return _handle_error(status, body)
    out = args.out or body["suggested_name"]
    if out == "-":
        sys.stdout.write(body["qmm"])
    else:
        Path(out).write_text(body["qmm"], encoding="utf-8")
        print(f"wrote {out}")
    return 0


def _parse_case_spec(spec: str) -> list[int]:
    cases: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, _, hi = part.partition("-")
            if not (lo.strip().isdigit() and hi.strip().isdigit()):
                raise UsageError(f"bad case range {part!r}")
            cases.extend(range(int(lo), int(hi) + 1))
        elif part.isdigit():
            cases.append(int(part))
        else:
            raise UsageError(f"bad case number {part!r}")
    if not cases:
        raise UsageError(f"no cases selected by {spec!r}")
    return cases


def _cmd_selftest(args) -> int:
    payload = {
        "cases": _parse_case_spec(args.cases) if args.cases else None,
        "early_abort": not args.no_early_abort,
        "tolerance": _tolerance(),
    }
    status, body = _call(args.server, "/v1/selftest", payload)
    if status != 200:
        return _handle_error(status, body)
    if args.json:
        _write_json(args.json, body)
    for case in body["cases"]:
        tag = "PASS" if case["passed"] else "FAIL"
        print(
            f"case {case['index']}: size {case['size']}  "
            f"{case['coin1']} {case['state1']}  vs  {case['coin2']} {case['state2']}"
            f"  ->  {case['verdict']}  [{tag}]"
        )
        print(f"case {case['index']} elapsed: {case['elapsed_s']:.3f} s", file=sys.stderr)
    passed = sum(c["passed"] for c in body["cases"])
    print(f"{passed}/{len(body['cases'])} cases passed")
    return 0 if body["all_pass"] else 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("qmeq.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmeq",
        description="Equivalence checking of sequential quantum circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p):
        p.add_argument("--server", help="URL of a running service (default: in-process)")
        p.add_argument("--json", metavar="PATH", help="also write the JSON report ('-' for stdout)")

    p = sub.add_parser("check", help="decide equivalence of two machines")
    p.add_argument("machine1")
    p.add_argument("machine2")
    p.add_argument("--state1", required=True, help="initial state name in machine 1")
    p.add_argument("--state2", required=True, help="initial state name in machine 2")
    p.add_argument("--no-early-abort", action="store_true", help="always saturate the span")
    add_server(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle-check", help="brute-force comparison up to a length bound")
    p.add_argument("machine1")
    p.add_argument("machine2")
    p.add_argument("--state1", required=True)
    p.add_argument("--state2", required=True)
    p.add_argument("--max-len", type=int, default=4, help="experiment length bound (default 4)")
    p.add_argument("--node-cap", type=int, default=10_000_000, help="enumeration budget")
    add_server(p)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("simulate", help="sample outcome sequences of one machine")
    p.add_argument("machine")
    p.add_argument("--state", required=True, help="initial state name")
    p.add_argument("--inputs", required=True, help="input labels, e.g. '+ 0 0' or '+,0,0'")
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    add_server(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("gen-walk", help="write a walk machine file")
    p.add_argument("--size", type=int, required=True, help="cycle size (power of two)")
    p.add_argument("--coin", choices=["H", "Y"], default="H")
    p.add_argument("-o", "--out", help="output path (default walk<size>_<coin>.qmm)")
    p.add_argument("--server", help="URL of a running service (default: in-process)")
    p.set_defaults(func=_cmd_gen_walk)

    p = sub.add_parser("selftest", help="run the built-in walk regression suite")
    p.add_argument("--cases", help="subset like '1-6' or '1,2,7' (default: all)")
    p.add_argument("--no-early-abort", action="store_true")
    add_server(p)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error [resource]: {exc}", file=sys.stderr)
        return 3
    except QmeqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
