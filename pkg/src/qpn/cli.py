"""Command-line client for the engine.

A thin client over the service layer: arguments become a request model,
the request runs in-process by default or against a running server via
--server, and the response renders as text or as the structured wire
payload.

Exit status contract: 0 success; 1 domain outcomes (no ambiguity to
explain, disconnected evidence, oracle counterexamples); 2 usage,
parse, or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from qpn.errors import QpnError
from qpn.render import render_explanation, render_signs
from qpn.service import ops
from qpn.service.schemas import (
    CheckRequest,
    CheckResponse,
    ExplainRequest,
    ExplainResponse,
    NetworkModel,
    PropagateRequest,
    PropagateResponse,
    RelevantRequest,
    RelevantResponse,
    TablesModel,
)

_OK, _DOMAIN, _USAGE = 0, 1, 2


def _assignment(text: str) -> tuple[str, bool]:
    node, sep, value = text.partition("=")
    if not sep or not node or value not in ("true", "false"):
        raise argparse.ArgumentTypeError(
            f"expected NODE=true|false, got {text!r}"
        )
    return node, value == "true"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpn",
        description="Qualitative probabilistic network engine.",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        help="send the request to a running service instead of running in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        # Also accepted after the subcommand; SUPPRESS keeps a value
        # given before it from being clobbered by the default.
        p.add_argument(
            "--server", metavar="URL", default=argparse.SUPPRESS,
            help="send the request to a running service",
        )
        p.add_argument("-n", "--network", required=True, help="network file")
        p.add_argument(
            "--observe",
            action="append",
            default=[],
            type=_assignment,
            metavar="NODE=true|false",
            help="previously observed node (repeatable)",
        )
        p.add_argument(
            "--evidence",
            required=True,
            type=_assignment,
            metavar="NODE=true|false",
            help="newly observed node and value",
        )
        p.add_argument("--interest", required=True, help="node of interest")
        p.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="output format",
        )

    p = sub.add_parser("propagate", help="propagate the evidence sign")
    common(p)
    p.add_argument("--trace", action="store_true", help="append the message log")

    p = sub.add_parser("explain", help="explain an unresolved trade-off")
    common(p)
    p.add_argument("--depth", type=int, default=1, help="recursion depth")

    p = sub.add_parser("relevant", help="emit the relevant sub-network")
    common(p)

    p = sub.add_parser("check", help="verify signs against exact posteriors")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--tables",
        help="probability tables file; check against these instead of sampling",
    )
    return parser


def _read_file(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(path)
    return p.read_text()


def _network_model(path: str) -> NetworkModel:
    payload = json.loads(_read_file(path))
    return NetworkModel.model_validate(payload)


def _dispatch(args, request):
    routes = {
        PropagateRequest: ("/propagate", ops.run_propagate, PropagateResponse),
        ExplainRequest: ("/explain", ops.run_explain, ExplainResponse),
        RelevantRequest: ("/relevant", ops.run_relevant, RelevantResponse),
        CheckRequest: ("/check", ops.run_check, CheckResponse),
    }
    path, local, response_type = routes[type(request)]
    if args.server:
        import httpx

        reply = httpx.post(
            args.server.rstrip("/") + path,
            json=request.model_dump(mode="json", by_alias=True),
            timeout=300.0,
        )
        if reply.status_code != 200:
            detail = reply.json().get("detail", reply.text)
            raise QpnError(str(detail))
        return response_type.model_validate(reply.json())
    return local(request)


def _emit_structured(response) -> None:
    print(
        json.dumps(
            response.model_dump(mode="json", by_alias=True),
            indent=2,
            sort_keys=True,
        )
    )


def _run(args) -> int:
    model = _network_model(args.network)
    evidence = {"node": args.evidence[0], "value": args.evidence[1]}
    observed = dict(args.observe)
    base = dict(
        network=model, observed=observed, evidence=evidence, interest=args.interest
    )

    if args.command == "propagate":
        response = _dispatch(args, PropagateRequest(**base, trace=args.trace))
        if args.format == "structured":
            _emit_structured(response)
        else:
            for line in render_signs(response.signs):
                print(line)
            if response.trace is not None:
                print("trace:")
                for line in response.trace:
                    print(f"  {line}")
        return _OK

    if args.command == "explain":
        response = _dispatch(args, ExplainRequest(**base, depth=args.depth))
        if args.format == "structured":
            _emit_structured(response)
            return _OK if response.outcome == "explained" else _DOMAIN
        if response.outcome == "no-ambiguity":
            sign = response.signs.get(args.interest, "?")
            print(
                f"no ambiguity to explain: sign[{args.interest}] = {sign}"
            )
            return _DOMAIN
        for line in render_explanation(response.explanation.model_dump()):
            print(line)
        return _OK

    if args.command == "relevant":
        response = _dispatch(args, RelevantRequest(**base))
        if args.format == "structured":
            _emit_structured(response)
            return _OK if response.outcome == "ok" else _DOMAIN
        if response.outcome == "disconnected":
            print(f"empty relevant network: {response.detail}")
            return _DOMAIN
        print(
            json.dumps(
                response.network.model_dump(mode="json", by_alias=True),
                indent=2,
                sort_keys=True,
            )
        )
        return _OK

    if args.command == "check":
        tables = None
        if args.tables:
            tables = TablesModel.model_validate(json.loads(_read_file(args.tables)))
        response = _dispatch(
            args,
            CheckRequest(**base, trials=args.trials, seed=args.seed, tables=tables),
        )
        if args.format == "structured":
            _emit_structured(response)
        else:
            for line in response.lines:
                print(line)
        return _OK if response.passed else _DOMAIN

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "server"):
        args.server = None
    try:
        return _run(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc}", file=sys.stderr)
        return _USAGE
    except json.JSONDecodeError as exc:
        print(
            f"error: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}",
            file=sys.stderr,
        )
        return _USAGE
    except QpnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE
    except Exception as exc:  # pydantic validation and friends
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE


if __name__ == "__main__":
    sys.exit(main())
