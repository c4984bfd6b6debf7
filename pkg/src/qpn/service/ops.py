"""The operations behind the service endpoints.

Transport-free: the FastAPI app and the command-line client both call
these directly.  Domain errors propagate as engine exceptions; callers
map them onto their own error surface.
"""

from __future__ import annotations

from qpn.errors import EvidenceSeparatedError, NetworkFormatError
from qpn.network import Network, Query, validate
from qpn.pivotal import pivotal_pruning
from qpn.propagation import propagate
from qpn.relevance import relevant_network
from qpn.oracle import check_soundness, soundness_from_tables
from qpn.service.schemas import (
    CheckRequest,
    CheckResponse,
    ExplainRequest,
    ExplainResponse,
    ExplanationModel,
    NetworkModel,
    PropagateRequest,
    PropagateResponse,
    RelevantRequest,
    RelevantResponse,
    ValidateRequest,
    ValidateResponse,
)

__all__ = [
    "run_validate",
    "run_propagate",
    "run_relevant",
    "run_explain",
    "run_check",
]


def _load(model: NetworkModel) -> Network:
    net = model.to_network()
    violations = validate(net)
    if violations:
        raise NetworkFormatError(
            "network fails validation: " + "; ".join(violations)
        )
    return net


def _query(req) -> tuple[Network, Query]:
    net = _load(req.network)
    query = Query(req.observed, (req.evidence.node, req.evidence.value), req.interest)
    query.check_against(net)
    return net, query


def run_validate(req: ValidateRequest) -> ValidateResponse:
    return ValidateResponse(violations=validate(req.network.to_network()))


def run_propagate(req: PropagateRequest) -> PropagateResponse:
    net, query = _query(req)
    signs, trace = propagate(net, query)
    return PropagateResponse(
        signs={n: s.value for n, s in sorted(signs.items())},
        trace=trace.lines() if req.trace else None,
    )


def run_relevant(req: RelevantRequest) -> RelevantResponse:
    net, query = _query(req)
    try:
        rel = relevant_network(net, query)
    except EvidenceSeparatedError as exc:
        return RelevantResponse(outcome="disconnected", detail=str(exc))
    return RelevantResponse(outcome="ok", network=NetworkModel.from_network(rel))


def run_explain(req: ExplainRequest) -> ExplainResponse:
    net, query = _query(req)
    signs, _ = propagate(net, query)
    rendered_signs = {n: s.value for n, s in sorted(signs.items())}
    explanation = pivotal_pruning(net, query, recursion_depth=req.depth)
    if explanation is None:
        return ExplainResponse(outcome="no-ambiguity", signs=rendered_signs)
    return ExplainResponse(
        outcome="explained",
        explanation=ExplanationModel.model_validate(explanation.to_payload()),
        signs=rendered_signs,
    )


def run_check(req: CheckRequest) -> CheckResponse:
    net, query = _query(req)
    if req.tables is not None:
        report = soundness_from_tables(net, query, req.tables.to_quantification())
    else:
        report = check_soundness(net, query, trials=req.trials, seed=req.seed)
    return CheckResponse(
        passed=report.passed,
        trials_run=report.trials_run,
        skipped=report.skipped,
        lines=report.lines(),
    )
