"""FastAPI application exposing the engine.

Networks are immutable per request, so every endpoint is safe to call
concurrently.  Run with: uvicorn qpn.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from qpn.errors import (
    AmbiguousInfluenceError,
    BudgetError,
    NetworkFormatError,
    QuantifyError,
    QueryError,
)
from qpn.service import ops
from qpn.service.schemas import (
    CheckRequest,
    CheckResponse,
    ExplainRequest,
    ExplainResponse,
    PropagateRequest,
    PropagateResponse,
    RelevantRequest,
    RelevantResponse,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(
    title="qpn engine",
    description=(
        "Sign propagation over qualitative probabilistic networks, "
        "trade-off isolation with symbolic explanations, and a numeric "
        "soundness oracle."
    ),
    version="0.1.0",
)

_REJECTED = (
    NetworkFormatError,
    QueryError,
    AmbiguousInfluenceError,
    BudgetError,
    QuantifyError,
)


def _guard(fn, req):
    try:
        return fn(req)
    except _REJECTED as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(req: ValidateRequest) -> ValidateResponse:
    return _guard(ops.run_validate, req)


@app.post("/propagate", response_model=PropagateResponse)
def propagate_endpoint(req: PropagateRequest) -> PropagateResponse:
    return _guard(ops.run_propagate, req)


@app.post("/relevant", response_model=RelevantResponse)
def relevant_endpoint(req: RelevantRequest) -> RelevantResponse:
    return _guard(ops.run_relevant, req)


@app.post("/explain", response_model=ExplainResponse)
def explain_endpoint(req: ExplainRequest) -> ExplainResponse:
    return _guard(ops.run_explain, req)


@app.post("/check", response_model=CheckResponse)
def check_endpoint(req: CheckRequest) -> CheckResponse:
    return _guard(ops.run_check, req)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app)
