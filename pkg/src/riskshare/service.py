"""HTTP facade for on-the-fly quoting and what-if evaluation.

Endpoints (JSON bodies, versioned under /v1):

* ``POST /v1/quote`` — solve or instantly approximate a contract for a
  probability vector.  ``mode="surrogate"`` answers from the loaded
  instant-quote model; ``mode="exact"`` runs solver trials synchronously
  under a wall-time budget and returns the best found so far with a
  ``budget_exhausted`` flag instead of erroring.
* ``POST /v1/evaluate`` — price an explicit contract (what-if edits).
* ``GET /v1/health`` and ``GET /v1/model``.

Responses are pure functions of (loaded models, request, seed); compute
time is reported in the ``X-Compute-Millis`` header so bodies stay
byte-identical across reruns.  Loaded models are immutable after
startup.
"""

from __future__ import annotations

import json
import time
from typing import Literal

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import surrogate as surr
from .cem import CemConfig, SolverError, run_trial, select_solution
from .lossmodel import ContractDesign, IncidentMix, SeverityModel, model_to_json
from .risk import RiskPreferences, quote_report

__all__ = ["create_app"]


class QuoteBody(BaseModel):
    probs: list[float]
    alpha: float = 0.95
    beta: float = 0.90
    mode: Literal["exact", "surrogate"] = "surrogate"
    trials: int = 10
    seed: int = 0
    cem: dict | None = None


class EvaluateBody(BaseModel):
    probs: list[float]
    alpha: float = 0.95
    beta: float = 0.90
    theta: list[int]
    d: list[float]


def _parse_levels(alpha: float, beta: float) -> RiskPreferences:
    try:
        return RiskPreferences(alpha=alpha, beta=beta)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _parse_mix(probs: list[float], k: int) -> IncidentMix:
    try:
        mix = IncidentMix(probs=tuple(probs))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    if mix.k != k:
        raise HTTPException(
            status_code=400, detail=f"expected {k} probabilities, got {mix.k}"
        )
    return mix


def create_app(
    sev: SeverityModel,
    surrogate_model: surr.SurrogateModel | None = None,
    default_mix: IncidentMix | None = None,
    cem_config: CemConfig | None = None,
    exact_budget_s: float = 120.0,
) -> FastAPI:
    """Build the service around immutable loaded models."""
    base_config = cem_config or CemConfig()
    app = FastAPI(title="riskshare quote service", version="1")

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/v1/model")
    def model() -> Response:
        return Response(
            content=model_to_json(sev, default_mix), media_type="application/json"
        )

    @app.post("/v1/quote")
    def quote(body: QuoteBody, response: Response) -> dict:
        started = time.monotonic()
        prefs = _parse_levels(body.alpha, body.beta)
        mix = _parse_mix(body.probs, sev.k)
        budget_exhausted = False
        fallback = False
        if body.mode == "surrogate":
            if surrogate_model is None:
                raise HTTPException(
                    status_code=409, detail="no surrogate model loaded"
                )
            pred = surr.predict(surrogate_model, mix)
            contract, fallback = pred.contract, pred.fallback
        else:
            if body.trials < 1:
                raise HTTPException(
                    status_code=400, detail="exact mode requires trials >= 1"
                )
            overrides = dict(body.cem or {})
            overrides["seed"] = body.seed
            try:
                config = CemConfig(**{
                    k: tuple(v) if isinstance(v, list) else v
                    for k, v in {**json.loads(base_config.to_json()), **overrides}.items()
                })
            except (TypeError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            results = []
            for i in range(body.trials):
                results.append(run_trial(mix, sev, prefs, config, seed=config.seed + i))
                if time.monotonic() - started > exact_budget_s:
                    budget_exhausted = i + 1 < body.trials
                    break
            if not results:  # pragma: no cover - budget cannot trip before trial 1
                raise HTTPException(status_code=500, detail=str(SolverError("no trials ran")))
            contract = select_solution([t.best_z for t in results], mix, sev, prefs)
        result = quote_report(contract, mix, sev, prefs)
        doc = result.to_dict()
        doc.update(
            mode=body.mode,
            seed=body.seed,
            budget_exhausted=budget_exhausted,
            fallback=fallback,
        )
        response.headers["X-Compute-Millis"] = str(
            round((time.monotonic() - started) * 1000.0, 3)
        )
        return doc

    @app.post("/v1/evaluate")
    def evaluate(body: EvaluateBody, response: Response) -> dict:
        started = time.monotonic()
        prefs = _parse_levels(body.alpha, body.beta)
        mix = _parse_mix(body.probs, sev.k)
        try:
            contract = ContractDesign(theta=tuple(body.theta), d=tuple(body.d))
            if contract.k != sev.k:
                raise ValueError(f"contract must cover {sev.k} types")
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        result = quote_report(contract, mix, sev, prefs)
        response.headers["X-Compute-Millis"] = str(
            round((time.monotonic() - started) * 1000.0, 3)
        )
        return result.to_dict()

    return app
