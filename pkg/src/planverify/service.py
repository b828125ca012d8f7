"""Stateless HTTP scoring service for external training loops.

Every request is self-contained: the spec, candidate plan text(s), and any
config overrides travel in the body, and the result payloads are exactly the
JSON projections used by the CLI.  Candidates may be raw strings (possibly
invalid JSON, which gates to zero reward) or already-decoded objects.
"""

from __future__ import annotations

import json
import math
import time

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from . import metrics, reward, schema, selection
from .config import EngineConfig
from .errors import PlanVerifyError

ENGINE_VERSION = "0.1.0"

MAX_CANDIDATES = 128
RESOLUTION_BOUNDS = (1e-4, 1.0)
TAU_BOUNDS = (0.0, 5.0)
EPSILON_BOUNDS = (1e-12, 1.0)


class _BadEnvelope(Exception):
    pass


def _as_text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return json.dumps(value)
    raise _BadEnvelope("plan/candidate entries must be strings or objects")


def _spec_from_body(body: dict) -> schema.DesignSpec:
    if "spec" not in body:
        raise _BadEnvelope("missing 'spec'")
    spec_value = body["spec"]
    if not isinstance(spec_value, (str, dict)):
        raise _BadEnvelope("'spec' must be a string or object")
    return schema.parse_spec(_as_text(spec_value))


def _engine_from_body(body: dict, base: EngineConfig) -> EngineConfig:
    overrides = body.get("config", {})
    if not isinstance(overrides, dict):
        raise _BadEnvelope("'config' must be an object")

    def bounded(key: str, bounds: tuple[float, float]):
        if key not in overrides:
            return None
        value = overrides[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _BadEnvelope(f"config.{key} must be a number")
        lo, hi = bounds
        if not lo <= value <= hi:
            raise _BadEnvelope(f"config.{key} outside server bounds [{lo}, {hi}]")
        return float(value)

    return base.with_overrides(
        resolution=bounded("resolution", RESOLUTION_BOUNDS),
        tau_adj=bounded("tau_adj", TAU_BOUNDS),
        epsilon=bounded("epsilon", EPSILON_BOUNDS),
    )


def _jsonsafe(value):
    """Replace non-finite floats (unparseable candidates rank at +inf) with null."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonsafe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonsafe(v) for v in value]
    return value


def _envelope(result, started: float) -> dict:
    return {
        "result": result,
        "engine_version": ENGINE_VERSION,
        "timing_ms": (time.perf_counter() - started) * 1000.0,
    }


def create_app(engine: EngineConfig | None = None) -> FastAPI:
    base = engine or EngineConfig()
    app = FastAPI(title="planverify", version=ENGINE_VERSION)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "engine_version": ENGINE_VERSION}

    @app.post("/v1/verify")
    def verify(body: dict = Body(...)):
        started = time.perf_counter()
        try:
            cfg = _engine_from_body(body, base)
            if "plan" not in body:
                raise _BadEnvelope("missing 'plan'")
            plan_text = _as_text(body["plan"])
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        try:
            spec = _spec_from_body(body)
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except PlanVerifyError as exc:
            return JSONResponse({"error": f"spec: {exc}"}, status_code=422)
        report = metrics.evaluate(spec, plan_text, cfg.adjacency, cfg.resolution)
        return _envelope(report.to_json(), started)

    def _candidates(body: dict) -> list[str]:
        if "candidates" not in body or not isinstance(body["candidates"], list):
            raise _BadEnvelope("missing 'candidates' array")
        if not body["candidates"]:
            raise _BadEnvelope("'candidates' must be non-empty")
        return [_as_text(c) for c in body["candidates"]]

    @app.post("/v1/reward")
    def reward_endpoint(body: dict = Body(...)):
        started = time.perf_counter()
        try:
            cfg = _engine_from_body(body, base)
            candidates = _candidates(body)
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        if len(candidates) > MAX_CANDIDATES:
            return JSONResponse(
                {"error": f"at most {MAX_CANDIDATES} candidates"}, status_code=413
            )
        try:
            spec = _spec_from_body(body)
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except PlanVerifyError as exc:
            return JSONResponse({"error": f"spec: {exc}"}, status_code=422)
        reward_cfg = cfg.reward_config()
        breakdowns = [reward.candidate_reward(spec, c, reward_cfg) for c in candidates]
        result: dict = {"candidates": [b.to_json() for b in breakdowns]}
        if body.get("group"):
            grp = reward.group_advantages([b.reward for b in breakdowns], reward_cfg.epsilon)
            result["group"] = grp.to_json()
        return _envelope(result, started)

    @app.post("/v1/select")
    def select(body: dict = Body(...)):
        started = time.perf_counter()
        try:
            cfg = _engine_from_body(body, base)
            candidates = _candidates(body)
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        if len(candidates) > MAX_CANDIDATES:
            return JSONResponse(
                {"error": f"at most {MAX_CANDIDATES} candidates"}, status_code=413
            )
        try:
            spec = _spec_from_body(body)
        except _BadEnvelope as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except PlanVerifyError as exc:
            return JSONResponse({"error": f"spec: {exc}"}, status_code=422)
        result = selection.best_of(spec, candidates, cfg.adjacency, cfg.resolution)
        return _envelope(_jsonsafe(result.to_json()), started)

    return app
