"""HTTP service over the search engine.

Thin by design: endpoints translate request parameters, call the engine, and
round scores to three decimals at this boundary only. Result order always
equals the in-process ranking; errors carry stable top-level codes.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import DEFAULT_LIMIT, SearchEngine, WeightsBundle
from .errors import SearchEngineError
from .features import FeatureId
from .scoring import EngineVariant, ScoredTrial
from .weights import bundle_to_document, load_weights_file

_STATUS_BY_CODE = {
    "empty_query": 400,
    "unknown_variant": 400,
    "invalid_limit": 400,
    "invalid_request": 400,
    "load_error": 400,
    "unknown_condition": 404,
    "unknown_trial": 404,
    "trial_not_linked": 404,
}


class RequestError(SearchEngineError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _display(score: float) -> float:
    return round(score, 3)


def _parse_variant(raw: str) -> EngineVariant:
    try:
        return EngineVariant(raw.lower())
    except ValueError:
        names = ", ".join(v.value for v in EngineVariant)
        raise RequestError("unknown_variant", f"unknown variant {raw!r}; expected one of: {names}")


def _result_row(st: ScoredTrial) -> dict:
    return {
        "nct_id": st.nct_id,
        "title": st.title,
        "score": _display(st.e_ct),
        "explanations": [s.text for s in st.explanations],
    }


def create_app(
    engine: SearchEngine,
    weights_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="trialexplain", docs_url=None, redoc_url=None)
    state = {"weights_path": Path(weights_path) if weights_path else None}

    @app.exception_handler(SearchEngineError)
    async def on_domain_error(request: Request, exc: SearchEngineError) -> JSONResponse:
        body: dict = {"code": exc.code, "message": str(exc)}
        suggestions = getattr(exc, "suggestions", None)
        if suggestions:
            body["suggestions"] = suggestions
        return JSONResponse(status_code=_STATUS_BY_CODE.get(exc.code, 500), content=body)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": str(exc.errors()[:1])},
        )

    @app.get("/api/search")
    async def search(q: str = "", variant: str = "amsterdam", limit: int = DEFAULT_LIMIT) -> dict:
        parsed = _parse_variant(variant)
        if limit < 1:
            raise RequestError("invalid_limit", "limit must be a positive integer")
        outcome = engine.search(q, parsed, limit)
        return {
            "query": outcome.query,
            "cui": outcome.cui,
            "condition_name": outcome.condition_name,
            "variant": outcome.variant.value,
            "results": [_result_row(st) for st in outcome.results],
            "total": outcome.total,
        }

    @app.get("/api/trials/{nct_id}")
    async def trial_detail(nct_id: str, q: str = "") -> dict:
        st = engine.trial_detail(nct_id, q)
        record = engine.corpus.trials[st.nct_id]
        return {
            "nct_id": st.nct_id,
            "title": st.title,
            "cui": st.cui,
            "trial": {
                "brief_summary": record.brief_summary,
                "stage": record.stage,
                "overall_status": record.overall_status,
                "primary_purpose": record.primary_purpose,
                "publication_count": record.publication_count,
            },
            "E_it": _display(st.e_it),
            "E_dtc": _display(st.e_dtc),
            "E_ct": _display(st.e_ct),
            "feature_vector": {
                f.value: {"raw": st.feature_vector.raw(f), "score": _display(st.feature_vector.score(f))}
                for f in FeatureId
            },
            "explanations": [
                {"feature": s.feature.value, "text": s.text, "weight": _display(s.weight)}
                for s in st.explanations
            ],
        }

    @app.get("/api/weights")
    async def weights() -> dict:
        bundle = engine.bundle
        return bundle_to_document(bundle.table, bundle.prefs)

    @app.get("/api/health")
    async def health() -> dict:
        return {
            "status": "ok",
            "trials": len(engine.corpus),
            "concepts": len(engine.graph.concepts),
        }

    @app.post("/api/admin/reload-weights")
    async def reload_weights(body: dict | None = None) -> dict:
        override = (body or {}).get("path")
        path = Path(override) if override else state["weights_path"]
        if path is None:
            raise RequestError("load_error", "no weights file configured to reload from")
        table, prefs = load_weights_file(path)
        engine.replace_weights(WeightsBundle(table, prefs))
        if override:
            state["weights_path"] = path
        return {
            "status": "reloaded",
            "path": str(path),
            "tiers": {f.value: table.tiers[f].value for f in FeatureId},
        }

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
