"""HTTP/JSON API over the environment: task browsing, stateless case
generation keyed by (seed, index), verification, statistics, and the
review log. Errors use a uniform {code, message} envelope.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .catalog import TaskCatalog, catalog_stats, load_catalog_file, validate_catalog
from .generate import (
    EmptyCatalogFamily,
    GeneratedCase,
    GenerationExhausted,
    gen_case,
    gen_task_case,
)
from .grading import grade_answer
from .prompts import render_criteria, render_prompt
from .reviews import VALID_STATUSES, ReviewLog
from .seeding import SeededStream

DEFAULT_REVIEW_LOG = "reviews.jsonl"


class GenerateRequest(BaseModel):
    count: int = 1
    seed: int | None = None
    task: str | None = None
    family: str | None = None
    add_rule_ratio: float = 0.5


class VerifyRequest(BaseModel):
    response_text: str
    case: dict | None = None
    family: str | None = None
    target: str | None = None
    precision: int | None = None


class ReviewRequest(BaseModel):
    case_id: str
    status: str
    note: str = ""
    reviewer: str = ""


def _task_summary(catalog: TaskCatalog, name: str) -> dict:
    family = catalog.family_of(name)
    task = catalog.equations[name] if family == "equation" else catalog.scales[name]
    return {"name": name, "family": family, "category": task.category}


def _task_detail(catalog: TaskCatalog, name: str) -> dict:
    family = catalog.family_of(name)
    if family == "equation":
        task = catalog.equations[name]
        return {
            "name": name,
            "family": family,
            "category": task.category,
            "formula": task.formula,
            "explanation": task.explanation,
            "result": task.result,
            "precision": catalog.indicators[task.result].precision,
            "inputs": [
                {
                    "name": spec.name,
                    "label": spec.display_label,
                    "kind": spec.kind,
                    "range": list(spec.range) if spec.range else None,
                    "precision": spec.precision,
                    "unit": spec.unit,
                    "options": [list(o) for o in spec.options],
                }
                for spec in (catalog.indicators[i] for i in task.inputs)
            ],
        }
    scale = catalog.scales[name]
    return {
        "name": name,
        "family": family,
        "category": scale.category,
        "criteria": render_criteria(scale),
        "max_score": scale.max_score(),
        "items": [
            {"title": item.title, "mode": item.mode, "options": [list(o) for o in item.options]}
            for item in scale.items
        ],
    }


def create_app(
    catalog: TaskCatalog,
    review_log: ReviewLog,
    default_seed: int = 0,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="medcalc environment", version="1")

    @app.exception_handler(HTTPException)
    async def _http_error(request: Request, exc: HTTPException):
        code = {400: "bad_request", 404: "not_found"}.get(exc.status_code, "error")
        return JSONResponse(status_code=exc.status_code, content={"code": code, "message": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"code": "validation_error", "message": str(exc)})

    @app.get("/v1/tasks")
    def list_tasks():
        return {"tasks": [_task_summary(catalog, name) for name in catalog.task_names()]}

    @app.get("/v1/tasks/{name:path}")
    def task_detail(name: str):
        if catalog.family_of(name) is None:
            raise HTTPException(404, f"unknown task {name!r}")
        return _task_detail(catalog, name)

    def _case_record(case: GeneratedCase) -> dict:
        bundle = render_prompt(case, catalog)
        return {
            **case.to_dict(),
            "prompt": bundle.prompt,
            "template_id": bundle.template_id,
            # stateless generation is replayable, so no wall-clock stamp here;
            # timestamps live on review entries
            "created_at": None,
            "review_status": review_log.status_of(case.id),
            "review_note": review_log.note_of(case.id),
        }

    @app.post("/v1/cases:generate")
    def generate_cases(req: GenerateRequest):
        if req.count < 1:
            raise HTTPException(400, f"count must be >= 1, got {req.count}")
        if req.task is not None and catalog.family_of(req.task) is None:
            raise HTTPException(404, f"unknown task {req.task!r}")
        if req.family is not None and req.family not in ("equation", "scale"):
            raise HTTPException(400, f"family must be 'equation' or 'scale', got {req.family!r}")
        seed = req.seed if req.seed is not None else default_seed
        records = []
        for index in range(req.count):
            stream = SeededStream(seed, index)
            try:
                if req.task is not None:
                    case = gen_task_case(catalog, req.task, stream, req.add_rule_ratio)
                elif req.family is not None:
                    names = list(catalog.equations if req.family == "equation" else catalog.scales)
                    if not names:
                        raise HTTPException(400, f"catalog has no {req.family} tasks")
                    name = names[stream.rng.randrange(len(names))]
                    case = gen_task_case(catalog, name, stream, req.add_rule_ratio)
                else:
                    case = gen_case(catalog, stream, req.add_rule_ratio)
            except (GenerationExhausted, EmptyCatalogFamily) as exc:
                raise HTTPException(400, str(exc)) from exc
            records.append(_case_record(case))
        return {"cases": records}

    @app.post("/v1/verify")
    def verify(req: VerifyRequest):
        if req.case is not None:
            family = req.case.get("family")
            target = req.case.get("target")
        else:
            family, target = req.family, req.target
        if not family or target is None:
            raise HTTPException(400, "need either case or (family, target)")
        verdict = grade_answer(family, str(target), req.response_text)
        return {
            "extracted": verdict.extracted,
            "reward": verdict.reward,
            "outcome": verdict.outcome,
            "detail": verdict.detail,
        }

    @app.get("/v1/stats")
    def stats():
        return {"catalog": catalog_stats(catalog).to_dict(), "reviews": review_log.tallies()}

    @app.post("/v1/reviews")
    def post_review(req: ReviewRequest):
        if req.status not in VALID_STATUSES:
            raise HTTPException(400, f"status must be one of {VALID_STATUSES}, got {req.status!r}")
        if not req.case_id:
            raise HTTPException(400, "case_id must be non-empty")
        entry = review_log.append(req.case_id, req.status, req.note, req.reviewer)
        return entry.to_dict()

    @app.get("/v1/reviews")
    def list_reviews(status: str | None = None):
        if status is not None and status not in VALID_STATUSES:
            raise HTTPException(400, f"status must be one of {VALID_STATUSES}, got {status!r}")
        return {"reviews": [e.to_dict() for e in review_log.current(status)]}

    @app.get("/v1/reviews/{case_id}")
    def review_for_case(case_id: str):
        entry = review_log.latest(case_id)
        if entry is None:
            raise HTTPException(404, f"no review entries for case {case_id!r}")
        return entry.to_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    catalog_path: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    root_seed: int = 0,
    review_log_path: str | Path = DEFAULT_REVIEW_LOG,
    ui_dir: str | Path | None = None,
) -> None:
    """Validate the catalog, then run the service (refuses to start dirty)."""
    import uvicorn

    catalog = load_catalog_file(catalog_path)
    violations = validate_catalog(catalog)
    if violations:  # load_catalog_file already raises; belt and braces
        raise SystemExit(f"catalog has {len(violations)} violations; refusing to start")
    app = create_app(catalog, ReviewLog(review_log_path), root_seed, ui_dir)
    uvicorn.run(app, host=host, port=port)
