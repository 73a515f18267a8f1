"""HTTP facade for the planner.

Endpoints:

* ``GET  /api/catalog``  -- courses, groups and calendar parameters
* ``POST /api/plan``     -- transcript + preferences -> per-term plan
* ``POST /api/predict``  -- transcript -> grade estimates and eligible set

The server is stateless: every request carries the full transcript and
preference set (including accumulated edits), so identical requests give
identical plans.  Error responses carry a machine-readable ``code`` and,
where applicable, the conflicting constraint ``tags``.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .builder import (
    GradeEstimates,
    InfeasibleByConstruction,
    Preferences,
    Priority,
    build_model,
)
from .catalog import Catalog, CatalogError, Transcript, TranscriptEntry
from .planning import decode, render_text, summarize, validate
from .rules import RuleSet, predict
from .solver import Solution, SolverConfig, SolveStatus, solve
from .terms import TermError, term_index, term_token


class TranscriptEntryIn(BaseModel):
    code: str
    grade: float
    term: int | str = "TRANSFER"  # term number, token, or TRANSFER


class PreferencesIn(BaseModel):
    objective: str = "gpa"  # gpa | time
    honors: bool = False
    summers_off: bool = False
    max_courses_per_term: Optional[int] = None
    thesis_companion_max: Optional[int] = None
    desired: list[str] = Field(default_factory=list)
    rejected: list[str] = Field(default_factory=list)
    pins: dict[str, int | str] = Field(default_factory=dict)
    windows: dict[str, list[int]] = Field(default_factory=dict)
    concentration: Optional[str] = None


class PlanRequest(BaseModel):
    transcript: list[TranscriptEntryIn] = Field(default_factory=list)
    current_term: Optional[int | str] = None
    preferences: PreferencesIn = Field(default_factory=PreferencesIn)


class PredictRequest(BaseModel):
    transcript: list[TranscriptEntryIn] = Field(default_factory=list)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, tags: list[str] = ()):  # noqa: B006
        self.status = status
        self.code = code
        self.message = message
        self.tags = list(tags)


def _term_number(value: int | str, catalog: Catalog) -> int:
    if isinstance(value, int):
        return value
    return term_index(value, catalog.anchor)


def _transcript(entries: list[TranscriptEntryIn], catalog: Catalog,
                current_term: Optional[int | str] = None) -> Transcript:
    parsed = []
    seen: set[str] = set()
    for entry in entries:
        code = catalog.resolve(entry.code)
        if code in seen:
            raise ApiError(400, "bad-transcript", f"duplicate transcript course {code}")
        seen.add(code)
        if not 0.0 <= entry.grade <= 4.0:
            raise ApiError(400, "bad-transcript", f"grade out of range for {code}")
        term = 0 if entry.term == "TRANSFER" else _term_number(entry.term, catalog)
        parsed.append(TranscriptEntry(code=code, grade=round(entry.grade, 2), term=term))
    now = (
        _term_number(current_term, catalog)
        if current_term is not None
        else max((e.term for e in parsed), default=0) + 1
    )
    return Transcript(entries=parsed, current_term=now)


def _preferences(prefs: PreferencesIn, catalog: Catalog) -> Preferences:
    try:
        priority = Priority(prefs.objective)
    except ValueError:
        raise ApiError(400, "bad-preferences", f"unknown objective {prefs.objective!r}") from None
    return Preferences(
        objective_priority=priority,
        honors=prefs.honors,
        summers_off=prefs.summers_off,
        max_courses_per_term=prefs.max_courses_per_term,
        thesis_companion_max=prefs.thesis_companion_max,
        desired=set(prefs.desired),
        rejected=set(prefs.rejected),
        pins={c: _term_number(t, catalog) for c, t in prefs.pins.items()},
        windows={c: frozenset(ts) for c, ts in prefs.windows.items()},
        concentration=prefs.concentration,
    )


def create_app(
    catalog: Catalog,
    ruleset: Optional[RuleSet] = None,
    solver_config: Optional[SolverConfig] = None,
) -> FastAPI:
    app = FastAPI(title="degreeplan")
    ruleset = ruleset or RuleSet()

    @app.exception_handler(ApiError)
    async def _api_error(_, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "tags": exc.tags},
        )

    @app.get("/api/catalog")
    def get_catalog():
        return {
            "anchor": term_token(1, catalog.anchor),
            "s_max": catalog.s_max,
            "total_credits": catalog.total_credits,
            "libed_credits": catalog.libed_credits,
            "max_credits_per_term": catalog.max_credits_per_term,
            "max_credits_per_term_honors": catalog.max_credits_per_term_honors,
            "terms": [
                {"s": s, "token": term_token(s, catalog.anchor)}
                for s in range(1, catalog.s_max + 1)
            ],
            "courses": [
                {
                    "code": c.code,
                    "title": c.title,
                    "credits": c.credits,
                    "difficulty": c.difficulty,
                    "offered": sorted(c.offered),
                    "flags": sorted(f.value for f in c.flags),
                }
                for c in catalog.courses.values()
            ],
            "groups": [
                {
                    "name": g.name,
                    "kind": g.kind.value,
                    "mode": g.mode.value,
                    "count": g.count,
                    "per_term": g.per_term,
                    "members": g.members,
                }
                for g in catalog.groups
            ],
        }

    @app.post("/api/predict")
    def handle_predict(request: PredictRequest):
        transcript = _wrap_catalog_errors(lambda: _transcript(request.transcript, catalog))
        estimates = predict(ruleset, transcript.grades())
        return {
            "estimates": estimates.values,
            "eligible": sorted(estimates.eligible(transcript.passed_codes())),
            "threshold": estimates.threshold,
        }

    @app.post("/api/plan")
    def handle_plan(request: PlanRequest):
        transcript = _wrap_catalog_errors(
            lambda: _transcript(request.transcript, catalog, request.current_term)
        )
        prefs = _wrap_catalog_errors(lambda: _preferences(request.preferences, catalog))
        estimates = predict(ruleset, transcript.grades())
        try:
            model, varmap = build_model(catalog, transcript, prefs, estimates)
        except InfeasibleByConstruction as exc:
            raise ApiError(409, "infeasible", str(exc), exc.tags) from exc
        except (CatalogError, ValueError) as exc:
            raise ApiError(400, "bad-request", str(exc)) from exc
        solution = solve(model, solver_config)
        if solution.status is SolveStatus.INFEASIBLE:
            tags = [
                row.tag for row in model.constraints
                if row.tag.startswith(("desired:", "pin:", "window:"))
            ]
            raise ApiError(409, "infeasible", "no schedule satisfies all constraints", tags)
        if solution.status is SolveStatus.TIME_LIMIT:
            raise ApiError(503, "time-limit", "solver hit its time limit")
        plan = decode(solution, varmap, catalog, estimates)
        violations = validate(plan, catalog, transcript, prefs, estimates)
        if violations:
            # invariant breach: an optimal solution must always validate
            raise ApiError(
                500, "validator-breach",
                "; ".join(str(v) for v in violations),
                [v.code for v in violations],
            )
        summary = summarize(plan, catalog, estimates)
        n_vars, n_bin, n_cont, n_rows = model.stats()
        return {
            "status": solution.status.value,
            "objective": solution.objective,
            "solve_time": solution.solve_time,
            "stats": {
                "variables": n_vars,
                "binary": n_bin,
                "continuous": n_cont,
                "constraints": n_rows,
            },
            "violations": [],
            "plan": {
                "completion_term": plan.completion_term,
                "prior": [c.code for c in plan.prior],
                "terms": [
                    {
                        "s": s,
                        "token": term_token(s, catalog.anchor),
                        "courses": [
                            {
                                "code": c.code,
                                "title": c.title,
                                "credits": c.credits,
                                "difficulty": c.difficulty,
                                "estimated_grade": c.estimated_grade,
                            }
                            for c in courses
                        ],
                    }
                    for s, courses in plan.by_term.items()
                ],
            },
            "summary": {
                "total_credits": summary.total_credits,
                "max_difficulty_gap": summary.max_difficulty_gap,
                "expected_gpa": summary.expected_gpa,
            },
            "text": render_text(plan, catalog, estimates),
        }

    return app


def _wrap_catalog_errors(fn):
    try:
        return fn()
    except ApiError:
        raise
    except (CatalogError, TermError, ValueError) as exc:
        raise ApiError(400, "bad-request", str(exc)) from exc
