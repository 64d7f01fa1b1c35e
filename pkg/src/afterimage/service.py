"""HTTP service exposing experiment sessions and rendered panels.

All state lives in the injected ExperimentStore; handlers translate
between wire models and store calls, nothing more. Error mapping:
unknown session/trial is 404, an operation illegal in the current
phase is 409, bad values are 400 (pydantic validation stays 422).
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .experiment import (
    ExperimentStore,
    InvalidTransitionError,
    UnknownSessionError,
    UnknownTrialError,
)
from .model import BaselineScheme
from .render import BlurSettings, Geometry, encode_png
from .schemas import (
    ChoiceRequest,
    CreateSessionRequest,
    OutcomeModel,
    ScoresResponse,
    SessionResponse,
    TrialStateResponse,
    outcome_model,
    scores_response,
    session_response,
    trial_state_response,
)

PANEL_NAMES = ("stimulus", "new_field", "left", "right")


def create_app(
    store: ExperimentStore | None = None,
    geometry: Geometry = Geometry(),
    blur: BlurSettings = BlurSettings(),
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the application around one store instance."""
    if store is None:
        store = ExperimentStore()
    app = FastAPI(title="afterimage experiment service", docs_url=None, redoc_url=None)

    @app.exception_handler(UnknownSessionError)
    async def _unknown_session(request: Request, exc: UnknownSessionError):
        return JSONResponse(status_code=404, content={"detail": f"unknown session: {exc}"})

    @app.exception_handler(UnknownTrialError)
    async def _unknown_trial(request: Request, exc: UnknownTrialError):
        return JSONResponse(status_code=404, content={"detail": f"unknown trial: {exc}"})

    @app.exception_handler(InvalidTransitionError)
    async def _invalid_transition(request: Request, exc: InvalidTransitionError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", response_model=SessionResponse, status_code=201)
    def create_session(body: CreateSessionRequest) -> SessionResponse:
        session = store.create_session(
            scheme=BaselineScheme(body.scheme),
            seed=body.seed,
            metadata=body.metadata.to_domain() if body.metadata else None,
            adapt_seconds=body.adapt_seconds,
            shuffle=body.shuffle,
        )
        return session_response(session, store.now())

    @app.get("/sessions/{session_id}", response_model=SessionResponse)
    def get_session(session_id: str) -> SessionResponse:
        return session_response(store.get_session(session_id), store.now())

    @app.post(
        "/sessions/{session_id}/trials/{trial_id}/start",
        response_model=TrialStateResponse,
    )
    def start_trial(session_id: str, trial_id: str) -> TrialStateResponse:
        store.start_trial(session_id, trial_id)
        now = store.now()
        return trial_state_response(store.trial_state(session_id, trial_id), now)

    @app.get(
        "/sessions/{session_id}/trials/{trial_id}/state",
        response_model=TrialStateResponse,
    )
    def trial_state(session_id: str, trial_id: str) -> TrialStateResponse:
        return trial_state_response(store.trial_state(session_id, trial_id), store.now())

    @app.post(
        "/sessions/{session_id}/trials/{trial_id}/choice",
        response_model=OutcomeModel,
    )
    def submit_choice(session_id: str, trial_id: str, body: ChoiceRequest) -> OutcomeModel:
        store.submit_side_choice(session_id, trial_id, body.choice)
        return outcome_model(store.trial_state(session_id, trial_id))

    @app.post(
        "/sessions/{session_id}/trials/{trial_id}/redo",
        response_model=TrialStateResponse,
    )
    def redo_trial(session_id: str, trial_id: str) -> TrialStateResponse:
        store.redo_trial(session_id, trial_id)
        return trial_state_response(store.trial_state(session_id, trial_id), store.now())

    @app.get("/sessions/{session_id}/trials/{trial_id}/panels")
    def trial_panels(
        session_id: str,
        trial_id: str,
        panel: str = Query(..., description="one of: " + ", ".join(PANEL_NAMES)),
    ) -> Response:
        if panel not in PANEL_NAMES:
            return JSONResponse(
                status_code=400,
                content={"detail": f"unknown panel {panel!r}; expected one of {PANEL_NAMES}"},
            )
        panels = store.trial_panels(session_id, trial_id, geometry=geometry, blur=blur)
        png = encode_png(panels.as_dict()[panel])
        # Panels flip content when the phase flips; caching would show
        # stale gray panels after the countdown.
        return Response(content=png, media_type="image/png", headers={"Cache-Control": "no-store"})

    @app.get("/scores", response_model=ScoresResponse)
    def scores() -> ScoresResponse:
        return scores_response(store.aggregate_scores())

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/")
        def index() -> dict:
            return {
                "service": "afterimage experiment service",
                "endpoints": [
                    "POST /sessions",
                    "GET /sessions/{session_id}",
                    "POST /sessions/{session_id}/trials/{trial_id}/start",
                    "GET /sessions/{session_id}/trials/{trial_id}/state",
                    "POST /sessions/{session_id}/trials/{trial_id}/choice",
                    "POST /sessions/{session_id}/trials/{trial_id}/redo",
                    "GET /sessions/{session_id}/trials/{trial_id}/panels?panel=…",
                    "GET /scores",
                ],
            }

    return app
