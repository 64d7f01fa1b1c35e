"""Wire models for the HTTP API, plus converters from domain objects.

Placement is deliberately absent from every response: the client
reports which side was clicked ("left"/"right") and the server resolves
it against the placement it drew, so the UI can never compute scores
locally.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .colors import color_name
from .experiment import (
    ScoreTable,
    Session,
    SubjectMetadata,
    Trial,
)

ColorTriple = tuple[float, float, float]


class SubjectMetadataModel(BaseModel):
    label: Optional[str] = None
    color_vision: Optional[str] = None

    def to_domain(self) -> SubjectMetadata:
        return SubjectMetadata(label=self.label, color_vision=self.color_vision)


class CreateSessionRequest(BaseModel):
    scheme: Literal["group1", "group2"] = "group2"
    seed: Optional[int] = None
    adapt_seconds: float = Field(default=20.0, gt=0)
    shuffle: bool = False
    metadata: Optional[SubjectMetadataModel] = None


class OutcomeModel(BaseModel):
    choice: Literal["picked_s1", "picked_s2", "almost_same"]
    s1_score: float
    s2_score: float
    redo_count: int
    decided_at: float


class TrialModel(BaseModel):
    trial_id: str
    c_ot: ColorTriple
    c_oi: ColorTriple
    c_n: ColorTriple
    adapt_seconds: float
    phase: Literal["idle", "adapting", "choosing", "completed"]
    remaining_seconds: float
    redo_count: int
    outcome: Optional[OutcomeModel] = None


class TrialStateResponse(TrialModel):
    # Clients time their countdown against this, not their own clock.
    server_time: float


class SessionResponse(BaseModel):
    session_id: str
    scheme: Literal["group1", "group2"]
    seed: int
    created_at: float
    shuffle: bool
    metadata: SubjectMetadataModel
    total_trials: int
    completed_trials: int
    trials: list[TrialModel]


class ChoiceRequest(BaseModel):
    choice: Literal["left", "right", "almost_same"]


class ScoreCellModel(BaseModel):
    c_ot: ColorTriple
    c_n: ColorTriple
    c_ot_name: Optional[str] = None
    c_n_name: Optional[str] = None
    s1_total: float
    s2_total: float
    completed: int


class ScoresResponse(BaseModel):
    cells: list[ScoreCellModel]


def outcome_model(trial: Trial) -> Optional[OutcomeModel]:
    if trial.outcome is None:
        return None
    o = trial.outcome
    return OutcomeModel(
        choice=o.choice.value,
        s1_score=o.s1_score,
        s2_score=o.s2_score,
        redo_count=o.redo_count,
        decided_at=o.decided_at,
    )


def trial_model(trial: Trial, now: float) -> TrialModel:
    stimulus = trial.spec.stimulus
    return TrialModel(
        trial_id=trial.spec.trial_id,
        c_ot=stimulus.c_ot.components(),
        c_oi=stimulus.c_oi.components(),
        c_n=stimulus.c_n.components(),
        adapt_seconds=trial.spec.adapt_seconds,
        phase=trial.phase(now).value,
        remaining_seconds=trial.remaining_seconds(now),
        redo_count=trial.redo_count,
        outcome=outcome_model(trial),
    )


def trial_state_response(trial: Trial, now: float) -> TrialStateResponse:
    return TrialStateResponse(server_time=now, **trial_model(trial, now).model_dump())


def session_response(session: Session, now: float) -> SessionResponse:
    return SessionResponse(
        session_id=session.session_id,
        scheme=session.scheme.value,
        seed=session.seed,
        created_at=session.created_at,
        shuffle=session.shuffle,
        metadata=SubjectMetadataModel(
            label=session.metadata.label, color_vision=session.metadata.color_vision
        ),
        total_trials=len(session.trials),
        completed_trials=session.completed_count(),
        trials=[trial_model(t, now) for t in session.trials],
    )


def scores_response(table: ScoreTable) -> ScoresResponse:
    cells = []
    for (c_ot, c_n), cell in table.cells.items():
        cells.append(
            ScoreCellModel(
                c_ot=c_ot.components(),
                c_n=c_n.components(),
                c_ot_name=color_name(c_ot),
                c_n_name=color_name(c_n),
                s1_total=cell.s1_total,
                s2_total=cell.s2_total,
                completed=cell.completed,
            )
        )
    return ScoresResponse(cells=cells)
