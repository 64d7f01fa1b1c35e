"""Human-verification experiment sessions.

A session runs the fixed 15-trial battery: each trial adapts the
subject to a primary test color on a white surround, then shows two
candidate afterimages (S1, the dimmed complementary baseline; S2, the
model prediction) in randomized left/right placement and records a
forced choice.

State is event-sourced: every transition appends one JSON record to an
append-only log, and sessions are rebuilt by replaying that log. The
placement stream is a named, seeded PRNG per session, so a replayed
session reproduces its placements exactly (replay verifies them against
the logged values).
"""

from __future__ import annotations

import json
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

from .colors import NamedColor, Rgb
from .model import BaselineScheme, StimulusSpec, complementary_baseline, predict
from .render import (
    BlurSettings,
    Geometry,
    RasterImage,
    render_afterimage_panel,
    render_stimulus,
    render_uniform,
)

ADAPT_SECONDS_DEFAULT = 20.0
# Client clocks are untrusted; the server accepts choices this close to
# the nominal end of adaptation to absorb network skew.
ADAPT_TOLERANCE_SECONDS = 0.25
PANEL_GRAY = Rgb(0.5, 0.5, 0.5)

TEST_FIELD_COLORS = (NamedColor.RED, NamedColor.GREEN, NamedColor.BLUE)
NEW_FIELD_COLORS = (
    NamedColor.WHITE,
    NamedColor.BLACK,
    NamedColor.RED,
    NamedColor.GREEN,
    NamedColor.BLUE,
)


class ExperimentError(Exception):
    """Base class for experiment/session errors."""


class UnknownSessionError(ExperimentError, KeyError):
    pass


class UnknownTrialError(ExperimentError, KeyError):
    pass


class InvalidTransitionError(ExperimentError):
    """Operation not allowed in the trial's current phase."""


class EventLogError(ExperimentError, ValueError):
    """Event log is unreadable or inconsistent with its session seed."""


class TrialPhase(Enum):
    IDLE = "idle"
    ADAPTING = "adapting"
    CHOOSING = "choosing"
    COMPLETED = "completed"


class Placement(Enum):
    S1_LEFT = "s1_left"
    S1_RIGHT = "s1_right"


class TrialChoice(Enum):
    PICKED_S1 = "picked_s1"
    PICKED_S2 = "picked_s2"
    ALMOST_SAME = "almost_same"


_CHOICE_SCORES: dict[TrialChoice, tuple[float, float]] = {
    TrialChoice.PICKED_S1: (1.0, 0.0),
    TrialChoice.PICKED_S2: (0.0, 1.0),
    TrialChoice.ALMOST_SAME: (0.5, 0.5),
}


@dataclass(frozen=True)
class TrialSpec:
    trial_id: str
    stimulus: StimulusSpec
    baseline_scheme: BaselineScheme
    adapt_seconds: float = ADAPT_SECONDS_DEFAULT

    def __post_init__(self) -> None:
        if self.adapt_seconds <= 0:
            raise ValueError(f"adapt_seconds must be > 0, got {self.adapt_seconds!r}")


@dataclass(frozen=True)
class TrialOutcome:
    choice: TrialChoice
    s1_score: float
    s2_score: float
    redo_count: int
    decided_at: float


@dataclass
class Trial:
    """Runtime state of one trial; phase is derived from the clock."""

    spec: TrialSpec
    started_at: float | None = None
    placement: Placement | None = None
    redo_count: int = 0
    outcome: TrialOutcome | None = None

    def phase(self, now: float) -> TrialPhase:
        if self.outcome is not None:
            return TrialPhase.COMPLETED
        if self.started_at is None:
            return TrialPhase.IDLE
        if now - self.started_at < self.spec.adapt_seconds - ADAPT_TOLERANCE_SECONDS:
            return TrialPhase.ADAPTING
        return TrialPhase.CHOOSING

    def remaining_seconds(self, now: float) -> float:
        if self.started_at is None or self.phase(now) is not TrialPhase.ADAPTING:
            return 0.0
        return max(0.0, self.spec.adapt_seconds - (now - self.started_at))


@dataclass(frozen=True)
class SubjectMetadata:
    """Optional self-reported subject info attached to a session."""

    label: str | None = None
    color_vision: str | None = None

    def to_dict(self) -> dict:
        return {"label": self.label, "color_vision": self.color_vision}

    @classmethod
    def from_dict(cls, data: dict | None) -> "SubjectMetadata":
        data = data or {}
        return cls(label=data.get("label"), color_vision=data.get("color_vision"))


def build_battery(
    scheme: BaselineScheme, adapt_seconds: float = ADAPT_SECONDS_DEFAULT
) -> list[TrialSpec]:
    """The 15-trial battery: {red, green, blue} test colors on a white
    surround, crossed with {white, black, red, green, blue} new colors,
    in deterministic Cartesian order."""
    specs = []
    index = 1
    for c_ot in TEST_FIELD_COLORS:
        for c_n in NEW_FIELD_COLORS:
            trial_id = f"t{index:02d}-{c_ot.name.lower()}-{c_n.name.lower()}"
            specs.append(
                TrialSpec(
                    trial_id=trial_id,
                    stimulus=StimulusSpec(c_ot.rgb, NamedColor.WHITE.rgb, c_n.rgb),
                    baseline_scheme=scheme,
                    adapt_seconds=adapt_seconds,
                )
            )
            index += 1
    return specs


@dataclass
class Session:
    session_id: str
    scheme: BaselineScheme
    seed: int
    created_at: float
    metadata: SubjectMetadata
    shuffle: bool
    trials: list[Trial]
    _placement_rng: random.Random = field(compare=False, repr=False, default_factory=random.Random)

    @classmethod
    def create(
        cls,
        session_id: str,
        scheme: BaselineScheme,
        seed: int,
        created_at: float,
        metadata: SubjectMetadata | None = None,
        adapt_seconds: float = ADAPT_SECONDS_DEFAULT,
        shuffle: bool = False,
    ) -> "Session":
        specs = build_battery(scheme, adapt_seconds)
        if shuffle:
            random.Random(f"{seed}:order").shuffle(specs)
        return cls(
            session_id=session_id,
            scheme=scheme,
            seed=seed,
            created_at=created_at,
            metadata=metadata or SubjectMetadata(),
            shuffle=shuffle,
            trials=[Trial(spec=s) for s in specs],
            _placement_rng=random.Random(f"{seed}:placement"),
        )

    def trial(self, trial_id: str) -> Trial:
        for t in self.trials:
            if t.spec.trial_id == trial_id:
                return t
        raise UnknownTrialError(trial_id)

    def draw_placement(self) -> Placement:
        return Placement.S1_LEFT if self._placement_rng.random() < 0.5 else Placement.S1_RIGHT

    def completed_count(self) -> int:
        return sum(1 for t in self.trials if t.outcome is not None)


@dataclass(frozen=True)
class Event:
    """One line of the append-only experiment log."""

    record_type: str
    session_id: str
    trial_id: str | None
    timestamp: float
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "record_type": self.record_type,
                "session_id": self.session_id,
                "trial_id": self.trial_id,
                "timestamp": self.timestamp,
                "payload": self.payload,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "Event":
        try:
            data = json.loads(line)
            return cls(
                record_type=data["record_type"],
                session_id=data["session_id"],
                trial_id=data.get("trial_id"),
                timestamp=data["timestamp"],
                payload=data.get("payload") or {},
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise EventLogError(f"malformed event record: {line!r}") from exc


@dataclass(frozen=True)
class TrialPanels:
    """Images for the four UI windows of one trial."""

    stimulus: RasterImage
    new_field: RasterImage
    left: RasterImage
    right: RasterImage

    def as_dict(self) -> dict[str, RasterImage]:
        return {
            "stimulus": self.stimulus,
            "new_field": self.new_field,
            "left": self.left,
            "right": self.right,
        }


@dataclass(frozen=True)
class ScoreCell:
    s1_total: float = 0.0
    s2_total: float = 0.0
    completed: int = 0


@dataclass(frozen=True)
class ScoreTable:
    """Per-(old test color, new color) S1/S2 score sums across sessions."""

    cells: dict[tuple[Rgb, Rgb], ScoreCell]

    def cell(self, c_ot: Rgb, c_n: Rgb) -> ScoreCell:
        return self.cells.get((c_ot, c_n), ScoreCell())


def aggregate_scores(sessions: Iterable[Session]) -> ScoreTable:
    """Sum S1/S2 scores over completed trials, keyed by (c_ot, c_n).

    The 15 canonical battery cells are always present (zeroed when no
    data); any off-battery stimulus encountered gets its own cell.
    """
    cells: dict[tuple[Rgb, Rgb], ScoreCell] = {
        (ot.rgb, cn.rgb): ScoreCell() for ot in TEST_FIELD_COLORS for cn in NEW_FIELD_COLORS
    }
    for session in sessions:
        for trial in session.trials:
            if trial.outcome is None:
                continue
            key = (trial.spec.stimulus.c_ot, trial.spec.stimulus.c_n)
            cell = cells.get(key, ScoreCell())
            cells[key] = ScoreCell(
                s1_total=cell.s1_total + trial.outcome.s1_score,
                s2_total=cell.s2_total + trial.outcome.s2_score,
                completed=cell.completed + 1,
            )
    return ScoreTable(cells=cells)


class ExperimentStore:
    """Holds live sessions and persists every transition to the event log.

    All mutations are serialized under one lock; renders happen outside
    it on a snapshot of the trial. With log_path=None the store is
    memory-only (useful for tests and for replaying external logs).
    """

    def __init__(
        self,
        log_path: str | Path | None = None,
        clock: Callable[[], float] = time.time,
    ):
        self._log_path = Path(log_path) if log_path is not None else None
        self._clock = clock
        self._lock = threading.RLock()
        self._sessions: dict[str, Session] = {}
        if self._log_path is not None and self._log_path.exists():
            self.load_log(self._log_path)

    # -- persistence ----------------------------------------------------

    def load_log(self, path: str | Path) -> None:
        """Replay an event-log file into this store."""
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    self._apply(Event.from_json(line))

    def _append(self, event: Event) -> None:
        if self._log_path is None:
            return
        with open(self._log_path, "a", encoding="utf-8") as f:
            f.write(event.to_json() + "\n")

    def _record(self, event: Event) -> None:
        self._append(event)
        self._apply(event)

    def _apply(self, event: Event) -> None:
        with self._lock:
            if event.record_type == "session_created":
                self._apply_session_created(event)
            elif event.record_type == "trial_started":
                self._apply_trial_started(event)
            elif event.record_type == "trial_redone":
                self._apply_trial_redone(event)
            elif event.record_type == "choice_submitted":
                self._apply_choice_submitted(event)
            else:
                raise EventLogError(f"unknown record_type {event.record_type!r}")

    def _apply_session_created(self, event: Event) -> None:
        p = event.payload
        if event.session_id in self._sessions:
            raise EventLogError(f"duplicate session_created for {event.session_id}")
        self._sessions[event.session_id] = Session.create(
            session_id=event.session_id,
            scheme=BaselineScheme(p["scheme"]),
            seed=p["seed"],
            created_at=event.timestamp,
            metadata=SubjectMetadata.from_dict(p.get("metadata")),
            adapt_seconds=p.get("adapt_seconds", ADAPT_SECONDS_DEFAULT),
            shuffle=p.get("shuffle", False),
        )

    def _replayed_placement(self, session: Session, payload: dict) -> Placement:
        # Consume the stream even on replay so later draws line up, and
        # verify the log really came from this seed.
        drawn = session.draw_placement()
        logged = Placement(payload["placement"])
        if drawn is not logged:
            raise EventLogError(
                f"placement mismatch in session {session.session_id}: "
                f"log says {logged.value}, seed stream gives {drawn.value}"
            )
        return logged

    def _apply_trial_started(self, event: Event) -> None:
        session = self._session(event.session_id)
        trial = session.trial(event.trial_id)
        trial.placement = self._replayed_placement(session, event.payload)
        trial.started_at = event.payload["started_at"]

    def _apply_trial_redone(self, event: Event) -> None:
        session = self._session(event.session_id)
        trial = session.trial(event.trial_id)
        trial.placement = self._replayed_placement(session, event.payload)
        trial.started_at = event.payload["started_at"]
        trial.redo_count = event.payload["redo_count"]

    def _apply_choice_submitted(self, event: Event) -> None:
        session = self._session(event.session_id)
        trial = session.trial(event.trial_id)
        p = event.payload
        trial.outcome = TrialOutcome(
            choice=TrialChoice(p["choice"]),
            s1_score=p["s1_score"],
            s2_score=p["s2_score"],
            redo_count=p["redo_count"],
            decided_at=p["decided_at"],
        )

    # -- commands -------------------------------------------------------

    def create_session(
        self,
        scheme: BaselineScheme = BaselineScheme.GROUP2,
        seed: int | None = None,
        metadata: SubjectMetadata | None = None,
        adapt_seconds: float = ADAPT_SECONDS_DEFAULT,
        shuffle: bool = False,
    ) -> Session:
        if adapt_seconds <= 0:
            raise ValueError(f"adapt_seconds must be > 0, got {adapt_seconds!r}")
        with self._lock:
            if seed is None:
                seed = random.SystemRandom().randrange(2**31)
            session_id = uuid.uuid4().hex
            event = Event(
                record_type="session_created",
                session_id=session_id,
                trial_id=None,
                timestamp=self._clock(),
                payload={
                    "scheme": scheme.value,
                    "seed": seed,
                    "adapt_seconds": adapt_seconds,
                    "shuffle": shuffle,
                    "metadata": (metadata or SubjectMetadata()).to_dict(),
                },
            )
            self._record(event)
            return self._sessions[session_id]

    def start_trial(self, session_id: str, trial_id: str, now: float | None = None) -> Trial:
        with self._lock:
            session = self._session(session_id)
            trial = session.trial(trial_id)
            now = self._now(now)
            phase = trial.phase(now)
            if phase not in (TrialPhase.IDLE, TrialPhase.ADAPTING):
                raise InvalidTransitionError(f"cannot start a trial in phase {phase.value}")
            placement = session.draw_placement()
            event = Event(
                record_type="trial_started",
                session_id=session_id,
                trial_id=trial_id,
                timestamp=now,
                payload={
                    "started_at": now,
                    "placement": placement.value,
                    "redo_count": trial.redo_count,
                },
            )
            self._append(event)
            trial.started_at = now
            trial.placement = placement
            return trial

    def redo_trial(self, session_id: str, trial_id: str, now: float | None = None) -> Trial:
        with self._lock:
            session = self._session(session_id)
            trial = session.trial(trial_id)
            now = self._now(now)
            phase = trial.phase(now)
            if phase is not TrialPhase.CHOOSING:
                raise InvalidTransitionError(f"cannot redo a trial in phase {phase.value}")
            placement = session.draw_placement()
            event = Event(
                record_type="trial_redone",
                session_id=session_id,
                trial_id=trial_id,
                timestamp=now,
                payload={
                    "started_at": now,
                    "placement": placement.value,
                    "redo_count": trial.redo_count + 1,
                },
            )
            self._append(event)
            trial.started_at = now
            trial.placement = placement
            trial.redo_count += 1
            return trial

    def submit_side_choice(
        self,
        session_id: str,
        trial_id: str,
        side: str,
        now: float | None = None,
    ) -> TrialOutcome:
        """Resolve a clicked side ("left"/"right"/"almost_same") against the
        trial's placement and submit, atomically (a concurrent redo cannot
        slip between the mapping and the submission)."""
        with self._lock:
            trial = self._session(session_id).trial(trial_id)
            if side == "almost_same":
                choice = TrialChoice.ALMOST_SAME
            elif side in ("left", "right"):
                if trial.placement is None:
                    raise InvalidTransitionError("cannot choose before the trial starts")
                s1_side = "left" if trial.placement is Placement.S1_LEFT else "right"
                choice = TrialChoice.PICKED_S1 if side == s1_side else TrialChoice.PICKED_S2
            else:
                raise ValueError(f"unknown choice side {side!r}")
            return self.submit_choice(session_id, trial_id, choice, now)

    def submit_choice(
        self,
        session_id: str,
        trial_id: str,
        choice: TrialChoice,
        now: float | None = None,
    ) -> TrialOutcome:
        with self._lock:
            session = self._session(session_id)
            trial = session.trial(trial_id)
            now = self._now(now)
            phase = trial.phase(now)
            if phase is not TrialPhase.CHOOSING:
                raise InvalidTransitionError(f"cannot submit a choice in phase {phase.value}")
            s1, s2 = _CHOICE_SCORES[choice]
            outcome = TrialOutcome(
                choice=choice,
                s1_score=s1,
                s2_score=s2,
                redo_count=trial.redo_count,
                decided_at=now,
            )
            event = Event(
                record_type="choice_submitted",
                session_id=session_id,
                trial_id=trial_id,
                timestamp=now,
                payload={
                    "choice": choice.value,
                    "s1_score": s1,
                    "s2_score": s2,
                    "redo_count": trial.redo_count,
                    "decided_at": now,
                },
            )
            self._append(event)
            trial.outcome = outcome
            return outcome

    # -- reads ----------------------------------------------------------

    def now(self) -> float:
        return self._clock()

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            return self._session(session_id)

    def sessions(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())

    def trial_state(self, session_id: str, trial_id: str) -> Trial:
        with self._lock:
            return self._session(session_id).trial(trial_id)

    def trial_panels(
        self,
        session_id: str,
        trial_id: str,
        geometry: Geometry = Geometry(),
        blur: BlurSettings = BlurSettings(),
        now: float | None = None,
    ) -> TrialPanels:
        with self._lock:
            session = self._session(session_id)
            trial = session.trial(trial_id)
            now = self._now(now)
            spec = trial.spec
            phase = trial.phase(now)
            placement = trial.placement
        stimulus = render_stimulus(geometry, spec.stimulus.c_ot, spec.stimulus.c_oi)
        new_field = render_uniform(geometry, spec.stimulus.c_n)
        if phase in (TrialPhase.CHOOSING, TrialPhase.COMPLETED) and placement is not None:
            c_ct, c_ci = complementary_baseline(spec.stimulus, spec.baseline_scheme)
            s1 = render_afterimage_panel(geometry, c_ct, c_ci, blur)
            prediction = predict(spec.stimulus)
            s2 = render_afterimage_panel(geometry, prediction.c_at, prediction.c_ai, blur)
            left, right = (s1, s2) if placement is Placement.S1_LEFT else (s2, s1)
        else:
            gray = render_uniform(geometry, PANEL_GRAY)
            left = right = gray
        return TrialPanels(stimulus=stimulus, new_field=new_field, left=left, right=right)

    def aggregate_scores(self) -> ScoreTable:
        with self._lock:
            return aggregate_scores(self._sessions.values())

    # -- helpers --------------------------------------------------------

    def _session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def _now(self, now: float | None) -> float:
        return self._clock() if now is None else now
