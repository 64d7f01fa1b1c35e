/**
 * Session controller: owns the per-trial state machine on the client side.
 *
 * The server is the single source of truth — this controller only mirrors
 * the phase it reports, forwards clicks, and enforces which controls are
 * actionable in each phase. Scores and placement are never computed here.
 */

import type {
  ChoiceSide,
  ExperimentApi,
  OutcomeView,
  Phase,
  ScoresView,
  SessionView,
  TrialStateView,
} from "./api.js";

/** Selections a subject can stage before confirming with "finish". */
export type Selection = Extract<ChoiceSide, "left" | "right" | "almost_same">;

export interface ButtonStates {
  start: boolean;
  left: boolean;
  right: boolean;
  almostSame: boolean;
  redo: boolean;
  finish: boolean;
}

/**
 * Which controls are actionable: "start" only while idle; picking a side,
 * "almost the same" and "redo" only while choosing; "finish" only while
 * choosing with a staged selection. Nothing is clickable during adaptation.
 */
export function buttonStates(phase: Phase, hasSelection: boolean): ButtonStates {
  const choosing = phase === "choosing";
  return {
    start: phase === "idle",
    left: choosing,
    right: choosing,
    almostSame: choosing,
    redo: choosing,
    finish: choosing && hasSelection,
  };
}

export interface UiTrialView {
  trialId: string;
  phase: Phase;
  remainingSeconds: number;
  redoCount: number;
  stimulusUrl: string | null;
  newFieldUrl: string | null;
  leftPanelUrl: string | null;
  rightPanelUrl: string | null;
  selection: Selection | null;
  buttons: ButtonStates;
}

export interface UiView {
  kind: "landing" | "trial" | "done";
  progress: { completed: number; total: number };
  trial: UiTrialView | null;
  scores: ScoresView | null;
  error: string | null;
}

export interface ControllerOptions {
  /** Poll cadence while adapting; the default stays at or under 4 Hz. */
  pollIntervalMs?: number;
  sleep?: (ms: number) => Promise<void>;
  onView?: (view: UiView) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class SessionController {
  private session: SessionView | null = null;
  private trialIndex = 0;
  private phase: Phase = "idle";
  private remainingSeconds = 0;
  private redoCount = 0;
  private selection: Selection | null = null;
  private stimulusUrl: string | null = null;
  private newFieldUrl: string | null = null;
  private leftPanelUrl: string | null = null;
  private rightPanelUrl: string | null = null;
  private scoresView: ScoresView | null = null;
  private error: string | null = null;
  private busy = false;
  private readonly pollIntervalMs: number;
  private readonly sleep: (ms: number) => Promise<void>;
  private readonly onView: (view: UiView) => void;

  constructor(
    private readonly api: ExperimentApi,
    options: ControllerOptions = {},
  ) {
    this.pollIntervalMs = options.pollIntervalMs ?? 250;
    this.sleep = options.sleep ?? defaultSleep;
    this.onView = options.onView ?? (() => {});
  }

  /** The session as created by the service, or null before begin(). */
  currentSession(): SessionView | null {
    return this.session;
  }

  view(): UiView {
    if (this.session === null) {
      return {
        kind: "landing",
        progress: { completed: 0, total: 0 },
        trial: null,
        scores: null,
        error: this.error,
      };
    }
    const done = this.trialIndex >= this.session.trials.length;
    const trial = done ? null : this.session.trials[this.trialIndex]!;
    return {
      kind: done ? "done" : "trial",
      progress: {
        completed: this.trialIndex,
        total: this.session.trials.length,
      },
      trial:
        trial === null
          ? null
          : {
              trialId: trial.trial_id,
              phase: this.phase,
              remainingSeconds: this.remainingSeconds,
              redoCount: this.redoCount,
              stimulusUrl: this.stimulusUrl,
              newFieldUrl: this.newFieldUrl,
              leftPanelUrl: this.leftPanelUrl,
              rightPanelUrl: this.rightPanelUrl,
              selection: this.selection,
              buttons: buttonStates(this.phase, this.selection !== null),
            },
      scores: this.scoresView,
      error: this.error,
    };
  }

  private render(): void {
    this.onView(this.view());
  }

  private currentTrialId(): string {
    const session = this.session;
    if (session === null || this.trialIndex >= session.trials.length) {
      throw new Error("no active trial");
    }
    return session.trials[this.trialIndex]!.trial_id;
  }

  /** Create the session and show the first trial's stimulus. */
  async begin(options: Parameters<ExperimentApi["createSession"]>[0]): Promise<void> {
    try {
      this.session = await this.api.createSession(options);
    } catch (err) {
      this.error = describe(err);
      this.render();
      throw err;
    }
    this.error = null;
    this.trialIndex = this.session.trials.findIndex((t) => t.phase !== "completed");
    if (this.trialIndex < 0) {
      this.trialIndex = this.session.trials.length;
    }
    await this.enterTrial();
  }

  /** Prepare the current trial: show its stimulus, phase idle. */
  private async enterTrial(): Promise<void> {
    this.phase = "idle";
    this.remainingSeconds = 0;
    this.redoCount = 0;
    this.selection = null;
    this.stimulusUrl = null;
    this.newFieldUrl = null;
    this.leftPanelUrl = null;
    this.rightPanelUrl = null;
    if (this.session === null || this.trialIndex >= this.session.trials.length) {
      await this.loadScores();
      this.render();
      return;
    }
    const trialId = this.currentTrialId();
    try {
      const panel = await this.api.fetchPanel(this.session.session_id, trialId, "stimulus");
      this.stimulusUrl = panel.dataUrl;
      this.error = null;
    } catch (err) {
      this.error = describe(err);
    }
    this.render();
  }

  /** Start adaptation, then poll until the server reports choosing. */
  async start(): Promise<void> {
    if (this.phase !== "idle" || this.busy || this.session === null) {
      return;
    }
    this.busy = true;
    const sessionId = this.session.session_id;
    const trialId = this.currentTrialId();
    try {
      const state = await this.api.startTrial(sessionId, trialId);
      this.applyState(state);
      this.error = null;
      this.render();
      await this.pollUntilChoosing(sessionId, trialId);
    } catch (err) {
      this.error = describe(err);
      this.render();
    } finally {
      this.busy = false;
    }
  }

  private applyState(state: TrialStateView): void {
    this.phase = state.phase;
    this.remainingSeconds = state.remaining_seconds;
    this.redoCount = state.redo_count;
  }

  /**
   * Poll the trial state at the configured cadence. Network failures pause
   * the trial (error banner) and retry; they never abort it.
   */
  private async pollUntilChoosing(sessionId: string, trialId: string): Promise<void> {
    for (;;) {
      await this.sleep(this.pollIntervalMs);
      let state: TrialStateView;
      try {
        state = await this.api.trialState(sessionId, trialId);
      } catch (err) {
        this.error = describe(err);
        this.render();
        continue;
      }
      this.error = null;
      this.applyState(state);
      if (state.phase === "choosing") {
        await this.loadChoosingPanels(sessionId, trialId);
        this.render();
        return;
      }
      this.render();
    }
  }

  /** The new stimulating field replaces the stimulus; panels go live. */
  private async loadChoosingPanels(sessionId: string, trialId: string): Promise<void> {
    try {
      const [newField, left, right] = await Promise.all([
        this.api.fetchPanel(sessionId, trialId, "new_field"),
        this.api.fetchPanel(sessionId, trialId, "left"),
        this.api.fetchPanel(sessionId, trialId, "right"),
      ]);
      this.newFieldUrl = newField.dataUrl;
      this.leftPanelUrl = left.dataUrl;
      this.rightPanelUrl = right.dataUrl;
    } catch (err) {
      this.error = describe(err);
    }
  }

  /** Stage a selection; it is submitted only when "finish" confirms it. */
  select(selection: Selection): void {
    if (this.phase !== "choosing") {
      return;
    }
    this.selection = selection;
    this.render();
  }

  /** Repeat the same trial: back to adaptation with a fresh placement. */
  async redo(): Promise<void> {
    if (this.phase !== "choosing" || this.busy || this.session === null) {
      return;
    }
    this.busy = true;
    const sessionId = this.session.session_id;
    const trialId = this.currentTrialId();
    try {
      const state = await this.api.redoTrial(sessionId, trialId);
      this.selection = null;
      this.newFieldUrl = null;
      this.leftPanelUrl = null;
      this.rightPanelUrl = null;
      this.applyState(state);
      this.error = null;
      this.render();
      await this.pollUntilChoosing(sessionId, trialId);
    } catch (err) {
      this.error = describe(err);
      this.render();
    } finally {
      this.busy = false;
    }
  }

  /** Confirm the staged selection and advance to the next trial. */
  async finish(): Promise<OutcomeView | null> {
    if (this.phase !== "choosing" || this.selection === null || this.busy || this.session === null) {
      return null;
    }
    this.busy = true;
    try {
      const outcome = await this.api.submitChoice(
        this.session.session_id,
        this.currentTrialId(),
        this.selection,
      );
      this.error = null;
      this.trialIndex += 1;
      await this.enterTrial();
      return outcome;
    } catch (err) {
      this.error = describe(err);
      this.render();
      return null;
    } finally {
      this.busy = false;
    }
  }

  private async loadScores(): Promise<void> {
    try {
      this.scoresView = await this.api.scores();
      this.error = null;
    } catch (err) {
      this.error = describe(err);
    }
  }
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
