/** In-memory stand-in for the experiment service, steered by the tests. */

import { ApiError, bytesToDataUrl } from "../src/api.js";
import type {
  ChoiceSide,
  CreateSessionOptions,
  ExperimentApi,
  OutcomeView,
  PanelImage,
  PanelName,
  Phase,
  ScoresView,
  SessionView,
  TrialStateView,
  TrialView,
} from "../src/api.js";

function makeTrial(index: number): TrialView {
  return {
    trial_id: `t${String(index + 1).padStart(2, "0")}-fake`,
    c_ot: [1, 0, 0],
    c_oi: [1, 1, 1],
    c_n: [0, 1, 0],
    adapt_seconds: 2.0,
    phase: "idle",
    remaining_seconds: 0,
    redo_count: 0,
    outcome: null,
  };
}

export class FakeApi implements ExperimentApi {
  phase: Phase = "idle";
  remaining = 0;
  redoCount = 0;
  stateFailuresRemaining = 0;

  readonly startCalls: string[] = [];
  readonly redoCalls: string[] = [];
  readonly submissions: Array<{ trialId: string; choice: ChoiceSide }> = [];
  readonly panelFetches: Array<{ trialId: string; panel: PanelName }> = [];

  private readonly session: SessionView;

  constructor(trialCount = 3) {
    this.session = {
      session_id: "fake-session",
      scheme: "group2",
      seed: 1,
      created_at: 0,
      shuffle: false,
      metadata: { label: null, color_vision: null },
      total_trials: trialCount,
      completed_trials: 0,
      trials: Array.from({ length: trialCount }, (_, i) => makeTrial(i)),
    };
  }

  /** Test hook: the server-side countdown has elapsed. */
  beginChoosing(): void {
    this.phase = "choosing";
    this.remaining = 0;
  }

  private state(trialId: string): TrialStateView {
    const trial = this.session.trials.find((t) => t.trial_id === trialId);
    if (trial === undefined) {
      throw new ApiError(404, `unknown trial: ${trialId}`);
    }
    return {
      ...trial,
      phase: this.phase,
      remaining_seconds: this.remaining,
      redo_count: this.redoCount,
      server_time: 0,
    };
  }

  async createSession(_options: CreateSessionOptions): Promise<SessionView> {
    return this.session;
  }

  async getSession(_sessionId: string): Promise<SessionView> {
    return this.session;
  }

  async startTrial(_sessionId: string, trialId: string): Promise<TrialStateView> {
    this.startCalls.push(trialId);
    this.phase = "adapting";
    this.remaining = 2.0;
    this.redoCount = 0;
    return this.state(trialId);
  }

  async trialState(_sessionId: string, trialId: string): Promise<TrialStateView> {
    if (this.stateFailuresRemaining > 0) {
      this.stateFailuresRemaining -= 1;
      throw new Error("network unreachable");
    }
    return this.state(trialId);
  }

  async submitChoice(
    _sessionId: string,
    trialId: string,
    choice: ChoiceSide,
  ): Promise<OutcomeView> {
    if (this.phase !== "choosing") {
      throw new ApiError(409, "not in choosing phase");
    }
    this.submissions.push({ trialId, choice });
    this.phase = "completed";
    const scores: Record<ChoiceSide, [number, number]> = {
      left: [1, 0],
      right: [0, 1],
      almost_same: [0.5, 0.5],
    };
    const [s1, s2] = scores[choice];
    return {
      choice: choice === "almost_same" ? "almost_same" : s1 === 1 ? "picked_s1" : "picked_s2",
      s1_score: s1,
      s2_score: s2,
      redo_count: this.redoCount,
      decided_at: 0,
    };
  }

  async redoTrial(_sessionId: string, trialId: string): Promise<TrialStateView> {
    if (this.phase !== "choosing") {
      throw new ApiError(409, "not in choosing phase");
    }
    this.redoCalls.push(trialId);
    this.redoCount += 1;
    this.phase = "adapting";
    this.remaining = 2.0;
    return this.state(trialId);
  }

  async fetchPanel(
    _sessionId: string,
    trialId: string,
    panel: PanelName,
  ): Promise<PanelImage> {
    this.panelFetches.push({ trialId, panel });
    const bytes = Uint8Array.from(`${trialId}:${panel}`, (c) => c.charCodeAt(0));
    return { bytes, dataUrl: bytesToDataUrl(bytes) };
  }

  async scores(): Promise<ScoresView> {
    return {
      cells: [
        {
          c_ot: [1, 0, 0],
          c_n: [0, 1, 0],
          c_ot_name: "red",
          c_n_name: "green",
          s1_total: 0.5,
          s2_total: 0.5,
          completed: 1,
        },
      ],
    };
  }
}
