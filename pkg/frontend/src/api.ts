/**
 * Typed client for the experiment service HTTP API.
 *
 * The wire format never carries panel placement: the client reports which
 * side was clicked and the server resolves what that side contained, so
 * nothing in this module (or its callers) can score trials locally.
 */

export type Phase = "idle" | "adapting" | "choosing" | "completed";
export type ChoiceSide = "left" | "right" | "almost_same";
export type PanelName = "stimulus" | "new_field" | "left" | "right";

export type ColorTriple = [number, number, number];

export interface OutcomeView {
  choice: "picked_s1" | "picked_s2" | "almost_same";
  s1_score: number;
  s2_score: number;
  redo_count: number;
  decided_at: number;
}

export interface TrialView {
  trial_id: string;
  c_ot: ColorTriple;
  c_oi: ColorTriple;
  c_n: ColorTriple;
  adapt_seconds: number;
  phase: Phase;
  remaining_seconds: number;
  redo_count: number;
  outcome: OutcomeView | null;
}

export interface TrialStateView extends TrialView {
  server_time: number;
}

export interface SessionView {
  session_id: string;
  scheme: "group1" | "group2";
  seed: number;
  created_at: number;
  shuffle: boolean;
  metadata: { label: string | null; color_vision: string | null };
  total_trials: number;
  completed_trials: number;
  trials: TrialView[];
}

export interface ScoreCellView {
  c_ot: ColorTriple;
  c_n: ColorTriple;
  c_ot_name: string | null;
  c_n_name: string | null;
  s1_total: number;
  s2_total: number;
  completed: number;
}

export interface ScoresView {
  cells: ScoreCellView[];
}

export interface CreateSessionOptions {
  scheme?: "group1" | "group2";
  seed?: number;
  adapt_seconds?: number;
  shuffle?: boolean;
  metadata?: { label?: string | null; color_vision?: string | null };
}

/** A fetched panel: the exact bytes served, plus a data URL wrapping them. */
export interface PanelImage {
  bytes: Uint8Array;
  dataUrl: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** The service surface the UI depends on; tests substitute a fake. */
export interface ExperimentApi {
  createSession(options: CreateSessionOptions): Promise<SessionView>;
  getSession(sessionId: string): Promise<SessionView>;
  startTrial(sessionId: string, trialId: string): Promise<TrialStateView>;
  trialState(sessionId: string, trialId: string): Promise<TrialStateView>;
  submitChoice(sessionId: string, trialId: string, choice: ChoiceSide): Promise<OutcomeView>;
  redoTrial(sessionId: string, trialId: string): Promise<TrialStateView>;
  fetchPanel(sessionId: string, trialId: string, panel: PanelName): Promise<PanelImage>;
  scores(): Promise<ScoresView>;
}

export function bytesToDataUrl(bytes: Uint8Array, mediaType = "image/png"): string {
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return `data:${mediaType};base64,${btoa(binary)}`;
}

export function dataUrlToBytes(dataUrl: string): Uint8Array {
  const comma = dataUrl.indexOf(",");
  const binary = atob(dataUrl.slice(comma + 1));
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i += 1) {
    bytes[i] = binary.charCodeAt(i);
  }
  return bytes;
}

export class HttpApi implements ExperimentApi {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        if (payload.detail !== undefined) {
          detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload.detail);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSession(options: CreateSessionOptions): Promise<SessionView> {
    return this.request("POST", "/sessions", options);
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  startTrial(sessionId: string, trialId: string): Promise<TrialStateView> {
    return this.request("POST", `/sessions/${sessionId}/trials/${trialId}/start`);
  }

  trialState(sessionId: string, trialId: string): Promise<TrialStateView> {
    return this.request("GET", `/sessions/${sessionId}/trials/${trialId}/state`);
  }

  submitChoice(sessionId: string, trialId: string, choice: ChoiceSide): Promise<OutcomeView> {
    return this.request("POST", `/sessions/${sessionId}/trials/${trialId}/choice`, { choice });
  }

  redoTrial(sessionId: string, trialId: string): Promise<TrialStateView> {
    return this.request("POST", `/sessions/${sessionId}/trials/${trialId}/redo`);
  }

  async fetchPanel(sessionId: string, trialId: string, panel: PanelName): Promise<PanelImage> {
    const response = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/trials/${trialId}/panels?panel=${panel}`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, `panel fetch failed: ${response.status}`);
    }
    const bytes = new Uint8Array(await response.arrayBuffer());
    return { bytes, dataUrl: bytesToDataUrl(bytes) };
  }

  scores(): Promise<ScoresView> {
    return this.request("GET", "/scores");
  }
}
