/**
 * End-to-end: drive the real experiment service over HTTP.
 *
 * A `serve` subprocess is spawned on a free port; the controller and DOM
 * view run against it exactly as in the browser. Two guarantees are
 * exercised here that the unit tests cannot give: the server (not just the
 * UI) refuses choices during the adaptation countdown, and the aggregate
 * score table equals what a scripted run of the full battery must produce.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import net from "node:net";
import { tmpdir } from "node:os";
import path from "node:path";
import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { ApiError, dataUrlToBytes, HttpApi } from "../src/api.js";
import type { ChoiceSide, OutcomeView, ScoresView } from "../src/api.js";
import { SessionController } from "../src/flow.js";
import { createView } from "../src/view.js";

const HOST = "127.0.0.1";

let server: ChildProcess;
let serverOutput = "";
let baseUrl = "";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = net.createServer();
    probe.once("error", reject);
    probe.listen(0, HOST, () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("could not determine a free port"));
        return;
      }
      const { port } = address;
      probe.close(() => resolve(port));
    });
  });
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

async function waitFor(condition: () => boolean, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) {
      throw new Error("timed out waiting for condition");
    }
    await sleep(20);
  }
}

beforeAll(async () => {
  const port = await freePort();
  baseUrl = `http://${HOST}:${port}`;
  const logPath = path.join(mkdtempSync(path.join(tmpdir(), "afterimage-e2e-")), "events.jsonl");
  server = spawn(
    "python3",
    ["-m", "afterimage.cli", "serve", "--host", HOST, "--port", String(port), "--log", logPath],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stdout?.on("data", (chunk: Buffer) => (serverOutput += chunk.toString()));
  server.stderr?.on("data", (chunk: Buffer) => (serverOutput += chunk.toString()));

  const deadline = Date.now() + 30_000;
  for (;;) {
    if (server.exitCode !== null) {
      throw new Error(`server exited early (code ${server.exitCode}):\n${serverOutput}`);
    }
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) {
        return;
      }
    } catch {
      // not accepting connections yet
    }
    if (Date.now() > deadline) {
      throw new Error(`server never became healthy:\n${serverOutput}`);
    }
    await sleep(100);
  }
});

afterAll(async () => {
  if (server === undefined || server.exitCode !== null) {
    return;
  }
  const exited = new Promise<void>((resolve) => server.once("exit", () => resolve()));
  server.kill("SIGTERM");
  const escalate = setTimeout(() => server.kill("SIGKILL"), 5_000);
  await exited;
  clearTimeout(escalate);
});

interface Harness {
  api: HttpApi;
  controller: SessionController;
  root: HTMLElement;
  query: (selector: string) => HTMLElement;
}

function setup(pollIntervalMs: number): Harness {
  const api = new HttpApi(baseUrl);
  const root = document.createElement("div");
  document.body.append(root);
  const controller: SessionController = new SessionController(api, {
    pollIntervalMs,
    onView: (view) => ui.render(view),
  });
  const ui = createView(root, {
    onBegin: () => void controller.begin({}),
    onStart: () => void controller.start(),
    onSelect: (selection) => controller.select(selection),
    onRedo: () => void controller.redo(),
    onFinish: () => void controller.finish(),
  });
  ui.render(controller.view());
  const query = (selector: string): HTMLElement => {
    const found = root.querySelector<HTMLElement>(selector);
    if (found === null) {
      throw new Error(`missing element: ${selector}`);
    }
    return found;
  };
  return { api, controller, root, query };
}

beforeEach(() => {
  document.body.textContent = "";
});

describe("experiment UI against the live service", () => {
  it("locks out every choice control until the server ends adaptation", async () => {
    const h = setup(100);
    await h.controller.begin({ seed: 7, adapt_seconds: 2.5, shuffle: false });
    const session = h.controller.currentSession();
    expect(session).not.toBeNull();
    expect(session!.total_trials).toBe(15);
    const trialId = session!.trials[0]!.trial_id;
    expect(trialId).toBe("t01-red-white");

    const startPromise = h.controller.start();
    await waitFor(() => !h.query(".countdown").hidden);

    // UI side: nothing actionable while the countdown runs.
    for (const selector of [".start", ".panel-left", ".panel-right", ".almost-same", ".redo", ".finish"]) {
      expect((h.query(selector) as HTMLButtonElement).disabled).toBe(true);
    }
    h.controller.select("left");
    expect(await h.controller.finish()).toBeNull();
    expect(h.controller.view().trial?.selection).toBeNull();

    // Server side: the phase really is adapting, and a direct choice
    // posted behind the UI's back is refused with a conflict.
    const state = await h.api.trialState(session!.session_id, trialId);
    expect(state.phase).toBe("adapting");
    expect(state.remaining_seconds).toBeGreaterThan(0);
    await expect(h.api.submitChoice(session!.session_id, trialId, "left")).rejects.toThrowError(
      ApiError,
    );
    await expect(
      h.api.submitChoice(session!.session_id, trialId, "left"),
    ).rejects.toMatchObject({ status: 409 });

    // The countdown must elapse on the server's clock, not ours.
    await startPromise;
    expect(h.controller.view().trial?.phase).toBe("choosing");

    // Candidate panels now show the exact bytes the service serves.
    const leftImg = h.query(".panel-left .panel-image") as HTMLImageElement;
    expect(leftImg.hidden).toBe(false);
    const fresh = await h.api.fetchPanel(session!.session_id, trialId, "left");
    expect(dataUrlToBytes(leftImg.src)).toEqual(fresh.bytes);
    // Trial intentionally left unfinished: incomplete trials must not
    // contribute to the aggregate checked by the next test.
  });

  it("completes the full battery and the aggregate equals the scripted choices", async () => {
    const h = setup(60);
    await h.controller.begin({ seed: 123, adapt_seconds: 0.4, shuffle: false });
    const session = h.controller.currentSession();
    expect(session).not.toBeNull();
    expect(session!.trials.length).toBe(15);

    const script: ChoiceSide[] = session!.trials.map(
      (_, i) => (["left", "right", "almost_same"] as const)[i % 3]!,
    );
    const expected = new Map<string, { s1: number; s2: number; completed: number }>();

    for (let i = 0; i < session!.trials.length; i += 1) {
      const trial = session!.trials[i]!;
      expect(h.query(".progress").textContent).toBe(`${i} / 15`);
      await h.controller.start();
      expect(h.controller.view().trial?.phase).toBe("choosing");
      h.controller.select(script[i]!);
      const outcome: OutcomeView | null = await h.controller.finish();
      expect(outcome).not.toBeNull();
      expect(outcome!.s1_score + outcome!.s2_score).toBeCloseTo(1, 12);
      if (script[i] === "almost_same") {
        expect(outcome!.choice).toBe("almost_same");
        expect(outcome!.s1_score).toBeCloseTo(0.5, 12);
      } else {
        expect(["picked_s1", "picked_s2"]).toContain(outcome!.choice);
      }
      const key = JSON.stringify([trial.c_ot, trial.c_n]);
      const cell = expected.get(key) ?? { s1: 0, s2: 0, completed: 0 };
      cell.s1 += outcome!.s1_score;
      cell.s2 += outcome!.s2_score;
      cell.completed += 1;
      expected.set(key, cell);
    }

    // The done screen renders the aggregate table (header + 15 cells).
    expect(h.query(".screen.done").hidden).toBe(false);
    expect(h.root.querySelectorAll(".scores tr").length).toBe(16);

    // The service's aggregate must equal the accumulation of the outcomes
    // it reported trial by trial — nothing was scored client-side.
    const scores: ScoresView = await h.api.scores();
    expect(scores.cells.length).toBe(15);
    let grandTotal = 0;
    for (const cell of scores.cells) {
      const key = JSON.stringify([cell.c_ot, cell.c_n]);
      const want = expected.get(key);
      expect(want, `no scripted trial for cell ${key}`).toBeDefined();
      expect(cell.s1_total).toBeCloseTo(want!.s1, 12);
      expect(cell.s2_total).toBeCloseTo(want!.s2, 12);
      expect(cell.completed).toBe(want!.completed);
      grandTotal += cell.s1_total + cell.s2_total;
    }
    expect(grandTotal).toBeCloseTo(15, 12);
  });
});
