/**
 * Entry point: wire the HTTP client, controller and view together.
 *
 * Query parameters (all optional): adapt (seconds), seed, scheme
 * (group1|group2), shuffle (1), label.
 */

import { HttpApi } from "./api.js";
import { SessionController } from "./flow.js";
import type { CreateSessionOptions } from "./api.js";
import { createView } from "./view.js";

function sessionOptionsFromQuery(query: URLSearchParams): CreateSessionOptions {
  const options: CreateSessionOptions = {};
  const adapt = query.get("adapt");
  if (adapt !== null && Number.isFinite(Number(adapt)) && Number(adapt) > 0) {
    options.adapt_seconds = Number(adapt);
  }
  const seed = query.get("seed");
  if (seed !== null && Number.isInteger(Number(seed))) {
    options.seed = Number(seed);
  }
  const scheme = query.get("scheme");
  if (scheme === "group1" || scheme === "group2") {
    options.scheme = scheme;
  }
  if (query.get("shuffle") === "1") {
    options.shuffle = true;
  }
  const label = query.get("label");
  if (label !== null) {
    options.metadata = { label };
  }
  return options;
}

export function boot(root: HTMLElement): SessionController {
  const api = new HttpApi("");
  const options = sessionOptionsFromQuery(new URLSearchParams(window.location.search));
  const controller = new SessionController(api, {
    onView: (view) => ui.render(view),
  });
  const ui = createView(root, {
    onBegin: () => {
      // Full-screen reduces interplay between the stimulus and its
      // surroundings; not all environments grant it, so failure is fine.
      document.documentElement.requestFullscreen?.().catch(() => {});
      void controller.begin(options);
    },
    onStart: () => void controller.start(),
    onSelect: (selection) => controller.select(selection),
    onRedo: () => void controller.redo(),
    onFinish: () => void controller.finish(),
  });
  ui.render(controller.view());
  return controller;
}

const rootElement = document.getElementById("app");
if (rootElement !== null) {
  boot(rootElement);
}
