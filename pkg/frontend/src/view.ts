/**
 * DOM renderer. Builds the static skeleton once, then mutates it from
 * UiView models. All interaction policy (what is clickable when) comes from
 * the controller's view model; this module only reflects it.
 *
 * Panel images are assigned the data URLs built from the exact bytes the
 * service returned — no canvas round trips, no recoloring.
 */

import type { Selection, UiView } from "./flow.js";

export interface ViewHandlers {
  onBegin: () => void;
  onStart: () => void;
  onSelect: (selection: Selection) => void;
  onRedo: () => void;
  onFinish: () => void;
}

export interface View {
  render(view: UiView): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text) {
    node.textContent = text;
  }
  return node;
}

const DISCLAIMER =
  "Colors on an uncalibrated display shift perceived hues; results are indicative only.";

export function createView(root: HTMLElement, handlers: ViewHandlers): View {
  root.textContent = "";

  // Landing screen ---------------------------------------------------------
  const landing = el("section", "screen landing");
  const landingIntro = el(
    "p",
    "intro",
    "You will adapt to a colored disc, then judge which of two candidate " +
      "images better matches the afterimage you see.",
  );
  const landingDisclaimer = el("p", "disclaimer", DISCLAIMER);
  const beginButton = el("button", "begin", "Begin session");
  beginButton.addEventListener("click", () => handlers.onBegin());
  landing.append(landingIntro, landingDisclaimer, beginButton);

  // Trial screen -----------------------------------------------------------
  const trial = el("section", "screen trial");
  const header = el("header", "trial-header");
  const progress = el("span", "progress", "0 / 0");
  // Corner countdown: deliberately outside the stimulus area so the timer
  // does not contaminate adaptation.
  const countdown = el("span", "countdown");
  header.append(progress, countdown);

  const upper = el("div", "upper-window");
  const stimulusImg = el("img", "stimulus-image");
  stimulusImg.alt = "adaptation stimulus";
  const newFieldImg = el("img", "new-field-image");
  newFieldImg.alt = "new stimulating field";
  const fixation = el("div", "fixation", "+");
  upper.append(stimulusImg, newFieldImg, fixation);

  const panels = el("div", "panel-row");
  const panelButtons: Record<"left" | "right", HTMLButtonElement> = {
    left: el("button", "panel panel-left"),
    right: el("button", "panel panel-right"),
  };
  const panelImages: Record<"left" | "right", HTMLImageElement> = {
    left: el("img", "panel-image"),
    right: el("img", "panel-image"),
  };
  for (const side of ["left", "right"] as const) {
    panelImages[side].alt = `candidate afterimage (${side})`;
    const placeholder = el("div", "panel-placeholder");
    panelButtons[side].append(panelImages[side], placeholder);
    panelButtons[side].addEventListener("click", () => handlers.onSelect(side));
    panels.append(panelButtons[side]);
  }

  const controls = el("div", "controls");
  const startButton = el("button", "start", "Start");
  startButton.addEventListener("click", () => handlers.onStart());
  const almostButton = el("button", "almost-same", "Almost the same");
  almostButton.addEventListener("click", () => handlers.onSelect("almost_same"));
  const redoButton = el("button", "redo", "Redo");
  redoButton.addEventListener("click", () => handlers.onRedo());
  const finishButton = el("button", "finish", "Finish");
  finishButton.addEventListener("click", () => handlers.onFinish());
  controls.append(startButton, almostButton, redoButton, finishButton);

  const trialDisclaimer = el("p", "disclaimer", DISCLAIMER);
  trial.append(header, upper, panels, controls, trialDisclaimer);

  // Completion screen ------------------------------------------------------
  const done = el("section", "screen done");
  const thanks = el("p", "thanks", "All trials complete. Thank you!");
  const scoresTable = el("table", "scores");
  done.append(thanks, scoresTable);

  const error = el("div", "error-banner");
  error.setAttribute("role", "alert");

  root.append(landing, trial, done, error);

  function renderScores(view: UiView): void {
    scoresTable.textContent = "";
    if (view.scores === null) {
      return;
    }
    const head = document.createElement("tr");
    for (const label of ["test color", "new color", "S1", "S2", "trials"]) {
      head.append(el("th", "", label));
    }
    scoresTable.append(head);
    for (const cell of view.scores.cells) {
      const row = document.createElement("tr");
      row.append(
        el("td", "", cell.c_ot_name ?? cell.c_ot.join(",")),
        el("td", "", cell.c_n_name ?? cell.c_n.join(",")),
        el("td", "", cell.s1_total.toFixed(1)),
        el("td", "", cell.s2_total.toFixed(1)),
        el("td", "", String(cell.completed)),
      );
      scoresTable.append(row);
    }
  }

  function render(view: UiView): void {
    landing.hidden = view.kind !== "landing";
    trial.hidden = view.kind !== "trial";
    done.hidden = view.kind !== "done";

    error.textContent = view.error ?? "";
    error.hidden = view.error === null;

    if (view.kind === "trial" && view.trial !== null) {
      const t = view.trial;
      progress.textContent = `${view.progress.completed} / ${view.progress.total}`;

      const adapting = t.phase === "adapting";
      countdown.hidden = !adapting;
      countdown.textContent = adapting ? `${Math.ceil(t.remainingSeconds)}s` : "";

      const choosing = t.phase === "choosing";
      stimulusImg.hidden = choosing || t.stimulusUrl === null;
      if (t.stimulusUrl !== null && stimulusImg.src !== t.stimulusUrl) {
        stimulusImg.src = t.stimulusUrl;
      }
      newFieldImg.hidden = !choosing || t.newFieldUrl === null;
      if (t.newFieldUrl !== null && newFieldImg.src !== t.newFieldUrl) {
        newFieldImg.src = t.newFieldUrl;
      }
      fixation.hidden = choosing;

      for (const side of ["left", "right"] as const) {
        const url = side === "left" ? t.leftPanelUrl : t.rightPanelUrl;
        panelImages[side].hidden = url === null;
        if (url !== null && panelImages[side].src !== url) {
          panelImages[side].src = url;
        }
        panelButtons[side].disabled = !t.buttons[side];
        panelButtons[side].classList.toggle("selected", t.selection === side);
      }

      startButton.disabled = !t.buttons.start;
      almostButton.disabled = !t.buttons.almostSame;
      almostButton.classList.toggle("selected", t.selection === "almost_same");
      redoButton.disabled = !t.buttons.redo;
      finishButton.disabled = !t.buttons.finish;
    }

    if (view.kind === "done") {
      renderScores(view);
    }
  }

  return { render };
}
