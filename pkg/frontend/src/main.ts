// Page wiring. The session id lives in the URL hash so a reload re-fetches
// everything from the service; nothing below keeps state the server does not
// already have.

import { ApiError, Client, type AdaptedResponse, type Point, type SessionState } from "./api.js";
import { buildModel, render } from "./dashboard.js";
import { FeedbackEditor } from "./editor.js";
import { drawScene, fitTransform, fromScreen, toScreen, type SceneLayers } from "./sceneview.js";

const client = new Client("");

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const dashboardEl = document.getElementById("dashboard") as HTMLElement;
const banner = document.getElementById("banner") as HTMLElement;
const scenarioInput = document.getElementById("scenario-input") as HTMLTextAreaElement;
const demosInput = document.getElementById("demos-input") as HTMLTextAreaElement;

let session: SessionState | null = null;
let imitation: Point[] | null = null;
let adapted: AdaptedResponse | null = null;
let previous: Point[][] = [];
let editor: FeedbackEditor | null = null;
let activeHandle = -1;

function showError(err: unknown) {
  banner.hidden = false;
  if (err instanceof ApiError && err.status === 0) {
    banner.textContent = "service unreachable - retry when it is back";
  } else {
    banner.textContent = String(err instanceof Error ? err.message : err);
  }
}

function clearError() {
  banner.hidden = true;
}

function redraw() {
  if (!session) return;
  const v = fitTransform(session.scenario, canvas.width, canvas.height);
  const layers: SceneLayers = {
    imitation: imitation ?? undefined,
    adapted: adapted?.states,
    previous,
    feedbackPreview: editor?.edited ? editor.preview() : undefined,
    handles: editor?.handles,
    activeHandle,
  };
  drawScene(ctx, session.scenario, layers, v);
  render(buildModel(session), dashboardEl);
}

async function refreshSession() {
  if (!session) return;
  session = await client.getSession(session.id);
  redraw();
}

async function restoreFromHash() {
  const id = window.location.hash.slice(1);
  if (!id) return;
  try {
    session = await client.getSession(id);
    const stored = await client
      .getTrajectory(id, "imitation")
      .catch(() => null);
    imitation = stored?.mean ?? null;
    const adaptedIds = session.trajectory_ids.filter((t) => t.startsWith("adapted-"));
    if (adaptedIds.length > 0) {
      const last = adaptedIds[adaptedIds.length - 1];
      const stored = await client.getTrajectory(id, last);
      if (stored.states) {
        adapted = { states: stored.states } as AdaptedResponse;
        editor = new FeedbackEditor(stored.states, session.scenario);
      }
    }
    clearError();
    redraw();
  } catch (err) {
    showError(err);
  }
}

async function guarded(op: () => Promise<void>) {
  try {
    await op();
    clearError();
    redraw();
  } catch (err) {
    showError(err);
  }
}

document.getElementById("create")!.addEventListener("click", () =>
  guarded(async () => {
    const scenario = JSON.parse(scenarioInput.value);
    session = await client.createSession(scenario);
    window.location.hash = session.id;
    imitation = null;
    adapted = null;
    previous = [];
    editor = null;
  }),
);

document.getElementById("upload-demos")!.addEventListener("click", () =>
  guarded(async () => {
    if (!session) throw new Error("create a session first");
    const demos = JSON.parse(demosInput.value);
    await client.uploadDemonstrations(session.id, demos.d, demos.trajectories);
  }),
);

document.getElementById("imitate")!.addEventListener("click", () =>
  guarded(async () => {
    if (!session) throw new Error("create a session first");
    const resp = await client.imitate(session.id);
    imitation = resp.mean;
    await refreshSession();
  }),
);

document.getElementById("adapt")!.addEventListener("click", () =>
  guarded(async () => {
    if (!session) throw new Error("create a session first");
    if (adapted) previous.push(adapted.states);
    adapted = await client.adapt(session.id);
    editor = new FeedbackEditor(adapted.states, session.scenario);
    await refreshSession();
  }),
);

document.getElementById("submit-feedback")!.addEventListener("click", () =>
  guarded(async () => {
    if (!session || !editor) throw new Error("adapt first");
    if (!editor.edited) {
      const ok = window.confirm(
        "feedback identical to adapted trajectory will not change weights - submit anyway?",
      );
      if (!ok) return;
    }
    await client.submitFeedback(session.id, editor.toFeedback());
    await refreshSession();
  }),
);

canvas.addEventListener("pointerdown", (ev) => {
  if (!editor || !session) return;
  const v = fitTransform(session.scenario, canvas.width, canvas.height);
  const rect = canvas.getBoundingClientRect();
  const x = ev.clientX - rect.left;
  const y = ev.clientY - rect.top;
  activeHandle = -1;
  editor.handles.forEach((h, i) => {
    const [hx, hy] = toScreen(h, v);
    if (!editor!.isLocked(i) && Math.hypot(hx - x, hy - y) < 10) activeHandle = i;
  });
  redraw();
});

canvas.addEventListener("pointermove", (ev) => {
  if (!editor || !session || activeHandle < 0 || ev.buttons === 0) return;
  const v = fitTransform(session.scenario, canvas.width, canvas.height);
  const rect = canvas.getBoundingClientRect();
  const here = fromScreen(ev.clientX - rect.left, ev.clientY - rect.top, v);
  const h = editor.handles[activeHandle];
  editor.dragHandle(activeHandle, [here[0] - h[0], here[1] - h[1]]);
  redraw();
});

canvas.addEventListener("pointerup", () => {
  activeHandle = -1;
  redraw();
});

window.addEventListener("hashchange", restoreFromHash);
restoreFromHash();
