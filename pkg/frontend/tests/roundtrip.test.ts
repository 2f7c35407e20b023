// Scripted end-to-end run against a live service instance: the workbench
// flow (create, demos, imitate, adapt, drag handles, submit feedback) and
// the reload-statelessness guarantee.

import { beforeAll, describe, expect, inject, it } from "vitest";
import { Client, type Point, type Scenario } from "../src/api.js";
import { buildModel } from "../src/dashboard.js";
import { FeedbackEditor } from "../src/editor.js";
import { axisDeviation, obstacleActivation } from "../src/geometry.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function makeDemos(num: number, seed: number): Point[][] {
  const rand = mulberry32(seed);
  const gauss = () => {
    const u = Math.max(rand(), 1e-12);
    const v = rand();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  };
  const demos: Point[][] = [];
  for (let k = 0; k < num; k++) {
    const sx = 0.1 + 0.05 * gauss();
    const sy = 0.2 + 0.05 * gauss();
    const gx = 1.0 + 0.05 * gauss();
    const gy = 0.3 + 0.05 * gauss();
    const amp = 0.2 * (1 + 0.1 * gauss());
    const traj: Point[] = [];
    for (let i = 0; i < 80; i++) {
      const t = i / 79;
      traj.push([
        sx * (1 - t) + gx * t,
        sy * (1 - t) + gy * t + amp * Math.sin(Math.PI * t),
      ]);
    }
    demos.push(traj);
  }
  return demos;
}

function makeScenario(obstacles: Scenario["obstacles"]): Scenario {
  return {
    spatial_dim: 2,
    obstacles,
    workspace: {
      surface: [0.5, -0.1],
      b1: [-0.3, 0.2],
      b2: [1.3, 0.2],
      d_min: 0.1,
      lo: [-2, -2],
      hi: [2, 2],
    },
    start: [0, 0.1],
    goal: [1, 0.2],
    kinematics: { kind: "identity", spatial_dim: 2 },
  };
}

let client: Client;
const demos = makeDemos(8, 7);

beforeAll(() => {
  client = new Client(inject("serviceBase"));
});

describe("workbench round trip", () => {
  it("dragging two handles under the bowl flips the learned deviation", async () => {
    // find where the imitation path runs so the bowl can block it
    const probe = await client.createSession(makeScenario([]));
    await client.uploadDemonstrations(probe.id, 2, demos);
    const probeImit = await client.imitate(probe.id);
    const mid = probeImit.mean[25];

    const bowl = { center: mid, radius: 0.1, label: "bowl" };
    const session = await client.createSession(makeScenario([bowl]));
    await client.uploadDemonstrations(session.id, 2, demos);
    const imit = await client.imitate(session.id);
    const adapted = await client.adapt(session.id);
    expect(adapted.feasible).toBe(true);

    const before = await client.getWeights(session.id);
    expect(before.weights.obstacles["bowl"]).toEqual([0, 0, 0]);

    // drag the two handles nearest the bowl straight down (lateral edit)
    const editor = new FeedbackEditor(adapted.states, makeScenario([bowl]));
    const byDistance = editor.handles
      .map((h, i) => ({ i, d: Math.hypot(h[0] - mid[0], h[1] - mid[1]) }))
      .filter(({ i }) => !editor.isLocked(i))
      .sort((a, b) => a.d - b.d);
    editor.dragHandle(byDistance[0].i, [0, -0.2]);
    editor.dragHandle(byDistance[1].i, [0, -0.2]);
    expect(editor.edited).toBe(true);

    const fb = await client.submitFeedback(session.id, editor.toFeedback());
    expect(fb.iteration).toBe(1);
    expect(fb.e_i).toBeGreaterThan(0);
    // the service must report a deviation-weight change matching the drag
    const dirY = fb.weights.obstacles["bowl"][2];
    expect(dirY).toBeLessThan(0);

    // and the next adapted trajectory must deviate the same way
    const readapted = await client.adapt(session.id);
    expect(readapted.feasible).toBe(true);
    const activation = obstacleActivation(readapted.states, mid, 0.1);
    const deviation = axisDeviation(readapted.states, imit.mean, 1);
    const active = activation
      .map((a, t) => ({ a, t }))
      .filter(({ a, t }) => a > 0.1 && t > 0 && t < activation.length - 1);
    expect(active.length).toBeGreaterThan(0);
    const below = active.filter(({ t }) => deviation[t] < 0).length;
    expect(below / active.length).toBeGreaterThanOrEqual(0.9);
  });

  it("identical feedback leaves the weights untouched", async () => {
    const session = await client.createSession(makeScenario([]));
    await client.uploadDemonstrations(session.id, 2, demos);
    await client.imitate(session.id);
    const adapted = await client.adapt(session.id);
    const before = await client.getWeights(session.id);
    const editor = new FeedbackEditor(adapted.states, makeScenario([]));
    expect(editor.edited).toBe(false);
    // submitting the untouched editor path is the "confirm anyway" branch
    const resp = await client.submitFeedback(session.id, adapted.states);
    expect(resp.e_i).toBe(0);
    expect(resp.weights).toEqual(before.weights);
  });
});

describe("reload statelessness", () => {
  it("a rebuilt view equals the service's own GET responses", async () => {
    const bowl = { center: [0.5, 0.35] as Point, radius: 0.1, label: "bowl" };
    const session = await client.createSession(makeScenario([bowl]));
    await client.uploadDemonstrations(session.id, 2, demos);
    await client.imitate(session.id);

    for (let round = 0; round < 3; round++) {
      const adapted = await client.adapt(session.id);
      const editor = new FeedbackEditor(adapted.states, makeScenario([bowl]));
      editor.dragHandle(8 + round, [0, -0.05]);
      await client.submitFeedback(session.id, editor.toFeedback());
    }

    const view = buildModel(await client.getSession(session.id));
    expect(view.iteration).toBe(3);
    expect(view.chart).toHaveLength(3);

    // "reload": a brand-new client re-fetches everything from scratch
    const reloaded = new Client(inject("serviceBase"));
    const again = buildModel(await reloaded.getSession(session.id));
    expect(again).toEqual(view);

    const weights = await reloaded.getWeights(session.id);
    expect(weights.iteration).toBe(view.iteration);
    const served = await reloaded.getSession(session.id);
    expect(served.weights).toEqual(weights.weights);
    const chartFromHistory = served.history
      .filter((h) => !h.skipped && h.e_i !== null)
      .map((h) => ({ i: h.i, e: h.e_i }));
    expect(view.chart).toEqual(chartFromHistory);
  });
});
