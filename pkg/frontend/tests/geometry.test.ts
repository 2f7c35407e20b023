import { describe, expect, it } from "vitest";
import {
  axisDeviation,
  clampToLimits,
  obstacleActivation,
  resample,
  splineThrough,
  subsampleHandles,
} from "../src/geometry.js";

describe("resample", () => {
  it("keeps the endpoints exactly", () => {
    const pts = [
      [0, 0],
      [0.3, 1],
      [1, 0.5],
    ];
    const out = resample(pts, 11);
    expect(out).toHaveLength(11);
    expect(out[0]).toEqual([0, 0]);
    expect(out[10]).toEqual([1, 0.5]);
  });

  it("is exact on straight lines", () => {
    const out = resample(
      [
        [0, 0],
        [1, 2],
      ],
      5,
    );
    for (let k = 0; k < 5; k++) {
      expect(out[k][0]).toBeCloseTo(k / 4, 12);
      expect(out[k][1]).toBeCloseTo(k / 2, 12);
    }
  });

  it("is idempotent at matching length", () => {
    const pts = [
      [0, 0],
      [0.25, 0.7],
      [0.5, 1.1],
      [0.75, 0.6],
      [1, 0],
    ];
    const once = resample(pts, 5);
    pts.forEach((p, i) => {
      expect(once[i][0]).toBeCloseTo(p[0], 12);
      expect(once[i][1]).toBeCloseTo(p[1], 12);
    });
  });

  it("rejects degenerate input", () => {
    expect(() => resample([], 5)).toThrow();
    expect(() => resample([[0, 0]], 1)).toThrow();
  });
});

describe("clampToLimits", () => {
  it("clamps componentwise", () => {
    const out = clampToLimits([[-5, 0.5], [2, 3]], [-1, -1], [1, 1]);
    expect(out).toEqual([
      [-1, 0.5],
      [1, 1],
    ]);
  });

  it("does not mutate its input", () => {
    const pts = [[-5, 0]];
    clampToLimits(pts, [-1, -1], [1, 1]);
    expect(pts[0][0]).toBe(-5);
  });
});

describe("subsampleHandles", () => {
  it("returns at most the requested count and keeps endpoints", () => {
    const pts = Array.from({ length: 51 }, (_, i) => [i / 50, Math.sin(i)]);
    const out = subsampleHandles(pts, 20);
    expect(out).toHaveLength(20);
    expect(out[0]).toEqual(pts[0]);
    expect(out[19]).toEqual(pts[50]);
  });

  it("passes short polylines through", () => {
    const pts = [
      [0, 0],
      [1, 1],
      [2, 0],
    ];
    expect(subsampleHandles(pts, 20)).toEqual(pts);
  });
});

describe("splineThrough", () => {
  it("interpolates the first and last handle", () => {
    const handles = [
      [0, 0],
      [0.4, 0.6],
      [0.7, -0.2],
      [1, 0.1],
    ];
    const out = splineThrough(handles, 31);
    expect(out[0][0]).toBeCloseTo(0, 10);
    expect(out[0][1]).toBeCloseTo(0, 10);
    expect(out[30][0]).toBeCloseTo(1, 10);
    expect(out[30][1]).toBeCloseTo(0.1, 10);
  });

  it("passes through interior handles at segment boundaries", () => {
    const handles = [
      [0, 0],
      [0.5, 1],
      [1, 0],
    ];
    const out = splineThrough(handles, 21);
    expect(out[10][0]).toBeCloseTo(0.5, 10);
    expect(out[10][1]).toBeCloseTo(1, 10);
  });

  it("reduces to a line for two handles", () => {
    const out = splineThrough(
      [
        [0, 0],
        [1, 1],
      ],
      3,
    );
    expect(out[1][0]).toBeCloseTo(0.5, 12);
  });
});

describe("deviation and activation", () => {
  it("computes signed per-step axis deviation", () => {
    const ref = [
      [0, 0],
      [1, 0],
    ];
    const y = [
      [0, 0.2],
      [1, -0.3],
    ];
    expect(axisDeviation(y, ref, 1)).toEqual([0.2, -0.3]);
  });

  it("activation is 1 at the center and decays with distance", () => {
    const act = obstacleActivation(
      [
        [0.5, 0.5],
        [5, 5],
      ],
      [0.5, 0.5],
      0.1,
    );
    expect(act[0]).toBeCloseTo(1, 12);
    expect(act[1]).toBeLessThan(1e-10);
  });
});
