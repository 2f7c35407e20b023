// Polyline helpers shared by the editor and the scene view.

import type { Point } from "./api.js";

/** Linear interpolation of a polyline onto n evenly spaced samples. */
export function resample(points: Point[], n: number): Point[] {
  if (points.length === 0) throw new Error("empty polyline");
  if (n < 2) throw new Error("need at least 2 samples");
  const d = points[0].length;
  const out: Point[] = [];
  const last = points.length - 1;
  for (let k = 0; k < n; k++) {
    const pos = (k / (n - 1)) * last;
    const i = Math.min(Math.floor(pos), last - 1 < 0 ? 0 : last - 1);
    const frac = points.length === 1 ? 0 : pos - i;
    const p = new Array(d);
    for (let j = 0; j < d; j++) {
      const a = points[i][j];
      const b = points[Math.min(i + 1, last)][j];
      p[j] = a + (b - a) * frac;
    }
    out.push(p);
  }
  return out;
}

/** Componentwise clamp of every point into [lo, hi]. */
export function clampToLimits(points: Point[], lo: Point, hi: Point): Point[] {
  return points.map((p) => p.map((v, j) => Math.min(Math.max(v, lo[j]), hi[j])));
}

/** Pick <= maxHandles control points, always keeping both endpoints. */
export function subsampleHandles(points: Point[], maxHandles: number): Point[] {
  if (maxHandles < 2) throw new Error("need at least 2 handles");
  if (points.length <= maxHandles) return points.map((p) => p.slice());
  const out: Point[] = [];
  for (let k = 0; k < maxHandles; k++) {
    const i = Math.round((k / (maxHandles - 1)) * (points.length - 1));
    out.push(points[i].slice());
  }
  return out;
}

/**
 * Centripetal-free Catmull-Rom spline through the handles, sampled at n
 * points. Endpoints are interpolated exactly; interior segments are smooth.
 */
export function splineThrough(handles: Point[], n: number): Point[] {
  if (handles.length < 2) throw new Error("need at least 2 handles");
  if (handles.length === 2) return resample(handles, n);
  const d = handles[0].length;
  const segs = handles.length - 1;
  const out: Point[] = [];
  for (let k = 0; k < n; k++) {
    const pos = (k / (n - 1)) * segs;
    let s = Math.min(Math.floor(pos), segs - 1);
    const t = pos - s;
    const p0 = handles[Math.max(s - 1, 0)];
    const p1 = handles[s];
    const p2 = handles[s + 1];
    const p3 = handles[Math.min(s + 2, handles.length - 1)];
    const p = new Array(d);
    for (let j = 0; j < d; j++) {
      p[j] =
        0.5 *
        (2 * p1[j] +
          (-p0[j] + p2[j]) * t +
          (2 * p0[j] - 5 * p1[j] + 4 * p2[j] - p3[j]) * t * t +
          (-p0[j] + 3 * p1[j] - 3 * p2[j] + p3[j]) * t * t * t);
    }
    out.push(p);
  }
  return out;
}

/** Signed deviation of y from the reference path along one axis, per step. */
export function axisDeviation(y: Point[], ref: Point[], axis: number): number[] {
  return y.map((p, t) => p[axis] - ref[t][axis]);
}

/** exp(-dist^2 / radius) activation of one obstacle along a path. */
export function obstacleActivation(y: Point[], center: Point, radius: number): number[] {
  return y.map((p) => {
    let dist2 = 0;
    for (let j = 0; j < p.length; j++) dist2 += (p[j] - center[j]) ** 2;
    return Math.exp(-dist2 / radius);
  });
}
