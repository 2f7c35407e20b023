// Feedback editor: a draggable-handle spline initialized from the adapted
// trajectory. Only the feedback polyline is editable; endpoints stay locked
// to start and goal, and the submitted trajectory is resampled to exactly
// T+1 steps inside the workspace box (mirroring server-side ingestion).

import type { Point, Scenario } from "./api.js";
import { clampToLimits, resample, splineThrough, subsampleHandles } from "./geometry.js";

export const MAX_HANDLES = 20;

export class FeedbackEditor {
  handles: Point[];
  edited = false;
  private readonly numSteps: number;
  private readonly lo: Point;
  private readonly hi: Point;
  private readonly start: Point;
  private readonly goal: Point;

  constructor(adapted: Point[], scenario: Scenario) {
    this.numSteps = adapted.length;
    this.lo = scenario.workspace.lo;
    this.hi = scenario.workspace.hi;
    this.start = scenario.start;
    this.goal = scenario.goal;
    this.handles = subsampleHandles(adapted, MAX_HANDLES);
  }

  get handleCount(): number {
    return this.handles.length;
  }

  isLocked(index: number): boolean {
    return index === 0 || index === this.handles.length - 1;
  }

  /** Move one interior handle by (dx, dy...); endpoint drags are ignored. */
  dragHandle(index: number, delta: Point): void {
    if (this.isLocked(index)) return;
    const h = this.handles[index];
    for (let j = 0; j < h.length; j++) {
      const v = h[j] + (delta[j] ?? 0);
      h[j] = Math.min(Math.max(v, this.lo[j]), this.hi[j]);
    }
    this.edited = true;
  }

  /** The spline the canvas draws while editing. */
  preview(): Point[] {
    return splineThrough(this.handles, this.numSteps);
  }

  /** The trajectory that gets posted: T+1 steps, clamped, endpoints exact. */
  toFeedback(): Point[] {
    const path = clampToLimits(
      resample(splineThrough(this.handles, 4 * this.numSteps), this.numSteps),
      this.lo,
      this.hi,
    );
    path[0] = this.start.slice();
    path[path.length - 1] = this.goal.slice();
    return path;
  }
}
