// 2D top-down canvas. Everything drawn here is a pure function of the
// session state plus the editor's handle positions.

import type { Point, Scenario } from "./api.js";

export interface ViewTransform {
  scale: number;
  ox: number;
  oy: number;
}

export function fitTransform(scenario: Scenario, width: number, height: number): ViewTransform {
  const lo = scenario.workspace.lo;
  const hi = scenario.workspace.hi;
  const pad = 20;
  const scale = Math.min(
    (width - 2 * pad) / (hi[0] - lo[0]),
    (height - 2 * pad) / (hi[1] - lo[1]),
  );
  return { scale, ox: pad - lo[0] * scale, oy: height - pad + lo[1] * scale };
}

export function toScreen(p: Point, v: ViewTransform): [number, number] {
  // y axis points up in workspace coordinates, down on the canvas
  return [p[0] * v.scale + v.ox, v.oy - p[1] * v.scale];
}

export function fromScreen(x: number, y: number, v: ViewTransform): Point {
  return [(x - v.ox) / v.scale, (v.oy - y) / v.scale];
}

function polyline(ctx: CanvasRenderingContext2D, pts: Point[], v: ViewTransform) {
  ctx.beginPath();
  pts.forEach((p, i) => {
    const [x, y] = toScreen(p, v);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

export interface SceneLayers {
  imitation?: Point[];
  adapted?: Point[];
  previous?: Point[][];
  feedbackPreview?: Point[];
  handles?: Point[];
  activeHandle?: number;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scenario: Scenario,
  layers: SceneLayers,
  v: ViewTransform,
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);

  const lo = scenario.workspace.lo;
  const hi = scenario.workspace.hi;
  const [wx, wy] = toScreen([lo[0], hi[1]], v);
  ctx.strokeStyle = "#cbd5e1";
  ctx.strokeRect(wx, wy, (hi[0] - lo[0]) * v.scale, (hi[1] - lo[1]) * v.scale);

  for (const obs of scenario.obstacles) {
    const [cx, cy] = toScreen(obs.center, v);
    ctx.beginPath();
    ctx.arc(cx, cy, obs.radius * v.scale, 0, 2 * Math.PI);
    ctx.fillStyle = "rgba(220, 38, 38, 0.15)";
    ctx.fill();
    ctx.strokeStyle = "#dc2626";
    ctx.stroke();
    ctx.fillStyle = "#dc2626";
    ctx.fillText(obs.label, cx + 4, cy - 4);
  }

  for (const pts of layers.previous ?? []) {
    ctx.strokeStyle = "rgba(100, 116, 139, 0.35)";
    ctx.lineWidth = 1;
    polyline(ctx, pts, v);
  }
  if (layers.imitation) {
    ctx.strokeStyle = "#94a3b8";
    ctx.setLineDash([4, 4]);
    ctx.lineWidth = 1.5;
    polyline(ctx, layers.imitation, v);
    ctx.setLineDash([]);
  }
  if (layers.adapted) {
    ctx.strokeStyle = "#2563eb";
    ctx.lineWidth = 2;
    polyline(ctx, layers.adapted, v);
  }
  if (layers.feedbackPreview) {
    ctx.strokeStyle = "#16a34a";
    ctx.lineWidth = 2;
    polyline(ctx, layers.feedbackPreview, v);
  }
  if (layers.handles) {
    layers.handles.forEach((h, i) => {
      const [x, y] = toScreen(h, v);
      const locked = i === 0 || i === layers.handles!.length - 1;
      ctx.beginPath();
      ctx.arc(x, y, i === layers.activeHandle ? 7 : 5, 0, 2 * Math.PI);
      ctx.fillStyle = locked ? "#9ca3af" : "#16a34a";
      ctx.fill();
      ctx.strokeStyle = "#ffffff";
      ctx.stroke();
    });
  }

  for (const [p, color] of [
    [scenario.start, "#0f766e"],
    [scenario.goal, "#7c3aed"],
  ] as [Point, string][]) {
    const [x, y] = toScreen(p, v);
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, 2 * Math.PI);
    ctx.fillStyle = color;
    ctx.fill();
  }
}
