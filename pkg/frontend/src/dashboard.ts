// Loop dashboard: iteration counter, learning-curve points, weights table.
// The view model is a pure function of the session state fetched from the
// service, which is what makes page reloads lossless.

import type { SessionState, Weights } from "./api.js";

export interface ChartPoint {
  i: number;
  e: number;
}

export interface WeightRow {
  group: string;
  name: string;
  value: number;
}

export interface DashboardModel {
  iteration: number;
  chart: ChartPoint[];
  weights: WeightRow[];
}

export function weightRows(w: Weights): WeightRow[] {
  const rows: WeightRow[] = [];
  w.w_D.forEach((v, i) => rows.push({ group: "imitation", name: `w_D[${i}]`, value: v }));
  rows.push({ group: "control", name: "w_C", value: w.w_C });
  for (const label of Object.keys(w.obstacles).sort()) {
    w.obstacles[label].forEach((v, i) =>
      rows.push({
        group: label,
        name: i === 0 ? `${label}.avoid` : `${label}.dir[${i - 1}]`,
        value: v,
      }),
    );
  }
  rows.push({ group: "borders", name: "w_B", value: w.w_B });
  rows.push({ group: "surface", name: "w_S", value: w.w_S });
  return rows;
}

export function buildModel(session: SessionState): DashboardModel {
  const chart: ChartPoint[] = [];
  for (const entry of session.history) {
    if (!entry.skipped && entry.e_i !== null && entry.e_i !== undefined) {
      chart.push({ i: entry.i, e: entry.e_i });
    }
  }
  return { iteration: session.iteration, chart, weights: weightRows(session.weights) };
}

export function render(model: DashboardModel, root: HTMLElement): void {
  root.innerHTML = "";
  const counter = document.createElement("div");
  counter.className = "iteration";
  counter.textContent = `iteration ${model.iteration}`;
  root.appendChild(counter);

  const chart = document.createElement("ul");
  chart.className = "curve";
  for (const pt of model.chart) {
    const li = document.createElement("li");
    li.dataset.i = String(pt.i);
    li.textContent = `e(${pt.i}) = ${pt.e.toPrecision(4)}`;
    chart.appendChild(li);
  }
  root.appendChild(chart);

  const table = document.createElement("table");
  table.className = "weights";
  for (const row of model.weights) {
    const tr = document.createElement("tr");
    const name = document.createElement("td");
    name.textContent = row.name;
    const value = document.createElement("td");
    value.textContent = row.value.toPrecision(6);
    tr.append(name, value);
    table.appendChild(tr);
  }
  root.appendChild(table);
}
