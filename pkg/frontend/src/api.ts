// Typed client for the coadapt session service. Every mutation on the page
// goes through here; the page itself never owns authoritative state.

export type Point = number[];

export interface Obstacle {
  center: Point;
  radius: number;
  label: string;
}

export interface Scenario {
  spatial_dim: number;
  obstacles: Obstacle[];
  workspace: {
    surface: Point;
    b1: Point;
    b2: Point;
    d_min: number;
    lo: Point;
    hi: Point;
  };
  start: Point;
  goal: Point;
  kinematics: { kind: string; [key: string]: unknown };
  object_label?: string;
}

export interface Weights {
  w_D: number[];
  w_C: number;
  obstacles: Record<string, number[]>;
  w_B: number;
  w_S: number;
}

export interface HistoryEntry {
  i: number;
  alpha?: number;
  e_i: number | null;
  weights?: Weights;
  skipped?: boolean;
}

export interface SessionState {
  id: string;
  scenario: Scenario;
  config: { T: number; Tp: number; a_diag: number };
  iteration: number;
  weights: Weights;
  history: HistoryEntry[];
  trajectory_ids: string[];
}

export interface AdaptedResponse {
  trajectory_id: string;
  states: Point[];
  actions: Point[];
  min_obstacle_clearance: number[];
  terminal_error: number;
  feasible: boolean;
  step_rewards: number[];
}

export interface FeedbackResponse {
  trajectory_id: string;
  iteration: number;
  alpha: number;
  e_i: number;
  weights: Weights;
}

export interface ImitationResponse {
  trajectory_id: string;
  mean: Point[];
  variance: Point[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail?: unknown,
  ) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(base + path, init);
  } catch (err) {
    throw new ApiError(0, "unreachable", String(err));
  }
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body.code ?? "error", body.message ?? resp.statusText, body.detail);
  }
  return body as T;
}

function post<T>(base: string, path: string, payload?: unknown): Promise<T> {
  return request<T>(base, path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: payload === undefined ? "{}" : JSON.stringify(payload),
  });
}

export class Client {
  constructor(public base: string = "") {}

  createSession(scenario: Scenario, config?: { T?: number; Tp?: number; a_diag?: number }): Promise<SessionState> {
    return post(this.base, "/sessions", { scenario, config });
  }

  getSession(id: string): Promise<SessionState> {
    return request(this.base, `/sessions/${id}`);
  }

  uploadDemonstrations(id: string, d: number, trajectories: Point[][]): Promise<{ d: number }> {
    return post(this.base, `/sessions/${id}/demonstrations`, { d, trajectories });
  }

  imitate(id: string): Promise<ImitationResponse> {
    return post(this.base, `/sessions/${id}/imitate`);
  }

  adapt(id: string): Promise<AdaptedResponse> {
    return post(this.base, `/sessions/${id}/adapt`);
  }

  submitFeedback(id: string, trajectory: Point[]): Promise<FeedbackResponse> {
    return post(this.base, `/sessions/${id}/feedback`, { trajectory });
  }

  getWeights(id: string): Promise<{ iteration: number; weights: Weights }> {
    return request(this.base, `/sessions/${id}/weights`);
  }

  getTrajectory(id: string, tid: string): Promise<{ trajectory_id: string; states?: Point[]; mean?: Point[] }> {
    return request(this.base, `/sessions/${id}/trajectories/${tid}`);
  }
}
