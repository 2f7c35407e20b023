"""Receding-horizon trajectory adaptation.

The trajectory is modulated through linear dynamics z(t+1) = a*z(t) + action(t)
with y = z, so horizon states are themselves the decision variables and actions
are recovered afterwards.  Each horizon maximizes the accumulated reward under
box limits (projection), obstacle spheres (growing quadratic penalty), and a
terminal equality (quadratic penalty) once the horizon reaches the final step.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rewards, scenario
from .kinematics import KinematicModel
from .promp import ImitationTrajectory
from .rewards import RewardWeights
from .scenario import TaskContext


class InfeasibleScenarioError(ValueError):
    """Raised when the task context itself rules out a feasible trajectory."""


@dataclass
class AdaptationConfig:
    T: int = 50
    Tp: int = 11
    a_diag: float = 0.9
    b_identity: bool = True
    c_identity: bool = True
    max_iter: int = 200
    penalty_mu0: float = 100.0
    penalty_growth: float = 40.0
    penalty_rounds: int = 3
    terminal_penalty: float = 1e4
    tol: float = 1e-7
    feas_tol: float = 1e-4
    term_tol: float = 1e-3
    obstacle_margin: float = 1e-3
    deviation_sign: float = 1.0

    def __post_init__(self):
        if not (2 <= self.Tp <= self.T):
            raise ValueError("need 2 <= Tp <= T")
        if not (0 < self.a_diag <= 1):
            raise ValueError("a_diag must be in (0, 1]")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class AdaptedTrajectory:
    states: np.ndarray
    actions: np.ndarray
    min_obstacle_clearance: list
    terminal_error: float
    feasible: bool = True
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {
            "states": self.states.tolist(),
            "actions": self.actions.tolist(),
            "min_obstacle_clearance": list(self.min_obstacle_clearance),
            "terminal_error": self.terminal_error,
            "feasible": self.feasible,
            "violations": list(self.violations),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            states=np.asarray(data["states"], dtype=float),
            actions=np.asarray(data["actions"], dtype=float),
            min_obstacle_clearance=list(data["min_obstacle_clearance"]),
            terminal_error=float(data["terminal_error"]),
            feasible=bool(data.get("feasible", True)),
            violations=list(data.get("violations", [])),
        )


def check_feasibility(y, ctx: TaskContext, kin: KinematicModel, feas_tol=1e-4,
                      imit: ImitationTrajectory = None, term_tol=1e-3):
    """Per-step limit/obstacle violation report; terminal check when imit given."""
    y = np.asarray(y, dtype=float)
    lo, hi = ctx.workspace.lo, ctx.workspace.hi
    violations = []
    for t in range(y.shape[0]):
        over = np.maximum(y[t] - hi, 0.0) + np.maximum(lo - y[t], 0.0)
        if np.max(over) > feas_tol:
            violations.append({"type": "limits", "step": t, "magnitude": float(np.max(over))})
        e = kin.end_effector(y[t])
        for k, obs in enumerate(ctx.obstacles):
            depth = obs.safety_radius - float(np.linalg.norm(e - obs.center_arr))
            if depth > feas_tol:
                violations.append(
                    {"type": "obstacle", "step": t, "obstacle": k, "magnitude": depth}
                )
    if imit is not None:
        term_err = float(np.linalg.norm(y[-1] - imit.mean[-1]))
        if term_err > term_tol:
            violations.append({"type": "terminal", "step": y.shape[0] - 1, "magnitude": term_err})
    return violations


class _HorizonProblem:
    """Penalized horizon objective over the free states y(i+1..i+H).

    Merit and gradient are vectorized over the horizon steps; non-identity
    kinematics go through per-step end-effector/Jacobian evaluation.
    """

    def __init__(self, y_i, i, imit, ctx, kin, w, cfg, horizon):
        self.y_i = np.asarray(y_i, dtype=float)
        self.kin = kin
        self.w = w
        self.cfg = cfg
        self.H = horizon
        self.terminal = (i + horizon) == cfg.T
        self.lo = ctx.workspace.lo
        self.hi = ctx.workspace.hi
        sl = slice(i + 1, i + 1 + horizon)
        self.mu_D = imit.mean[sl]
        self.vexp = np.exp(-imit.variance[sl]) * np.asarray(w.w_D)
        self.identity = kin.kind == "identity"
        self.E_D = self.mu_D if self.identity else np.stack(
            [kin.end_effector(s) for s in self.mu_D]
        )
        self.y_final = imit.mean[-1]
        self.obs_centers = [o.center_arr for o in ctx.obstacles]
        self.obs_radii = [o.safety_radius for o in ctx.obstacles]
        self.obs_w = [w.obstacle_weight(o.label, ctx.spatial_dim) for o in ctx.obstacles]
        ws = ctx.workspace
        self.borders = (np.asarray(ws.border_left), np.asarray(ws.border_right))
        self.surface = np.asarray(ws.surface)
        self.d_min = ws.d_min

    def project(self, X):
        return np.clip(X, self.lo, self.hi)

    def _spatial(self, X):
        return X if self.identity else np.stack([self.kin.end_effector(s) for s in X])

    def merit(self, X, mu, lam):
        cfg, w = self.cfg, self.w
        total = -float(np.sum(self.vexp * (X - self.mu_D) ** 2))
        diff = np.diff(np.vstack([self.y_i[None, :], X]), axis=0)
        total -= w.w_C * float(np.sum(diff**2))
        E = self._spatial(X)
        for center, radius, wv in zip(self.obs_centers, self.obs_radii, self.obs_w):
            U = E - center
            dist2 = np.sum(U**2, axis=1)
            if np.any(wv):
                dist = np.sqrt(dist2)
                decay = np.exp(-dist2 / radius)
                dev = cfg.deviation_sign * (self.E_D - E)
                s = wv[0] * (-dist) + dev @ wv[1:]
                total -= float(np.sum(s * decay))
            c = np.maximum((radius + cfg.obstacle_margin) ** 2 - dist2, 0.0)
            total -= mu * float(np.sum(c**2))
        if w.w_B != 0.0:
            for b in self.borders:
                total -= w.w_B * float(
                    np.sum(np.exp(-np.sum((E - b) ** 2, axis=1) / self.d_min))
                )
        if w.w_S != 0.0:
            total -= w.w_S * float(np.sum((E - self.surface) ** 2))
        if self.terminal:
            total -= lam * float(np.sum((X[-1] - self.y_final) ** 2))
        return total

    def gradient(self, X, mu, lam):
        cfg, w = self.cfg, self.w
        G = -2.0 * self.vexp * (X - self.mu_D)
        diff = np.diff(np.vstack([self.y_i[None, :], X]), axis=0)
        G += -2.0 * w.w_C * diff
        G[:-1] += 2.0 * w.w_C * diff[1:]
        E = self._spatial(X)
        GE = np.zeros_like(E)
        for center, radius, wv in zip(self.obs_centers, self.obs_radii, self.obs_w):
            U = E - center
            dist2 = np.sum(U**2, axis=1)
            if np.any(wv):
                dist = np.sqrt(np.maximum(dist2, 1e-24))
                decay = np.exp(-dist2 / radius)
                dev = cfg.deviation_sign * (self.E_D - E)
                s = wv[0] * (-dist) + dev @ wv[1:]
                ds = wv[0] * (-U / dist[:, None]) - cfg.deviation_sign * wv[1:]
                GE -= decay[:, None] * ds + (s * decay * (-2.0 / radius))[:, None] * U
            c = np.maximum((radius + cfg.obstacle_margin) ** 2 - dist2, 0.0)
            GE += (mu * 4.0 * c)[:, None] * U
        if w.w_B != 0.0:
            for b in self.borders:
                V = E - b
                expo = np.exp(-np.sum(V**2, axis=1) / self.d_min)
                GE -= w.w_B * (expo * (-2.0 / self.d_min))[:, None] * V
        if w.w_S != 0.0:
            GE -= w.w_S * 2.0 * (E - self.surface)
        if self.identity:
            G += GE
        else:
            for j in range(self.H):
                G[j] += self.kin.jacobian(X[j]).T @ GE[j]
        if self.terminal:
            G[-1] += -2.0 * lam * (X[-1] - self.y_final)
        return G


def _push_out_of_obstacles(X, ctx, kin, cfg, flip=False):
    """Move warm-start states radially out of obstacle spheres.

    The imitation path may run straight through an obstacle center, where the
    penalty gradient vanishes by symmetry; states inside a sphere are lifted to
    its surface.  A state exactly at the center breaks the tie along the last
    spatial axis (the "above" direction).  With flip=True the push goes to the
    opposite side of each sphere, giving a second candidate basin.  Identity
    kinematics only; for joint chains the penalty must do the work.

    Returns (states, pushed) where pushed flags whether anything moved.
    """
    if kin.kind != "identity" or not ctx.obstacles:
        return X, False
    X = X.copy()
    pushed = False
    sign = -1.0 if flip else 1.0
    for j in range(X.shape[0]):
        for obs in ctx.obstacles:
            u = X[j] - obs.center_arr
            dist = float(np.linalg.norm(u))
            r = obs.safety_radius + 2.0 * cfg.obstacle_margin
            if dist < r:
                if dist < 1e-9:
                    u = np.zeros_like(u)
                    u[-1] = 1.0
                    dist = 1.0
                X[j] = obs.center_arr + sign * u * (r / dist)
                pushed = True
    return np.clip(X, ctx.workspace.lo, ctx.workspace.hi), pushed


def solve_horizon(y_i, i, imit, ctx, kin, w, cfg: AdaptationConfig, warm_states=None):
    """Optimize one prediction horizon; returns (states (H,d), converged flag).

    The returned states are y(i+1 .. min(i+Tp, T)).  Deterministic given its
    inputs; the accepted iterate never scores below the warm start under the
    final penalty weight.
    """
    if i + 1 > cfg.T:
        raise ValueError("horizon start beyond final step")
    H = min(cfg.Tp, cfg.T - i)
    prob = _HorizonProblem(y_i, i, imit, ctx, kin, w, cfg, H)
    if warm_states is None:
        warm_states = imit.mean[i + 1 : i + 1 + H]
    Xp = prob.project(np.array(warm_states, dtype=float))
    X0, pushed = _push_out_of_obstacles(Xp, ctx, kin, cfg)

    def ascend(X0):
        X = X0.copy()
        iters_per_round = max(1, cfg.max_iter // cfg.penalty_rounds)
        step = 1e-2
        converged = False
        for rnd in range(cfg.penalty_rounds):
            mu = cfg.penalty_mu0 * cfg.penalty_growth**rnd
            lam = cfg.terminal_penalty * cfg.penalty_growth**rnd
            for _ in range(iters_per_round):
                g = prob.gradient(X, mu, lam)
                gnorm2 = float(np.sum(g**2))
                if gnorm2 < 1e-18:
                    converged = True
                    break
                base = prob.merit(X, mu, lam)
                step = min(step * 2.0, 1.0)
                accepted = False
                while step > 1e-14:
                    Xn = prob.project(X + step * g)
                    if prob.merit(Xn, mu, lam) >= base + 1e-4 * float(np.sum(g * (Xn - X))):
                        accepted = True
                        break
                    step *= 0.5
                if not accepted:
                    converged = True
                    break
                moved = float(np.max(np.abs(Xn - X)))
                X = Xn
                if moved < cfg.tol:
                    converged = True
                    break
        return X, converged

    mu_f = cfg.penalty_mu0 * cfg.penalty_growth ** (cfg.penalty_rounds - 1)
    lam_f = cfg.terminal_penalty * cfg.penalty_growth ** (cfg.penalty_rounds - 1)

    X, converged = ascend(X0)
    if pushed:
        # a warm start inside a sphere has two exit basins; try the mirror
        X1, _ = _push_out_of_obstacles(Xp, ctx, kin, cfg, flip=True)
        Xalt, conv_alt = ascend(X1)
        if prob.merit(Xalt, mu_f, lam_f) > prob.merit(X, mu_f, lam_f):
            X, converged = Xalt, conv_alt
    if prob.merit(X, mu_f, lam_f) < prob.merit(X0, mu_f, lam_f):
        X = X0
    return X, converged


def adapt(imit: ImitationTrajectory, ctx: TaskContext, kin: KinematicModel,
          w: RewardWeights, cfg: AdaptationConfig):
    """Receding-horizon adaptation over the full trajectory.

    Runs one horizon solve per step, applies the first planned state, and warm
    starts the next horizon from the remainder of the plan.
    """
    if imit.num_steps != cfg.T + 1:
        raise ValueError("imitation trajectory length must equal cfg.T + 1")
    hard = [v for v in scenario.validate(ctx, kin) if "collision" in v or "radius" in v]
    if hard:
        raise InfeasibleScenarioError("; ".join(hard))

    T, d = cfg.T, imit.d
    y = np.zeros((T + 1, d))
    y[0] = np.clip(ctx.start_arr, ctx.workspace.lo, ctx.workspace.hi)
    plan = None
    for i in range(T):
        H = min(cfg.Tp, cfg.T - i)
        if plan is not None and len(plan) >= 2:
            warm = np.vstack([plan[1:], plan[-1:]])[:H]
            if len(warm) < H:
                warm = np.vstack([warm, imit.mean[i + 1 + len(warm) : i + 1 + H]])
        else:
            warm = None
        plan, _ = solve_horizon(y[i], i, imit, ctx, kin, w, cfg, warm_states=warm)
        y[i + 1] = plan[0]

    actions = y[1:] - cfg.a_diag * y[:-1]
    # re-derive states from actions so stored states replay bit-exactly
    y = replay_states(y[0], actions, cfg.a_diag)
    E = np.stack([kin.end_effector(s) for s in y])
    clearances = [
        float(np.min(np.linalg.norm(E - obs.center_arr, axis=1)) - obs.safety_radius)
        for obs in ctx.obstacles
    ]
    terminal_error = float(np.linalg.norm(y[-1] - imit.mean[-1]))
    violations = check_feasibility(y, ctx, kin, cfg.feas_tol, imit, cfg.term_tol)
    return AdaptedTrajectory(
        states=y,
        actions=actions,
        min_obstacle_clearance=clearances,
        terminal_error=terminal_error,
        feasible=not violations,
        violations=violations,
    )


def replay_states(start, actions, a_diag):
    """Replay the linear dynamics from actions; bit-reproducible."""
    actions = np.asarray(actions, dtype=float)
    y = np.zeros((actions.shape[0] + 1, actions.shape[1]))
    y[0] = np.asarray(start, dtype=float)
    for t in range(actions.shape[0]):
        y[t + 1] = a_diag * y[t] + actions[t]
    return y
