"""Co-active reward-weight learning from preference feedback.

Each round of feedback moves the weights along the feature difference between
the user's improved trajectory and the executed one, with a decaying learning
rate, then projects the result back into the feasible weight box.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import adaptation, rewards
from .promp import resample_trajectory
from .rewards import RewardWeights


@dataclass
class WeightBounds:
    """Feasible box for each weight block.

    Obstacle-class bounds apply per label: avoid-distance weight in
    [avoid_lo, avoid_hi], deviation-direction components in [dir_lo, dir_hi].
    """

    w_D_lo: float = 1.0
    w_D_hi: float = 100.0
    w_C_lo: float = 1.0
    w_C_hi: float = 100.0
    avoid_lo: float = 0.0
    avoid_hi: float = 100.0
    dir_lo: float = -100.0
    dir_hi: float = 100.0
    w_B_lo: float = 0.0
    w_B_hi: float = 100.0
    w_S_lo: float = 0.0
    w_S_hi: float = 100.0

    def to_dict(self):
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def project_weights(w: RewardWeights, bounds: WeightBounds) -> RewardWeights:
    """Componentwise clamp onto the feasible box; idempotent."""
    out = w.copy()
    out.w_D = np.clip(out.w_D, bounds.w_D_lo, bounds.w_D_hi)
    out.w_C = float(np.clip(out.w_C, bounds.w_C_lo, bounds.w_C_hi))
    for label, v in out.w_obstacles.items():
        v = v.copy()
        v[0] = np.clip(v[0], bounds.avoid_lo, bounds.avoid_hi)
        v[1:] = np.clip(v[1:], bounds.dir_lo, bounds.dir_hi)
        out.w_obstacles[label] = v
    out.w_B = float(np.clip(out.w_B, bounds.w_B_lo, bounds.w_B_hi))
    out.w_S = float(np.clip(out.w_S, bounds.w_S_lo, bounds.w_S_hi))
    return out


def learning_error(fb, y):
    """e = (1/T) * sum_t sum_i (fb_i(t) - y_i(t))^2."""
    fb = np.asarray(fb, dtype=float)
    y = np.asarray(y, dtype=float)
    if fb.shape != y.shape:
        raise ValueError(f"feedback shape {fb.shape} != trajectory shape {y.shape}")
    T = fb.shape[0] - 1
    return float(np.sum((fb - y) ** 2) / T)


@dataclass
class LearningState:
    weights: RewardWeights
    bounds: WeightBounds = field(default_factory=WeightBounds)
    iteration: int = 0
    history: list = field(default_factory=list)

    def alpha(self):
        """Learning rate for the current iteration, 1/sqrt(i+1)."""
        return 1.0 / math.sqrt(self.iteration + 1)


def ingest_feedback(fb, num_steps, ctx):
    """Resample feedback to the configured length and clamp it to the limits."""
    fb = np.asarray(fb, dtype=float)
    if fb.ndim != 2 or fb.shape[1] != ctx.workspace.lo.size:
        raise ValueError("feedback trajectory has wrong dimension")
    if fb.shape[0] != num_steps:
        fb = resample_trajectory(fb, num_steps)
    return np.clip(fb, ctx.workspace.lo, ctx.workspace.hi)


def update_weights(state: LearningState, y, fb, ctx, imit, kin, deviation_sign=1.0):
    """One co-active update; returns a new LearningState.

    fb is resampled/clamped on ingestion.  A feedback identical to the executed
    trajectory leaves the weights unchanged (zero feature difference).
    """
    y = np.asarray(y, dtype=float)
    fb = ingest_feedback(fb, y.shape[0], ctx)
    alpha = state.alpha()
    phi_y = rewards.features(y, ctx, imit, kin, deviation_sign)
    phi_fb = rewards.features(fb, ctx, imit, kin, deviation_sign)
    delta = phi_fb.minus(phi_y)

    w = state.weights.copy()
    w.w_D = w.w_D + alpha * delta.phi_D
    w.w_C = w.w_C + alpha * delta.phi_C
    for label, dv in delta.phi_obstacles.items():
        cur = w.obstacle_weight(label, ctx.spatial_dim)
        w.w_obstacles[label] = cur + alpha * dv
    w.w_B = w.w_B + alpha * delta.phi_B
    w.w_S = w.w_S + alpha * delta.phi_S
    w = project_weights(w, state.bounds)

    e = learning_error(fb, y)
    history = state.history + [
        {"i": state.iteration, "alpha": alpha, "e_i": e, "weights": w.to_dict()}
    ]
    return LearningState(
        weights=w, bounds=state.bounds, iteration=state.iteration + 1, history=history
    )


def run_loop(state: LearningState, contexts, feedback_provider, model, cfg, iterations):
    """Algorithm main loop: imitate, adapt, ask for feedback, update.

    contexts is a sequence of TaskContext cycled over the iterations.
    feedback_provider(adapted, ctx, imit, kin, cfg, weights) returns an
    improved trajectory or None ("no feedback" leaves weights unchanged).
    Returns (final LearningState, per-iteration log).
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    log = []
    for it in range(iterations):
        ctx = contexts[it % len(contexts)]
        kin = ctx.kinematic_model()
        entry = {"i": state.iteration, "context_id": it % len(contexts)}
        try:
            conditioned = model.condition(ctx.start_arr, ctx.goal_arr, sigma_obs=1e-10)
            imit = conditioned.trajectory_distribution(cfg.T + 1)
            adapted = adaptation.adapt(imit, ctx, kin, state.weights, cfg)
            fb = feedback_provider(adapted, ctx, imit, kin, cfg, state.weights)
        except Exception as exc:  # provider/solver failure: log and continue
            entry.update({"skipped": True, "error": str(exc)})
            log.append(entry)
            continue
        entry["alpha"] = state.alpha()
        entry["adapted"] = adapted.states.tolist()
        if fb is not None:
            entry["feedback"] = np.asarray(fb).tolist()
            state = update_weights(
                state, adapted.states, fb, ctx, imit, kin, cfg.deviation_sign
            )
            entry["e_i"] = state.history[-1]["e_i"]
        else:
            entry["e_i"] = None
            state = LearningState(
                weights=state.weights,
                bounds=state.bounds,
                iteration=state.iteration + 1,
                history=state.history,
            )
        entry["weights"] = state.weights.to_dict()
        log.append(entry)
    return state, log
