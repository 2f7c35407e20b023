"""Reward model: imitation, control, and environment-response terms.

The total reward of a trajectory is linear in the weights,
f = w_D^T phi_D + w_C * phi_C + w_E^T phi_E, where the features phi accumulate
per-step terms over the whole trajectory.  Obstacle response weights are keyed
by obstacle class label so learned preferences transfer to new scenes where
the same class appears at a different position.
"""

from dataclasses import dataclass, field

import numpy as np

from .kinematics import KinematicModel
from .promp import ImitationTrajectory
from .scenario import TaskContext


@dataclass
class RewardWeights:
    """Linear reward weights.

    w_obstacles maps an obstacle class label to a vector of length
    1 + spatial_dim: avoid-distance weight followed by the preferred deviation
    direction.
    """

    w_D: np.ndarray
    w_C: float
    w_obstacles: dict = field(default_factory=dict)
    w_B: float = 0.0
    w_S: float = 0.0

    def __post_init__(self):
        self.w_D = np.asarray(self.w_D, dtype=float)
        self.w_C = float(self.w_C)
        self.w_obstacles = {k: np.asarray(v, dtype=float) for k, v in self.w_obstacles.items()}
        self.w_B = float(self.w_B)
        self.w_S = float(self.w_S)

    @classmethod
    def initial(cls, d, labels=(), spatial_dim=2):
        """Default starting point: w_D = 30*1, w_C = 10, response weights 0."""
        return cls(
            w_D=30.0 * np.ones(d),
            w_C=10.0,
            w_obstacles={lb: np.zeros(1 + spatial_dim) for lb in labels},
            w_B=0.0,
            w_S=0.0,
        )

    def obstacle_weight(self, label, spatial_dim):
        return self.w_obstacles.get(label, np.zeros(1 + spatial_dim))

    def copy(self):
        return RewardWeights(
            w_D=self.w_D.copy(),
            w_C=self.w_C,
            w_obstacles={k: v.copy() for k, v in self.w_obstacles.items()},
            w_B=self.w_B,
            w_S=self.w_S,
        )

    def to_dict(self):
        return {
            "w_D": self.w_D.tolist(),
            "w_C": self.w_C,
            "obstacles": {k: v.tolist() for k, v in sorted(self.w_obstacles.items())},
            "w_B": self.w_B,
            "w_S": self.w_S,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            w_D=data["w_D"],
            w_C=data["w_C"],
            w_obstacles={k: np.asarray(v, dtype=float) for k, v in data.get("obstacles", {}).items()},
            w_B=data.get("w_B", 0.0),
            w_S=data.get("w_S", 0.0),
        )


@dataclass
class FeatureVector:
    """Whole-trajectory features; layout mirrors RewardWeights."""

    phi_D: np.ndarray
    phi_C: float
    phi_obstacles: dict
    phi_B: float
    phi_S: float

    def dot(self, w: RewardWeights, spatial_dim):
        total = float(w.w_D @ self.phi_D) + w.w_C * self.phi_C
        for label, phi in self.phi_obstacles.items():
            total += float(w.obstacle_weight(label, spatial_dim) @ phi)
        total += w.w_B * self.phi_B + w.w_S * self.phi_S
        return total

    def minus(self, other):
        return FeatureVector(
            phi_D=self.phi_D - other.phi_D,
            phi_C=self.phi_C - other.phi_C,
            phi_obstacles={
                k: self.phi_obstacles[k] - other.phi_obstacles[k] for k in self.phi_obstacles
            },
            phi_B=self.phi_B - other.phi_B,
            phi_S=self.phi_S - other.phi_S,
        )

    def stacked(self):
        parts = [self.phi_D, [self.phi_C]]
        parts += [self.phi_obstacles[k] for k in sorted(self.phi_obstacles)]
        parts += [[self.phi_B, self.phi_S]]
        return np.concatenate([np.atleast_1d(np.asarray(p, dtype=float)) for p in parts])


def _check_lengths(y, imit):
    y = np.asarray(y, dtype=float)
    if y.shape != imit.mean.shape:
        raise ValueError(f"trajectory shape {y.shape} != imitation shape {imit.mean.shape}")
    return y


def imitation_features(y, imit: ImitationTrajectory):
    """phi_D,i = -sum_t (y_i(t) - y_D,i(t))^2 * exp(-sigma_i^2(t))."""
    y = _check_lengths(y, imit)
    return -np.sum((y - imit.mean) ** 2 * np.exp(-imit.variance), axis=0)


def control_feature(y):
    """phi_C = -sum_t ||y(t) - y(t-1)||^2."""
    y = np.asarray(y, dtype=float)
    if y.shape[0] < 2:
        raise ValueError("control feature needs at least 2 steps")
    return -float(np.sum((y[1:] - y[:-1]) ** 2))


def _spatial_paths(y, imit, kin: KinematicModel):
    if kin.kind == "identity":
        return y, imit.mean
    E = np.stack([kin.end_effector(s) for s in y])
    E_D = np.stack([kin.end_effector(s) for s in imit.mean])
    return E, E_D


def response_step_terms(e, e_d, ctx: TaskContext, deviation_sign=1.0):
    """Raw per-step response terms at end-effector point ``e``.

    Returns (per-obstacle term list aligned with ctx.obstacles, phi_B, phi_S);
    each obstacle term is the vector [-dist, deviation...] * exp(-dist^2/d_k).
    """
    obst_terms = []
    for obs in ctx.obstacles:
        u = e - obs.center_arr
        dist = float(np.linalg.norm(u))
        decay = np.exp(-(dist**2) / obs.safety_radius)
        vec = np.concatenate([[-dist], deviation_sign * (e_d - e)])
        obst_terms.append(vec * decay)
    ws = ctx.workspace
    b1 = np.asarray(ws.border_left)
    b2 = np.asarray(ws.border_right)
    phi_b = float(
        np.exp(-np.sum((e - b1) ** 2) / ws.d_min) + np.exp(-np.sum((e - b2) ** 2) / ws.d_min)
    )
    phi_s = float(np.sum((e - np.asarray(ws.surface)) ** 2))
    return obst_terms, phi_b, phi_s


def response_features(y, ctx: TaskContext, imit: ImitationTrajectory, kin: KinematicModel,
                      deviation_sign=1.0):
    """Trajectory-level response features, negated sums over steps.

    Obstacle terms are accumulated per class label, so two obstacles sharing a
    label contribute to one feature block.
    """
    y = _check_lengths(y, imit)
    E, E_D = _spatial_paths(y, imit, kin)
    acc = {lb: np.zeros(1 + ctx.spatial_dim) for lb in ctx.obstacle_labels()}
    for obs in ctx.obstacles:
        U = E - obs.center_arr
        dist2 = np.sum(U**2, axis=1)
        decay = np.exp(-dist2 / obs.safety_radius)
        acc[obs.label][0] += float(-np.sqrt(dist2) @ decay)
        acc[obs.label][1:] += deviation_sign * (decay @ (E_D - E))
    ws = ctx.workspace
    b1, b2 = np.asarray(ws.border_left), np.asarray(ws.border_right)
    phi_b_sum = float(
        np.sum(np.exp(-np.sum((E - b1) ** 2, axis=1) / ws.d_min))
        + np.sum(np.exp(-np.sum((E - b2) ** 2, axis=1) / ws.d_min))
    )
    phi_s_sum = float(np.sum((E - np.asarray(ws.surface)) ** 2))
    return {lb: -v for lb, v in acc.items()}, -phi_b_sum, -phi_s_sum


def features(y, ctx, imit, kin, deviation_sign=1.0):
    """All whole-trajectory features as a FeatureVector."""
    phi_o, phi_b, phi_s = response_features(y, ctx, imit, kin, deviation_sign)
    return FeatureVector(
        phi_D=imitation_features(y, imit),
        phi_C=control_feature(y),
        phi_obstacles=phi_o,
        phi_B=phi_b,
        phi_S=phi_s,
    )


def total_reward(y, ctx, imit, kin, w: RewardWeights, deviation_sign=1.0):
    """f = w_D^T phi_D + w_C phi_C + w_E^T phi_E."""
    return features(y, ctx, imit, kin, deviation_sign).dot(w, ctx.spatial_dim)


def point_reward(y_t, t, ctx, imit, kin, w: RewardWeights, deviation_sign=1.0):
    """Imitation + response reward of a single step (control term excluded)."""
    y_t = np.asarray(y_t, dtype=float)
    f_d = -float(np.sum(w.w_D * np.exp(-imit.variance[t]) * (y_t - imit.mean[t]) ** 2))
    e = kin.end_effector(y_t)
    e_d = kin.end_effector(imit.mean[t])
    obst_terms, phi_b, phi_s = response_step_terms(e, e_d, ctx, deviation_sign)
    f_e = 0.0
    for obs, term in zip(ctx.obstacles, obst_terms):
        f_e -= float(w.obstacle_weight(obs.label, ctx.spatial_dim) @ term)
    f_e -= w.w_B * phi_b + w.w_S * phi_s
    return f_d + f_e


def point_reward_gradient(y_t, t, ctx, imit, kin, w: RewardWeights, deviation_sign=1.0):
    """Gradient wrt y(t) of the imitation + response reward at one step."""
    y_t = np.asarray(y_t, dtype=float)
    d = y_t.size
    grad = -2.0 * w.w_D * np.exp(-imit.variance[t]) * (y_t - imit.mean[t])

    e = kin.end_effector(y_t)
    e_d = kin.end_effector(imit.mean[t])
    J = kin.jacobian(y_t)
    grad_e = np.zeros(ctx.spatial_dim)
    for obs in ctx.obstacles:
        wv = w.obstacle_weight(obs.label, ctx.spatial_dim)
        if not np.any(wv):
            continue
        w_dist, w_dir = wv[0], wv[1:]
        u = e - obs.center_arr
        dist = float(np.linalg.norm(u))
        decay = np.exp(-(dist**2) / obs.safety_radius)
        ddecay = decay * (-2.0 / obs.safety_radius) * u
        dev = deviation_sign * (e_d - e)
        # s = (w_dist * -dist + w_dir . dev) * decay; reward term is -s
        s_val = w_dist * (-dist) + float(w_dir @ dev)
        ds = np.zeros(ctx.spatial_dim)
        if dist > 1e-12:
            ds += w_dist * (-u / dist) * decay
        ds += -deviation_sign * w_dir * decay
        ds += s_val * ddecay
        grad_e -= ds
    ws = ctx.workspace
    if w.w_B != 0.0:
        for b in (np.asarray(ws.border_left), np.asarray(ws.border_right)):
            v = e - b
            grad_e -= w.w_B * np.exp(-np.sum(v**2) / ws.d_min) * (-2.0 / ws.d_min) * v
    if w.w_S != 0.0:
        grad_e -= w.w_S * 2.0 * (e - np.asarray(ws.surface))
    return grad + J.T @ grad_e


def reward_gradient(y, ctx, imit, kin, w: RewardWeights, deviation_sign=1.0):
    """Gradient of the total reward wrt every trajectory step, (T+1)×d."""
    y = _check_lengths(y, imit)
    grad = np.zeros_like(y)
    for t in range(y.shape[0]):
        grad[t] = point_reward_gradient(y[t], t, ctx, imit, kin, w, deviation_sign)
    diff = y[1:] - y[:-1]
    grad[1:] += -2.0 * w.w_C * diff
    grad[:-1] += 2.0 * w.w_C * diff
    return grad
