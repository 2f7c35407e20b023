"""Synthetic user with hidden reward weights for closing the learning loop."""

from dataclasses import dataclass

import numpy as np

from . import adaptation, rewards
from .rewards import RewardWeights

MODES = ("full-optimal", "perturbative")


@dataclass
class OracleUser:
    """Gives improved feedback whenever it can beat the executed trajectory.

    full-optimal mode re-solves the adaptation under the hidden weights;
    perturbative mode takes a few bounded gradient-ascent steps on the hidden
    reward from the executed trajectory, which yields deliberately non-optimal
    feedback.
    """

    hidden_weights: RewardWeights
    improvement_margin: float = 1e-6
    mode: str = "full-optimal"
    perturb_step: float = 0.01
    perturb_iters: int = 25

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown oracle mode {self.mode!r}")

    def feedback(self, adapted, ctx, imit, kin, cfg):
        """Improved trajectory under the hidden reward, or None."""
        y = np.asarray(adapted.states, dtype=float)
        f_y = rewards.total_reward(y, ctx, imit, kin, self.hidden_weights, cfg.deviation_sign)
        if self.mode == "full-optimal":
            candidate = adaptation.adapt(imit, ctx, kin, self.hidden_weights, cfg).states
        else:
            candidate = self._perturb(y, ctx, imit, kin, cfg)
        f_c = rewards.total_reward(
            candidate, ctx, imit, kin, self.hidden_weights, cfg.deviation_sign
        )
        if f_c <= f_y + self.improvement_margin:
            return None
        if adaptation.check_feasibility(candidate, ctx, kin, cfg.feas_tol, imit, cfg.term_tol):
            return None
        return candidate

    def _perturb(self, y, ctx, imit, kin, cfg):
        lo, hi = ctx.workspace.lo, ctx.workspace.hi
        cand = y.copy()
        for _ in range(self.perturb_iters):
            g = rewards.reward_gradient(
                cand, ctx, imit, kin, self.hidden_weights, cfg.deviation_sign
            )
            gmax = float(np.max(np.abs(g)))
            if gmax < 1e-12:
                break
            # bounded step; endpoints stay pinned to start/terminal states
            step = g * (self.perturb_step / gmax)
            step[0] = 0.0
            step[-1] = 0.0
            cand = np.clip(cand + step, lo, hi)
        return cand

    def to_dict(self):
        return {
            "hidden_weights": self.hidden_weights.to_dict(),
            "improvement_margin": self.improvement_margin,
            "mode": self.mode,
            "perturb_step": self.perturb_step,
            "perturb_iters": self.perturb_iters,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            hidden_weights=RewardWeights.from_dict(data["hidden_weights"]),
            improvement_margin=data.get("improvement_margin", 1e-6),
            mode=data.get("mode", "full-optimal"),
            perturb_step=data.get("perturb_step", 0.01),
            perturb_iters=data.get("perturb_iters", 25),
        )

    def as_provider(self):
        """Adapter matching the run_loop feedback_provider signature."""

        def provider(adapted, ctx, imit, kin, cfg, weights):
            return self.feedback(adapted, ctx, imit, kin, cfg)

        return provider
