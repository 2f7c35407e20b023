"""Task context: obstacles, workspace geometry, start/goal states."""

from dataclasses import dataclass, field

import numpy as np

from .kinematics import KinematicModel

DEFAULT_OBSTACLE_LABEL = "obstacle"


@dataclass(frozen=True)
class Obstacle:
    center: tuple
    safety_radius: float
    label: str = DEFAULT_OBSTACLE_LABEL

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "safety_radius", float(self.safety_radius))
        if not self.safety_radius > 0:
            raise ValueError("obstacle safety_radius must be positive")

    @property
    def center_arr(self):
        return np.asarray(self.center)


@dataclass(frozen=True)
class Workspace:
    surface: tuple
    border_left: tuple
    border_right: tuple
    d_min: float
    limits_lo: tuple
    limits_hi: tuple

    def __post_init__(self):
        for name in ("surface", "border_left", "border_right", "limits_lo", "limits_hi"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        object.__setattr__(self, "d_min", float(self.d_min))
        if not self.d_min > 0:
            raise ValueError("d_min must be positive")
        lo, hi = np.asarray(self.limits_lo), np.asarray(self.limits_hi)
        if lo.shape != hi.shape or np.any(lo >= hi):
            raise ValueError("limits_lo must be strictly below limits_hi componentwise")

    @property
    def lo(self):
        return np.asarray(self.limits_lo)

    @property
    def hi(self):
        return np.asarray(self.limits_hi)


@dataclass(frozen=True)
class TaskContext:
    spatial_dim: int
    obstacles: tuple
    workspace: Workspace
    start: tuple
    goal: tuple
    kinematics: dict = field(default_factory=lambda: {"kind": "identity", "spatial_dim": 2})
    object_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "start", tuple(float(v) for v in self.start))
        object.__setattr__(self, "goal", tuple(float(v) for v in self.goal))

    @property
    def start_arr(self):
        return np.asarray(self.start)

    @property
    def goal_arr(self):
        return np.asarray(self.goal)

    def kinematic_model(self):
        return KinematicModel.from_dict(self.kinematics)

    def obstacle_labels(self):
        """Sorted distinct obstacle class labels present in this context."""
        return sorted({o.label for o in self.obstacles})

    def to_dict(self):
        return {
            "spatial_dim": self.spatial_dim,
            "obstacles": [
                {"center": list(o.center), "radius": o.safety_radius, "label": o.label}
                for o in self.obstacles
            ],
            "workspace": {
                "surface": list(self.workspace.surface),
                "b1": list(self.workspace.border_left),
                "b2": list(self.workspace.border_right),
                "d_min": self.workspace.d_min,
                "lo": list(self.workspace.limits_lo),
                "hi": list(self.workspace.limits_hi),
            },
            "start": list(self.start),
            "goal": list(self.goal),
            "kinematics": dict(self.kinematics),
            "object_label": self.object_label,
        }

    @classmethod
    def from_dict(cls, data):
        ws = data["workspace"]
        return cls(
            spatial_dim=int(data["spatial_dim"]),
            obstacles=tuple(
                Obstacle(o["center"], o["radius"], o.get("label", DEFAULT_OBSTACLE_LABEL))
                for o in data["obstacles"]
            ),
            workspace=Workspace(
                surface=ws["surface"],
                border_left=ws["b1"],
                border_right=ws["b2"],
                d_min=ws["d_min"],
                limits_lo=ws["lo"],
                limits_hi=ws["hi"],
            ),
            start=data["start"],
            goal=data["goal"],
            kinematics=data.get("kinematics", {"kind": "identity", "spatial_dim": 2}),
            object_label=data.get("object_label", ""),
        )


def validate(ctx: TaskContext, kin: KinematicModel = None):
    """Diagnostic check of a context; returns a list of violation strings."""
    kin = kin or ctx.kinematic_model()
    violations = []
    lo, hi = ctx.workspace.lo, ctx.workspace.hi
    for name, state in (("start", ctx.start_arr), ("goal", ctx.goal_arr)):
        if np.any(state < lo) or np.any(state > hi):
            violations.append(f"{name}-outside-limits")
        e = kin.end_effector(state)
        for k, obs in enumerate(ctx.obstacles):
            if np.linalg.norm(e - obs.center_arr) < obs.safety_radius:
                violations.append(f"{name}-in-collision:obstacle[{k}]")
    for k, obs in enumerate(ctx.obstacles):
        if obs.safety_radius <= 0:
            violations.append(f"nonpositive-radius:obstacle[{k}]")
    return violations
