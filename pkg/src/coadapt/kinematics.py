"""Forward kinematics maps from state space to the spatial point used for collision checks."""

import numpy as np

KINDS = ("identity", "planar-chain")


class KinematicModel:
    """Maps a state vector to a spatial end-effector point.

    Two kinds are supported: ``identity`` (states already live in spatial
    coordinates) and ``planar-chain`` (joint angles of an n-link planar arm,
    spatial dimension 2).
    """

    def __init__(self, kind="identity", link_lengths=None, base=None, spatial_dim=2):
        if kind not in KINDS:
            raise ValueError(f"unknown kinematics kind {kind!r}")
        self.kind = kind
        if kind == "planar-chain":
            self.link_lengths = np.asarray(link_lengths, dtype=float)
            if self.link_lengths.ndim != 1 or self.link_lengths.size < 1:
                raise ValueError("planar-chain needs at least one link length")
            if np.any(self.link_lengths <= 0):
                raise ValueError("link lengths must be positive")
            self.base = np.zeros(2) if base is None else np.asarray(base, dtype=float)
            if self.base.shape != (2,):
                raise ValueError("planar-chain base must be a 2-vector")
            self.spatial_dim = 2
            self.state_dim = self.link_lengths.size
        else:
            self.link_lengths = None
            self.base = None
            self.spatial_dim = int(spatial_dim)
            self.state_dim = int(spatial_dim)

    def _check(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.state_dim,):
            raise ValueError(
                f"state has shape {y.shape}, expected ({self.state_dim},)"
            )
        return y

    def end_effector(self, y):
        """Spatial point of the end effector for state ``y``."""
        y = self._check(y)
        if self.kind == "identity":
            return y.copy()
        angles = np.cumsum(y)
        return self.base + np.array(
            [np.sum(self.link_lengths * np.cos(angles)),
             np.sum(self.link_lengths * np.sin(angles))]
        )

    def jacobian(self, y):
        """Analytic Jacobian of :meth:`end_effector`, shape (spatial_dim, d)."""
        y = self._check(y)
        if self.kind == "identity":
            return np.eye(self.state_dim)
        angles = np.cumsum(y)
        c = self.link_lengths * np.cos(angles)
        s = self.link_lengths * np.sin(angles)
        # dE/dtheta_j involves links j..n-1 since theta_j rotates everything distal.
        J = np.zeros((2, self.state_dim))
        for j in range(self.state_dim):
            J[0, j] = -np.sum(s[j:])
            J[1, j] = np.sum(c[j:])
        return J

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "planar-chain":
            out["links"] = self.link_lengths.tolist()
            out["base"] = self.base.tolist()
        else:
            out["spatial_dim"] = self.spatial_dim
        return out

    @classmethod
    def from_dict(cls, data):
        kind = data.get("kind", "identity")
        if kind == "planar-chain":
            return cls(kind=kind, link_lengths=data["links"], base=data.get("base"))
        return cls(kind=kind, spatial_dim=data.get("spatial_dim", 2))
