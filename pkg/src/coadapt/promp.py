"""Probabilistic movement primitives: trajectory distributions over basis weights.

A trajectory with d degrees of freedom is modelled per dimension as a linear
combination of n Gaussian bases in normalized time, y_i(t) = psi(t)^T w_i + noise.
Demonstrations induce a Gaussian over the stacked weights; conditioning on
desired boundary states modulates the primitive to new start/goal states.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator

SIGMA_Y2_FLOOR = 1e-8
JITTER = 1e-12


class BasisSystem:
    """Normalized Gaussian basis functions on normalized time [0, 1]."""

    def __init__(self, n=10, centers=None, width=None, normalize=True):
        self.n = int(n)
        if self.n < 1:
            raise ValueError("need at least one basis function")
        if centers is None:
            centers = np.linspace(0.0, 1.0, self.n) if self.n > 1 else np.array([0.5])
        self.centers = np.asarray(centers, dtype=float)
        if self.centers.shape != (self.n,):
            raise ValueError("centers must have length n")
        if self.n > 1 and np.any(np.diff(self.centers) <= 0):
            raise ValueError("centers must be strictly increasing")
        if width is None:
            width = 1.0 / (self.n - 1) if self.n > 1 else 1.0
        self.width = float(width)
        if not self.width > 0:
            raise ValueError("width must be positive")
        self.normalize = bool(normalize)

    def evaluate(self, t):
        """Basis vector psi(t) of length n, t in normalized time [0, 1]."""
        t = float(t)
        if t < -1e-12 or t > 1 + 1e-12:
            raise ValueError(f"normalized time {t} outside [0, 1]")
        psi = np.exp(-((t - self.centers) ** 2) / (2.0 * self.width**2))
        if self.normalize:
            psi = psi / np.sum(psi)
        return psi

    def design_matrix(self, num_steps):
        """(num_steps)×n matrix of psi at equally spaced normalized times."""
        ts = np.linspace(0.0, 1.0, num_steps)
        return np.stack([self.evaluate(t) for t in ts])

    def to_dict(self):
        return {
            "n": self.n,
            "centers": self.centers.tolist(),
            "width": self.width,
            "normalize": self.normalize,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            n=data["n"],
            centers=data["centers"],
            width=data["width"],
            normalize=data["normalize"],
        )


def basis_matrix(basis: BasisSystem, t, d):
    """Block-diagonal feature matrix Psi(t) of shape (n*d, d).

    Column i carries psi(t) in the rows of dimension i's weight block, so that
    y(t) = Psi(t)^T w for the stacked weight vector w.
    """
    psi = basis.evaluate(t)
    n = basis.n
    out = np.zeros((n * d, d))
    for i in range(d):
        out[i * n : (i + 1) * n, i] = psi
    return out


def resample_trajectory(states, num_steps):
    """Linear resampling of a (T+1)×d trajectory on normalized time."""
    states = np.asarray(states, dtype=float)
    if states.ndim != 2 or states.shape[0] < 2:
        raise ValueError("trajectory must be (T+1)×d with T >= 1")
    src = np.linspace(0.0, 1.0, states.shape[0])
    dst = np.linspace(0.0, 1.0, num_steps)
    return np.stack([np.interp(dst, src, states[:, i]) for i in range(states.shape[1])], axis=1)


class ProMP(BaseEstimator):
    """Probabilistic movement primitive over demonstration trajectories.

    Parameters
    ----------
    n_basis : number of Gaussian bases per dimension.
    num_steps : common trajectory length T+1; demonstrations of other lengths
        are resampled by linear interpolation on normalized time.
    ridge : regularizer for the per-demonstration weight regression and the
        diagonal of the weight covariance.

    Attributes (after fit)
    ----------------------
    d_ : state dimension.
    mu_w_ : (n_basis * d,) weight mean.
    sigma_w_ : (n_basis * d, n_basis * d) weight covariance.
    sigma_y2_ : observation noise variance.
    degenerate_covariance_ : True when fitted from fewer than two demonstrations.
    """

    def __init__(self, n_basis=10, num_steps=101, ridge=1e-6):
        self.n_basis = n_basis
        self.num_steps = num_steps
        self.ridge = ridge

    def fit(self, demos):
        """Fit the weight distribution from a list of (T+1)×d trajectories."""
        if len(demos) < 1:
            raise ValueError("need at least one demonstration")
        demos = [np.asarray(tr, dtype=float) for tr in demos]
        d = demos[0].shape[1]
        if any(tr.shape[1] != d for tr in demos):
            raise ValueError("all demonstrations must share the state dimension")
        if not all(np.all(np.isfinite(tr)) for tr in demos):
            raise ValueError("demonstrations must be finite")

        basis = BasisSystem(n=self.n_basis)
        Phi = basis.design_matrix(self.num_steps)
        G = Phi.T @ Phi + self.ridge * np.eye(basis.n)

        weights = []
        sq_residuals = []
        for tr in demos:
            tr = resample_trajectory(tr, self.num_steps)
            # one ridge solve per dimension; stacked to the nd weight vector
            W = np.linalg.solve(G, Phi.T @ tr)
            weights.append(W.T.reshape(-1))
            sq_residuals.append(np.mean((Phi @ W - tr) ** 2))
        weights = np.stack(weights)

        self.basis_ = basis
        self.d_ = d
        self.mu_w_ = weights.mean(axis=0)
        if len(demos) >= 2:
            self.sigma_w_ = np.cov(weights, rowvar=False) + self.ridge * np.eye(weights.shape[1])
            self.degenerate_covariance_ = False
        else:
            self.sigma_w_ = self.ridge * np.eye(weights.shape[1])
            self.degenerate_covariance_ = True
        self.sigma_y2_ = max(float(np.mean(sq_residuals)), SIGMA_Y2_FLOOR)
        return self

    def _check_fitted(self):
        if not hasattr(self, "mu_w_"):
            raise ValueError("ProMP is not fitted")

    def condition(self, y0, yT, sigma_obs=1e-10):
        """Condition on desired boundary states; returns a new fitted ProMP.

        sigma_obs may be a scalar (isotropic observation accuracy) or a d×d
        covariance applied at both endpoints.
        """
        self._check_fitted()
        d = self.d_
        y0 = np.asarray(y0, dtype=float)
        yT = np.asarray(yT, dtype=float)
        if y0.shape != (d,) or yT.shape != (d,):
            raise ValueError(f"boundary states must be {d}-vectors")
        if np.isscalar(sigma_obs):
            sigma_obs = float(sigma_obs) * np.eye(d)
        sigma_obs = np.asarray(sigma_obs, dtype=float)

        Psi_star = np.hstack([basis_matrix(self.basis_, 0.0, d), basis_matrix(self.basis_, 1.0, d)])
        Y_star = np.concatenate([y0, yT])
        Sigma_Y = np.zeros((2 * d, 2 * d))
        Sigma_Y[:d, :d] = sigma_obs
        Sigma_Y[d:, d:] = sigma_obs

        S = Sigma_Y + Psi_star.T @ self.sigma_w_ @ Psi_star
        try:
            K = self.sigma_w_ @ Psi_star @ np.linalg.inv(S)
        except np.linalg.LinAlgError:
            warnings.warn("singular innovation matrix; adding jitter")
            K = self.sigma_w_ @ Psi_star @ np.linalg.inv(S + 1e-10 * np.eye(S.shape[0]))
        mu_new = self.mu_w_ + K @ (Y_star - Psi_star.T @ self.mu_w_)
        sigma_new = self.sigma_w_ - K @ Psi_star.T @ self.sigma_w_
        sigma_new = 0.5 * (sigma_new + sigma_new.T)

        out = ProMP(n_basis=self.n_basis, num_steps=self.num_steps, ridge=self.ridge)
        out.basis_ = self.basis_
        out.d_ = d
        out.mu_w_ = mu_new
        out.sigma_w_ = sigma_new
        out.sigma_y2_ = self.sigma_y2_
        out.degenerate_covariance_ = getattr(self, "degenerate_covariance_", False)
        return out

    def trajectory_distribution(self, num_steps=None):
        """Per-step mean and variance of the trajectory distribution.

        Returns an :class:`ImitationTrajectory` with mean (T+1)×d and the
        diagonal of the per-step covariance (plus observation noise).
        """
        self._check_fitted()
        num_steps = num_steps or self.num_steps
        if num_steps < 3:
            raise ValueError("need at least 3 trajectory steps")
        d = self.d_
        ts = np.linspace(0.0, 1.0, num_steps)
        mean = np.zeros((num_steps, d))
        var = np.zeros((num_steps, d))
        for k, t in enumerate(ts):
            Psi = basis_matrix(self.basis_, t, d)
            mean[k] = Psi.T @ self.mu_w_
            var[k] = np.diag(Psi.T @ self.sigma_w_ @ Psi) + self.sigma_y2_
        return ImitationTrajectory(mean=mean, variance=var)

    def to_dict(self):
        self._check_fitted()
        return {
            "basis": self.basis_.to_dict(),
            "d": self.d_,
            "num_steps": self.num_steps,
            "mu_w": self.mu_w_.tolist(),
            "sigma_w": self.sigma_w_.reshape(-1).tolist(),
            "sigma_y2": self.sigma_y2_,
        }

    @classmethod
    def from_dict(cls, data):
        basis = BasisSystem.from_dict(data["basis"])
        out = cls(n_basis=basis.n, num_steps=data["num_steps"])
        out.basis_ = basis
        out.d_ = int(data["d"])
        out.mu_w_ = np.asarray(data["mu_w"], dtype=float)
        m = out.mu_w_.size
        out.sigma_w_ = np.asarray(data["sigma_w"], dtype=float).reshape(m, m)
        out.sigma_y2_ = float(data["sigma_y2"])
        out.degenerate_covariance_ = False
        return out


class ImitationTrajectory:
    """Mean and per-dimension variance of the conditioned trajectory distribution."""

    def __init__(self, mean, variance):
        self.mean = np.asarray(mean, dtype=float)
        self.variance = np.asarray(variance, dtype=float)
        if self.mean.shape != self.variance.shape:
            raise ValueError("mean and variance shapes differ")
        if np.any(self.variance < 0):
            raise ValueError("variance entries must be nonnegative")

    @property
    def num_steps(self):
        return self.mean.shape[0]

    @property
    def d(self):
        return self.mean.shape[1]

    def to_dict(self):
        return {"mean": self.mean.tolist(), "variance": self.variance.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(mean=data["mean"], variance=data["variance"])


def load_demonstrations(data):
    """Parse the demonstration file format {"d": int, "trajectories": [...]}."""
    d = int(data["d"])
    demos = [np.asarray(tr, dtype=float) for tr in data["trajectories"]]
    for tr in demos:
        if tr.ndim != 2 or tr.shape[1] != d:
            raise ValueError("trajectory dimension mismatch with header d")
    return demos
