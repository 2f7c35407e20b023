"""Brute-force oracle: exhaustive enumeration of a discrete action grid for
the 1D horizon problem, evaluating the same penalized objective directly."""

import itertools

import numpy as np


def grid_best_objective(y0, mean, w_D, w_C, obstacles, lo, hi, mu_pen, lam,
                        a_diag, actions, margin=0.0, terminal=True):
    """Best penalized objective over every action sequence on the grid.

    mean: (T+1,) imitation mean (zero variance); obstacles: list of
    (center, radius, w_avoid, w_dir) tuples in the 1D spatial space.
    """
    T = mean.size - 1
    actions = np.asarray(actions, dtype=float)
    n = actions.size
    # split the sequence space: explicit loop over the first two actions,
    # vectorized enumeration of the remaining T-2
    tail = np.array(list(itertools.product(actions, repeat=T - 2)))
    best = -np.inf
    for a0, a1 in itertools.product(actions, repeat=2):
        y1 = a_diag * y0 + a0
        y2 = a_diag * y1 + a1
        ys = np.empty((tail.shape[0], T + 1))
        ys[:, 0] = y0
        ys[:, 1] = y1
        ys[:, 2] = y2
        for t in range(T - 2):
            ys[:, t + 3] = a_diag * ys[:, t + 2] + tail[:, t]
        ys[:, 1:] = np.clip(ys[:, 1:], lo, hi)
        obj = -w_D * np.sum((ys[:, 1:] - mean[1:]) ** 2, axis=1)
        obj -= w_C * np.sum(np.diff(ys, axis=1) ** 2, axis=1)
        for center, radius, w_avoid, w_dir in obstacles:
            u = ys[:, 1:] - center
            dist2 = u**2
            dist = np.abs(u)
            decay = np.exp(-dist2 / radius)
            dev = mean[1:] - ys[:, 1:]
            s = w_avoid * (-dist) + w_dir * dev
            obj -= np.sum(s * decay, axis=1)
            c = np.maximum((radius + margin) ** 2 - dist2, 0.0)
            obj -= mu_pen * np.sum(c**2, axis=1)
        if terminal:
            obj -= lam * (ys[:, -1] - mean[-1]) ** 2
        m = float(np.max(obj))
        if m > best:
            best = m
    return best
