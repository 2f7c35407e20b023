import json
from importlib import resources

import numpy as np
import pytest

from coadapt import (
    AdaptationConfig,
    KinematicModel,
    Obstacle,
    ProMP,
    TaskContext,
    Workspace,
    load_demonstrations,
)

T_STEPS = 50


def packaged(name):
    return json.loads(resources.files("coadapt.data").joinpath(name).read_text())


@pytest.fixture(scope="session")
def demos():
    return load_demonstrations(packaged("straight_line_demos.json"))


@pytest.fixture(scope="session")
def model(demos):
    return ProMP(n_basis=10, num_steps=T_STEPS + 1).fit(demos)


@pytest.fixture(scope="session")
def bottle_ctx():
    return TaskContext.from_dict(packaged("leaking_bottle_scenario.json"))


@pytest.fixture(scope="session")
def imit(model, bottle_ctx):
    conditioned = model.condition(bottle_ctx.start_arr, bottle_ctx.goal_arr, sigma_obs=1e-10)
    return conditioned.trajectory_distribution(T_STEPS + 1)


@pytest.fixture(scope="session")
def kin():
    return KinematicModel("identity", spatial_dim=2)


@pytest.fixture
def cfg():
    return AdaptationConfig(T=T_STEPS, Tp=11)


def make_ctx(obstacles=(), start=(0.0, 0.1), goal=(1.0, 0.2), lo=(-2, -2), hi=(2, 2)):
    return TaskContext(
        spatial_dim=2,
        obstacles=tuple(obstacles),
        workspace=Workspace(
            surface=(0.5, -0.1), border_left=(-0.3, 0.2), border_right=(1.3, 0.2),
            d_min=0.1, limits_lo=lo, limits_hi=hi,
        ),
        start=start,
        goal=goal,
    )


def random_ctx(rng, n_obstacles=2):
    obstacles = [
        Obstacle(tuple(rng.uniform(0.2, 0.8, size=2)), rng.uniform(0.05, 0.15), "obs")
        for _ in range(n_obstacles)
    ]
    return make_ctx(obstacles)
