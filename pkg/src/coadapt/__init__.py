"""Co-active movement adaptation: imitation primitives, receding-horizon
adaptation to novel scenes, and online reward learning from preference
feedback."""

from .adaptation import (
    AdaptationConfig,
    AdaptedTrajectory,
    InfeasibleScenarioError,
    adapt,
    check_feasibility,
    solve_horizon,
)
from .kinematics import KinematicModel
from .learning import (
    LearningState,
    WeightBounds,
    learning_error,
    project_weights,
    run_loop,
    update_weights,
)
from .oracle import OracleUser
from .promp import BasisSystem, ImitationTrajectory, ProMP, basis_matrix, load_demonstrations
from .rewards import FeatureVector, RewardWeights, features, reward_gradient, total_reward
from .scenario import Obstacle, TaskContext, Workspace, validate

__version__ = "0.1.0"

__all__ = [
    "AdaptationConfig",
    "AdaptedTrajectory",
    "BasisSystem",
    "FeatureVector",
    "ImitationTrajectory",
    "InfeasibleScenarioError",
    "KinematicModel",
    "LearningState",
    "Obstacle",
    "OracleUser",
    "ProMP",
    "RewardWeights",
    "TaskContext",
    "WeightBounds",
    "Workspace",
    "adapt",
    "basis_matrix",
    "check_feasibility",
    "features",
    "learning_error",
    "load_demonstrations",
    "project_weights",
    "reward_gradient",
    "run_loop",
    "solve_horizon",
    "total_reward",
    "update_weights",
    "validate",
]
