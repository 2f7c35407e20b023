import numpy as np
import pytest

from coadapt import (
    Obstacle,
    OracleUser,
    RewardWeights,
    adapt,
    check_feasibility,
    total_reward,
)
from conftest import make_ctx, packaged


def lateral_oracle():
    return OracleUser.from_dict(packaged("oracle_lateral.json"))


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        OracleUser(hidden_weights=RewardWeights.initial(2), mode="psychic")


def test_no_feedback_when_hidden_equals_current(imit, kin, cfg):
    # the solver already optimizes the hidden reward, so no strict improvement
    ctx = make_ctx(obstacles=[Obstacle((0.55, 0.45), 0.1, "bowl")])
    w = RewardWeights.initial(2, labels=("bowl",))
    adapted = adapt(imit, ctx, kin, w, cfg)
    oracle = OracleUser(hidden_weights=w.copy())
    assert oracle.feedback(adapted, ctx, imit, kin, cfg) is None


def test_feedback_strictly_improves_hidden_reward(imit, kin, cfg):
    mid = imit.mean[cfg.T // 2]
    ctx = make_ctx(obstacles=[Obstacle(tuple(mid), 0.1, "bowl")])
    oracle = lateral_oracle()
    adapted = adapt(imit, ctx, kin, RewardWeights.initial(2, labels=("bowl",)), cfg)
    fb = oracle.feedback(adapted, ctx, imit, kin, cfg)
    assert fb is not None
    f_y = total_reward(adapted.states, ctx, imit, kin, oracle.hidden_weights)
    f_fb = total_reward(fb, ctx, imit, kin, oracle.hidden_weights)
    assert f_fb > f_y + oracle.improvement_margin


def test_feedback_is_feasible(imit, kin, cfg):
    mid = imit.mean[cfg.T // 2]
    ctx = make_ctx(obstacles=[Obstacle(tuple(mid), 0.1, "bowl")])
    oracle = lateral_oracle()
    adapted = adapt(imit, ctx, kin, RewardWeights.initial(2, labels=("bowl",)), cfg)
    fb = oracle.feedback(adapted, ctx, imit, kin, cfg)
    assert fb is not None
    assert check_feasibility(fb, ctx, kin, cfg.feas_tol, imit, cfg.term_tol) == []


def test_perturbative_zero_iters_gives_no_feedback(imit, kin, cfg):
    ctx = make_ctx(obstacles=[Obstacle((0.55, 0.45), 0.1, "bowl")])
    oracle = OracleUser(
        hidden_weights=lateral_oracle().hidden_weights,
        mode="perturbative",
        perturb_iters=0,
    )
    adapted = adapt(imit, ctx, kin, RewardWeights.initial(2, labels=("bowl",)), cfg)
    assert oracle.feedback(adapted, ctx, imit, kin, cfg) is None


def test_perturbative_improves_when_allowed(imit, kin, cfg):
    mid = imit.mean[cfg.T // 2]
    ctx = make_ctx(obstacles=[Obstacle(tuple(mid), 0.1, "bowl")])
    oracle = OracleUser(
        hidden_weights=lateral_oracle().hidden_weights,
        mode="perturbative",
    )
    adapted = adapt(imit, ctx, kin, RewardWeights.initial(2, labels=("bowl",)), cfg)
    fb = oracle.feedback(adapted, ctx, imit, kin, cfg)
    if fb is not None:
        w = oracle.hidden_weights
        assert total_reward(fb, ctx, imit, kin, w) > total_reward(
            adapted.states, ctx, imit, kin, w
        )
        # endpoints pinned
        np.testing.assert_array_equal(fb[0], adapted.states[0])
        np.testing.assert_array_equal(fb[-1], adapted.states[-1])


def test_roundtrip():
    o = lateral_oracle()
    again = OracleUser.from_dict(o.to_dict())
    assert again.to_dict() == o.to_dict()


def test_provider_adapter(imit, kin, cfg):
    ctx = make_ctx(obstacles=[Obstacle((0.55, 0.45), 0.1, "bowl")])
    oracle = lateral_oracle()
    adapted = adapt(imit, ctx, kin, RewardWeights.initial(2, labels=("bowl",)), cfg)
    direct = oracle.feedback(adapted, ctx, imit, kin, cfg)
    via = oracle.as_provider()(adapted, ctx, imit, kin, cfg, None)
    if direct is None:
        assert via is None
    else:
        np.testing.assert_array_equal(direct, via)
