import json

import numpy as np
import pytest

from coadapt import RewardWeights, TaskContext
from coadapt.cli import main, synthesize_demos
from conftest import packaged


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "scenario.json").write_text(
        json.dumps(packaged("leaking_bottle_scenario.json"))
    )
    (tmp_path / "demos.json").write_text(
        json.dumps(packaged("straight_line_demos.json"))
    )
    (tmp_path / "oracle.json").write_text(json.dumps(packaged("oracle_lateral.json")))
    return tmp_path


def run(argv):
    return main([str(a) for a in argv])


def test_train_requires_input(tmp_path, capsys):
    assert run(["train", "--out", tmp_path / "m.json"]) == 2
    assert "need --demos" in capsys.readouterr().err


def test_train_and_imitate_hits_endpoints(workdir):
    model = workdir / "model.json"
    out = workdir / "imit.json"
    assert run(["train", "--demos", workdir / "demos.json", "--out", model]) == 0
    assert run([
        "imitate", "--model", model, "--scenario", workdir / "scenario.json",
        "--out", out,
    ]) == 0
    imit = json.loads(out.read_text())
    scen = json.loads((workdir / "scenario.json").read_text())
    mean = np.asarray(imit["mean"])
    assert np.max(np.abs(mean[0] - scen["start"])) < 1e-6
    assert np.max(np.abs(mean[-1] - scen["goal"])) < 1e-6


def test_train_synthesize_deterministic(tmp_path):
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    assert run(["train", "--synthesize", 6, "--seed", 3, "--out", m1]) == 0
    assert run(["train", "--synthesize", 6, "--seed", 3, "--out", m2]) == 0
    assert m1.read_bytes() == m2.read_bytes()


def test_synthesize_demo_shapes():
    demos = synthesize_demos(4, seed=1)
    assert len(demos) == 4
    assert all(d.shape == (80, 2) for d in demos)


def test_adapt_produces_feasible_output(workdir):
    model = workdir / "model.json"
    out = workdir / "adapted.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    code = run([
        "adapt", "--model", model, "--scenario", workdir / "scenario.json",
        "--out", out,
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["feasible"]
    assert min(data["min_obstacle_clearance"]) >= 0.0
    assert len(data["states"]) == 51
    assert len(data["step_rewards"]) == 51


def test_adapt_infeasible_scenario_exit_code(workdir, capsys):
    scen = packaged("leaking_bottle_scenario.json")
    scen = dict(scen)
    scen["obstacles"] = [{"center": scen["goal"], "radius": 0.2, "label": "bowl"}]
    bad = workdir / "bad.json"
    bad.write_text(json.dumps(scen))
    model = workdir / "model.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    code = run(["adapt", "--model", model, "--scenario", bad, "--out", workdir / "x.json"])
    assert code == 3
    assert "infeasible" in capsys.readouterr().err


def test_adapt_accepts_weights_file(workdir):
    model = workdir / "model.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    w = RewardWeights.initial(2, labels=("bowl",))
    wf = workdir / "w.json"
    wf.write_text(json.dumps(w.to_dict()))
    out = workdir / "adapted.json"
    assert run([
        "adapt", "--model", model, "--scenario", workdir / "scenario.json",
        "--weights", wf, "--out", out,
    ]) == 0


def test_learn_writes_log_and_weights(workdir):
    model = workdir / "model.json"
    log = workdir / "log.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    code = run([
        "learn", "--model", model, "--scenario", workdir / "scenario.json",
        "--oracle", workdir / "oracle.json", "--iterations", 3, "--out", log,
    ])
    assert code == 0
    data = json.loads(log.read_text())
    assert data["iterations"] == 3
    assert len(data["log"]) == 3
    assert "final_weights" in data


def test_learn_logs_byte_identical(workdir):
    model = workdir / "model.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    logs = []
    for name in ("log_a.json", "log_b.json"):
        out = workdir / name
        assert run([
            "learn", "--model", model, "--scenario", workdir / "scenario.json",
            "--oracle", workdir / "oracle.json", "--iterations", 2, "--out", out,
        ]) == 0
        logs.append(out.read_bytes())
    assert logs[0] == logs[1]


def test_learn_self_consistent_oracle_keeps_weights(workdir):
    # hidden weights equal to the initial weights: nothing to improve
    model = workdir / "model.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    w0 = RewardWeights.initial(2, labels=("bowl",))
    oracle = {"hidden_weights": w0.to_dict(), "mode": "full-optimal"}
    of = workdir / "self_oracle.json"
    of.write_text(json.dumps(oracle))
    log = workdir / "log.json"
    assert run([
        "learn", "--model", model, "--scenario", workdir / "scenario.json",
        "--oracle", of, "--iterations", 2, "--out", log,
    ]) == 0
    data = json.loads(log.read_text())
    assert data["final_weights"] == w0.to_dict()
    assert all(e["e_i"] is None for e in data["log"])


def test_plotdata_exports_csv(workdir):
    model = workdir / "model.json"
    log = workdir / "log.json"
    run(["train", "--demos", workdir / "demos.json", "--out", model])
    run([
        "learn", "--model", model, "--scenario", workdir / "scenario.json",
        "--oracle", workdir / "oracle.json", "--iterations", 2, "--out", log,
    ])
    outdir = workdir / "plots"
    assert run(["plotdata", "--log", log, "--out", outdir]) == 0
    curve = (outdir / "learning_curve.csv").read_text().strip().splitlines()
    assert curve[0] == "i,alpha,e_i"
    assert len(curve) == 3
    traj = (outdir / "trajectories.csv").read_text().strip().splitlines()
    assert traj[0] == "i,kind,step,y0,y1"
    assert len(traj) > 50
