"""Batch entry points: train, imitate, adapt, learn, serve, plotdata."""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import adaptation, learning, scenario
from .adaptation import AdaptationConfig, InfeasibleScenarioError, adapt
from .learning import LearningState, WeightBounds
from .oracle import OracleUser
from .promp import ProMP, load_demonstrations
from .rewards import RewardWeights
from .scenario import TaskContext

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE_SCENARIO = 3
EXIT_SOLVER_INFEASIBLE = 4


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: cannot read {path}: {exc}")


def _write_json(path, data):
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")


def synthesize_demos(num, seed, d=2):
    """Monte Carlo demonstrations around a straight line with a vertical arc."""
    rng = np.random.default_rng(seed)
    demos = []
    t = np.linspace(0.0, 1.0, 80)
    for _ in range(num):
        s = np.array([0.1, 0.2] + [0.0] * (d - 2)) + 0.05 * rng.standard_normal(d)
        g = np.array([1.0, 0.3] + [0.0] * (d - 2)) + 0.05 * rng.standard_normal(d)
        arc = np.zeros((t.size, d))
        arc[:, 1] = 0.2 * np.sin(np.pi * t) * (1 + 0.1 * rng.standard_normal())
        demos.append(s[None, :] * (1 - t)[:, None] + g[None, :] * t[:, None] + arc)
    return demos


def _adapt_config(args, d=None):
    kwargs = {}
    for name in ("T", "Tp", "a_diag"):
        v = getattr(args, name.lower() if name != "T" else "steps", None)
        if v is not None:
            kwargs[name] = v
    return AdaptationConfig(**kwargs)


def cmd_train(args):
    if args.synthesize:
        demos = synthesize_demos(args.synthesize, args.seed)
    elif args.demos:
        demos = load_demonstrations(_read_json(args.demos))
    else:
        print("error: need --demos or --synthesize", file=sys.stderr)
        return EXIT_USAGE
    model = ProMP(n_basis=args.n_basis, num_steps=args.steps + 1, ridge=args.ridge).fit(demos)
    _write_json(args.out, model.to_dict())
    return EXIT_OK


def _imitation(model, ctx, T):
    conditioned = model.condition(ctx.start_arr, ctx.goal_arr, sigma_obs=1e-10)
    return conditioned.trajectory_distribution(T + 1)


def cmd_imitate(args):
    model = ProMP.from_dict(_read_json(args.model))
    ctx = TaskContext.from_dict(_read_json(args.scenario))
    imit = _imitation(model, ctx, args.steps)
    _write_json(args.out, imit.to_dict())
    return EXIT_OK


def cmd_adapt(args):
    model = ProMP.from_dict(_read_json(args.model))
    ctx = TaskContext.from_dict(_read_json(args.scenario))
    cfg = _adapt_config(args)
    kin = ctx.kinematic_model()
    if args.weights:
        w = RewardWeights.from_dict(_read_json(args.weights))
    else:
        w = RewardWeights.initial(
            len(ctx.start), labels=ctx.obstacle_labels(), spatial_dim=ctx.spatial_dim
        )
    imit = _imitation(model, ctx, cfg.T)
    try:
        adapted = adapt(imit, ctx, kin, w, cfg)
    except InfeasibleScenarioError as exc:
        print(f"error: infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_SCENARIO
    from .service import _step_rewards

    out = adapted.to_dict()
    out["step_rewards"] = _step_rewards(
        adapted.states, ctx, imit, kin, w, cfg.deviation_sign
    )
    _write_json(args.out, out)
    if not adapted.feasible:
        print("warning: solver returned an infeasible trajectory", file=sys.stderr)
        return EXIT_SOLVER_INFEASIBLE
    return EXIT_OK


def cmd_learn(args):
    model = ProMP.from_dict(_read_json(args.model))
    contexts = [TaskContext.from_dict(_read_json(p)) for p in args.scenario]
    oracle = OracleUser.from_dict(_read_json(args.oracle))
    cfg = _adapt_config(args)
    d = len(contexts[0].start)
    labels = sorted({lb for c in contexts for lb in c.obstacle_labels()})
    if args.weights:
        w0 = RewardWeights.from_dict(_read_json(args.weights))
    else:
        w0 = RewardWeights.initial(d, labels=labels, spatial_dim=contexts[0].spatial_dim)
    state = LearningState(weights=w0, bounds=WeightBounds())
    for ctx in contexts:
        hard = [v for v in scenario.validate(ctx) if "collision" in v]
        if hard:
            print(f"error: infeasible scenario: {hard}", file=sys.stderr)
            return EXIT_INFEASIBLE_SCENARIO
    state, log = learning.run_loop(
        state, contexts, oracle.as_provider(), model, cfg, args.iterations
    )
    _write_json(args.out, {"iterations": args.iterations, "log": log,
                           "final_weights": state.weights.to_dict()})
    return EXIT_OK


def cmd_serve(args):
    from .service import serve

    serve(bind=args.bind, snapshot_dir=args.snapshot_dir, ui_dir=args.ui_dir)
    return EXIT_OK


def cmd_plotdata(args):
    data = _read_json(args.log)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "learning_curve.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["i", "alpha", "e_i"])
        for entry in data["log"]:
            if entry.get("skipped"):
                continue
            wr.writerow([entry["i"], entry.get("alpha", ""), entry.get("e_i", "")])
    poly_rows = []
    for entry in data["log"]:
        for key in ("adapted", "feedback"):
            states = entry.get(key)
            if states:
                for t, state in enumerate(states):
                    poly_rows.append([entry["i"], key, t] + list(state))
    if poly_rows:
        with open(outdir / "trajectories.csv", "w", newline="") as fh:
            wr = csv.writer(fh)
            d = len(poly_rows[0]) - 3
            wr.writerow(["i", "kind", "step"] + [f"y{k}" for k in range(d)])
            wr.writerows(poly_rows)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="coadapt", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="fit a movement primitive from demonstrations")
    t.add_argument("--demos")
    t.add_argument("--synthesize", type=int, default=0, metavar="N")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--n-basis", type=int, default=10)
    t.add_argument("--steps", type=int, default=50, help="trajectory steps T")
    t.add_argument("--ridge", type=float, default=1e-6)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    im = sub.add_parser("imitate", help="condition the primitive on a scenario")
    im.add_argument("--model", required=True)
    im.add_argument("--scenario", required=True)
    im.add_argument("--steps", type=int, default=50)
    im.add_argument("--out", required=True)
    im.set_defaults(func=cmd_imitate)

    a = sub.add_parser("adapt", help="adapt the imitation trajectory to the scenario")
    a.add_argument("--model", required=True)
    a.add_argument("--scenario", required=True)
    a.add_argument("--weights")
    a.add_argument("--steps", type=int, default=50)
    a.add_argument("--tp", type=int, default=None)
    a.add_argument("--a-diag", type=float, default=None)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_adapt)

    l = sub.add_parser("learn", help="run the oracle-driven learning loop")
    l.add_argument("--model", required=True)
    l.add_argument("--scenario", required=True, action="append")
    l.add_argument("--oracle", required=True)
    l.add_argument("--weights")
    l.add_argument("--iterations", type=int, default=10)
    l.add_argument("--steps", type=int, default=50)
    l.add_argument("--tp", type=int, default=None)
    l.add_argument("--a-diag", type=float, default=None)
    l.add_argument("--out", required=True)
    l.set_defaults(func=cmd_learn)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--bind", default="127.0.0.1:8000")
    s.add_argument("--snapshot-dir", default=None)
    s.add_argument("--ui-dir", default=None)
    s.set_defaults(func=cmd_serve)

    pd = sub.add_parser("plotdata", help="export a loop log as CSV")
    pd.add_argument("--log", required=True)
    pd.add_argument("--out", required=True)
    pd.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
