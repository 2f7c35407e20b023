"""Session-oriented HTTP API over the adaptation engine.

Sessions live in memory; every mutation can optionally be snapshotted to a
JSON file.  All request/response bodies reuse the JSON formats of the library
modules, so any HTTP-driven sequence is equivalent to the same direct calls.
"""

import json
import threading
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import adaptation, learning, rewards
from .adaptation import AdaptationConfig, InfeasibleScenarioError, adapt
from .learning import LearningState, WeightBounds
from .promp import ProMP, load_demonstrations
from .rewards import RewardWeights
from .scenario import TaskContext


class ApiError(Exception):
    def __init__(self, status, code, message, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class Session:
    """One learning session: model, context, learning state, stored trajectories."""

    def __init__(self, sid, ctx, cfg, model=None):
        self.id = sid
        self.ctx = ctx
        self.cfg = cfg
        self.model = model
        self.learning = LearningState(
            weights=RewardWeights.initial(
                len(ctx.start), labels=ctx.obstacle_labels(), spatial_dim=ctx.spatial_dim
            ),
            bounds=WeightBounds(),
        )
        self.trajectories = {}
        self.imit = None
        self.last_adapted = None
        self.lock = threading.Lock()

    def to_dict(self):
        return {
            "id": self.id,
            "scenario": self.ctx.to_dict(),
            "config": {"T": self.cfg.T, "Tp": self.cfg.Tp, "a_diag": self.cfg.a_diag},
            "iteration": self.learning.iteration,
            "weights": self.learning.weights.to_dict(),
            "history": self.learning.history,
            "trajectory_ids": sorted(self.trajectories),
        }


def _step_rewards(y, ctx, imit, kin, w, deviation_sign):
    out = []
    for t in range(y.shape[0]):
        f = rewards.point_reward(y[t], t, ctx, imit, kin, w, deviation_sign)
        if t > 0:
            f -= w.w_C * float(np.sum((y[t] - y[t - 1]) ** 2))
        out.append(f)
    return out


def create_app(snapshot_dir=None, ui_dir=None):
    app = FastAPI(title="coadapt service")
    sessions = {}
    store_lock = threading.Lock()
    snapshot_path = Path(snapshot_dir) if snapshot_dir else None
    if snapshot_path:
        snapshot_path.mkdir(parents=True, exist_ok=True)

    def snapshot(sess):
        if snapshot_path:
            data = sess.to_dict()
            data["trajectories"] = sess.trajectories
            (snapshot_path / f"{sess.id}.json").write_text(
                json.dumps(data, sort_keys=True)
            )

    def get_session(sid):
        with store_lock:
            sess = sessions.get(sid)
        if sess is None:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")
        return sess

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=422,
            content={"code": "invalid-input", "message": str(exc), "detail": None},
        )

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict):
        if "scenario" not in body:
            raise ApiError(422, "missing-scenario", "body must carry a scenario object")
        ctx = TaskContext.from_dict(body["scenario"])
        cfg_body = body.get("config", {})
        cfg = AdaptationConfig(
            T=int(cfg_body.get("T", 50)),
            Tp=int(cfg_body.get("Tp", 11)),
            a_diag=float(cfg_body.get("a_diag", 0.9)),
        )
        sid = uuid.uuid4().hex[:12]
        sess = Session(sid, ctx, cfg)
        if "model" in body:
            sess.model = ProMP.from_dict(body["model"])
        if "weights" in body:
            sess.learning.weights = learning.project_weights(
                RewardWeights.from_dict(body["weights"]), sess.learning.bounds
            )
        with store_lock:
            sessions[sid] = sess
        snapshot(sess)
        return sess.to_dict()

    @app.get("/sessions/{sid}")
    async def get_state(sid: str):
        return get_session(sid).to_dict()

    @app.post("/sessions/{sid}/demonstrations")
    async def upload_demonstrations(sid: str, body: dict):
        sess = get_session(sid)
        with sess.lock:
            demos = load_demonstrations(body)
            n_basis = int(body.get("n_basis", 10))
            sess.model = ProMP(n_basis=n_basis, num_steps=sess.cfg.T + 1).fit(demos)
            snapshot(sess)
            return {"d": sess.model.d_, "n_basis": n_basis, "num_demos": len(demos)}

    @app.post("/sessions/{sid}/imitate")
    async def imitate(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if sess.model is None:
                raise ApiError(409, "no-model", "upload demonstrations or a model first")
            conditioned = sess.model.condition(
                sess.ctx.start_arr, sess.ctx.goal_arr, sigma_obs=1e-10
            )
            sess.imit = conditioned.trajectory_distribution(sess.cfg.T + 1)
            sess.trajectories["imitation"] = sess.imit.to_dict()
            snapshot(sess)
            return {"trajectory_id": "imitation", **sess.imit.to_dict()}

    @app.post("/sessions/{sid}/adapt")
    async def adapt_endpoint(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if sess.imit is None:
                raise ApiError(409, "no-imitation", "call /imitate first")
            kin = sess.ctx.kinematic_model()
            try:
                adapted = adapt(sess.imit, sess.ctx, kin, sess.learning.weights, sess.cfg)
            except InfeasibleScenarioError as exc:
                raise ApiError(409, "infeasible-scenario", str(exc))
            sess.last_adapted = adapted
            tid = f"adapted-{sess.learning.iteration}"
            payload = adapted.to_dict()
            payload["step_rewards"] = _step_rewards(
                adapted.states, sess.ctx, sess.imit, kin,
                sess.learning.weights, sess.cfg.deviation_sign,
            )
            sess.trajectories[tid] = payload
            snapshot(sess)
            return {"trajectory_id": tid, **payload}

    @app.post("/sessions/{sid}/feedback")
    async def feedback(sid: str, body: dict):
        sess = get_session(sid)
        with sess.lock:
            if sess.last_adapted is None:
                raise ApiError(409, "no-adapted", "call /adapt before posting feedback")
            if "trajectory" not in body:
                raise ApiError(422, "missing-trajectory", "body must carry a trajectory")
            fb = np.asarray(body["trajectory"], dtype=float)
            if fb.ndim != 2 or fb.shape[1] != len(sess.ctx.start):
                raise ApiError(
                    422, "bad-trajectory-shape",
                    f"expected (steps, {len(sess.ctx.start)}), got {list(fb.shape)}",
                )
            kin = sess.ctx.kinematic_model()
            tid = f"feedback-{sess.learning.iteration}"
            sess.learning = learning.update_weights(
                sess.learning, sess.last_adapted.states, fb,
                sess.ctx, sess.imit, kin, sess.cfg.deviation_sign,
            )
            entry = sess.learning.history[-1]
            sess.trajectories[tid] = {"states": fb.tolist()}
            snapshot(sess)
            return {
                "trajectory_id": tid,
                "iteration": sess.learning.iteration,
                "alpha": entry["alpha"],
                "e_i": entry["e_i"],
                "weights": sess.learning.weights.to_dict(),
            }

    @app.get("/sessions/{sid}/weights")
    async def get_weights(sid: str):
        sess = get_session(sid)
        return {
            "iteration": sess.learning.iteration,
            "weights": sess.learning.weights.to_dict(),
        }

    @app.get("/sessions/{sid}/trajectories/{tid}")
    async def get_trajectory(sid: str, tid: str):
        sess = get_session(sid)
        if tid not in sess.trajectories:
            raise ApiError(404, "unknown-trajectory", f"no trajectory {tid!r}")
        return {"trajectory_id": tid, **sess.trajectories[tid]}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def serve(bind="127.0.0.1:8000", snapshot_dir=None, ui_dir=None):
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(snapshot_dir=snapshot_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
