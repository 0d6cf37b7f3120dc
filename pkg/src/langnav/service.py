"""Session-oriented HTTP service: create simulations, instruct, tick, stream."""

from __future__ import annotations

import dataclasses
import json
import os
import queue
import secrets
import threading
import time
from pathlib import Path as FsPath

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .costmap import PlannerConfig
from .errors import (
    EmptyInputError,
    InvalidConfigError,
    LangNavError,
    NoPhrasesError,
    UnknownAssetError,
    UnknownSessionError,
)
from .lexicon import Lexicon, load_lexicon
from .model import load_model
from .navigation import InstructionParse, Navigator
from .scenarios import map_path
from .world import RobotLimits, SemanticMap, SensorConfig, load_map

SNAPSHOT_SCHEMA = "langnav-snapshot/1"
EVENT_SCHEMA = "langnav-events/1"

_PLANNER_FIELDS = {f.name for f in dataclasses.fields(PlannerConfig)}
_SENSOR_FIELDS = {f.name for f in dataclasses.fields(SensorConfig)}


class AssetStore:
    """Resolves maps, model checkpoints, and the lexicon for sessions.

    Files under the assets directory win; packaged demo maps and the
    packaged lexicon serve as fallbacks.
    """

    def __init__(self, assets_dir: str | None = None):
        self.assets_dir = FsPath(assets_dir) if assets_dir else None
        self._lexicon: Lexicon | None = None
        self._models: dict[str, tuple] = {}

    def map_ids(self) -> list[str]:
        ids = {"scene1", "sim_scene"}
        if self.assets_dir and (self.assets_dir / "maps").is_dir():
            ids.update(p.stem for p in (self.assets_dir / "maps").glob("*.json"))
        return sorted(ids)

    def model_ids(self) -> list[str]:
        if not self.assets_dir:
            return []
        return sorted(p.stem for p in self.assets_dir.glob("*.json"))

    def load_map(self, map_id: str) -> SemanticMap:
        if self.assets_dir:
            candidate = self.assets_dir / "maps" / f"{map_id}.json"
            if candidate.is_file():
                return load_map(candidate)
        packaged = map_path(map_id)
        if packaged.is_file():
            return load_map(packaged)
        raise UnknownAssetError(f"unknown map {map_id!r}")

    def load_model(self, model_id: str):
        if model_id in self._models:
            return self._models[model_id]
        if self.assets_dir:
            candidate = self.assets_dir / f"{model_id}.json"
            if candidate.is_file():
                self._models[model_id] = load_model(candidate)
                return self._models[model_id]
        raise UnknownAssetError(f"unknown model {model_id!r}")

    def lexicon(self) -> Lexicon:
        if self._lexicon is None:
            path = None
            if self.assets_dir and (self.assets_dir / "lexicon.txt").is_file():
                path = self.assets_dir / "lexicon.txt"
            self._lexicon = load_lexicon(path)
        return self._lexicon


def _split_config(overrides: dict) -> tuple[PlannerConfig, SensorConfig, dict]:
    overrides = dict(overrides or {})
    planner_kwargs = {}
    sensor_kwargs = {}
    extra = {}
    for key, value in overrides.items():
        if key in _PLANNER_FIELDS:
            planner_kwargs[key] = value
        elif key in _SENSOR_FIELDS:
            sensor_kwargs[key] = value
        elif key in ("dt", "goal_threshold", "constraint_threshold", "snapshot_costmap_cells",
                     "clear_constraints_on_goal"):
            extra[key] = value
        else:
            raise InvalidConfigError(f"unknown config key {key!r}")
    try:
        return PlannerConfig(**planner_kwargs), SensorConfig(**sensor_kwargs), extra
    except (TypeError, ValueError) as e:
        raise InvalidConfigError(str(e)) from e


def parse_to_dict(parse: InstructionParse) -> dict:
    return {
        "text": parse.text,
        "timestamp": parse.timestamp,
        "applied": parse.applied,
        "error": parse.error,
        "goal_noun": parse.goal_noun,
        "constraint_nouns": list(parse.constraint_nouns),
        "goal": None
        if parse.goal is None
        else {
            "location": parse.goal.location,
            "position": list(parse.goal.position),
            "score": parse.goal.score,
        },
        "phrases": [
            {
                "surface": p.surface,
                "label": p.label,
                "probs": p.probs,
                "attention": p.attention,
                "nouns": p.nouns,
                "error": p.error,
            }
            for p in parse.phrases
        ],
    }


def _downsample(costs: np.ndarray, max_cells: int) -> tuple[np.ndarray, int]:
    factor = 1
    n = max(costs.shape)
    while n / factor > max_cells:
        factor += 1
    if factor == 1:
        return costs, 1
    h, w = costs.shape
    ph = (factor - h % factor) % factor
    pw = (factor - w % factor) % factor
    padded = np.pad(costs, ((0, ph), (0, pw)), mode="edge")
    blocks = padded.reshape(padded.shape[0] // factor, factor, padded.shape[1] // factor, factor)
    return blocks.max(axis=(1, 3)), factor


class Session:
    """Single-writer simulation session with snapshot broadcast."""

    def __init__(self, session_id: str, navigator: Navigator, dt: float,
                 snapshot_costmap_cells: int, create_event: dict):
        self.id = session_id
        self.nav = navigator
        self.dt = dt
        self.snapshot_costmap_cells = snapshot_costmap_cells
        self.mode = "paused"
        self.rate_hz = 10.0
        self.lock = threading.RLock()
        self.subscribers: list[queue.Queue] = []
        self.events: list[dict] = [create_event]
        self._runner: threading.Thread | None = None
        self._stop_runner = threading.Event()

    # -------------------------------------------------------------- snapshots

    def snapshot(self) -> dict:
        nav = self.nav
        snap = {
            "schema": SNAPSHOT_SCHEMA,
            "session": self.id,
            "tick": nav.tick,
            "t": nav.t,
            "mode": self.mode,
            "status": nav.status,
            "robot": {
                "x": nav.robot.x,
                "y": nav.robot.y,
                "heading": nav.robot.heading,
                "v": nav.robot.v,
                "omega": nav.robot.omega,
                "radius": nav.robot.radius,
            },
            "objects": [
                {
                    "id": o.object_id,
                    "label": o.label,
                    "x": float(o.position[0]),
                    "y": float(o.position[1]),
                    "radius": o.radius,
                    "moving": o.moving,
                }
                for o in nav.map.objects
            ],
            "goal": None
            if nav.goal is None
            else {
                "location": nav.goal.location,
                "position": list(nav.goal.position),
                "score": nav.goal.score,
            },
            "constraint_nouns": list(nav.constraint_nouns),
            "disks": [
                {
                    "id": d.object_id,
                    "x": d.center[0],
                    "y": d.center[1],
                    "radius": d.radius,
                    "noun": d.source_noun,
                    "moving": d.moving,
                    "last_seen": d.last_seen,
                }
                for d in nav.store.disks()
            ],
            "global_path": None
            if nav.global_path is None
            else [list(p) for p in nav.global_path.waypoints],
            "local_path": None
            if nav.local_path is None
            else [list(p) for p in nav.local_path.waypoints],
            "last_instruction": None if nav.last_parse is None else parse_to_dict(nav.last_parse),
            "metrics": self._metrics_dict(),
        }
        if nav.costmap is not None:
            costs, factor = _downsample(nav.costmap.costs, self.snapshot_costmap_cells)
            snap["costmap"] = {
                "origin": list(nav.costmap.origin),
                "resolution": nav.costmap.resolution * factor,
                "width": costs.shape[1],
                "height": costs.shape[0],
                "costs": costs.astype(int).tolist(),
            }
        else:
            snap["costmap"] = None
        return snap

    def _metrics_dict(self) -> dict:
        m = self.nav.metrics()
        return {
            "length": m.length,
            "duration": m.duration,
            "min_clearance": dict(sorted(m.min_clearance.items())),
        }

    def _broadcast(self, snap: dict) -> None:
        for q in list(self.subscribers):
            q.put(snap)

    # ------------------------------------------------------------- operations

    def submit_instruction(self, text: str) -> dict:
        with self.lock:
            parse = self.nav.submit(text)
            event = parse_to_dict(parse)
            self.events.append({"type": "instruction", "text": text})
            self._broadcast(self.snapshot())
            return event

    def tick(self, n: int) -> dict:
        if n < 0:
            raise InvalidConfigError("tick count must be >= 0")
        with self.lock:
            for _ in range(n):
                self.nav.step(self.dt)
                self._broadcast(self.snapshot())
            if n > 0:
                self.events.append({"type": "tick", "n": n, "dt": self.dt})
            return {"tick": self.nav.tick, "status": self.nav.status}

    def set_mode(self, mode: str, rate_hz: float | None = None) -> dict:
        if mode not in ("paused", "stepping", "realtime"):
            raise InvalidConfigError(f"unknown mode {mode!r}")
        with self.lock:
            self.mode = mode
            if rate_hz:
                if rate_hz <= 0:
                    raise InvalidConfigError("rate_hz must be positive")
                self.rate_hz = float(rate_hz)
        if mode == "realtime":
            self._start_runner()
        else:
            self._stop_runner.set()
        return {"mode": self.mode, "rate_hz": self.rate_hz}

    def _start_runner(self) -> None:
        if self._runner is not None and self._runner.is_alive():
            return
        self._stop_runner.clear()

        def loop():
            next_deadline = time.monotonic()
            while not self._stop_runner.is_set() and self.mode == "realtime":
                next_deadline += 1.0 / self.rate_hz
                self.tick(1)
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    self._stop_runner.wait(delay)

        self._runner = threading.Thread(target=loop, daemon=True)
        self._runner.start()

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self.lock:
            q.put(self.snapshot())  # prime with the latest state
            self.subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self.lock:
            if q in self.subscribers:
                self.subscribers.remove(q)

    def stop(self) -> None:
        self._stop_runner.set()


class SessionManager:
    def __init__(self, assets: AssetStore):
        self.assets = assets
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, map_id: str, model_id: str, seed: int, config: dict | None) -> Session:
        smap = self.assets.load_map(map_id)
        model, vocab = self.assets.load_model(model_id)
        lexicon = self.assets.lexicon()
        planner_cfg, sensor_cfg, extra = _split_config(config or {})
        nav = Navigator(
            smap,
            model,
            vocab,
            lexicon,
            cfg=planner_cfg,
            sensor=sensor_cfg,
            limits=RobotLimits(),
            seed=seed,
            goal_threshold=extra.get("goal_threshold", 0.3),
            constraint_threshold=extra.get("constraint_threshold", 0.6),
        )
        nav.clear_constraints_on_goal = bool(extra.get("clear_constraints_on_goal", False))
        session_id = secrets.token_hex(4)
        create_event = {
            "type": "create",
            "schema": EVENT_SCHEMA,
            "map": map_id,
            "model": model_id,
            "seed": seed,
            "config": config or {},
        }
        session = Session(
            session_id,
            nav,
            dt=float(extra.get("dt", 0.1)),
            snapshot_costmap_cells=int(extra.get("snapshot_costmap_cells", 60)),
            create_event=create_event,
        )
        with self._lock:
            self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSessionError(f"unknown session {session_id!r}") from None


def replay_events(events: list[dict], assets: AssetStore) -> dict:
    """Re-run a recorded event log against the same assets; final snapshot."""
    if not events or events[0].get("type") != "create":
        raise ValueError("event log must start with a create event")
    create = events[0]
    manager = SessionManager(assets)
    session = manager.create(
        create["map"], create["model"], create["seed"], create.get("config") or {}
    )
    for event in events[1:]:
        if event["type"] == "instruction":
            session.submit_instruction(event["text"])
        elif event["type"] == "tick":
            for _ in range(event["n"]):
                session.nav.step(event.get("dt", 0.1))
        else:
            raise ValueError(f"unknown event type {event['type']!r}")
    return session.snapshot()


class CreateSessionRequest(BaseModel):
    map: str = "scene1"
    model: str = "model"
    seed: int = 0
    config: dict = Field(default_factory=dict)


class InstructionRequest(BaseModel):
    text: str


class TickRequest(BaseModel):
    n: int = 1


class ModeRequest(BaseModel):
    mode: str
    rate_hz: float | None = None


def create_app(assets_dir: str | None = None, ui_dir: str | None = None) -> FastAPI:
    assets = AssetStore(assets_dir)
    manager = SessionManager(assets)
    app = FastAPI(title="langnav", version="0.1.0")
    app.state.manager = manager

    def get_session(session_id: str) -> Session:
        try:
            return manager.get(session_id)
        except UnknownSessionError as e:
            raise HTTPException(status_code=404, detail=str(e)) from e

    @app.get("/assets")
    def list_assets():
        return {"maps": assets.map_ids(), "models": assets.model_ids()}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        try:
            session = manager.create(req.map, req.model, req.seed, req.config)
        except UnknownAssetError as e:
            raise HTTPException(status_code=404, detail=str(e)) from e
        except (InvalidConfigError, LangNavError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return {"session_id": session.id, "tick": session.nav.tick}

    @app.post("/sessions/{session_id}/instruction")
    def submit_instruction(session_id: str, req: InstructionRequest):
        session = get_session(session_id)
        try:
            return session.submit_instruction(req.text)
        except (EmptyInputError, NoPhrasesError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from e

    @app.post("/sessions/{session_id}/tick")
    def tick(session_id: str, req: TickRequest):
        session = get_session(session_id)
        try:
            return session.tick(req.n)
        except InvalidConfigError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e

    @app.post("/sessions/{session_id}/mode")
    def set_mode(session_id: str, req: ModeRequest):
        session = get_session(session_id)
        try:
            return session.set_mode(req.mode, req.rate_hz)
        except InvalidConfigError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e

    @app.get("/sessions/{session_id}/snapshot")
    def snapshot(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session.snapshot()

    @app.get("/sessions/{session_id}/map")
    def static_map(session_id: str):
        session = get_session(session_id)
        smap = session.nav.map
        grid = smap.grid
        symbols = {0: ".", 1: "#", 2: "?"}
        rows = [
            "".join(symbols[int(v)] for v in grid.cells[iy])
            for iy in range(grid.height - 1, -1, -1)
        ]
        return {
            "name": smap.name,
            "resolution": grid.resolution,
            "origin": list(grid.origin),
            "width": grid.width,
            "height": grid.height,
            "grid": rows,
            "locations": [
                {"name": loc.name, "position": list(loc.position)} for loc in smap.locations
            ],
            "start": {
                "position": list(smap.start.position),
                "heading": smap.start.heading,
            },
        }

    @app.get("/sessions/{session_id}/costmap")
    def costmap(session_id: str):
        session = get_session(session_id)
        with session.lock:
            cm = session.nav.costmap
            if cm is None:
                return {"costmap": None}
            return {
                "origin": list(cm.origin),
                "resolution": cm.resolution,
                "width": cm.width,
                "height": cm.height,
                "costs": cm.costs.astype(int).tolist(),
            }

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {"events": session.events}

    @app.get("/sessions/{session_id}/stream")
    def stream(session_id: str):
        session = get_session(session_id)
        q = session.subscribe()

        def gen():
            try:
                while True:
                    try:
                        snap = q.get(timeout=30.0)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {json.dumps(snap, sort_keys=True)}\n\n"
            finally:
                session.unsubscribe(q)

        return StreamingResponse(gen(), media_type="text/event-stream")

    if ui_dir and FsPath(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(assets_dir: str | None, host: str | None = None, port: int | None = None,
          ui_dir: str | None = None) -> None:
    import uvicorn

    host = host or os.environ.get("LANGNAV_HOST", "127.0.0.1")
    port = port or int(os.environ.get("LANGNAV_PORT", "8000"))
    uvicorn.run(create_app(assets_dir, ui_dir), host=host, port=port, log_level="warning")
