"""HTTP face of the companion: sessions over JSON.

The service owns a set of live sessions, each driven by timestamped event
batches exactly like the offline runner drives them, so a scripted session
replayed over HTTP matches its offline transcript.  Sessions persist to
disk after every mutation; restarting the service and reloading a session
yields an identical state snapshot.

An optional idle timer maps wall-clock inactivity onto the session clock:
when a wait's deadline is further in the past than the time elapsed since
the last learner item, the deadline tick runs by itself, which is what
makes the companion speak up when a browser client simply goes quiet.
"""

from __future__ import annotations

import copy
import json
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .documents import DataStore, DocumentError, fcm_from_doc, world_to_doc
from .events import EventKind
from .session import AckError, CompanionSession, SessionTimeError, edit_from_doc
from .world import EditError, OutOfBoundsError, Position, TimeRegressionError

__all__ = ["create_app"]

IDLE_TIMER_PERIOD_S = 0.02


def _error(status: int, code: str, message: str, **extra) -> HTTPException:
    return HTTPException(status, {"code": code, "message": message, **extra})


@dataclass
class _Entry:
    session: CompanionSession
    lock: threading.Lock
    # maps wall time onto the session clock: session-ms "now" is
    # (monotonic() - mono_origin) * 1000
    mono_origin: float


class SessionManager:
    def __init__(self, state_dir: Path | None):
        self.state_dir = state_dir
        self._entries: dict[str, _Entry] = {}
        self._registry_lock = threading.Lock()
        if state_dir is not None:
            state_dir.mkdir(parents=True, exist_ok=True)

    def _touch(self, entry: _Entry) -> None:
        entry.mono_origin = time.monotonic() - entry.session.last_t / 1000.0

    def create(self, session: CompanionSession) -> str:
        sid = uuid.uuid4().hex
        entry = _Entry(session, threading.Lock(), 0.0)
        self._touch(entry)
        with self._registry_lock:
            self._entries[sid] = entry
        self.save(sid, entry)
        return sid

    def get(self, sid: str) -> _Entry:
        with self._registry_lock:
            entry = self._entries.get(sid)
            if entry is not None:
                return entry
        loaded = self._load(sid)
        if loaded is None:
            raise _error(404, "unknown_session", f"no session {sid!r}")
        with self._registry_lock:
            # lost race: someone else loaded it first
            entry = self._entries.setdefault(sid, loaded)
        return entry

    def _load(self, sid: str) -> _Entry | None:
        if self.state_dir is None or not sid.isalnum():
            return None
        path = self.state_dir / f"{sid}.json"
        if not path.is_file():
            return None
        doc = json.loads(path.read_text())
        entry = _Entry(CompanionSession.from_doc(doc), threading.Lock(), 0.0)
        self._touch(entry)
        return entry

    def save(self, sid: str, entry: _Entry) -> None:
        self._touch(entry)
        if self.state_dir is None:
            return
        path = self.state_dir / f"{sid}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(entry.session.to_doc()))
        tmp.replace(path)

    def live_entries(self) -> list[tuple[str, _Entry]]:
        with self._registry_lock:
            return list(self._entries.items())


def _apply_item(session: CompanionSession, item: dict) -> None:
    t = int(item["t"])
    kind = item.get("type")
    if kind == "move":
        session.move(
            Position(float(item["x"]), float(item["y"]), float(item.get("z", 0.0))), t
        )
    elif kind == "input":
        session.input(EventKind(item["kind"]), t)
    elif kind == "engage":
        session.engage(str(item["activity_id"]), t)
    elif kind == "fcm_edit":
        session.edit_fcm(edit_from_doc(item["edit"]), t)
    elif kind == "prompt_ack":
        session.ack_prompt(int(item["index"]), str(item["response"]), t)
    elif kind == "idle":
        session.idle_until(t)
    else:
        raise ValueError(f"unknown event type {kind!r}")


def create_app(
    data_dir: Path | str | None = None,
    state_dir: Path | str | None = None,
    ui_dir: Path | str | None = None,
    idle_timer: bool = True,
) -> FastAPI:
    """Build the service.

    data_dir overrides bundled worlds and maps file by file; state_dir
    turns on session persistence; ui_dir serves a static client at /.
    The idle timer can be disabled for fully scripted tests.
    """
    store = DataStore(data_dir)
    manager = SessionManager(Path(state_dir) if state_dir is not None else None)
    stop = threading.Event()

    def timer_loop() -> None:
        while not stop.wait(IDLE_TIMER_PERIOD_S):
            for sid, entry in manager.live_entries():
                with entry.lock:
                    wait = entry.session.wait
                    if wait is None:
                        continue
                    now_ms = (time.monotonic() - entry.mono_origin) * 1000.0
                    if now_ms >= wait.deadline:
                        entry.session.advance_to(wait.deadline)
                        manager.save(sid, entry)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        thread = None
        if idle_timer:
            thread = threading.Thread(target=timer_loop, daemon=True)
            thread.start()
        try:
            yield
        finally:
            stop.set()
            if thread is not None:
                thread.join(timeout=2)

    app = FastAPI(title="curious-companion", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/worlds")
    def list_worlds() -> dict:
        return {"worlds": store.world_ids()}

    @app.get("/worlds/{world_id}")
    def get_world(world_id: str) -> dict:
        try:
            return world_to_doc(store.world(world_id))
        except DocumentError as exc:
            raise _error(404, "unknown_world", str(exc))

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)) -> dict:
        try:
            world = store.world(str(payload["world_id"]))
        except DocumentError as exc:
            raise _error(404, "unknown_world", str(exc))
        except (TypeError, KeyError):
            raise _error(422, "bad_request", "world_id is required")
        try:
            from .documents import policy_from_doc, profile_from_doc

            learner = fcm_from_doc(payload["learner_fcm"])
            profile = profile_from_doc(payload["profile"])
            config = policy_from_doc(payload.get("policy"))
            seed = int(payload["seed"])
        except DocumentError as exc:
            raise _error(
                422,
                "invalid_document",
                str(exc),
                violations=[
                    {"code": v.code, "message": v.message} for v in exc.violations
                ],
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise _error(422, "bad_request", f"bad session request: {exc}")
        session = CompanionSession(world, learner, profile, seed, config)
        sid = manager.create(session)
        return {"session_id": sid}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str) -> dict:
        entry = manager.get(sid)
        with entry.lock:
            snapshot = entry.session.state_snapshot()
        snapshot["session_id"] = sid
        return snapshot

    @app.get("/sessions/{sid}/prompts")
    def get_prompts(sid: str, since: int = 0) -> dict:
        entry = manager.get(sid)
        with entry.lock:
            prompts = entry.session.prompt_docs(since)
            total = len(entry.session.outbox)
        return {"prompts": prompts, "next": total}

    @app.post("/sessions/{sid}/events")
    def post_events(sid: str, payload: dict = Body(...)) -> dict:
        items = payload.get("events")
        if not isinstance(items, list):
            raise _error(422, "bad_request", "payload needs an 'events' list")
        entry = manager.get(sid)
        with entry.lock:
            # apply to a copy so a bad item leaves the session untouched
            trial = copy.deepcopy(entry.session)
            before = len(trial.outbox)
            try:
                for item in items:
                    if not isinstance(item, dict):
                        raise ValueError(f"bad event item {item!r}")
                    _apply_item(trial, item)
            except (SessionTimeError, TimeRegressionError) as exc:
                raise _error(400, "out_of_order", str(exc))
            except OutOfBoundsError as exc:
                raise _error(400, "out_of_bounds", str(exc))
            except EditError as exc:
                raise _error(400, "bad_edit", str(exc))
            except AckError as exc:
                raise _error(400, "bad_ack", str(exc))
            except KeyError as exc:
                raise _error(400, "unknown_activity", str(exc))
            except (TypeError, ValueError) as exc:
                raise _error(400, "bad_event", str(exc))
            entry.session = trial
            manager.save(sid, entry)
            return {
                "ok": True,
                "last_t": trial.last_t,
                "new_prompts": len(trial.outbox) - before,
                "wait_active": trial.wait is not None,
            }

    @app.put("/sessions/{sid}/fcm")
    def put_fcm(sid: str, payload: dict = Body(...)) -> dict:
        entry = manager.get(sid)
        with entry.lock:
            try:
                fcm = fcm_from_doc(payload["fcm"])
            except DocumentError as exc:
                raise _error(
                    422,
                    "invalid_document",
                    str(exc),
                    violations=[
                        {"code": v.code, "message": v.message}
                        for v in exc.violations
                    ],
                )
            except (TypeError, KeyError) as exc:
                raise _error(422, "bad_request", f"payload needs 'fcm': {exc}")
            t = int(payload.get("t", entry.session.last_t))
            try:
                entry.session.replace_fcm(fcm, t)
            except SessionTimeError as exc:
                raise _error(400, "out_of_order", str(exc))
            manager.save(sid, entry)
            return {"ok": True, "last_t": entry.session.last_t}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
