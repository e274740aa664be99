"""HTTP facade for interactive token-game sessions.

One session wraps one loaded model plus a state history with an undo
cursor. Mode indices are positions in the canonical enabled-mode list
and are only valid together with the state version they were listed
for; firing with an outdated version answers 409.

Sessions live in memory and expire after an idle TTL.
"""

from __future__ import annotations

import random
import secrets
import threading
import time

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import corpus
from .errors import ModelTypeError, ParseError, RefnetError
from .lang import parse_model, typecheck
from .lang.check import TypedModel
from .refnet import RefNet, RefState, ref_enabled_modes, ref_fire
from .values import pretty, value_to_json

__all__ = ["create_app", "SESSION_TTL_SECONDS"]

SESSION_TTL_SECONDS = 30 * 60


class _Session:
    def __init__(self, sid: str, model: TypedModel):
        self.id = sid
        self.model = model
        self.net = RefNet(model)
        self.history: list[RefState] = [self.net.initial_state()]
        self.fired: list[tuple] = []  # mode that produced history[i+1]
        self.cursor = 0
        self.version = 0
        self.lock = threading.Lock()
        self.last_access = time.monotonic()
        self._modes_cache: tuple[int, list] | None = None

    @property
    def state(self) -> RefState:
        return self.history[self.cursor]

    def modes(self) -> list:
        if self._modes_cache is None or self._modes_cache[0] != self.version:
            self._modes_cache = (self.version, ref_enabled_modes(self.net, self.state))
        return self._modes_cache[1]


def _place_tokens_json(model: TypedModel, state: RefState) -> dict:
    places = {}
    for place in model.places:
        entries = []
        for tok, count in state.marking.get(place).items_sorted(key=lambda v: pretty(v)):
            entries.append({"value": value_to_json(tok), "text": pretty(tok), "count": count})
        places[place] = entries
    return places


def _store_json(state: RefState) -> dict:
    return {
        name: {"value": value_to_json(v), "text": pretty(v)}
        for name, v in state.store.items_sorted()
    }


def _state_payload(session: _Session) -> dict:
    state = session.state
    return {
        "version": session.version,
        "places": _place_tokens_json(session.model, state),
        "store": _store_json(state),
        "terminal": not session.modes(),
        "canUndo": session.cursor > 0,
        "historyLength": session.cursor + 1,
    }


def _diff_payload(model: TypedModel, before: RefState, after: RefState) -> dict:
    places = {}
    for place in model.places:
        old, new = before.marking.get(place), after.marking.get(place)
        added = new - old
        removed = old - new
        if added or removed:
            places[place] = {
                "added": [pretty(t) for t in sorted(added.expand(), key=pretty)],
                "removed": [pretty(t) for t in sorted(removed.expand(), key=pretty)],
            }
    store = {}
    names = set(before.store.names()) | set(after.store.names())
    for name in sorted(names):
        old_v = before.store.get(name) if name in before.store else None
        new_v = after.store.get(name) if name in after.store else None
        if old_v != new_v:
            store[name] = {
                "before": pretty(old_v) if old_v is not None else None,
                "after": pretty(new_v) if new_v is not None else None,
            }
    return {"places": places, "store": store}


def _mode_json(index: int, mode: tuple) -> dict:
    t, b = mode
    return {
        "modeIndex": index,
        "transition": t,
        "binding": {k: {"value": value_to_json(v), "text": pretty(v)} for k, v in sorted(b.items())},
    }


class CreateSessionBody(BaseModel):
    source: str | None = None
    corpusId: str | None = None


class FireBody(BaseModel):
    modeIndex: int
    stateVersion: int


class RandomStepBody(BaseModel):
    seed: int | None = None


def create_app(session_ttl: float = SESSION_TTL_SECONDS) -> FastAPI:
    app = FastAPI(title="refnets stepper")
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def sweep():
        now = time.monotonic()
        dead = [sid for sid, s in sessions.items() if now - s.last_access > session_ttl]
        for sid in dead:
            sessions.pop(sid, None)

    def get_session(sid: str) -> _Session:
        with registry_lock:
            sweep()
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.last_access = time.monotonic()
        return session

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        if (body.source is None) == (body.corpusId is None):
            raise HTTPException(status_code=400, detail="give exactly one of source, corpusId")
        try:
            if body.corpusId is not None:
                model, _state = corpus.load_corpus(body.corpusId)
            else:
                model = typecheck(parse_model(body.source), body.source)
        except ParseError as exc:
            raise HTTPException(
                status_code=400,
                detail={"errors": [{"line": exc.line, "col": exc.col, "message": exc.message}]},
            )
        except ModelTypeError as exc:
            raise HTTPException(
                status_code=400,
                detail={
                    "errors": [
                        {"line": i.line, "col": i.col, "message": f"{i.where}: {i.message}"}
                        for i in exc.issues
                    ]
                },
            )
        except RefnetError as exc:
            raise HTTPException(status_code=400, detail={"errors": [{"message": str(exc)}]})
        sid = secrets.token_hex(8)
        session = _Session(sid, model)
        with registry_lock:
            sweep()
            sessions[sid] = session
        return {"sessionId": sid, "state": _state_payload(session)}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return _state_payload(session)

    @app.get("/sessions/{sid}/enabled")
    def get_enabled(sid: str):
        session = get_session(sid)
        with session.lock:
            return {
                "stateVersion": session.version,
                "modes": [_mode_json(i, m) for i, m in enumerate(session.modes())],
            }

    @app.get("/sessions/{sid}/net")
    def get_net(sid: str):
        session = get_session(sid)
        model = session.model
        arcs = []
        for tname, tr in model.transitions.items():
            for place, ins in tr.inputs:
                arcs.append({"from": place, "to": tname, "tokens": len(ins.items)})
            for place, ins in tr.outputs:
                arcs.append({"from": tname, "to": place, "tokens": len(ins.items)})
        return {
            "places": list(model.places),
            "transitions": list(model.transitions),
            "arcs": arcs,
        }

    def fire_mode(session: _Session, index: int) -> dict:
        modes = session.modes()
        if index < 0 or index >= len(modes):
            raise HTTPException(status_code=409, detail="mode index out of range for this state")
        t, b = modes[index]
        before = session.state
        after = ref_fire(session.net, before, t, b)
        # branching after undo discards the undone future
        session.history = session.history[: session.cursor + 1] + [after]
        session.fired = session.fired[: session.cursor] + [(t, b)]
        session.cursor += 1
        session.version += 1
        return {
            "fired": _mode_json(index, (t, b)),
            "state": _state_payload(session),
            "diff": _diff_payload(session.model, before, after),
        }

    @app.post("/sessions/{sid}/fire")
    def fire(sid: str, body: FireBody):
        session = get_session(sid)
        with session.lock:
            if body.stateVersion != session.version:
                raise HTTPException(status_code=409, detail="stale state version")
            return fire_mode(session, body.modeIndex)

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.cursor == 0:
                raise HTTPException(status_code=409, detail="already at the initial state")
            before = session.state
            session.cursor -= 1
            session.version += 1
            return {
                "state": _state_payload(session),
                "diff": _diff_payload(session.model, before, session.state),
            }

    @app.post("/sessions/{sid}/reset")
    def reset(sid: str):
        session = get_session(sid)
        with session.lock:
            before = session.state
            session.cursor = 0
            session.history = session.history[:1]
            session.fired = []
            session.version += 1
            return {
                "state": _state_payload(session),
                "diff": _diff_payload(session.model, before, session.state),
            }

    @app.post("/sessions/{sid}/random-step")
    def random_step(sid: str, body: RandomStepBody):
        session = get_session(sid)
        with session.lock:
            modes = session.modes()
            if not modes:
                raise HTTPException(status_code=409, detail="no enabled mode: state is terminal")
            rng = random.Random(body.seed)
            return fire_mode(session, rng.randrange(len(modes)))

    return app


def mount_static(app: FastAPI, directory: str):
    """Serve the built stepper UI at the web root."""
    app.mount("/", StaticFiles(directory=directory, html=True), name="ui")
