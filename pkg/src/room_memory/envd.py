"""Line-delimited JSON service so out-of-process agents can play the Room.

Requests (one JSON object per line)::

    {"op": "reset", "config": {...}, "seed": 7}
    {"op": "step", "session": "<id>", "answer": "James's desk"}   # null abstains
    {"op": "close", "session": "<id>"}

Errors come back as ``{"error": <code>, "message": ...}`` with code one of
``unknown_session``, ``malformed``, ``episode_done``, ``server_full``.
"""

from __future__ import annotations

import json
import logging
import secrets
import socket
import socketserver
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .core import ParseError, Question, parse_entity, render_entity
from .environment import ConfigError, EnvConfig, RoomState, StepOutput, reset, step
from .knowledge import CommonsenseKB, load_kb

log = logging.getLogger(__name__)

UNKNOWN_SESSION = "unknown_session"
MALFORMED = "malformed"
EPISODE_DONE = "episode_done"
SERVER_FULL = "server_full"


class ProtocolError(Exception):
    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code
        self.message = message or code


@dataclass
class Session:
    session_id: str
    state: RoomState
    created_at: float
    last_used: float
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def pending_question(self) -> Optional[Question]:
        return None if self.state.done else self.state.question


def quadruple_json(q) -> list:
    return [render_entity(q.head), q.relation.name, render_entity(q.tail), q.meta]


def _output_json(out: StepOutput) -> dict:
    observations = [quadruple_json(q) for q in out.observations]
    return {
        "step": out.step,
        "observation": observations[0],
        "observations": observations,
        "question": [render_entity(out.question.head), out.question.relation.name],
    }


class SessionManager:
    """Session table plus request dispatch; transport-agnostic."""

    def __init__(
        self,
        kb: Optional[CommonsenseKB] = None,
        max_sessions: int = 64,
        idle_timeout: float = 600.0,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.kb = kb or load_kb()
        self.max_sessions = max_sessions
        self.idle_timeout = idle_timeout
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)

    def _expire(self, now: float) -> None:
        stale = [
            sid for sid, s in self._sessions.items() if now - s.last_used > self.idle_timeout
        ]
        for sid in stale:
            log.info("session %s expired", sid)
            del self._sessions[sid]

    def _get(self, message: dict) -> Session:
        sid = message.get("session")
        if not isinstance(sid, str):
            raise ProtocolError(UNKNOWN_SESSION, "missing or invalid session id")
        now = self.clock()
        with self._lock:
            self._expire(now)
            session = self._sessions.get(sid)
            if session is None:
                raise ProtocolError(UNKNOWN_SESSION, f"no session {sid!r}")
            session.last_used = now
            return session

    def _reset(self, message: dict) -> dict:
        raw = message.get("config") or {}
        if not isinstance(raw, dict):
            raise ProtocolError(MALFORMED, "config must be an object")
        data = dict(raw)
        if "seed" in message:
            data["seed"] = message["seed"]
        try:
            config = EnvConfig.from_mapping(data)
            state, out = reset(config, self.kb)
        except (ConfigError, ValueError) as exc:
            raise ProtocolError(MALFORMED, str(exc)) from None
        now = self.clock()
        with self._lock:
            self._expire(now)
            if len(self._sessions) >= self.max_sessions:
                raise ProtocolError(SERVER_FULL, f"limit of {self.max_sessions} sessions")
            sid = secrets.token_hex(8)
            self._sessions[sid] = Session(sid, state, now, now)
        reply = {"session": sid}
        reply.update(_output_json(out))
        return reply

    def _step(self, message: dict) -> dict:
        session = self._get(message)
        answer_text = message.get("answer")
        if answer_text is None:
            answer = None
        elif isinstance(answer_text, str):
            try:
                answer = parse_entity(answer_text)
            except ParseError as exc:
                raise ProtocolError(MALFORMED, str(exc)) from None
        else:
            raise ProtocolError(MALFORMED, "answer must be a string or null")
        with session.lock:
            if session.state.done:
                raise ProtocolError(EPISODE_DONE, "episode finished; close the session")
            out, reward, done = step(session.state, answer)
        reply = {"session": session.session_id, "reward": reward, "done": done}
        reply.update(_output_json(out))
        return reply

    def _close(self, message: dict) -> dict:
        session = self._get(message)
        with self._lock:
            self._sessions.pop(session.session_id, None)
        return {"session": session.session_id, "closed": True}

    def handle_request(self, message: Any) -> dict:
        try:
            if not isinstance(message, dict):
                raise ProtocolError(MALFORMED, "request must be a JSON object")
            op = message.get("op")
            if op == "reset":
                return self._reset(message)
            if op == "step":
                return self._step(message)
            if op == "close":
                return self._close(message)
            raise ProtocolError(MALFORMED, f"unknown op {op!r}")
        except ProtocolError as exc:
            return {"error": exc.code, "message": exc.message}

    def handle_line(self, line: str) -> str:
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            reply = {"error": MALFORMED, "message": f"invalid JSON: {exc.msg}"}
        else:
            reply = self.handle_request(message)
        return json.dumps(reply, separators=(",", ":")) + "\n"


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        manager: SessionManager = self.server.manager
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            self.wfile.write(manager.handle_line(line).encode("utf-8"))
            self.wfile.flush()


class RoomServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: tuple[str, int], manager: SessionManager):
        super().__init__(address, _Handler)
        self.manager = manager

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve(
    host: str = "127.0.0.1",
    port: int = 7878,
    kb: Optional[CommonsenseKB] = None,
    max_sessions: int = 64,
    idle_timeout: float = 600.0,
) -> RoomServer:
    """Bind a server; call ``serve_forever()`` on the result (or run it in a thread)."""
    return RoomServer((host, port), SessionManager(kb, max_sessions, idle_timeout))


class RoomClient:
    """Blocking client for :class:`RoomServer`."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._file = self._sock.makefile("rwb")

    def request(self, message: dict) -> dict:
        self._file.write((json.dumps(message) + "\n").encode("utf-8"))
        self._file.flush()
        line = self._file.readline()
        if not line:
            raise ConnectionError("server closed the connection")
        return json.loads(line)

    def reset(self, seed: int, config: Optional[dict] = None) -> dict:
        return self.request({"op": "reset", "config": config or {}, "seed": seed})

    def step(self, session: str, answer: Optional[str]) -> dict:
        return self.request({"op": "step", "session": session, "answer": answer})

    def close(self, session: Optional[str] = None) -> None:
        if session is not None:
            self.request({"op": "close", "session": session})
        self._file.close()
        self._sock.close()

    def __enter__(self) -> "RoomClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
