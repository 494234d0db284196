import json
import threading

import pytest

from room_memory.envd import RoomClient, RoomServer, SessionManager
from room_memory.environment import EnvConfig, reset, step
from room_memory.core import parse_entity


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


@pytest.fixture
def manager(kb):
    return SessionManager(kb, max_sessions=3, idle_timeout=60.0, clock=FakeClock())


@pytest.fixture
def server(kb):
    srv = RoomServer(("127.0.0.1", 0), SessionManager(kb))
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def test_reset_reply(manager):
    reply = manager.handle_request({"op": "reset", "config": {}, "seed": 7})
    assert set(reply) >= {"session", "observation", "question", "step"}
    assert reply["step"] == 0 and len(reply["observation"]) == 4
    _, out = reset(EnvConfig(seed=7), manager.kb)
    assert reply["question"] == [str(out.question.head), "AtLocation"]


def test_step_grades_by_delegation(manager):
    reply = manager.handle_request({"op": "reset", "seed": 7})
    state = manager._sessions[reply["session"]].state
    truth = state.person(state.queried)
    answer = f"{truth.name}'s {truth.location_base}"
    result = manager.handle_request({"op": "step", "session": reply["session"], "answer": answer})
    assert result["reward"] == 1 and result["done"] is False and result["step"] == 1


def test_abstain(manager):
    sid = manager.handle_request({"op": "reset", "seed": 1})["session"]
    assert manager.handle_request({"op": "step", "session": sid, "answer": None})["reward"] == 0


@pytest.mark.parametrize(
    "message, code",
    [
        ({"op": "step", "session": "nonexistent"}, "unknown_session"),
        ({"op": "close", "session": "nonexistent"}, "unknown_session"),
        ({"op": "step"}, "unknown_session"),
        ({"op": "dance"}, "malformed"),
        (["op", "reset"], "malformed"),
        ({"op": "reset", "config": {"n_people": 0}}, "malformed"),
        ({"op": "reset", "config": "big"}, "malformed"),
    ],
)
def test_errors(manager, message, code):
    assert manager.handle_request(message)["error"] == code


def test_bad_answer_is_malformed(manager):
    sid = manager.handle_request({"op": "reset", "seed": 1})["session"]
    assert manager.handle_request({"op": "step", "session": sid, "answer": "'s desk"})["error"] == "malformed"
    assert manager.handle_request({"op": "step", "session": sid, "answer": 5})["error"] == "malformed"


def test_invalid_json(manager):
    assert json.loads(manager.handle_line("{nope"))["error"] == "malformed"


def test_episode_done(manager):
    sid = manager.handle_request({"op": "reset", "config": {"max_steps": 2}, "seed": 1})["session"]
    manager.handle_request({"op": "step", "session": sid, "answer": None})
    last = manager.handle_request({"op": "step", "session": sid, "answer": None})
    assert last["done"] is True
    assert manager.handle_request({"op": "step", "session": sid})["error"] == "episode_done"


def test_server_full_and_close(manager):
    ids = [manager.handle_request({"op": "reset", "seed": i})["session"] for i in range(3)]
    assert manager.handle_request({"op": "reset", "seed": 9})["error"] == "server_full"
    assert manager.handle_request({"op": "close", "session": ids[0]})["closed"] is True
    assert "session" in manager.handle_request({"op": "reset", "seed": 9})


def test_idle_expiry(manager):
    sid = manager.handle_request({"op": "reset", "seed": 1})["session"]
    manager.clock.now = 30.0
    assert "reward" in manager.handle_request({"op": "step", "session": sid})
    manager.clock.now = 91.0
    assert manager.handle_request({"op": "step", "session": sid})["error"] == "unknown_session"
    assert len(manager) == 0


def test_remote_trace_matches_local(server, kb):
    answers = ["James's desk", None, "cupboard", "Karen's lap"] * 10
    with RoomClient("127.0.0.1", server.port) as client:
        reply = client.reset(3, {"max_steps": 40})
        remote = [client.step(reply["session"], a)["reward"] for a in answers]
    state, _ = reset(EnvConfig(seed=3, max_steps=40), kb)
    local = [step(state, None if a is None else parse_entity(a))[1] for a in answers]
    assert remote == local


def test_concurrent_sessions_independent(server):
    def play(seed, out):
        with RoomClient("127.0.0.1", server.port) as client:
            sid = client.reset(seed, {"max_steps": 50})["session"]
            out[seed] = [client.step(sid, "desk")["reward"] for _ in range(50)]

    solo: dict = {}
    play(11, solo)
    together: dict = {}
    threads = [threading.Thread(target=play, args=(s, together)) for s in (11, 12, 13, 11)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert together[11] == solo[11]
