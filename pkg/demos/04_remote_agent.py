"""
Playing over the wire
=====================

Starts the line-delimited JSON server in a background thread and lets a
local agent with pretrained commonsense play one episode through it.
"""

import threading

from room_memory import AtLocation, MemoryQuadruple, PolicyConfig, load_kb, parse_entity
from room_memory.core import Question
from room_memory.envd import serve, RoomClient
from room_memory.environment import EnvConfig
from room_memory.harness import make_agents

kb = load_kb()
server = serve(port=0, kb=kb)
threading.Thread(target=server.serve_forever, daemon=True).start()

seed = 3
[agent] = make_agents(PolicyConfig("h4", 32), EnvConfig(seed=seed), kb)

total = 0
with RoomClient("127.0.0.1", server.port) as client:
    reply = client.reset(seed)
    session = reply["session"]
    while True:
        head, _, tail, step = reply["observation"]
        agent.observe(MemoryQuadruple(parse_entity(head), AtLocation, parse_entity(tail), step))
        answer = agent.answer(Question(parse_entity(reply["question"][0])))
        reply = client.step(session, None if answer is None else str(answer))
        total += reply["reward"]
        if reply["done"]:
            break
    client.request({"op": "close", "session": session})

print("total reward over the wire:", total)
server.shutdown()
