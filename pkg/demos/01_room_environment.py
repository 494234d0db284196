"""
The Room, one step at a time
============================

People keep picking up objects and putting them down. An agent sees one
person per step and is asked where somebody's object is.
"""

from room_memory import EnvConfig, RoomEnv, load_kb

kb = load_kb()
print("commonsense facts:", kb.facts[:3], "...")

env = RoomEnv(EnvConfig(max_steps=8), kb)
out = env.reset(seed=7)

# the hidden state: ring order, each person's object and where it is
for person in env.state.people:
    flag = "home" if person.at_commonsense else "odd spot"
    print(f"{person.name:>6}: {person.object_base:<10} at {person.location_base:<10} ({flag})")

# walk the episode, always abstaining, and watch what the agent sees
done = False
while not done:
    seen = out.observations[0]
    print(f"t={out.step}  sees: {seen}  asked: {out.question.head}?")
    out, reward, done, info = env.step(None)
    changed = [c for c in info["dynamics"].changes if c]
    print(f"     reward={reward}  re-placements={len(changed)}  swap={info['dynamics'].swap}")
