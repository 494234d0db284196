"""
Episodic and semantic memory
============================

Episodic memories keep who and when; semantic memories drop the names and
count how often a fact was seen.
"""

from room_memory import (
    AtLocation,
    EpisodicStore,
    MemoryQuadruple,
    SemanticStore,
    episodic_compress,
    parse_entity,
)
from room_memory.core import Question
from room_memory.memory import dump_stores


def seen(head, tail, t):
    return MemoryQuadruple(parse_entity(head), AtLocation, parse_entity(tail), t)


# two sightings of Karen's cat: the newer one answers
episodic = EpisodicStore(capacity=3)
episodic.add(seen("Karen's cat", "Karen's office", 21))
episodic.add(seen("Karen's cat", "Karen's desk", 22))
print("latest:", episodic.latest(Question(parse_entity("Karen's cat"))))

# semantic facts get stronger with every supporting sighting
semantic = SemanticStore(capacity=2)
for t in range(3):
    semantic.observe(seen("James's laptop", "James's desk", t))
semantic.observe(seen("Tom's laptop", "Tom's garage", 4))
print("strongest:", semantic.strongest(Question(parse_entity("Alice's laptop"))))

# a full episodic store folds repeated patterns into one semantic fact
episodic = EpisodicStore(3)
for q in [
    seen("James's laptop", "James's desk", 1),
    seen("Karen's laptop", "Karen's desk", 2),
    seen("Tom's cat", "Tom's lap", 3),
]:
    episodic.add(q)
semantic = SemanticStore(3)
print("compressed:", episodic_compress(episodic, semantic))
print(dump_stores(episodic, semantic))
