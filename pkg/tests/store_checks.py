"""Randomized operation sequences over the memory stores, with invariant checks.

Shared by the memory property tests and the acceptance suite.
"""

import random

from room_memory.core import AtLocation, EntityName, MemoryQuadruple, Question
from room_memory.memory import (
    EpisodicStore,
    FrozenStoreError,
    SemanticStore,
    episodic_compress,
)
from room_memory.rng import Xoshiro256

PEOPLE = ["James", "Karen", "Tom"]
OBJECTS = ["laptop", "cat", "cup", "book"]
PLACES = ["desk", "lap", "cupboard", "shelf", "garage"]


def _episode(r: random.Random, t: int) -> MemoryQuadruple:
    owner = r.choice(PEOPLE)
    return MemoryQuadruple(
        EntityName(r.choice(OBJECTS), owner), AtLocation, EntityName(r.choice(PLACES), owner), t
    )


def _question(r: random.Random) -> Question:
    return Question(EntityName(r.choice(OBJECTS), r.choice(PEOPLE)))


def _check_semantic(sem: SemanticStore) -> None:
    entries = sem.entries
    assert len(entries) <= sem.capacity
    keys = [(q.head, q.relation, q.tail) for q in entries]
    assert len(set(keys)) == len(keys)
    assert all(q.is_semantic and q.meta >= 1 for q in entries)


def _check_latest(epi: EpisodicStore, question: Question) -> None:
    got = epi.latest(question)
    relevant = [q for q in epi.entries if q.head == question.head]
    if not relevant:
        assert got is None
        return
    assert got in relevant
    assert all(got.meta >= q.meta for q in relevant)


def _check_strongest(sem: SemanticStore, question: Question) -> None:
    got = sem.strongest(question)
    relevant = [q for q in sem.entries if q.head.base == question.head.base]
    if not relevant:
        assert got is None
        return
    assert got in relevant and got.tail.owner is None
    assert all(got.meta >= q.meta for q in relevant)


def episodic_sequence(seed: int, length: int = 40) -> None:
    r = random.Random(seed)
    rng = Xoshiro256(seed)
    epi = EpisodicStore(r.randint(1, 8))
    sem = SemanticStore(r.randint(1, 6))
    t = 0
    for _ in range(length):
        op = r.random()
        if op < 0.6:
            t += r.randint(0, 2)
            before = len(epi)
            evicted = epi.add(_episode(r, t), r.choice(["oldest", "random"]), rng)
            assert (evicted is not None) == (before == epi.capacity)
        elif op < 0.8:
            _check_latest(epi, _question(r))
        elif epi.full:
            before = list(epi.entries)
            probes = {h: Question(EntityName(h, "James")) for h in OBJECTS}
            answers = {h: sem.strongest(q) for h, q in probes.items()}
            sem_was_full = sem.full
            compressed = episodic_compress(epi, sem)
            if compressed:
                assert len(epi) <= len(before) - 2
                removed = [q for q in before if q not in epi.entries]
                assert len({(q.head.base, q.tail.base) for q in removed}) == 1
                changed = {h for h, q in probes.items() if sem.strongest(q) != answers[h]}
                if not sem_was_full:
                    assert changed <= {removed[0].head.base}
            else:
                assert len(epi) == len(before) - 1
            _check_semantic(sem)
        assert len(epi) <= epi.capacity
        assert all(q.is_episodic for q in epi.entries)


def semantic_sequence(seed: int, length: int = 40) -> None:
    r = random.Random(seed)
    rng = Xoshiro256(seed)
    sem = SemanticStore(r.randint(1, 6))
    added = 0
    lost = 0
    for step in range(length):
        op = r.random()
        if op < 0.6:
            evicted = sem.observe(_episode(r, step), r.choice(["weakest", "random"]), rng)
            added += 1
            if evicted is not None:
                lost += evicted.meta
        elif op < 0.9:
            _check_strongest(sem, _question(r))
        else:
            weakest_before = min((q.meta for q in sem.entries), default=None)
            evicted = sem.observe(_episode(r, step), "weakest")
            added += 1
            if evicted is not None:
                lost += evicted.meta
                assert evicted.meta == weakest_before
        _check_semantic(sem)
        assert sem.total_strength() == added - lost


def frozen_sequence(seed: int, length: int = 20) -> None:
    r = random.Random(seed)
    facts = [
        MemoryQuadruple(EntityName(o), AtLocation, EntityName(p), 1)
        for o, p in zip(OBJECTS, PLACES)
    ]
    sem = SemanticStore(r.randint(1, len(facts)), facts[: r.randint(1, len(facts))], frozen=True)
    snapshot = sem.entries
    epi = EpisodicStore(2, [_episode(r, 0), _episode(r, 1)])
    for step in range(length):
        op = r.random()
        try:
            if op < 0.5:
                sem.observe(_episode(r, step))
            elif op < 0.8:
                sem.merge(facts[r.randrange(len(facts))], r.randint(1, 3))
            else:
                episodic_compress(epi, sem)
        except FrozenStoreError:
            pass
        else:
            raise AssertionError("frozen store accepted a mutation")
        _check_strongest(sem, _question(r))
        assert sem.entries == snapshot
