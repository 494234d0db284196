"""Bounded episodic and semantic memory stores."""

from __future__ import annotations

from typing import Iterable, Literal, Optional

from .core import (
    MemoryQuadruple,
    Question,
    generalize,
    render_quadruple,
    strip_owner,
)
from .rng import Xoshiro256

EpisodicEviction = Literal["oldest", "random"]
SemanticEviction = Literal["weakest", "random"]


class ZeroCapacityError(ValueError):
    """Insertion into a store that has no room at all (the system is absent)."""


class FrozenStoreError(RuntimeError):
    pass


def _need_rng(rng: Optional[Xoshiro256]) -> Xoshiro256:
    if rng is None:
        raise ValueError("random eviction needs a generator")
    return rng


class EpisodicStore:
    """Owner-qualified, timestamped memories; list order is insertion order."""

    def __init__(self, capacity: int, entries: Iterable[MemoryQuadruple] = ()):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.capacity = capacity
        self.entries: list[MemoryQuadruple] = []
        for q in entries:
            self.add(q)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def full(self) -> bool:
        return len(self.entries) >= self.capacity

    def evict_oldest(self) -> MemoryQuadruple:
        # min() keeps the first of equal keys: earliest inserted wins ties
        i = min(range(len(self.entries)), key=lambda k: self.entries[k].meta)
        return self.entries.pop(i)

    def evict_random(self, rng: Xoshiro256) -> MemoryQuadruple:
        return self.entries.pop(rng.randbelow(len(self.entries)))

    def add(
        self,
        q: MemoryQuadruple,
        eviction: EpisodicEviction = "oldest",
        rng: Optional[Xoshiro256] = None,
    ) -> Optional[MemoryQuadruple]:
        """Insert ``q``, evicting one entry first when full. Returns the evictee."""
        if not q.is_episodic:
            raise ValueError(f"not an episodic memory: {q!r}")
        if self.capacity == 0:
            raise ZeroCapacityError("episodic store has capacity 0")
        evicted = None
        if self.full:
            if eviction == "oldest":
                evicted = self.evict_oldest()
            elif eviction == "random":
                evicted = self.evict_random(_need_rng(rng))
            else:
                raise ValueError(f"unknown eviction mode: {eviction!r}")
        self.entries.append(q)
        return evicted

    def latest(self, question: Question) -> Optional[MemoryQuadruple]:
        """Most recent memory about ``question.head``; later insertion wins ties."""
        best = None
        for q in self.entries:
            if q.head == question.head and (best is None or q.meta >= best.meta):
                best = q
        return best


class _Fact:
    __slots__ = ("head", "relation", "tail", "strength", "touched")

    def __init__(self, head, relation, tail, strength, touched):
        self.head = head
        self.relation = relation
        self.tail = tail
        self.strength = strength
        self.touched = touched

    def quadruple(self) -> MemoryQuadruple:
        return MemoryQuadruple(self.head, self.relation, self.tail, self.strength)


class SemanticStore:
    """Name-free facts with a strength count, at most one per (head, tail).

    Every insert or strengthen stamps the fact with a store-local counter;
    that counter breaks strength ties (most recently touched is strongest,
    least recently touched is weakest).
    """

    def __init__(
        self,
        capacity: int,
        entries: Iterable[MemoryQuadruple] = (),
        frozen: bool = False,
    ):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.capacity = capacity
        self.frozen = False
        self._facts: dict[tuple, _Fact] = {}
        self._clock = 0
        for q in entries:
            self.merge(q, q.meta)
        self.frozen = frozen

    def __len__(self) -> int:
        return len(self._facts)

    @property
    def full(self) -> bool:
        return len(self._facts) >= self.capacity

    @property
    def entries(self) -> list[MemoryQuadruple]:
        return [f.quadruple() for f in self._facts.values()]

    def __iter__(self):
        return iter(self.entries)

    def total_strength(self) -> int:
        return sum(f.strength for f in self._facts.values())

    def _check_mutable(self) -> None:
        if self.frozen:
            raise FrozenStoreError("semantic store is frozen")

    def _tick(self) -> int:
        self._clock += 1
        return self._clock

    def evict_weakest(self) -> MemoryQuadruple:
        key = min(self._facts, key=lambda k: (self._facts[k].strength, self._facts[k].touched))
        return self._facts.pop(key).quadruple()

    def evict_random(self, rng: Xoshiro256) -> MemoryQuadruple:
        keys = list(self._facts)
        return self._facts.pop(keys[rng.randbelow(len(keys))]).quadruple()

    def merge(
        self,
        fact: MemoryQuadruple,
        amount: int = 1,
        eviction: SemanticEviction = "weakest",
        rng: Optional[Xoshiro256] = None,
    ) -> Optional[MemoryQuadruple]:
        """Add ``amount`` to the strength of an ownerless ``fact``, inserting
        it (and evicting first if full) when it is new. Returns the evictee."""
        self._check_mutable()
        if not fact.is_semantic:
            raise ValueError(f"not a semantic memory: {fact!r}")
        if amount < 1:
            raise ValueError("amount must be positive")
        key = (fact.head, fact.relation, fact.tail)
        existing = self._facts.get(key)
        if existing is not None:
            existing.strength += amount
            existing.touched = self._tick()
            return None
        if self.capacity == 0:
            raise ZeroCapacityError("semantic store has capacity 0")
        evicted = None
        if self.full:
            if eviction == "weakest":
                evicted = self.evict_weakest()
            elif eviction == "random":
                evicted = self.evict_random(_need_rng(rng))
            else:
                raise ValueError(f"unknown eviction mode: {eviction!r}")
        self._facts[key] = _Fact(fact.head, fact.relation, fact.tail, amount, self._tick())
        return evicted

    def observe(
        self,
        q: MemoryQuadruple,
        eviction: SemanticEviction = "weakest",
        rng: Optional[Xoshiro256] = None,
    ) -> Optional[MemoryQuadruple]:
        """Strengthen (or insert) the generalization of episodic ``q``."""
        self._check_mutable()
        return self.merge(generalize(q), 1, eviction, rng)

    def strongest(self, question: Question) -> Optional[MemoryQuadruple]:
        head = strip_owner(question.head)
        best = None
        for f in self._facts.values():
            if f.head == head and f.relation == question.relation:
                if best is None or (f.strength, f.touched) > (best.strength, best.touched):
                    best = f
        return None if best is None else best.quadruple()


def episodic_compress(epi: EpisodicStore, sem: SemanticStore) -> bool:
    """Fold the largest group of same-generalization episodes into ``sem``.

    Groups episodes by their ownerless (head, tail). The largest group of at
    least two is removed from ``epi`` and added to ``sem`` with strength equal
    to its size; equal sizes go to the group holding the oldest episode. With
    no such group the oldest episode is evicted instead and ``False`` returned.
    """
    sem._check_mutable()
    groups: dict[tuple, list[int]] = {}
    for i, q in enumerate(epi.entries):
        key = (q.head.base, q.relation, q.tail.base)
        groups.setdefault(key, []).append(i)

    def oldest(idx: list[int]) -> tuple[int, int]:
        return min((epi.entries[i].meta, i) for i in idx)

    candidates = [idx for idx in groups.values() if len(idx) >= 2]
    if not candidates:
        if epi.entries:
            epi.evict_oldest()
        return False
    best = min(candidates, key=lambda idx: (-len(idx), oldest(idx)))
    fact = generalize(epi.entries[best[0]])
    members = set(best)
    epi.entries = [q for i, q in enumerate(epi.entries) if i not in members]
    sem.merge(fact, len(best), "weakest")
    return True


def dump_stores(epi: Optional[EpisodicStore], sem: Optional[SemanticStore]) -> str:
    """Episodic section then semantic section, one quadruple per line."""
    lines = ["# episodic"]
    if epi is not None:
        lines.extend(render_quadruple(q) for q in epi.entries)
    lines.append("# semantic")
    if sem is not None:
        lines.extend(render_quadruple(q) for q in sem.entries)
    return "\n".join(lines) + "\n"

