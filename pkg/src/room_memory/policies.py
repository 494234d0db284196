"""Handcrafted memory agents and their uniformly random ablations.

All four kinds share one skeleton: an episodic store, a semantic store, and
per-kind rules for where observations go and which memory answers a
question. A kind without a memory system simply gets capacity 0 there.

=====  ==================================================================
kind   behaviour
=====  ==================================================================
h1     episodic only; forget the oldest, answer from the latest
h2     semantic only; forget the weakest, answer from the strongest
h3     both, split evenly; compress similar episodes into semantic facts
h4     both; semantic pre-filled from the knowledge base and frozen
=====  ==================================================================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .core import EntityName, MemoryQuadruple, Question
from .knowledge import CommonsenseKB, pretrain_semantic
from .memory import EpisodicStore, SemanticStore, episodic_compress
from .rng import Xoshiro256

Kind = Literal["h1", "h2", "h3", "h4"]
Mode = Literal["handcrafted", "random"]
KINDS: tuple[str, ...] = ("h1", "h2", "h3", "h4")
MODES: tuple[str, ...] = ("handcrafted", "random")


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class PolicyConfig:
    kind: str
    total_capacity: int
    forget_mode: str = "handcrafted"
    answer_mode: str = "handcrafted"

    def __post_init__(self) -> None:
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise PolicyError(f"unknown policy kind: {self.kind!r}")
        if self.total_capacity < 0:
            raise PolicyError("total_capacity must be non-negative")
        if kind == "h3" and self.total_capacity % 2:
            raise PolicyError("h3 splits capacity evenly and needs an even total")
        for mode in (self.forget_mode, self.answer_mode):
            if mode not in MODES:
                raise PolicyError(f"unknown mode: {mode!r}")

    def split(self, kb_size: int) -> tuple[int, int]:
        """``(episodic, semantic)`` capacities."""
        total = self.total_capacity
        if self.kind == "h1":
            return total, 0
        if self.kind == "h2":
            return 0, total
        if self.kind == "h3":
            return total // 2, total // 2
        semantic = min(total // 2, kb_size)
        return total - semantic, semantic

    @property
    def label(self) -> str:
        if self.forget_mode == self.answer_mode == "handcrafted":
            return "handcrafted"
        if self.forget_mode == self.answer_mode == "random":
            return "random-both"
        return "random-forget" if self.forget_mode == "random" else "random-answer"


class Agent:
    def __init__(self, config: PolicyConfig, kb: CommonsenseKB, seed: int = 0):
        self.config = config
        self.rng = Xoshiro256(seed)
        epi_cap, sem_cap = config.split(len(kb))
        self.episodic = EpisodicStore(epi_cap)
        if config.kind == "h4":
            facts = pretrain_semantic(kb, sem_cap) if sem_cap else []
            self.semantic = SemanticStore(sem_cap, facts, frozen=True)
        else:
            self.semantic = SemanticStore(sem_cap)

    @property
    def kind(self) -> str:
        return self.config.kind

    @property
    def random_forget(self) -> bool:
        return self.config.forget_mode == "random"

    def observe(self, obs: MemoryQuadruple) -> None:
        kind = self.config.kind
        if kind == "h2":
            if self.semantic.capacity:
                mode = "random" if self.random_forget else "weakest"
                self.semantic.observe(obs, mode, self.rng)
            return
        if not self.episodic.capacity:
            return
        if kind == "h3" and self.episodic.full and not self.random_forget:
            episodic_compress(self.episodic, self.semantic)
        mode = "random" if self.random_forget else "oldest"
        self.episodic.add(obs, mode, self.rng)

    def recall(self, question: Question) -> tuple[Optional[MemoryQuadruple], Optional[MemoryQuadruple]]:
        """Latest relevant episode and strongest relevant fact (either may be None)."""
        return self.episodic.latest(question), self.semantic.strongest(question)

    def answer(self, question: Question) -> Optional[EntityName]:
        """Tail of the chosen memory, or ``None`` to abstain."""
        if self.config.answer_mode == "random":
            return random_answer([self], self.rng)
        episode, fact = self.recall(question)
        if episode is not None:
            return episode.tail
        if fact is not None:
            return fact.tail
        return None


def random_answer(agents: list[Agent], rng: Xoshiro256) -> Optional[EntityName]:
    """Tail of a uniformly drawn memory from all stores (episodic first)."""
    pool: list[MemoryQuadruple] = []
    for agent in agents:
        pool.extend(agent.episodic.entries)
        pool.extend(agent.semantic.entries)
    if not pool:
        return None
    return pool[rng.randbelow(len(pool))].tail
