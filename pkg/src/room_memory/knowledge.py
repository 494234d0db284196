"""Commonsense object -> location knowledge and the person-name roster."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

from .core import AtLocation, EntityName, MemoryQuadruple


class KnowledgeError(ValueError):
    pass


@dataclass(frozen=True)
class CommonsenseKB:
    """One-to-one map from object types to their commonsense location type.

    ``facts`` keeps file order; truncation (``subset``, ``pretrain_semantic``)
    always takes a prefix of it.
    """

    facts: tuple[tuple[str, str], ...]
    name_roster: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.facts:
            raise KnowledgeError("knowledge base needs at least one fact")
        objects = [o for o, _ in self.facts]
        locations = [loc for _, loc in self.facts]
        if len(set(objects)) != len(objects):
            raise KnowledgeError("duplicate object in knowledge base")
        if len(set(locations)) != len(locations):
            raise KnowledgeError("duplicate location in knowledge base")
        if set(objects) & set(locations):
            raise KnowledgeError("object and location names collide")
        if len(set(self.name_roster)) != len(self.name_roster):
            raise KnowledgeError("duplicate person name")
        for name in self.name_roster:
            # validates single-token owner names
            EntityName("x", name)
        object.__setattr__(self, "_index", dict(self.facts))

    @property
    def objects(self) -> list[str]:
        return [o for o, _ in self.facts]

    @property
    def locations(self) -> list[str]:
        return [loc for _, loc in self.facts]

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, object_base: str) -> bool:
        return object_base in self._index

    def subset(self, n_objects: int) -> "CommonsenseKB":
        """The first ``n_objects`` facts, with the same roster."""
        if not 1 <= n_objects <= len(self.facts):
            raise KnowledgeError(
                f"n_objects={n_objects} outside 1..{len(self.facts)}"
            )
        if n_objects == len(self.facts):
            return self
        return CommonsenseKB(self.facts[:n_objects], self.name_roster)


def parse_kb(text: str) -> CommonsenseKB:
    facts: list[tuple[str, str]] = []
    names: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise KnowledgeError(f"line {lineno}: expected two tab-separated fields")
        key, value = parts
        if key == "@name":
            names.append(value)
            continue
        if key in seen:
            raise KnowledgeError(f"line {lineno}: duplicate object {key!r}")
        seen.add(key)
        facts.append((key, value))
    return CommonsenseKB(tuple(facts), tuple(names))


def load_kb(path: Union[str, Path, None] = None) -> CommonsenseKB:
    """Load a KB file; ``None`` loads the bundled 10-fact subset."""
    if path is None:
        text = (
            resources.files("room_memory")
            .joinpath("data/commonsense.tsv")
            .read_text(encoding="utf-8")
        )
    else:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"knowledge base not found: {path}")
        text = path.read_text(encoding="utf-8")
    return parse_kb(text)


def commonsense_location(kb: CommonsenseKB, object_base: str) -> str:
    try:
        return kb._index[object_base]
    except KeyError:
        raise KnowledgeError(f"unknown object: {object_base!r}") from None


def pretrain_semantic(kb: CommonsenseKB, capacity: int) -> list[MemoryQuadruple]:
    if capacity < 1:
        raise ValueError("capacity must be positive")
    return [
        MemoryQuadruple(EntityName(obj), AtLocation, EntityName(loc), 1)
        for obj, loc in kb.facts[:capacity]
    ]
