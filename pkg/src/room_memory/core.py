"""Entity names, memory quadruples and questions.

Heads and tails are nouns that may be qualified by an owner
(``"James's laptop"``) or not (``"laptop"``). Episodic memories carry owners,
semantic memories never do.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

POSSESSIVE = "'s "
AT_LOCATION = "AtLocation"


class ParseError(ValueError):
    """Raised when text cannot be parsed into a name or quadruple."""


@dataclass(frozen=True)
class EntityName:
    base: str
    owner: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.base or "'s" in self.base or self.base != self.base.strip():
            raise ValueError(f"invalid base noun: {self.base!r}")
        if self.owner is not None and (
            not self.owner or " " in self.owner or "'" in self.owner
        ):
            raise ValueError(f"invalid owner: {self.owner!r}")

    def __str__(self) -> str:
        return render_entity(self)


@dataclass(frozen=True)
class Relation:
    name: str = AT_LOCATION

    def __str__(self) -> str:
        return self.name


AtLocation = Relation(AT_LOCATION)


@dataclass(frozen=True)
class MemoryQuadruple:
    """``(head, relation, tail, meta)``.

    ``meta`` is the observation step for episodic memories and the strength
    (number of supporting observations) for semantic ones.
    """

    head: EntityName
    relation: Relation
    tail: EntityName
    meta: int

    def __post_init__(self) -> None:
        if self.meta < 0:
            raise ValueError("meta must be non-negative")

    @property
    def is_episodic(self) -> bool:
        return self.head.owner is not None and self.tail.owner is not None

    @property
    def is_semantic(self) -> bool:
        return self.head.owner is None and self.tail.owner is None

    def __str__(self) -> str:
        return render_quadruple(self)


@dataclass(frozen=True)
class Question:
    head: EntityName
    relation: Relation = AtLocation

    def __post_init__(self) -> None:
        if self.head.owner is None:
            raise ValueError("questions are about a specific person's object")


def parse_entity(text: str) -> EntityName:
    """Parse ``"<owner>'s <base>"`` or ``"<base>"``."""
    if POSSESSIVE in text:
        owner, _, base = text.partition(POSSESSIVE)
        if not owner or not base:
            raise ParseError(f"malformed possessive: {text!r}")
    else:
        owner, base = None, text
    try:
        return EntityName(base, owner)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def render_entity(name: EntityName) -> str:
    if name.owner is None:
        return name.base
    return f"{name.owner}{POSSESSIVE}{name.base}"


def strip_owner(name: EntityName) -> EntityName:
    if name.owner is None:
        return name
    return EntityName(name.base)


def generalize(q: MemoryQuadruple) -> MemoryQuadruple:
    """Turn an episodic quadruple into the name-free semantic fact it supports."""
    if not q.is_episodic:
        raise ValueError(f"generalize expects an episodic quadruple, got {q!r}")
    return MemoryQuadruple(strip_owner(q.head), q.relation, strip_owner(q.tail), 1)


def render_quadruple(q: MemoryQuadruple) -> str:
    return "\t".join(
        (render_entity(q.head), q.relation.name, render_entity(q.tail), str(q.meta))
    )


def parse_quadruple(line: str) -> MemoryQuadruple:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 4:
        raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}")
    head, rel, tail, meta = fields
    try:
        meta_value = int(meta)
    except ValueError:
        raise ParseError(f"meta is not an integer: {meta!r}") from None
    if meta_value < 0:
        raise ParseError("meta must be non-negative")
    return MemoryQuadruple(parse_entity(head), Relation(rel), parse_entity(tail), meta_value)
