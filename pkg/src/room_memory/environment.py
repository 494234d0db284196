"""The Room: people who keep placing objects while agents watch one at a time.

The hidden state is a ring of people. Each person holds one object type at
one location type. Each step every agent sees one person (the agent's scan
position on the ring) and all agents share one question about a random
person's current object.

Draw order per episode (single generator, see :mod:`room_memory.rng`):

reset
    for each person in roster order: object (``randbelow``), placement;
    then the first question.
step
    for each ring position: ``bernoulli(p_new_object)``, on success a new
    object and a placement, otherwise ``bernoulli(p_new_location)`` and on
    success a placement; then ``bernoulli(p_switch_person)`` and on success
    two distinct positions; then the question.
placement
    ``bernoulli(p_commonsense)``; on failure ``randbelow(n_objects - 1)``
    over the other location types in KB order.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .core import AtLocation, EntityName, MemoryQuadruple, Question
from .knowledge import CommonsenseKB, commonsense_location
from .rng import MASK64, Xoshiro256


class ConfigError(ValueError):
    pass


class EpisodeDone(RuntimeError):
    """``step`` was called on a finished episode."""


@dataclass
class EnvConfig:
    n_people: int = 10
    n_objects: int = 10
    n_agents: int = 1
    p_commonsense: float = 0.7
    p_new_location: float = 0.1
    p_new_object: float = 0.1
    p_switch_person: float = 0.5
    max_steps: int = 1000
    seed: int = 0

    def validate(self, kb: Optional[CommonsenseKB] = None) -> None:
        for name in ("n_people", "n_objects", "n_agents", "max_steps"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        for name in ("p_commonsense", "p_new_location", "p_new_object", "p_switch_person"):
            value = getattr(self, name)
            if not 0.0 <= float(value) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if kb is not None:
            if self.n_objects > len(kb):
                raise ConfigError(
                    f"n_objects={self.n_objects} exceeds knowledge base size {len(kb)}"
                )
            if self.n_people > len(kb.name_roster):
                raise ConfigError(
                    f"n_people={self.n_people} exceeds roster size {len(kb.name_roster)}"
                )

    def replace(self, **changes: Any) -> "EnvConfig":
        data = asdict(self)
        data.update(changes)
        return EnvConfig.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "EnvConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"unknown config key: {key!r}")
            caster = float if key.startswith("p_") else int
            try:
                kwargs[key] = caster(value)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key}: {value!r}") from None
        config = cls(**kwargs)
        config.validate()
        return config


def parse_config_text(text: str) -> dict[str, str]:
    """Parse a flat JSON object or ``key=value`` lines."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise ConfigError("config JSON must be a flat object")
        return data
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value")
        data[key.strip()] = value.strip()
    return data


def load_config(path: Union[str, Path], **overrides: Any) -> EnvConfig:
    data = parse_config_text(Path(path).read_text(encoding="utf-8"))
    data.update(overrides)
    return EnvConfig.from_mapping(data)


@dataclass
class PersonState:
    name: str
    object_base: str
    location_base: str
    at_commonsense: bool

    def observe(self, step: int) -> MemoryQuadruple:
        return MemoryQuadruple(
            EntityName(self.object_base, self.name),
            AtLocation,
            EntityName(self.location_base, self.name),
            step,
        )


@dataclass
class StepOutput:
    step: int
    observations: list[MemoryQuadruple]
    question: Question


@dataclass
class Dynamics:
    """What ``apply_dynamics`` did: per ring position ``"object"``,
    ``"location"`` or ``None``, and the swapped pair if any."""

    changes: list[Optional[str]]
    swap: Optional[tuple[int, int]] = None


@dataclass
class RoomState:
    config: EnvConfig
    kb: CommonsenseKB
    people: list[PersonState]
    rng: Xoshiro256
    step: int = 0
    question: Optional[Question] = None
    queried: Optional[str] = None
    done: bool = False
    last_dynamics: Optional[Dynamics] = field(default=None, repr=False)

    def person(self, name: str) -> PersonState:
        for p in self.people:
            if p.name == name:
                return p
        raise KeyError(name)


def agent_position(agent: int, step: int, n_people: int) -> int:
    """Ring position observed by ``agent`` at ``step``.

    Even agents scan clockwise from the front, odd agents counter-clockwise
    from the back; agent 0 starts at 0 and agent 1 at ``n_people - 1``.
    """
    if agent % 2 == 0:
        direction, offset = 1, agent // 2
    else:
        direction, offset = -1, n_people - 1 - agent // 2
    return (direction * step + offset) % n_people


def _place(state: RoomState, person: PersonState) -> None:
    rng = state.rng
    home = commonsense_location(state.kb, person.object_base)
    if rng.bernoulli(state.config.p_commonsense):
        person.location_base, person.at_commonsense = home, True
        return
    others = [loc for loc in state.kb.locations if loc != home]
    if not others:
        person.location_base, person.at_commonsense = home, True
        return
    person.location_base = others[rng.randbelow(len(others))]
    person.at_commonsense = False


def _new_object(state: RoomState, person: PersonState) -> None:
    objects = state.kb.objects
    if len(objects) > 1:
        i = state.rng.randbelow(len(objects) - 1)
        current = objects.index(person.object_base)
        person.object_base = objects[i + 1 if i >= current else i]
    _place(state, person)


def _ask(state: RoomState) -> None:
    person = state.people[state.rng.randbelow(len(state.people))]
    state.question = Question(EntityName(person.object_base, person.name))
    state.queried = person.name


def _emit(state: RoomState) -> StepOutput:
    n = len(state.people)
    observations = [
        state.people[agent_position(i, state.step, n)].observe(state.step)
        for i in range(state.config.n_agents)
    ]
    return StepOutput(state.step, observations, state.question)


def reset(config: EnvConfig, kb: CommonsenseKB) -> tuple[RoomState, StepOutput]:
    config.validate(kb)
    kb = kb.subset(config.n_objects)
    state = RoomState(config, kb, [], Xoshiro256(config.seed))
    objects = kb.objects
    for name in kb.name_roster[: config.n_people]:
        person = PersonState(name, objects[state.rng.randbelow(len(objects))], "", False)
        _place(state, person)
        state.people.append(person)
    _ask(state)
    return state, _emit(state)


def apply_dynamics(state: RoomState) -> Dynamics:
    """Move objects around and maybe swap two people on the ring (in place)."""
    cfg = state.config
    rng = state.rng
    changes: list[Optional[str]] = []
    for person in state.people:
        if rng.bernoulli(cfg.p_new_object):
            _new_object(state, person)
            changes.append("object")
        elif rng.bernoulli(cfg.p_new_location):
            _place(state, person)
            changes.append("location")
        else:
            changes.append(None)
    swap = None
    n = len(state.people)
    if n > 1 and rng.bernoulli(cfg.p_switch_person):
        i = rng.randbelow(n)
        j = rng.randbelow(n - 1)
        if j >= i:
            j += 1
        state.people[i], state.people[j] = state.people[j], state.people[i]
        swap = (i, j)
    dynamics = Dynamics(changes, swap)
    state.last_dynamics = dynamics
    return dynamics


def grade_answer(
    state: RoomState, question: Question, answer: Optional[EntityName]
) -> int:
    """1 if ``answer`` names where the queried person's object is, else 0.

    Ownerless answers (from semantic memory) are accepted on the location
    type alone; owner-qualified answers must also name the right owner.
    ``None`` is an abstention.
    """
    if answer is None:
        return 0
    owner = question.head.owner
    if answer.owner is not None and answer.owner != owner:
        return 0
    return int(answer.base == state.person(owner).location_base)


def step(
    state: RoomState, answer: Optional[EntityName]
) -> tuple[StepOutput, int, bool]:
    """Grade the pending question, advance the world one step and emit the
    next observations and question. Returns ``(output, reward, done)``."""
    if state.done or state.step >= state.config.max_steps:
        raise EpisodeDone("episode already finished; call reset")
    reward = grade_answer(state, state.question, answer)
    apply_dynamics(state)
    state.step += 1
    _ask(state)
    state.done = state.step == state.config.max_steps
    return _emit(state), reward, state.done


class RoomEnv:
    """Gym-flavoured wrapper: ``reset() -> obs`` and
    ``step(answer) -> (obs, reward, done, info)``."""

    def __init__(self, config: Optional[EnvConfig] = None, kb: Optional[CommonsenseKB] = None):
        from .knowledge import load_kb

        self.config = config or EnvConfig()
        self.kb = kb or load_kb()
        self.config.validate(self.kb)
        self.state: Optional[RoomState] = None

    def reset(self, seed: Optional[int] = None) -> StepOutput:
        if seed is not None:
            self.config = self.config.replace(seed=seed)
        self.state, out = reset(self.config, self.kb)
        return out

    def step(self, answer: Optional[EntityName]) -> tuple[StepOutput, int, bool, dict]:
        if self.state is None:
            raise RuntimeError("call reset() first")
        queried = self.state.person(self.state.queried)
        info = {"queried": queried.name, "at_commonsense": queried.at_commonsense}
        out, reward, done = step(self.state, answer)
        info["dynamics"] = self.state.last_dynamics
        return out, reward, done, info
