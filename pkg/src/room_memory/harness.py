"""Episodes, team answering, and the three comparison experiments."""

from __future__ import annotations

import csv
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from .core import EntityName, Question, render_entity, render_quadruple
from .environment import EnvConfig, reset, step
from .knowledge import CommonsenseKB, load_kb
from .policies import KINDS, Agent, PolicyConfig, random_answer
from .rng import MASK64, splitmix64

AGENT_STREAM = 0xD1B54A32D192ED03
CSV_FIELDS = ("policy", "forget_mode", "answer_mode", "capacity", "n_agents", "seed", "total_reward")
ABLATIONS = {
    "handcrafted": ("handcrafted", "handcrafted"),
    "random-forget": ("random", "handcrafted"),
    "random-answer": ("handcrafted", "random"),
    "random-both": ("random", "random"),
}
SWEEP_CAPACITIES = (2, 4, 8, 16, 32, 64)


def agent_seed(seed: int, index: int) -> int:
    """Generator seed for agent ``index`` in an episode seeded with ``seed``."""
    return splitmix64((seed + AGENT_STREAM * (index + 1)) & MASK64)


def cell_seed(experiment_seed: int, cell_index: int) -> int:
    return splitmix64((experiment_seed ^ cell_index) & MASK64)


@dataclass
class EpisodeResult:
    policy: PolicyConfig
    n_agents: int
    seed: int
    reward_trace: list[int]
    config: EnvConfig

    @property
    def total_reward(self) -> int:
        return sum(self.reward_trace)

    def row(self) -> dict:
        return {
            "policy": self.policy.kind,
            "forget_mode": self.policy.forget_mode,
            "answer_mode": self.policy.answer_mode,
            "capacity": self.policy.total_capacity,
            "n_agents": self.n_agents,
            "seed": self.seed,
            "total_reward": self.total_reward,
        }


def combine_answers(agents: list[Agent], question: Question) -> Optional[EntityName]:
    """Answer from the union of all agents' memories.

    The most recent relevant episode held by anyone wins; failing that, the
    strongest relevant fact. Ties go to the lower agent index.
    """
    if not agents:
        raise ValueError("need at least one agent")
    if agents[0].config.answer_mode == "random":
        return random_answer(agents, agents[0].rng)
    best = None
    for agent in agents:
        episode = agent.episodic.latest(question)
        if episode is not None and (best is None or episode.meta > best.meta):
            best = episode
    if best is not None:
        return best.tail
    for agent in agents:
        fact = agent.semantic.strongest(question)
        if fact is not None and (best is None or fact.meta > best.meta):
            best = fact
    return None if best is None else best.tail


def _trace_line(out, question, answer, reward) -> str:
    fields = [str(out.step)]
    fields.extend(render_quadruple(q) for q in out.observations)
    fields.append(render_entity(question.head))
    fields.append(question.relation.name)
    fields.append("-" if answer is None else render_entity(answer))
    fields.append(str(reward))
    return "\t".join(fields) + "\n"


def make_agents(policy: PolicyConfig, config: EnvConfig, kb: CommonsenseKB) -> list[Agent]:
    kb = kb.subset(config.n_objects)
    return [Agent(policy, kb, agent_seed(config.seed, i)) for i in range(config.n_agents)]


def run_episode(
    config: EnvConfig,
    policy: PolicyConfig,
    kb: Optional[CommonsenseKB] = None,
    trace: Optional[TextIO] = None,
    agents: Optional[list[Agent]] = None,
) -> EpisodeResult:
    """Play one episode to the end.

    Each step every agent first stores its own observation, then the team
    answers the shared question once.
    """
    kb = kb or load_kb()
    state, out = reset(config, kb)
    if agents is None:
        agents = make_agents(policy, config, kb)
    rewards = []
    done = False
    while not done:
        for agent, obs in zip(agents, out.observations):
            agent.observe(obs)
        question = out.question
        answer = combine_answers(agents, question)
        emitted = out
        out, reward, done = step(state, answer)
        rewards.append(reward)
        if trace is not None:
            trace.write(_trace_line(emitted, question, answer, reward))
    return EpisodeResult(policy, config.n_agents, config.seed, rewards, config)


@dataclass(frozen=True)
class Cell:
    policy: PolicyConfig
    n_agents: int = 1
    # cells with the same environment index see the same world per seed
    env_index: int = 0


@dataclass
class ExperimentSpec:
    env: EnvConfig
    cells: list[Cell]
    seeds: list[int]
    output: Optional[Path] = None
    name: str = "custom"


def preset(name: str, seeds: Union[int, Iterable[int]] = 10, env: Optional[EnvConfig] = None) -> ExperimentSpec:
    """``fig1`` (handcrafted vs random at capacity 32), ``fig2`` (capacity
    sweep) or ``fig3`` (one agent with 32 vs two with 16 each)."""
    env = env or EnvConfig()
    seed_list = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    if name == "fig1":
        cells = [
            Cell(PolicyConfig(kind, 32, forget, answer))
            for kind in KINDS
            for forget, answer in ABLATIONS.values()
        ]
    elif name == "fig2":
        cells = [Cell(PolicyConfig(kind, cap)) for cap in SWEEP_CAPACITIES for kind in KINDS]
    elif name == "fig3":
        cells = [
            Cell(PolicyConfig(kind, cap), n_agents)
            for kind in KINDS
            for n_agents, cap in ((1, 32), (2, 16))
        ]
    else:
        raise ValueError(f"unknown preset: {name!r}")
    return ExperimentSpec(env, cells, seed_list, name=name)


def _run_job(job) -> EpisodeResult:
    config, policy, kb = job
    return run_episode(config, policy, kb)


def run_experiment(
    spec: ExperimentSpec,
    kb: Optional[CommonsenseKB] = None,
    workers: int = 1,
) -> list[EpisodeResult]:
    """One episode per (cell, seed), ordered by cell then seed."""
    if not spec.seeds:
        raise ValueError("need at least one seed")
    kb = kb or load_kb()
    spec.env.validate(kb)
    if spec.output is not None:
        Path(spec.output).parent.mkdir(parents=True, exist_ok=True)
        with open(spec.output, "a"):
            pass
    jobs = []
    for cell in spec.cells:
        for s in spec.seeds:
            config = spec.env.replace(seed=cell_seed(s, cell.env_index), n_agents=cell.n_agents)
            jobs.append((config, cell.policy, kb))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=4))
    else:
        results = [_run_job(job) for job in jobs]
    if spec.output is not None:
        write_csv(results, spec.output)
    return results


def cell_key(result: EpisodeResult) -> tuple:
    p = result.policy
    return (p.kind, p.forget_mode, p.answer_mode, p.total_capacity, result.n_agents)


def summarize(results: list[EpisodeResult]) -> dict[tuple, dict]:
    """Mean, population standard deviation and count of total reward per cell."""
    groups: dict[tuple, list[int]] = {}
    for r in results:
        groups.setdefault(cell_key(r), []).append(r.total_reward)
    return {
        key: {"mean": statistics.fmean(v), "std": statistics.pstdev(v), "n": len(v)}
        for key, v in groups.items()
    }


def best_policy(results: list[EpisodeResult], n_agents: int = 1) -> str:
    """Kind with the highest mean handcrafted total reward at ``n_agents``."""
    means = {
        key[0]: stats["mean"]
        for key, stats in summarize(results).items()
        if key[4] == n_agents and key[1] == key[2] == "handcrafted"
    }
    return max(means, key=means.get)


def csv_text(results: list[EpisodeResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def write_csv(results: list[EpisodeResult], path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(csv_text(results))


def summary_json(results: list[EpisodeResult]) -> str:
    cells = []
    for key, stats in summarize(results).items():
        cell = dict(zip(("policy", "forget_mode", "answer_mode", "capacity", "n_agents"), key))
        cell.update(stats)
        cells.append(cell)
    return json.dumps({"cells": cells}, indent=2) + "\n"


def read_csv(path: Union[str, Path]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
