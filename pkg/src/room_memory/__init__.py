"""The Room environment and agents with bounded episodic and semantic memory."""

from .core import (
    AtLocation,
    EntityName,
    MemoryQuadruple,
    ParseError,
    Question,
    Relation,
    generalize,
    parse_entity,
    parse_quadruple,
    render_entity,
    render_quadruple,
    strip_owner,
)
from .environment import EnvConfig, RoomEnv, RoomState, StepOutput, apply_dynamics, grade_answer, reset, step
from .harness import EpisodeResult, combine_answers, preset, run_episode, run_experiment
from .knowledge import CommonsenseKB, commonsense_location, load_kb, pretrain_semantic
from .memory import EpisodicStore, SemanticStore, episodic_compress
from .policies import Agent, PolicyConfig
from .rng import Xoshiro256, splitmix64

__version__ = "0.1.0"
