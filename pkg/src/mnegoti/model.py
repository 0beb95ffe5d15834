"""Criteria, issues, agent groups and agents.

Agent groups act as factories: each group carries per-criterion preference
bounds and a sampling distribution, and spawns agents whose raw preferences
fall inside the bounds. Raw preferences are normalized into criterion
weights, and an agent's utility for an issue is the weighted sum of the
issue's normalized criterion scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError

# Rejection-sampling attempts before falling back to the interval midpoint.
TRUNCNORM_MAX_REJECTIONS = 64


class Direction(str, Enum):
    """Whether a larger criterion score is better (benefit) or worse (cost)."""

    BENEFIT = "benefit"
    COST = "cost"


class DistributionKind(str, Enum):
    UNIFORM = "uniform"
    TRUNCATED_NORMAL = "truncated_normal"


class AgentPhase(str, Enum):
    IDLE = "idle"
    WATCHING = "watching"
    IN_ROOM = "in_room"
    NEGOTIATING = "negotiating"


@dataclass(frozen=True)
class Criterion:
    """One evaluation dimension; ids are contiguous 0..K-1 within a scenario."""

    id: int
    name: str
    direction: Direction = Direction.BENEFIT


@dataclass(frozen=True)
class Issue:
    """A discrete negotiation alternative scored on every criterion.

    Scores are stored direction-normalized: cost criteria are flipped
    (1 - raw) at scenario load, so a larger score is always better.
    """

    id: int
    name: str
    scores: tuple[float, ...]

    def __post_init__(self) -> None:
        for k, s in enumerate(self.scores):
            if not 0.0 <= s <= 1.0:
                raise ConfigurationError(
                    f"issue {self.id!r} score[{k}]={s} outside [0, 1]"
                )


@dataclass(frozen=True)
class PreferenceBounds:
    """Per-criterion (lower, upper) preference bounds, all within [0, 1]."""

    rows: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        for k, (lo, hi) in enumerate(self.rows):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ConfigurationError(
                    f"bounds row {k}: need 0 <= lower <= upper <= 1, got ({lo}, {hi})"
                )

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DistributionSpec:
    """Sampling distribution applied independently per criterion within its bounds row.

    For the truncated normal, ``mean`` and ``sd`` are fractions of the
    bounds interval: the absolute mean is lower + mean * (upper - lower)
    and the absolute standard deviation is sd * (upper - lower).
    """

    kind: DistributionKind = DistributionKind.UNIFORM
    mean: float = 0.5
    sd: float = 0.25

    def __post_init__(self) -> None:
        if self.kind is DistributionKind.TRUNCATED_NORMAL:
            if self.sd <= 0.0:
                raise ConfigurationError(f"truncated normal sd must be > 0, got {self.sd}")
            if not 0.0 <= self.mean <= 1.0:
                raise ConfigurationError(
                    f"truncated normal mean must be in [0, 1], got {self.mean}"
                )


class StrategyKind(str, Enum):
    """Proposal strategy an agent uses inside a negotiation session."""

    TIME_DEPENDENT = "time_dependent"
    TRADE_OFF = "trade_off"
    TOP_BID = "top_bid"


@dataclass(frozen=True)
class StrategyConfig:
    """Static per-group strategy, loaded from the scenario file.

    ``beta`` shapes the time-dependent concession curve; it is also used
    by threshold-based protocols for agents whose proposal strategy is
    not time-dependent (default 1.0, linear concession).
    """

    kind: StrategyKind = StrategyKind.TIME_DEPENDENT
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.beta <= 0.0:
            raise ConfigurationError(f"strategy beta must be > 0, got {self.beta}")


@dataclass(frozen=True)
class AgentGroup:
    """Template for a population of agents sharing bounds, distribution and strategy."""

    id: int
    name: str
    bounds: PreferenceBounds
    distribution: DistributionSpec = field(default_factory=DistributionSpec)
    member_count: int = 1
    strategy: StrategyConfig = field(default_factory=StrategyConfig)

    def __post_init__(self) -> None:
        if self.member_count < 1:
            raise ConfigurationError(
                f"group {self.name!r}: member_count must be >= 1, got {self.member_count}"
            )


@dataclass
class Agent:
    """One negotiating agent; belongs to exactly one group.

    ``raw_prefs`` is the bounds-checked sample, ``weights`` its normalization
    (non-negative, summing to 1). ``phase``/``room_id`` form the mutable state
    the watcher machinery observes.
    """

    id: int
    group_id: int
    raw_prefs: tuple[float, ...]
    weights: tuple[float, ...]
    phase: AgentPhase = AgentPhase.IDLE
    room_id: int | None = None

    @property
    def state(self) -> tuple[str, int | None]:
        return (self.phase.value, self.room_id)


def sample_preferences(group: AgentGroup, rng: np.random.Generator) -> tuple[float, ...]:
    """Sample one raw preference vector inside the group's bounds.

    Uniform mode consumes exactly one draw per criterion. Truncated-normal
    mode rejection-samples and falls back to the interval midpoint after
    TRUNCNORM_MAX_REJECTIONS failed draws.
    """
    out = []
    for lo, hi in group.bounds.rows:
        if group.distribution.kind is DistributionKind.UNIFORM:
            out.append(float(rng.uniform(lo, hi)))
        else:
            width = hi - lo
            loc = lo + group.distribution.mean * width
            scale = group.distribution.sd * width
            value = None
            for _ in range(TRUNCNORM_MAX_REJECTIONS):
                draw = float(rng.normal(loc, scale))
                if lo <= draw <= hi:
                    value = draw
                    break
            if value is None:
                value = lo + width / 2.0
            out.append(value)
    return tuple(out)


def normalize_weights(raw_prefs: tuple[float, ...]) -> tuple[float, ...]:
    """Scale a non-negative preference vector to sum to 1.

    An all-zero vector maps to uniform weights 1/K (degenerate but legal).
    """
    total = math.fsum(raw_prefs)
    if total <= 0.0:
        k = len(raw_prefs)
        return tuple(1.0 / k for _ in raw_prefs)
    return tuple(p / total for p in raw_prefs)


def spawn_members(
    group: AgentGroup, rng: np.random.Generator, starting_id: int
) -> list[Agent]:
    """Create the group's members with consecutive ids, sampled in id order."""
    agents = []
    for offset in range(group.member_count):
        raw = sample_preferences(group, rng)
        agents.append(
            Agent(
                id=starting_id + offset,
                group_id=group.id,
                raw_prefs=raw,
                weights=normalize_weights(raw),
            )
        )
    return agents


def evaluate(agent: Agent, issue: Issue) -> float:
    """Weighted additive utility of an issue for an agent, in [0, 1]."""
    if len(agent.weights) != len(issue.scores):
        raise ConfigurationError(
            f"agent {agent.id} has {len(agent.weights)} weights but issue "
            f"{issue.id} has {len(issue.scores)} scores"
        )
    u = math.fsum(w * s for w, s in zip(agent.weights, issue.scores))
    # Guard against float drift just past the unit interval.
    return min(1.0, max(0.0, u))
