"""Gated verifiable rewards and group-relative advantage normalization.

A candidate that fails to parse, fails structural validation, or contains
overlapping room polygons is infeasible and receives reward exactly 0.  A
feasible candidate scores the equally weighted average of the connectivity
reward and the total-area reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geometry, metrics, schema, topology
from .errors import EmptyGroupError, ParseError, SchemaError
from .geometry import GridResolution
from .schema import DesignSpec, FloorPlan
from .topology import AdjacencyConfig


@dataclass(frozen=True)
class RewardConfig:
    w_conn: float = 0.5
    w_area: float = 0.5
    epsilon: float = 1e-4
    adjacency: AdjacencyConfig = field(default_factory=AdjacencyConfig)
    resolution: GridResolution = field(default_factory=GridResolution)

    def __post_init__(self):
        if self.w_conn < 0 or self.w_area < 0:
            raise ValueError("reward weights must be non-negative")
        if abs(self.w_conn + self.w_area - 1.0) > 1e-12:
            raise ValueError("reward weights must sum to 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class RewardBreakdown:
    reward: float
    gated: bool
    gate_reason: str | None
    r_conn: float | None
    r_ta: float | None
    ged: float | None
    tae: float | None

    def to_json(self) -> dict:
        return {
            "reward": self.reward,
            "gated": self.gated,
            "gate_reason": self.gate_reason,
            "r_conn": self.r_conn,
            "r_ta": self.r_ta,
            "ged": self.ged,
            "tae": self.tae,
        }


@dataclass(frozen=True)
class RewardGroup:
    rewards: tuple[float, ...]
    mean: float
    std: float
    advantages: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "rewards": list(self.rewards),
            "mean": self.mean,
            "std": self.std,
            "advantages": list(self.advantages),
        }


def connectivity_reward(
    spec: DesignSpec, plan: FloorPlan, cfg: AdjacencyConfig = AdjacencyConfig()
) -> tuple[float, float]:
    """Return (r_conn, ged).  r_conn = max(0, 1 - ged / (|V| + |E|)) on the input graph."""
    distance = metrics.compatibility(spec, plan, cfg)
    size = len(spec.input_graph.nodes) + len(spec.input_graph.edges)
    if size == 0:
        return (1.0 if distance == 0 else 0.0), distance
    return max(0.0, 1.0 - distance / size), distance


def total_area_reward(spec: DesignSpec, plan: FloorPlan) -> tuple[float, float]:
    """Return (r_ta, tae) with r_ta = max(0, 1 - tae)."""
    tae = metrics.total_area_error(spec, plan)
    return max(0.0, 1.0 - tae), tae


def candidate_reward(
    spec: DesignSpec, candidate_text: str, cfg: RewardConfig = RewardConfig()
) -> RewardBreakdown:
    """Score one candidate; the feasibility gate dominates every reward term."""
    try:
        plan = schema.parse_plan(candidate_text)
    except (ParseError, SchemaError):
        return RewardBreakdown(0.0, True, "INVALID_JSON", None, None, None, None)
    validation = schema.validate_plan(plan)
    if not validation.ok:
        return RewardBreakdown(0.0, True, "INVALID_STRUCTURE", None, None, None, None)
    if metrics.overlap_flag(plan, cfg.resolution):
        return RewardBreakdown(0.0, True, "OVERLAP", None, None, None, None)
    r_conn, distance = connectivity_reward(spec, plan, cfg.adjacency)
    r_ta, tae = total_area_reward(spec, plan)
    reward = cfg.w_conn * r_conn + cfg.w_area * r_ta
    return RewardBreakdown(reward, False, None, r_conn, r_ta, distance, tae)


def group_advantages(rewards: list[float], epsilon: float = 1e-4) -> RewardGroup:
    """Normalize a group of rewards to mean/population-std advantages."""
    if not rewards:
        raise EmptyGroupError("advantage normalization needs at least one reward")
    n = len(rewards)
    mean = sum(rewards) / n
    variance = sum((r - mean) ** 2 for r in rewards) / n
    std = math.sqrt(variance)
    advantages = tuple((r - mean) / (std + epsilon) for r in rewards)
    return RewardGroup(tuple(rewards), mean, std, advantages)
