"""Deterministic verification, metrics, and verifiable rewards for JSON floor plans."""

from .config import EngineConfig, load_config
from .geometry import GridResolution
from .metrics import MetricReport, evaluate
from .reward import RewardConfig, RewardGroup, candidate_reward, group_advantages
from .schema import (
    BubbleDiagram,
    DesignSpec,
    FloorPlan,
    Point,
    Polygon,
    parse_plan,
    parse_spec,
    serialize_plan,
    serialize_spec,
    validate_plan,
)
from .selection import SelectionResult, best_of
from .topology import AdjacencyConfig, ged, is_connected, reconstruct_bubble

__version__ = "0.1.0"

__all__ = [
    "AdjacencyConfig",
    "BubbleDiagram",
    "DesignSpec",
    "EngineConfig",
    "FloorPlan",
    "GridResolution",
    "MetricReport",
    "Point",
    "Polygon",
    "RewardConfig",
    "RewardGroup",
    "SelectionResult",
    "best_of",
    "candidate_reward",
    "evaluate",
    "ged",
    "group_advantages",
    "is_connected",
    "load_config",
    "parse_plan",
    "parse_spec",
    "reconstruct_bubble",
    "serialize_plan",
    "serialize_spec",
    "validate_plan",
]
