"""Engine configuration shared by the CLI and the HTTP service."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import SchemaError
from .geometry import GridResolution
from .render import RenderTheme, theme_from_json
from .reward import RewardConfig
from .topology import AdjacencyConfig

CONFIG_ENV_VAR = "PLANVERIFY_CONFIG"


@dataclass(frozen=True)
class EngineConfig:
    resolution: GridResolution = field(default_factory=GridResolution)
    adjacency: AdjacencyConfig = field(default_factory=AdjacencyConfig)
    epsilon: float = 1e-4
    theme_path: str | None = None

    def reward_config(self) -> RewardConfig:
        return RewardConfig(
            epsilon=self.epsilon, adjacency=self.adjacency, resolution=self.resolution
        )

    def theme(self) -> RenderTheme:
        if self.theme_path is None:
            return RenderTheme()
        with open(self.theme_path, "r", encoding="utf-8") as fh:
            return theme_from_json(fh.read())

    def with_overrides(
        self,
        resolution: float | None = None,
        tau_adj: float | None = None,
        epsilon: float | None = None,
        theme_path: str | None = None,
    ) -> "EngineConfig":
        return EngineConfig(
            resolution=GridResolution(resolution) if resolution is not None else self.resolution,
            adjacency=AdjacencyConfig(tau_adj) if tau_adj is not None else self.adjacency,
            epsilon=epsilon if epsilon is not None else self.epsilon,
            theme_path=theme_path if theme_path is not None else self.theme_path,
        )


def config_from_dict(doc: dict) -> EngineConfig:
    if not isinstance(doc, dict):
        raise SchemaError("config: top level must be an object")
    cfg = EngineConfig()
    return cfg.with_overrides(
        resolution=doc.get("resolution"),
        tau_adj=doc.get("tau_adj"),
        epsilon=doc.get("epsilon"),
        theme_path=doc.get("theme_path"),
    )


def load_config(path: str | None = None) -> EngineConfig:
    """Load configuration from a file, the PLANVERIFY_CONFIG path, or defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return EngineConfig()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config: {exc}") from exc
    return config_from_dict(doc)
