"""Synthetic noisy candidate generation for selection and budget experiments.

Starting from a perfect grid-derived plan, each candidate independently drops
interior doors (raising the graph edit distance by one per drop), shifts a
room into a neighbor (creating a measurable overlap), and occasionally emits
malformed JSON.  The default rates are calibrated so that a single draw has a
mean Compatibility of roughly 2, which lets a budget sweep reproduce the
qualitative best-of-n trend: larger budgets select candidates with smaller
overlap and lower Compatibility.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from . import grids, schema
from .schema import FloorPlan


@dataclass(frozen=True)
class NoiseConfig:
    door_drop_prob: float = 0.22  # per interior door; ~7 doors -> mean GED ~2
    overlap_prob: float = 0.25    # chance of sliding one room into a neighbor
    invalid_prob: float = 0.05    # chance of truncated, unparseable output

    def __post_init__(self):
        for name in ("door_drop_prob", "overlap_prob", "invalid_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability")


def _perturbed(plan: FloorPlan, rng: random.Random, cfg: NoiseConfig, cell: float) -> str:
    doors = [d.id for d in plan.interior_doors()]
    kept = [d for d in doors if rng.random() >= cfg.door_drop_prob]
    dropped = set(doors) - set(kept)
    if dropped:
        plan = FloorPlan(
            plan.room_count,
            plan.total_area_declared,
            tuple(s for s in plan.spaces if s.id not in dropped),
        )
    if rng.random() < cfg.overlap_prob:
        rooms = [r.id for r in plan.rooms()]
        victim = rng.choice(rooms)
        # two cells: one to cross the wall, one to intrude into the neighbor
        step = 2 * cell
        dx, dy = rng.choice([(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)])
        plan = grids.shift_room(plan, victim, dx, dy)
    return schema.serialize_plan(plan)


def noisy_candidates(
    grid: grids.LabelGrid,
    n: int,
    seed: int,
    cfg: NoiseConfig = NoiseConfig(),
) -> list[str]:
    """Generate ``n`` deterministic noisy candidate texts from a grid layout."""
    if n < 1:
        raise ValueError("need at least one candidate")
    plan, _, _ = grids.grid_to_plan(grid)
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        if rng.random() < cfg.invalid_prob:
            out.append(schema.serialize_plan(plan)[: rng.randint(5, 40)])
        else:
            out.append(_perturbed(plan, rng, cfg, grid.cell_size))
    return out
