"""Best-of-n candidate selection.

Candidates are ranked by the lexicographic key (overlap area, compatibility,
original index); unparseable candidates sort after every parseable one so a
budget report can still count validity rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry, metrics, schema
from .errors import EmptyCandidateListError, ParseError, SchemaError
from .geometry import GridResolution
from .metrics import MetricReport
from .schema import DesignSpec
from .topology import AdjacencyConfig


@dataclass(frozen=True)
class SelectionResult:
    selected_index: int
    keys: tuple[tuple[float, float, int], ...]
    reports: tuple[MetricReport, ...]
    all_invalid: bool

    def to_json(self) -> dict:
        return {
            "selected_index": self.selected_index,
            "keys": [list(k) for k in self.keys],
            "reports": [r.to_json() for r in self.reports],
            "all_invalid": self.all_invalid,
        }


def candidate_key(
    spec: DesignSpec,
    candidate_text: str,
    index: int,
    cfg: AdjacencyConfig = AdjacencyConfig(),
    res: GridResolution = geometry.DEFAULT_RESOLUTION,
) -> tuple[tuple[float, float, int], MetricReport]:
    report = metrics.evaluate(spec, candidate_text, cfg, res)
    if not report.valid_json:
        return (math.inf, math.inf, index), report
    plan = schema.parse_plan(candidate_text)
    overlap_area = geometry.overlapped_area(metrics._usable_room_polygons(plan), res)
    return (overlap_area, report.compatibility, index), report


def best_of(
    spec: DesignSpec,
    candidates: list[str],
    cfg: AdjacencyConfig = AdjacencyConfig(),
    res: GridResolution = geometry.DEFAULT_RESOLUTION,
) -> SelectionResult:
    if not candidates:
        raise EmptyCandidateListError("best_of requires at least one candidate")
    keys = []
    reports = []
    for i, text in enumerate(candidates):
        key, report = candidate_key(spec, text, i, cfg, res)
        keys.append(key)
        reports.append(report)
    selected = min(range(len(candidates)), key=lambda i: keys[i])
    all_invalid = not any(r.valid_json for r in reports)
    return SelectionResult(
        selected_index=selected,
        keys=tuple(keys),
        reports=tuple(reports),
        all_invalid=all_invalid,
    )
