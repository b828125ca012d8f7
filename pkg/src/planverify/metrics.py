"""Per-plan constraint-adherence metrics.

All area quantities are geometric (recomputed from polygons); declared fields
are never trusted.  Doors are excluded from area and overlap metrics.  Rooms
whose polygons fail validation are excluded from geometry but still count
against the area metric as fully missing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import geometry, schema, topology
from .errors import InvalidTargetError, ParseError, SchemaError
from .geometry import GridResolution
from .schema import DesignSpec, FloorPlan, Polygon
from .topology import AdjacencyConfig


@dataclass(frozen=True)
class MetricReport:
    valid_json: bool
    room_area_mape: float | None = None
    room_id_accuracy: float | None = None
    overlap_flag: bool | None = None
    percent_overlap: float | None = None
    compatibility: float | None = None
    total_area_error: float | None = None
    diagnostics: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "valid_json": self.valid_json,
            "room_area_mape": self.room_area_mape,
            "room_id_accuracy": self.room_id_accuracy,
            "overlap_flag": self.overlap_flag,
            "percent_overlap": self.percent_overlap,
            "compatibility": self.compatibility,
            "total_area_error": self.total_area_error,
            "diagnostics": list(self.diagnostics),
        }


def _usable_room_polygons(plan: FloorPlan) -> list[Polygon]:
    polys = []
    for room in plan.rooms():
        poly = room.floor_polygon
        if len(poly.vertices) >= 3 and geometry.is_simple(poly):
            polys.append(poly)
    return polys


def _room_area(plan: FloorPlan, space_id: str) -> float | None:
    for room in plan.rooms():
        if room.id == space_id:
            poly = room.floor_polygon
            if len(poly.vertices) >= 3 and geometry.is_simple(poly):
                return geometry.area(poly)
            return 0.0
    return None


def room_area_error(spec: DesignSpec, plan: FloorPlan) -> float:
    """Mean absolute relative per-room area error; missing rooms score 1.0."""
    errors = []
    for spec_space in spec.spaces:
        if spec_space.room_type in schema.DOOR_TYPES:
            continue
        target = spec_space.target_area()
        generated = _room_area(plan, spec_space.id)
        if generated is None:
            errors.append(1.0)
        else:
            errors.append(abs(generated - target) / target)
    if not errors:
        return 0.0
    return sum(errors) / len(errors)


def room_id_accuracy(spec: DesignSpec, plan: FloorPlan) -> float:
    """Fraction of spec-listed space ids exactly present in the plan."""
    spec_ids = {s.id for s in spec.spaces}
    plan_ids = {s.id for s in plan.spaces}
    if not spec_ids:
        return 1.0
    return len(spec_ids & plan_ids) / len(spec_ids)


def overlap_flag(plan: FloorPlan, res: GridResolution = geometry.DEFAULT_RESOLUTION) -> bool:
    """True iff any two room interiors intersect (doors excluded)."""
    return geometry.overlapped_area(_usable_room_polygons(plan), res) > 0


def percent_overlap(plan: FloorPlan, res: GridResolution = geometry.DEFAULT_RESOLUTION) -> float:
    polys = _usable_room_polygons(plan)
    total = sum(geometry.area(p) for p in polys)
    if total == 0:
        return 0.0
    return geometry.overlapped_area(polys, res) / total


def compatibility(
    spec: DesignSpec, plan: FloorPlan, cfg: AdjacencyConfig = AdjacencyConfig()
) -> float:
    """Graph edit distance from the requested diagram to the reconstructed one."""
    reconstructed, _ = topology.reconstruct_bubble(plan, cfg)
    return topology.ged(spec.input_graph, reconstructed)


def total_area_error(spec: DesignSpec, plan: FloorPlan) -> float:
    """|generated total room area - target| / target, on polygon-derived areas."""
    if spec.total_area <= 0:
        raise InvalidTargetError("total_area target must be positive")
    generated = sum(geometry.area(p) for p in _usable_room_polygons(plan))
    return abs(generated - spec.total_area) / spec.total_area


def evaluate(
    spec: DesignSpec,
    plan_text: str,
    cfg: AdjacencyConfig = AdjacencyConfig(),
    res: GridResolution = geometry.DEFAULT_RESOLUTION,
) -> MetricReport:
    """Full metric computation; parse failures yield a valid_json=false report."""
    try:
        plan = schema.parse_plan(plan_text)
    except (ParseError, SchemaError) as exc:
        return MetricReport(valid_json=False, diagnostics=(f"PARSE_FAILURE: {exc}",))
    validation = schema.validate_plan(plan)
    diagnostics = [f"{i.code}: {i.message}" for i in validation.issues]
    reconstructed, door_diags = topology.reconstruct_bubble(plan, cfg)
    diagnostics.extend(door_diags)
    return MetricReport(
        valid_json=True,
        room_area_mape=room_area_error(spec, plan),
        room_id_accuracy=room_id_accuracy(spec, plan),
        overlap_flag=overlap_flag(plan, res),
        percent_overlap=percent_overlap(plan, res),
        compatibility=topology.ged(spec.input_graph, reconstructed),
        total_area_error=total_area_error(spec, plan),
        diagnostics=tuple(diagnostics),
    )
