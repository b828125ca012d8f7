"""Domain types and JSON parsing/validation/serialization for specs and plans.

The input document carries ``room_count``, ``total_area``, ``spaces`` and an
``input_graph`` adjacency dictionary; the output document carries computed
areas and ``floor_polygon`` vertex lists.  Plans may optionally arrive wrapped
under an ``output`` key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import ConstraintError, ParseError, SchemaError

ROOM_TYPES = frozenset(
    {
        "living_room",
        "kitchen",
        "bedroom",
        "bathroom",
        "balcony",
        "study",
        "storage",
        "front_door",
        "interior_door",
    }
)

DOOR_TYPES = frozenset({"front_door", "interior_door"})

# Canonical emission precision, in decimal digits (centimetres).
CANONICAL_DECIMALS = 2


def parse_space_id(space_id: str) -> tuple[str, int]:
    """Split ``"<room_type>|<index>"`` and return ``(room_type, index)``.

    Raises SchemaError when the id does not match the format.
    """
    if not isinstance(space_id, str) or space_id.count("|") != 1:
        raise SchemaError(f"bad space id {space_id!r}: expected '<room_type>|<index>'")
    room_type, _, index = space_id.partition("|")
    if not room_type:
        raise SchemaError(f"bad space id {space_id!r}: empty room_type part")
    if not index.isdigit():
        raise SchemaError(f"bad space id {space_id!r}: index is not a non-negative integer")
    return room_type, int(index)


def is_valid_space_id(space_id) -> bool:
    try:
        parse_space_id(space_id)
    except SchemaError:
        return False
    return True


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Polygon:
    """Implicitly closed vertex loop; last vertex is not repeated."""

    vertices: tuple[Point, ...]

    def translated(self, dx: float, dy: float) -> "Polygon":
        return Polygon(tuple(Point(p.x + dx, p.y + dy) for p in self.vertices))

    def scaled(self, s: float) -> "Polygon":
        return Polygon(tuple(Point(p.x * s, p.y * s) for p in self.vertices))


@dataclass(frozen=True)
class SpaceSpec:
    """Requested space: either an area target or a height/width pair."""

    id: str
    room_type: str
    area: float | None = None
    height: float | None = None
    width: float | None = None

    def target_area(self) -> float:
        if self.area is not None:
            return self.area
        assert self.height is not None and self.width is not None
        return self.height * self.width


@dataclass(frozen=True)
class BubbleDiagram:
    """Undirected labeled graph over space ids (rooms plus the front door).

    Edges are stored canonically as lexicographically sorted pairs.
    """

    labels: tuple[tuple[str, str], ...]  # (id, room_type), sorted by id
    edges: frozenset[tuple[str, str]]

    @staticmethod
    def make(labels: dict[str, str], edges) -> "BubbleDiagram":
        canon = frozenset(tuple(sorted(e)) for e in edges)
        for a, b in canon:
            if a == b:
                raise SchemaError(f"self-loop on {a!r} in bubble diagram")
            if a not in labels or b not in labels:
                raise SchemaError(f"edge ({a!r}, {b!r}) references a missing node")
        return BubbleDiagram(tuple(sorted(labels.items())), canon)

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(i for i, _ in self.labels)

    def label_of(self, node: str) -> str:
        return dict(self.labels)[node]

    def neighbors(self, node: str) -> frozenset[str]:
        return frozenset(b if a == node else a for a, b in self.edges if node in (a, b))

    def has_edge(self, a: str, b: str) -> bool:
        return tuple(sorted((a, b))) in self.edges


@dataclass(frozen=True)
class DesignSpec:
    room_count: int
    total_area: float
    spaces: tuple[SpaceSpec, ...]
    input_graph: BubbleDiagram
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def space_by_id(self, space_id: str) -> SpaceSpec | None:
        for s in self.spaces:
            if s.id == space_id:
                return s
        return None


@dataclass(frozen=True)
class Space:
    id: str
    room_type: str
    area_declared: float
    floor_polygon: Polygon


@dataclass(frozen=True)
class FloorPlan:
    room_count: int
    total_area_declared: float
    spaces: tuple[Space, ...]

    def rooms(self) -> tuple[Space, ...]:
        return tuple(s for s in self.spaces if s.room_type not in DOOR_TYPES)

    def interior_doors(self) -> tuple[Space, ...]:
        return tuple(s for s in self.spaces if s.room_type == "interior_door")

    def front_doors(self) -> tuple[Space, ...]:
        return tuple(s for s in self.spaces if s.room_type == "front_door")


@dataclass(frozen=True)
class Issue:
    code: str
    severity: str  # "error" | "warning"
    message: str
    space_id: str | None = None

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity,
            "message": self.message,
            "space_id": self.space_id,
        }


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[Issue, ...]

    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")


# ---------------------------------------------------------------------------
# parsing


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc


def _require(obj: dict, key: str, kinds, context: str):
    if key not in obj:
        raise SchemaError(f"{context}: missing field {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise SchemaError(f"{context}: field {key!r} has wrong type")
    return value


def _finite_number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{context}: expected a number")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{context}: number is not finite")
    return value


def parse_spec(text: str) -> DesignSpec:
    """Parse and validate an input design specification document."""
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise SchemaError("spec: top level must be an object")
    room_count = _require(doc, "room_count", int, "spec")
    total_area = _finite_number(_require(doc, "total_area", (int, float), "spec"), "spec.total_area")
    raw_spaces = _require(doc, "spaces", list, "spec")
    raw_graph = _require(doc, "input_graph", dict, "spec")

    spaces: list[SpaceSpec] = []
    seen: set[str] = set()
    for raw in raw_spaces:
        if not isinstance(raw, dict):
            raise SchemaError("spec.spaces: entries must be objects")
        space_id = _require(raw, "id", str, "spec.space")
        parse_space_id(space_id)
        if space_id in seen:
            raise SchemaError(f"duplicate space id {space_id!r}")
        seen.add(space_id)
        room_type = _require(raw, "room_type", str, f"spec.space {space_id}")
        if not room_type:
            raise SchemaError(f"space {space_id}: empty room_type")
        has_area = "area" in raw
        has_hw = "height" in raw or "width" in raw
        if has_area and has_hw:
            raise ConstraintError(f"space {space_id}: area and height/width are mutually exclusive")
        if has_area:
            area = _finite_number(raw["area"], f"space {space_id}.area")
            if area <= 0:
                raise ConstraintError(f"space {space_id}: area must be positive")
            spaces.append(SpaceSpec(space_id, room_type, area=area))
        else:
            if "height" not in raw or "width" not in raw:
                raise SchemaError(f"space {space_id}: needs either area or both height and width")
            height = _finite_number(raw["height"], f"space {space_id}.height")
            width = _finite_number(raw["width"], f"space {space_id}.width")
            if height <= 0 or width <= 0:
                raise ConstraintError(f"space {space_id}: height and width must be positive")
            spaces.append(SpaceSpec(space_id, room_type, height=height, width=width))

    by_id = {s.id: s for s in spaces}
    non_door = [s for s in spaces if s.room_type not in DOOR_TYPES]
    if room_count != len(non_door):
        raise ConstraintError(
            f"room_count {room_count} != {len(non_door)} non-door spaces"
        )
    front_doors = [s for s in spaces if s.room_type == "front_door"]
    if len(front_doors) != 1:
        raise ConstraintError(f"expected exactly one front_door space, found {len(front_doors)}")

    warnings: list[str] = []
    edges: set[tuple[str, str]] = set()
    graph_ids: set[str] = set()
    for key, neighbors in raw_graph.items():
        if not isinstance(neighbors, list):
            raise SchemaError(f"input_graph[{key!r}]: neighbors must be an array")
        graph_ids.add(key)
        for nbr in neighbors:
            if not isinstance(nbr, str):
                raise SchemaError(f"input_graph[{key!r}]: neighbor ids must be strings")
            if nbr == key:
                raise SchemaError(f"input_graph[{key!r}]: self-loop")
            graph_ids.add(nbr)
            edges.add(tuple(sorted((key, nbr))))
    for gid in graph_ids:
        if gid not in by_id:
            raise SchemaError(f"input_graph id {gid!r} does not appear in spaces")
        if by_id[gid].room_type == "interior_door":
            raise SchemaError(
                f"input_graph id {gid!r} is an interior door; room-room edges imply doors"
            )
    # one-sided adjacency listings are symmetrized with a warning
    for a, b in sorted(edges):
        listed_ab = a in raw_graph and b in raw_graph[a]
        listed_ba = b in raw_graph and a in raw_graph[b]
        if not (listed_ab and listed_ba):
            warnings.append(f"one-sided adjacency {a!r}-{b!r} symmetrized")

    labels = {
        s.id: s.room_type for s in spaces if s.room_type != "interior_door"
    }
    graph = BubbleDiagram.make(labels, edges)

    fd = front_doors[0]
    if len(graph.neighbors(fd.id)) != 1:
        raise ConstraintError(
            f"front door {fd.id!r} must have exactly one neighbor in input_graph"
        )
    for s in spaces:
        if s.room_type not in ROOM_TYPES:
            warnings.append(f"unrecognized room_type {s.room_type!r} on {s.id!r}")

    return DesignSpec(
        room_count=room_count,
        total_area=total_area,
        spaces=tuple(spaces),
        input_graph=graph,
        warnings=tuple(warnings),
    )


def parse_plan(text: str) -> FloorPlan:
    """Parse a generated floor plan, unwrapping an optional ``output`` key."""
    doc = _load_json(text)
    if isinstance(doc, dict) and "output" in doc and isinstance(doc["output"], dict):
        doc = doc["output"]
    if not isinstance(doc, dict):
        raise SchemaError("plan: top level must be an object")
    room_count = _require(doc, "room_count", int, "plan")
    total_area = _finite_number(_require(doc, "total_area", (int, float), "plan"), "plan.total_area")
    raw_spaces = _require(doc, "spaces", list, "plan")

    spaces: list[Space] = []
    seen: set[str] = set()
    for raw in raw_spaces:
        if not isinstance(raw, dict):
            raise SchemaError("plan.spaces: entries must be objects")
        space_id = _require(raw, "id", str, "plan.space")
        parse_space_id(space_id)
        if space_id in seen:
            raise SchemaError(f"duplicate space id {space_id!r}")
        seen.add(space_id)
        room_type = _require(raw, "room_type", str, f"plan.space {space_id}")
        if not room_type:
            raise SchemaError(f"space {space_id}: empty room_type")
        area = _finite_number(_require(raw, "area", (int, float), f"space {space_id}"), f"space {space_id}.area")
        raw_poly = _require(raw, "floor_polygon", list, f"space {space_id}")
        if not raw_poly:
            raise SchemaError(f"space {space_id}: empty floor_polygon")
        vertices = []
        for v in raw_poly:
            if not isinstance(v, dict):
                raise SchemaError(f"space {space_id}: polygon vertices must be objects")
            x = _finite_number(_require(v, "x", (int, float), f"space {space_id} vertex"), "x")
            y = _finite_number(_require(v, "y", (int, float), f"space {space_id} vertex"), "y")
            vertices.append(Point(x, y))
        spaces.append(Space(space_id, room_type, area, Polygon(tuple(vertices))))

    return FloorPlan(room_count=room_count, total_area_declared=total_area, spaces=tuple(spaces))


# ---------------------------------------------------------------------------
# validation


def validate_plan(plan: FloorPlan) -> ValidationReport:
    """Run structural and geometric diagnostics over a parsed plan."""
    from . import geometry  # local import to avoid a cycle

    issues: list[Issue] = []
    for space in plan.spaces:
        if not is_valid_space_id(space.id):
            issues.append(Issue("BAD_ID_FORMAT", "error", f"malformed id {space.id!r}", space.id))
        if space.room_type not in ROOM_TYPES:
            issues.append(
                Issue("UNRECOGNIZED_ROOM_TYPE", "warning", f"unknown room_type {space.room_type!r}", space.id)
            )
        if space.area_declared <= 0:
            issues.append(Issue("NONPOSITIVE_AREA", "error", "declared area is not positive", space.id))
        poly = space.floor_polygon
        if len(poly.vertices) < 3:
            issues.append(Issue("DEGENERATE_POLYGON", "error", "fewer than 3 vertices", space.id))
            continue
        if not geometry.is_simple(poly):
            issues.append(Issue("NON_SIMPLE_POLYGON", "error", "polygon self-intersects", space.id))
            continue
        computed = geometry.area(poly)
        if computed <= 0:
            issues.append(Issue("DEGENERATE_POLYGON", "error", "zero enclosed area", space.id))
            continue
        if space.area_declared > 0 and abs(computed - space.area_declared) / space.area_declared > 0.005:
            issues.append(
                Issue(
                    "DECLARED_AREA_MISMATCH",
                    "warning",
                    f"declared {space.area_declared:g} vs computed {computed:g}",
                    space.id,
                )
            )
    if plan.room_count != len(plan.rooms()):
        issues.append(
            Issue(
                "ROOM_COUNT_MISMATCH",
                "error",
                f"room_count {plan.room_count} != {len(plan.rooms())} room spaces",
            )
        )
    ok = not any(i.severity == "error" for i in issues)
    return ValidationReport(ok=ok, issues=tuple(issues))


# ---------------------------------------------------------------------------
# serialization


def _canon(value: float):
    """Round to canonical precision; emit ints for integral values."""
    rounded = round(float(value), CANONICAL_DECIMALS)
    if rounded == int(rounded):
        return int(rounded)
    return rounded


def _graph_to_json(graph: BubbleDiagram) -> dict:
    adjacency = {node: sorted(graph.neighbors(node)) for node in sorted(graph.nodes)}
    return adjacency


def spec_to_json(spec: DesignSpec) -> dict:
    spaces = []
    for s in spec.spaces:
        entry: dict = {"id": s.id, "room_type": s.room_type}
        if s.area is not None:
            entry["area"] = _canon(s.area)
        else:
            entry["height"] = _canon(s.height)
            entry["width"] = _canon(s.width)
        spaces.append(entry)
    return {
        "room_count": spec.room_count,
        "total_area": _canon(spec.total_area),
        "spaces": spaces,
        "input_graph": _graph_to_json(spec.input_graph),
    }


def plan_to_json(plan: FloorPlan) -> dict:
    spaces = []
    for s in plan.spaces:
        spaces.append(
            {
                "id": s.id,
                "room_type": s.room_type,
                "area": _canon(s.area_declared),
                "floor_polygon": [{"x": _canon(p.x), "y": _canon(p.y)} for p in s.floor_polygon.vertices],
            }
        )
    return {
        "room_count": plan.room_count,
        "total_area": _canon(plan.total_area_declared),
        "spaces": spaces,
    }


def serialize_spec(spec: DesignSpec) -> str:
    return json.dumps(spec_to_json(spec), indent=2) + "\n"


def serialize_plan(plan: FloorPlan) -> str:
    return json.dumps(plan_to_json(plan), indent=2) + "\n"
