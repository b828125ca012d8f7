"""Deterministic SVG rendering of floor plans.

One filled path per space, rooms first (sorted by id) then doors, with doors
between rooms drawn purple and the entrance door dark gray.  Identical
(plan, theme) inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import SchemaError
from .schema import FloorPlan, Polygon

DEFAULT_ROOM_COLORS = {
    "living_room": "#EE4D4D",
    "kitchen": "#C67C7B",
    "bedroom": "#FFD274",
    "bathroom": "#BEBEBE",
    "balcony": "#BFE3E8",
    "study": "#7BA779",
    "storage": "#E87A90",
}

INTERIOR_DOOR_COLOR = "#800080"  # purple
FRONT_DOOR_COLOR = "#4A4A4A"  # dark gray
FALLBACK_COLOR = "#D3D3D3"


@dataclass(frozen=True)
class RenderTheme:
    room_colors: tuple[tuple[str, str], ...] = tuple(sorted(DEFAULT_ROOM_COLORS.items()))
    interior_door_color: str = INTERIOR_DOOR_COLOR
    front_door_color: str = FRONT_DOOR_COLOR
    fallback_color: str = FALLBACK_COLOR
    stroke: str = "#222222"
    stroke_width: float = 1.0
    padding: float = 10.0
    scale: float = 20.0  # px per metre

    def color_for(self, room_type: str) -> str:
        if room_type == "interior_door":
            return self.interior_door_color
        if room_type == "front_door":
            return self.front_door_color
        return dict(self.room_colors).get(room_type, self.fallback_color)


def theme_from_json(text: str) -> RenderTheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"theme: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("theme: top level must be an object")
    theme = RenderTheme()
    if "room_colors" in doc:
        colors = dict(DEFAULT_ROOM_COLORS)
        colors.update(doc["room_colors"])
        theme = replace(theme, room_colors=tuple(sorted(colors.items())))
    for key in ("interior_door_color", "front_door_color", "fallback_color", "stroke"):
        if key in doc:
            theme = replace(theme, **{key: str(doc[key])})
    for key in ("stroke_width", "padding", "scale"):
        if key in doc:
            theme = replace(theme, **{key: float(doc[key])})
    return theme


def _fmt(value: float) -> str:
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


def _path_data(poly: Polygon, theme: RenderTheme, min_x: float, min_y: float) -> str:
    pts = [
        (
            (p.x - min_x) * theme.scale + theme.padding,
            (p.y - min_y) * theme.scale + theme.padding,
        )
        for p in poly.vertices
    ]
    head = f"M {_fmt(pts[0][0])} {_fmt(pts[0][1])}"
    rest = " ".join(f"L {_fmt(x)} {_fmt(y)}" for x, y in pts[1:])
    return f"{head} {rest} Z" if rest else f"{head} Z"


def render_svg(plan: FloorPlan, theme: RenderTheme = RenderTheme()) -> str:
    """Render a validated plan to an SVG 1.1 document string."""
    ordered = sorted(plan.rooms(), key=lambda s: s.id) + sorted(
        plan.interior_doors(), key=lambda s: s.id
    ) + sorted(plan.front_doors(), key=lambda s: s.id)

    all_pts = [p for s in ordered for p in s.floor_polygon.vertices]
    if all_pts:
        min_x = min(p.x for p in all_pts)
        min_y = min(p.y for p in all_pts)
        max_x = max(p.x for p in all_pts)
        max_y = max(p.y for p in all_pts)
    else:
        min_x = min_y = max_x = max_y = 0.0
    width = (max_x - min_x) * theme.scale + 2 * theme.padding
    height = (max_y - min_y) * theme.scale + 2 * theme.padding

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for space in ordered:
        d = _path_data(space.floor_polygon, theme, min_x, min_y)
        fill = theme.color_for(space.room_type)
        lines.append(
            f'  <path id="{space.id}" d="{d}" fill="{fill}" '
            f'stroke="{theme.stroke}" stroke-width="{_fmt(theme.stroke_width)}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
