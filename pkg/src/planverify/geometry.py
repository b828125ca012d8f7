"""Polygon geometry on a snapped grid.

Rectilinear polygons (the common case for grid-derived plans) are handled with
exact integer arithmetic: coordinates are expressed as integer multiples of
the grid resolution, polygons are decomposed into axis-aligned rectangles, and
union area is measured with a sweep over compressed intervals.  Arbitrary
simple polygons fall back to floating point via shapely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateAfterSnapError, NonSimplePolygonError
from .schema import Point, Polygon


@dataclass(frozen=True)
class GridResolution:
    cell: float = 0.001  # metres

    def __post_init__(self):
        if self.cell <= 0:
            raise ValueError("grid resolution must be positive")


DEFAULT_RESOLUTION = GridResolution()


def _to_units(value: float, res: GridResolution) -> int:
    return math.floor(value / res.cell + 0.5)


def snap(polygon: Polygon, res: GridResolution = DEFAULT_RESOLUTION) -> Polygon:
    """Round every coordinate to the nearest grid multiple and drop redundant vertices."""
    pts = [
        Point(_to_units(p.x, res) * res.cell, _to_units(p.y, res) * res.cell)
        for p in polygon.vertices
    ]
    # merge consecutive duplicates
    deduped: list[Point] = []
    for p in pts:
        if not deduped or p != deduped[-1]:
            deduped.append(p)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    # merge collinear runs
    merged: list[Point] = []
    n = len(deduped)
    for i, p in enumerate(deduped):
        if n < 3:
            merged.append(p)
            continue
        prev = deduped[i - 1]
        nxt = deduped[(i + 1) % n]
        cross = (p.x - prev.x) * (nxt.y - prev.y) - (p.y - prev.y) * (nxt.x - prev.x)
        if cross != 0:
            merged.append(p)
    if len(merged) < 3:
        raise DegenerateAfterSnapError("fewer than 3 distinct vertices after snapping")
    return Polygon(tuple(merged))


def is_rectilinear(polygon: Polygon) -> bool:
    verts = polygon.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if a.x != b.x and a.y != b.y:
            return False
    return True


# ---------------------------------------------------------------------------
# simplicity


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    return (
        min(ax, bx) <= px <= max(ax, bx)
        and min(ay, by) <= py <= max(ay, by)
        and _orient(ax, ay, bx, by, px, py) == 0
    )


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y)
    d2 = _orient(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y)
    d3 = _orient(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y)
    d4 = _orient(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    if d1 == 0 and _on_segment(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y):
        return True
    if d2 == 0 and _on_segment(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y):
        return True
    if d3 == 0 and _on_segment(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y):
        return True
    if d4 == 0 and _on_segment(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y):
        return True
    return False


def is_simple(polygon: Polygon) -> bool:
    """True iff the closed loop has no repeated vertices or edge crossings."""
    verts = polygon.vertices
    n = len(verts)
    if n < 3:
        return False
    if len({(p.x, p.y) for p in verts}) != n:
        return False
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_intersect(*edges[i], *edges[j]):
                return False
    return True


def _require_simple(polygon: Polygon) -> None:
    if not is_simple(polygon):
        raise NonSimplePolygonError("polygon is not simple")


# ---------------------------------------------------------------------------
# areas


def signed_area(polygon: Polygon) -> float:
    verts = polygon.vertices
    total = 0.0
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total / 2.0


def area(polygon: Polygon) -> float:
    """Absolute shoelace area, orientation-independent."""
    _require_simple(polygon)
    return abs(signed_area(polygon))


# ---------------------------------------------------------------------------
# rectilinear decomposition (integer grid units)


def _int_vertices(polygon: Polygon, res: GridResolution) -> list[tuple[int, int]]:
    return [(_to_units(p.x, res), _to_units(p.y, res)) for p in polygon.vertices]


def to_rectangles(polygon: Polygon, res: GridResolution = DEFAULT_RESOLUTION) -> list[tuple[int, int, int, int]]:
    """Decompose a rectilinear polygon into interior-disjoint rectangles.

    Rectangles are (x1, y1, x2, y2) in integer grid units.  The polygon's
    vertical edges induce x-slabs; within each slab the interior y-intervals
    follow from edge-crossing parity.
    """
    verts = _int_vertices(polygon, res)
    n = len(verts)
    vedges: list[tuple[int, int, int]] = []  # (x, ylo, yhi)
    for i in range(n):
        (x1, y1), (x2, y2) = verts[i], verts[(i + 1) % n]
        if x1 == x2 and y1 != y2:
            vedges.append((x1, min(y1, y2), max(y1, y2)))
    xs = sorted({x for x, _, _ in vedges})
    rects: list[tuple[int, int, int, int]] = []
    for xa, xb in zip(xs, xs[1:]):
        # edges strictly left of the slab midpoint toggle interior parity
        events: list[int] = []
        for x, ylo, yhi in vedges:
            if x <= xa:
                events.append(ylo)
                events.append(yhi)
        ys = sorted(set(events))
        counts = {y: 0 for y in ys}
        for x, ylo, yhi in vedges:
            if x <= xa:
                counts[ylo] += 1
                counts[yhi] -= 1
        depth = 0
        for ya, yb in zip(ys, ys[1:]):
            depth += counts[ya]
            if depth % 2 == 1:
                rects.append((xa, ya, xb, yb))
    return rects


def _rect_union_units(rects: list[tuple[int, int, int, int]]) -> int:
    """Area of the union of axis-aligned integer rectangles (sweep over x)."""
    if not rects:
        return 0
    xs = sorted({r[0] for r in rects} | {r[2] for r in rects})
    total = 0
    for xa, xb in zip(xs, xs[1:]):
        intervals = sorted(
            (y1, y2) for (rx1, y1, rx2, y2) in rects if rx1 <= xa and rx2 >= xb
        )
        covered = 0
        cur_lo = cur_hi = None
        for y1, y2 in intervals:
            if cur_hi is None or y1 > cur_hi:
                if cur_hi is not None:
                    covered += cur_hi - cur_lo
                cur_lo, cur_hi = y1, y2
            else:
                cur_hi = max(cur_hi, y2)
        if cur_hi is not None:
            covered += cur_hi - cur_lo
        total += covered * (xb - xa)
    return total


def _shapely_polygon(polygon: Polygon):
    from shapely.geometry import Polygon as ShapelyPolygon

    return ShapelyPolygon([(p.x, p.y) for p in polygon.vertices])


def union_area(polys: list[Polygon], res: GridResolution = DEFAULT_RESOLUTION) -> float:
    """Area of the union of closed regions; exact for snapped rectilinear inputs."""
    for p in polys:
        _require_simple(p)
    if not polys:
        return 0.0
    if all(is_rectilinear(p) for p in polys):
        rects: list[tuple[int, int, int, int]] = []
        for p in polys:
            rects.extend(to_rectangles(p, res))
        return _rect_union_units(rects) * res.cell * res.cell
    from shapely.ops import unary_union

    return unary_union([_shapely_polygon(p) for p in polys]).area


def intersection_area(p: Polygon, q: Polygon, res: GridResolution = DEFAULT_RESOLUTION) -> float:
    """Area of interior(p) ∩ interior(q); shared boundary contributes zero."""
    _require_simple(p)
    _require_simple(q)
    if is_rectilinear(p) and is_rectilinear(q):
        ap = _rect_union_units(to_rectangles(p, res))
        aq = _rect_union_units(to_rectangles(q, res))
        both = _rect_union_units(to_rectangles(p, res) + to_rectangles(q, res))
        return (ap + aq - both) * res.cell * res.cell
    return _shapely_polygon(p).intersection(_shapely_polygon(q)).area


def overlapped_area(polys: list[Polygon], res: GridResolution = DEFAULT_RESOLUTION) -> float:
    """Σ individual areas minus union area; k-fold regions count with multiplicity k-1."""
    for p in polys:
        _require_simple(p)
    if not polys:
        return 0.0
    if all(is_rectilinear(p) for p in polys):
        per_poly = [ _rect_union_units(to_rectangles(p, res)) for p in polys ]
        rects: list[tuple[int, int, int, int]] = []
        for p in polys:
            rects.extend(to_rectangles(p, res))
        return (sum(per_poly) - _rect_union_units(rects)) * res.cell * res.cell
    total = sum(area(p) for p in polys)
    return max(0.0, total - union_area(polys, res))


# ---------------------------------------------------------------------------
# distance


def _point_seg_dist(px, py, ax, ay, bx, by) -> float:
    dx, dy = bx - ax, by - ay
    if dx == 0 and dy == 0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _seg_seg_dist(p1, p2, q1, q2) -> float:
    if _segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        _point_seg_dist(p1.x, p1.y, q1.x, q1.y, q2.x, q2.y),
        _point_seg_dist(p2.x, p2.y, q1.x, q1.y, q2.x, q2.y),
        _point_seg_dist(q1.x, q1.y, p1.x, p1.y, p2.x, p2.y),
        _point_seg_dist(q2.x, q2.y, p1.x, p1.y, p2.x, p2.y),
    )


def point_in_polygon(x: float, y: float, polygon: Polygon) -> bool:
    """Even-odd test; points exactly on the boundary are not guaranteed inside."""
    verts = polygon.vertices
    n = len(verts)
    inside = False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if (a.y > y) != (b.y > y):
            x_cross = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x < x_cross:
                inside = not inside
    return inside


def min_distance(p: Polygon, q: Polygon) -> float:
    """Minimum Euclidean distance between the closed regions; 0 on contact or overlap."""
    _require_simple(p)
    _require_simple(q)
    # containment without boundary contact
    if point_in_polygon(q.vertices[0].x, q.vertices[0].y, p):
        return 0.0
    if point_in_polygon(p.vertices[0].x, p.vertices[0].y, q):
        return 0.0
    best = math.inf
    pv, qv = p.vertices, q.vertices
    for i in range(len(pv)):
        a, b = pv[i], pv[(i + 1) % len(pv)]
        for j in range(len(qv)):
            c, d = qv[j], qv[(j + 1) % len(qv)]
            dist = _seg_seg_dist(a, b, c, d)
            if dist < best:
                best = dist
                if best == 0.0:
                    return 0.0
    return best
