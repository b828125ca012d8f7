"""Labeled cell grids: synthesis, grid-to-plan conversion, and rasterization.

A LabelGrid is a desk-scale stand-in for raster floor-plan data: each cell is
either ``exterior`` or carries a space id.  ``grid_to_plan`` traces component
boundaries into rectilinear polygons, scales to metres, and derives the
bubble diagram from door-cell adjacency.  ``plan_to_grid`` rasterizes plans
back to per-cell coverage counts and doubles as the geometry oracle.
"""

from __future__ import annotations

import json
import random
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DoorAdjacencyDefectError,
    MultiComponentInstanceError,
    ParseError,
    SchemaError,
)
from .geometry import GridResolution
from .schema import (
    BubbleDiagram,
    DesignSpec,
    FloorPlan,
    Point,
    Polygon,
    Space,
    SpaceSpec,
    parse_space_id,
)

EXTERIOR = "exterior"


@dataclass(frozen=True)
class LabelGrid:
    width: int
    height: int
    cell_size: float
    cells: tuple[tuple[str, ...], ...]  # cells[row][col]; row 0 at y = 0

    def label_at(self, col: int, row: int) -> str:
        if 0 <= row < self.height and 0 <= col < self.width:
            return self.cells[row][col]
        return EXTERIOR

    def cells_of(self, label: str) -> set[tuple[int, int]]:
        return {
            (c, r)
            for r in range(self.height)
            for c in range(self.width)
            if self.cells[r][c] == label
        }

    def labels(self) -> set[str]:
        found = {lab for row in self.cells for lab in row}
        found.discard(EXTERIOR)
        return found


def grid_to_json(grid: LabelGrid) -> dict:
    flat = [lab for row in grid.cells for lab in row]
    return {
        "width": grid.width,
        "height": grid.height,
        "cell_size": grid.cell_size,
        "cells": flat,
    }


def serialize_grid(grid: LabelGrid) -> str:
    return json.dumps(grid_to_json(grid)) + "\n"


def parse_grid(text: str) -> LabelGrid:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise SchemaError("grid: top level must be an object")
    for key in ("width", "height", "cell_size", "cells"):
        if key not in doc:
            raise SchemaError(f"grid: missing field {key!r}")
    width, height = doc["width"], doc["height"]
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise SchemaError("grid: width/height must be positive integers")
    cell_size = doc["cell_size"]
    if isinstance(cell_size, bool) or not isinstance(cell_size, (int, float)) or cell_size <= 0:
        raise SchemaError("grid: cell_size must be a positive number")
    flat = doc["cells"]
    if not isinstance(flat, list) or len(flat) != width * height:
        raise SchemaError("grid: cells must be a row-major array of width*height labels")
    rows = tuple(
        tuple(str(flat[r * width + c]) for c in range(width)) for r in range(height)
    )
    return LabelGrid(width, height, float(cell_size), rows)


# ---------------------------------------------------------------------------
# boundary tracing


def _connected_components(cells: set[tuple[int, int]]) -> list[set[tuple[int, int]]]:
    remaining = set(cells)
    components = []
    while remaining:
        seed = next(iter(remaining))
        comp = {seed}
        queue = deque([seed])
        remaining.discard(seed)
        while queue:
            x, y = queue.popleft()
            for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if (nx, ny) in remaining:
                    remaining.discard((nx, ny))
                    comp.add((nx, ny))
                    queue.append((nx, ny))
        components.append(comp)
    return components


def trace_boundary(cells: set[tuple[int, int]]) -> list[tuple[int, int]]:
    """Trace the outer boundary of a 4-connected, hole-free cell set.

    Returns counterclockwise corner coordinates (in cell units) with collinear
    vertices merged.  Directed boundary edges keep the interior on the left;
    at a corner-touch vertex the sharpest left turn is taken so the loop stays
    simple.
    """
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(a, b):
        edges.setdefault(a, []).append(b)

    for x, y in cells:
        if (x, y - 1) not in cells:
            add((x, y), (x + 1, y))
        if (x + 1, y) not in cells:
            add((x + 1, y), (x + 1, y + 1))
        if (x, y + 1) not in cells:
            add((x + 1, y + 1), (x, y + 1))
        if (x - 1, y) not in cells:
            add((x, y + 1), (x, y))

    start = min(edges)
    loop = [start]
    prev_dir = None
    current = start
    total_edges = sum(len(v) for v in edges.values())
    steps = 0
    while True:
        outgoing = edges[current]
        if len(outgoing) == 1 or prev_dir is None:
            nxt = outgoing[0]
        else:
            # prefer the sharpest left turn relative to the incoming direction
            def turn(cand):
                dx, dy = cand[0] - current[0], cand[1] - current[1]
                px, py = prev_dir
                return px * dy - py * dx  # cross product; left turns positive

            nxt = max(outgoing, key=turn)
        outgoing.remove(nxt)
        prev_dir = (nxt[0] - current[0], nxt[1] - current[1])
        current = nxt
        steps += 1
        if current == start:
            break
        loop.append(current)
    if steps != total_edges:
        raise MultiComponentInstanceError("cell set has a hole or detached boundary loop")
    # merge collinear runs
    merged = []
    n = len(loop)
    for i, p in enumerate(loop):
        a, b = loop[i - 1], loop[(i + 1) % n]
        if (p[0] - a[0]) * (b[1] - a[1]) - (p[1] - a[1]) * (b[0] - a[0]) != 0:
            merged.append(p)
    return merged


# ---------------------------------------------------------------------------
# conversion


def _space_sort_key(space_id: str) -> tuple[int, str, int]:
    room_type, index = parse_space_id(space_id)
    category = 0
    if room_type == "interior_door":
        category = 1
    elif room_type == "front_door":
        category = 2
    return (category, room_type, index)


def _door_neighbor_rooms(grid: LabelGrid, cells: set[tuple[int, int]], room_ids: set[str]) -> set[str]:
    touched = set()
    for x, y in cells:
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            lab = grid.label_at(nx, ny)
            if lab in room_ids:
                touched.add(lab)
    return touched


def grid_to_plan(grid: LabelGrid) -> tuple[FloorPlan, DesignSpec, BubbleDiagram]:
    """Convert a label grid into a floor plan, its derived spec, and diagram."""
    cs = grid.cell_size
    labels = sorted(grid.labels(), key=_space_sort_key)
    by_label = {lab: grid.cells_of(lab) for lab in labels}
    for lab, cells in by_label.items():
        if len(_connected_components(cells)) != 1:
            raise MultiComponentInstanceError(f"label {lab!r} is not a single 4-connected component")

    room_ids = {lab for lab in labels if parse_space_id(lab)[0] not in ("interior_door", "front_door")}
    door_ids = [lab for lab in labels if parse_space_id(lab)[0] == "interior_door"]
    front_ids = [lab for lab in labels if parse_space_id(lab)[0] == "front_door"]

    spaces = []
    for lab in labels:
        corners = trace_boundary(by_label[lab])
        poly = Polygon(tuple(Point(x * cs, y * cs) for x, y in corners))
        area = len(by_label[lab]) * cs * cs
        spaces.append(Space(lab, parse_space_id(lab)[0], area, poly))
    by_id = {s.id: s for s in spaces}

    edges: set[tuple[str, str]] = set()
    for door in door_ids:
        touched = _door_neighbor_rooms(grid, by_label[door], room_ids)
        if len(touched) != 2:
            raise DoorAdjacencyDefectError(
                f"interior door {door!r} touches {len(touched)} rooms"
            )
        edges.add(tuple(sorted(touched)))
    for fd in front_ids:
        touched = _door_neighbor_rooms(grid, by_label[fd], room_ids)
        if len(touched) != 1:
            raise DoorAdjacencyDefectError(f"front door {fd!r} touches {len(touched)} rooms")
        edges.add(tuple(sorted((fd, next(iter(touched))))))

    node_labels = {rid: parse_space_id(rid)[0] for rid in room_ids}
    for fd in front_ids:
        node_labels[fd] = "front_door"
    diagram = BubbleDiagram.make(node_labels, edges)
    from .topology import is_connected

    if not is_connected(diagram):
        raise DisconnectedGraphError("derived adjacency graph is disconnected")

    rooms = [s for s in spaces if s.id in room_ids]
    total_area = sum(r.area_declared for r in rooms)
    plan = FloorPlan(
        room_count=len(rooms),
        total_area_declared=total_area,
        spaces=tuple(spaces),
    )

    spec_spaces = []
    for s in spaces:
        if s.room_type == "interior_door":
            continue
        cells = by_label[s.id]
        xs = [c for c, _ in cells]
        ys = [r for _, r in cells]
        w = max(xs) - min(xs) + 1
        h = max(ys) - min(ys) + 1
        if len(cells) == w * h:
            spec_spaces.append(SpaceSpec(s.id, s.room_type, height=h * cs, width=w * cs))
        else:
            spec_spaces.append(SpaceSpec(s.id, s.room_type, area=s.area_declared))
    spec = DesignSpec(
        room_count=len(rooms),
        total_area=total_area,
        spaces=tuple(spec_spaces),
        input_graph=diagram,
    )
    return plan, spec, diagram


# ---------------------------------------------------------------------------
# rasterization (the geometry oracle)


def rasterize_polygon(
    poly: Polygon,
    res: GridResolution,
    origin: tuple[float, float],
    shape: tuple[int, int],
) -> np.ndarray:
    """Boolean mask of cells whose centers lie strictly inside the polygon.

    ``shape`` is (rows, cols); cell (r, c) has its center at
    ``origin + ((c + 0.5) * res, (r + 0.5) * res)``.
    """
    rows, cols = shape
    cx = origin[0] + (np.arange(cols) + 0.5) * res.cell
    cy = origin[1] + (np.arange(rows) + 0.5) * res.cell
    gx, gy = np.meshgrid(cx, cy)
    inside = np.zeros(shape, dtype=bool)
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if a.y == b.y:
            continue
        crosses = (a.y > gy) != (b.y > gy)
        x_at = a.x + (gy - a.y) * (b.x - a.x) / (b.y - a.y)
        inside ^= crosses & (gx < x_at)
    return inside


def plan_to_grid(
    plan: FloorPlan, resolution: GridResolution
) -> tuple[np.ndarray, tuple[float, float]]:
    """Per-cell coverage counts over all room polygons, with the grid origin."""
    polys = [r.floor_polygon for r in plan.rooms()]
    return rasterize_coverage(polys, resolution)


def rasterize_coverage(
    polys: list[Polygon], resolution: GridResolution
) -> tuple[np.ndarray, tuple[float, float]]:
    res = resolution.cell
    if not polys:
        return np.zeros((0, 0), dtype=int), (0.0, 0.0)
    min_x = min(p.x for poly in polys for p in poly.vertices)
    min_y = min(p.y for poly in polys for p in poly.vertices)
    max_x = max(p.x for poly in polys for p in poly.vertices)
    max_y = max(p.y for poly in polys for p in poly.vertices)
    import math

    ox = math.floor(min_x / res) * res
    oy = math.floor(min_y / res) * res
    cols = max(1, math.ceil((max_x - ox) / res - 1e-9))
    rows = max(1, math.ceil((max_y - oy) / res - 1e-9))
    counts = np.zeros((rows, cols), dtype=int)
    for poly in polys:
        counts += rasterize_polygon(poly, resolution, (ox, oy), (rows, cols))
    return counts, (ox, oy)


# ---------------------------------------------------------------------------
# synthesis


class _Retry(Exception):
    pass


_ROOM_SEQUENCE = [
    "living_room",
    "kitchen",
    "bathroom",
    "bedroom",
    "bedroom",
    "study",
    "bedroom",
    "balcony",
]


def _capacity(w: int, h: int) -> int:
    return max(0, (w + 1) // 4) * max(0, (h + 1) // 4)


def _split(rng: random.Random, rect: tuple[int, int, int, int], k: int, out: list) -> None:
    x0, y0, x1, y1 = rect
    w, h = x1 - x0, y1 - y0
    if k == 1:
        if w < 3 or h < 3:
            raise _Retry
        out.append(rect)
        return
    for _ in range(24):
        k1 = rng.randint(1, k - 1)
        k2 = k - k1
        vertical = w > h or (w == h and rng.random() < 0.5)
        extent = w if vertical else h
        if extent < 7:
            vertical = not vertical
            extent = w if vertical else h
            if extent < 7:
                raise _Retry
        target = round(extent * k1 / k) + rng.randint(-2, 2)
        cut = max(3, min(extent - 4, target))
        if vertical:
            left = (x0, y0, x0 + cut, y1)
            right = (x0 + cut + 1, y0, x1, y1)
        else:
            left = (x0, y0, x1, y0 + cut)
            right = (x0, y0 + cut + 1, x1, y1)
        lw, lh = left[2] - left[0], left[3] - left[1]
        rw, rh = right[2] - right[0], right[3] - right[1]
        if _capacity(lw, lh) >= k1 and _capacity(rw, rh) >= k2:
            _split(rng, left, k1, out)
            _split(rng, right, k2, out)
            return
    raise _Retry


def _attempt_synthesize(rng: random.Random, room_count: int, cell_size: float) -> LabelGrid:
    interior_w = rng.randint(16, 22)
    interior_h = rng.randint(16, 22)
    rects: list[tuple[int, int, int, int]] = []
    _split(rng, (0, 0, interior_w, interior_h), room_count, rects)
    rects.sort()

    width, height = interior_w + 2, interior_h + 2
    cells = [[EXTERIOR] * width for _ in range(height)]

    type_counts: Counter = Counter()
    room_ids = []
    room_cells: dict[str, set[tuple[int, int]]] = {}
    for i, (x0, y0, x1, y1) in enumerate(rects):
        room_type = _ROOM_SEQUENCE[i % len(_ROOM_SEQUENCE)]
        rid = f"{room_type}|{type_counts[room_type]}"
        type_counts[room_type] += 1
        room_ids.append(rid)
        occupied = {(x, y) for x in range(x0, x1) for y in range(y0, y1)}
        w, h = x1 - x0, y1 - y0
        if w >= 5 and h >= 5 and rng.random() < 0.35:
            nw = rng.randint(2, w - 3)
            nh = rng.randint(2, h - 3)
            corner = rng.randrange(4)
            if corner == 0:
                notch = {(x, y) for x in range(x0, x0 + nw) for y in range(y0, y0 + nh)}
            elif corner == 1:
                notch = {(x, y) for x in range(x1 - nw, x1) for y in range(y0, y0 + nh)}
            elif corner == 2:
                notch = {(x, y) for x in range(x0, x0 + nw) for y in range(y1 - nh, y1)}
            else:
                notch = {(x, y) for x in range(x1 - nw, x1) for y in range(y1 - nh, y1)}
            occupied -= notch
        room_cells[rid] = occupied
        for x, y in occupied:
            cells[y + 1][x + 1] = rid

    def label(col: int, row: int) -> str:
        if 0 <= row < height and 0 <= col < width:
            return cells[row][col]
        return EXTERIOR

    def door_ok(col: int, row: int, pair: set[str]) -> bool:
        four = [label(col + 1, row), label(col - 1, row), label(col, row + 1), label(col, row - 1)]
        if sorted(lab for lab in four if lab != EXTERIOR) != sorted(pair):
            return False
        ring = {
            label(col + dx, row + dy)
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
        }
        return ring <= (pair | {EXTERIOR})

    # candidate door cells per adjacent room pair
    pair_cells: dict[tuple[str, str], list[tuple[int, int]]] = {}
    for row in range(height):
        for col in range(width):
            if cells[row][col] != EXTERIOR:
                continue
            nbrs = {
                label(col + 1, row),
                label(col - 1, row),
                label(col, row + 1),
                label(col, row - 1),
            } - {EXTERIOR}
            if len(nbrs) == 2 and door_ok(col, row, nbrs):
                pair_cells.setdefault(tuple(sorted(nbrs)), []).append((col, row))

    # spanning tree over the candidate adjacency graph, plus random extras
    parent = {rid: rid for rid in room_ids}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pairs = sorted(pair_cells)
    rng.shuffle(pairs)
    chosen: list[tuple[str, str]] = []
    for a, b in pairs:
        if find(a) != find(b):
            parent[find(a)] = find(b)
            chosen.append((a, b))
    if len(chosen) != len(room_ids) - 1:
        raise _Retry
    for pair in pairs:
        if pair not in chosen and rng.random() < 0.3:
            chosen.append(pair)

    used_door_cells: set[tuple[int, int]] = set()
    door_index = 0
    for pair in sorted(chosen):
        options = [c for c in pair_cells[pair] if c not in used_door_cells]
        if not options:
            raise _Retry
        col, row = rng.choice(options)
        used_door_cells.add((col, row))
        cells[row][col] = f"interior_door|{door_index}"
        door_index += 1

    # front door: margin cell touching exactly one room
    front_options = []
    for row in range(height):
        for col in range(width):
            if cells[row][col] != EXTERIOR or (col, row) in used_door_cells:
                continue
            nbrs = {
                label(col + 1, row),
                label(col - 1, row),
                label(col, row + 1),
                label(col, row - 1),
            } - {EXTERIOR}
            if len(nbrs) == 1 and next(iter(nbrs)) in room_cells and door_ok(col, row, nbrs):
                front_options.append((col, row))
    if not front_options:
        raise _Retry
    col, row = rng.choice(sorted(front_options))
    cells[row][col] = "front_door|0"

    return LabelGrid(width, height, cell_size, tuple(tuple(r) for r in cells))


def synthesize_grid(seed: int, room_count: int = 8, cell_size: float = 1.0) -> LabelGrid:
    """Deterministically generate a connected, door-bridged room layout.

    ``cell_size`` should exceed the adjacency threshold used downstream so
    that a door cell's incident rooms are exactly the ones it touches.
    """
    if not 1 <= room_count <= 12:
        raise ValueError("room_count out of range")
    for attempt in range(64):
        rng = random.Random(seed * 1_000_003 + room_count * 9_176 + attempt)
        try:
            grid = _attempt_synthesize(rng, room_count, cell_size)
        except _Retry:
            continue
        return grid
    raise RuntimeError(f"could not synthesize a valid grid for seed {seed}")


def shift_room(plan: FloorPlan, room_id: str, dx: float, dy: float) -> FloorPlan:
    """Translate one space's polygon; used to manufacture known overlaps."""
    spaces = tuple(
        Space(s.id, s.room_type, s.area_declared, s.floor_polygon.translated(dx, dy))
        if s.id == room_id
        else s
        for s in plan.spaces
    )
    return FloorPlan(plan.room_count, plan.total_area_declared, spaces)
