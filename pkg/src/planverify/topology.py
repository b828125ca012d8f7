"""Bubble-diagram reconstruction from geometry and exact graph edit distance.

Connectivity is recovered by door incidence: an interior door links the two
rooms whose polygons lie within the adjacency threshold of it.  The distance
between the requested and reconstructed diagrams is the exact minimum edit
cost under unit node/edge insert/delete costs, where only identically labeled
nodes may be matched (a mismatched substitution is a delete plus an insert and
therefore never pairs two nodes).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphTooLargeError
from .geometry import min_distance
from .schema import BubbleDiagram, FloorPlan, Polygon

MAX_EXACT_NODES = 16


@dataclass(frozen=True)
class AdjacencyConfig:
    tau_adj: float = 0.5  # metres; door-incidence distance threshold

    def __post_init__(self):
        if self.tau_adj < 0:
            raise ValueError("tau_adj must be non-negative")


@dataclass(frozen=True)
class GedCostModel:
    node_insert: float = 1.0
    node_delete: float = 1.0
    edge_insert: float = 1.0
    edge_delete: float = 1.0


def _bbox(poly: Polygon) -> tuple[float, float, float, float]:
    xs = [p.x for p in poly.vertices]
    ys = [p.y for p in poly.vertices]
    return min(xs), min(ys), max(xs), max(ys)


def _bbox_distance(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> float:
    dx = max(0.0, max(a[0], b[0]) - min(a[2], b[2]))
    dy = max(0.0, max(a[1], b[1]) - min(a[3], b[3]))
    return (dx * dx + dy * dy) ** 0.5


def _door_distances(door, rooms, boxes, door_box, tau: float):
    """(distance, room_id) pairs, exact only where the bbox lower bound allows ≤ tau."""
    out = []
    for room in rooms:
        lower = _bbox_distance(door_box, boxes[room.id])
        if lower > tau:
            out.append((lower, room.id))
        else:
            out.append((min_distance(door.floor_polygon, room.floor_polygon), room.id))
    out.sort()
    return out


def reconstruct_bubble(
    plan: FloorPlan, cfg: AdjacencyConfig = AdjacencyConfig()
) -> tuple[BubbleDiagram, list[str]]:
    """Derive the connectivity graph realized by a plan's geometry.

    Returns the diagram plus diagnostics for incidence defects (doors with
    other than two nearby rooms, duplicate edges, isolated rooms).
    """
    diagnostics: list[str] = []
    rooms = plan.rooms()
    labels = {r.id: r.room_type for r in rooms}
    for fd in plan.front_doors():
        labels[fd.id] = fd.room_type

    edges: set[tuple[str, str]] = set()
    boxes = {room.id: _bbox(room.floor_polygon) for room in rooms}

    def add_edge(a: str, b: str, source: str) -> None:
        edge = tuple(sorted((a, b)))
        if edge in edges:
            diagnostics.append(f"DUPLICATE_EDGE: {source} duplicates edge {edge[0]}-{edge[1]}")
        else:
            edges.add(edge)

    for door in plan.interior_doors():
        dists = _door_distances(door, rooms, boxes, _bbox(door.floor_polygon), cfg.tau_adj)
        incident = [(d, rid) for d, rid in dists if d <= cfg.tau_adj]
        if len(incident) < 2:
            diagnostics.append(f"DOOR_UNDERCONNECTED: {door.id} touches {len(incident)} room(s)")
            continue
        if len(incident) > 2:
            diagnostics.append(f"DOOR_OVERCONNECTED: {door.id} touches {len(incident)} rooms")
        (_, a), (_, b) = incident[0], incident[1]
        add_edge(a, b, door.id)

    for fd in plan.front_doors():
        dists = _door_distances(fd, rooms, boxes, _bbox(fd.floor_polygon), cfg.tau_adj)
        incident = [(d, rid) for d, rid in dists if d <= cfg.tau_adj]
        if not incident:
            diagnostics.append(f"FRONT_DOOR_DISCONNECTED: {fd.id} touches no room")
            continue
        add_edge(fd.id, incident[0][1], fd.id)

    diagram = BubbleDiagram.make(labels, edges)
    for room in rooms:
        if not diagram.neighbors(room.id):
            diagnostics.append(f"ISOLATED_ROOM: {room.id} has no door connection")
    return diagram, diagnostics


def is_connected(g: BubbleDiagram) -> bool:
    nodes = g.nodes
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nbr in g.neighbors(node):
            if nbr not in seen:
                seen.add(nbr)
                stack.append(nbr)
    return len(seen) == len(nodes)


# ---------------------------------------------------------------------------
# graph edit distance


def _match_labels(g1: BubbleDiagram, g2: BubbleDiagram) -> tuple[dict, dict]:
    """Matching label per node: the full id when shared by both graphs, else room_type."""
    shared = g1.nodes & g2.nodes
    l1 = {n: (n if n in shared else g1.label_of(n)) for n in g1.nodes}
    l2 = {n: (n if n in shared else g2.label_of(n)) for n in g2.nodes}
    return l1, l2


def ged(
    g1: BubbleDiagram, g2: BubbleDiagram, cost: GedCostModel = GedCostModel()
) -> float:
    """Exact minimum edit cost between two labeled undirected graphs."""
    if len(g1.nodes) > MAX_EXACT_NODES or len(g2.nodes) > MAX_EXACT_NODES:
        raise GraphTooLargeError(
            f"exact solver limited to {MAX_EXACT_NODES} nodes"
        )
    if g1.nodes == g2.nodes:
        # Identity is the only zero-cost matching when every label is the id
        # itself; the distance reduces to the edge-set symmetric difference.
        return float(
            sum(cost.edge_delete for e in g1.edges - g2.edges)
            + sum(cost.edge_insert for e in g2.edges - g1.edges)
        )
    return _ged_branch_and_bound(g1, g2, cost)


def _ged_branch_and_bound(g1: BubbleDiagram, g2: BubbleDiagram, cost: GedCostModel) -> float:
    l1, l2 = _match_labels(g1, g2)
    v1 = sorted(g1.nodes)
    v2 = sorted(g2.nodes)
    e1 = g1.edges
    e2 = g2.edges
    candidates = {u: [v for v in v2 if l1[u] == l2[v]] for u in v1}
    # assign most-constrained nodes first
    v1.sort(key=lambda u: len(candidates[u]))

    best = [float("inf")]

    def finish_cost(mapping: dict[str, str | None]) -> float:
        used = set(x for x in mapping.values() if x is not None)
        extra = 0.0
        extra += cost.node_insert * (len(v2) - len(used))
        for a, b in e2:
            if a not in used or b not in used:
                extra += cost.edge_insert
        return extra

    def lower_bound(i: int, used: set[str]) -> float:
        # admissible: node costs only, via label-multiset matching of the remainder
        from collections import Counter

        rem1 = Counter(l1[u] for u in v1[i:])
        rem2 = Counter(l2[v] for v in v2 if v not in used)
        matchable = sum(min(rem1[lab], rem2[lab]) for lab in rem1)
        return cost.node_delete * (sum(rem1.values()) - matchable) + cost.node_insert * (
            sum(rem2.values()) - matchable
        )

    def recurse(i: int, mapping: dict[str, str | None], used: set[str], acc: float) -> None:
        if acc + lower_bound(i, used) >= best[0]:
            return
        if i == len(v1):
            total = acc + finish_cost(mapping)
            if total < best[0]:
                best[0] = total
            return
        u = v1[i]

        def pair_delta(v: str | None) -> float:
            delta = 0.0
            for prev_u, prev_v in mapping.items():
                has1 = tuple(sorted((u, prev_u))) in e1
                if v is None or prev_v is None:
                    if has1:
                        delta += cost.edge_delete
                    continue
                has2 = tuple(sorted((v, prev_v))) in e2
                if has1 and not has2:
                    delta += cost.edge_delete
                elif has2 and not has1:
                    delta += cost.edge_insert
            return delta

        for v in candidates[u]:
            if v in used:
                continue
            mapping[u] = v
            used.add(v)
            recurse(i + 1, mapping, used, acc + pair_delta(v))
            used.discard(v)
            del mapping[u]
        # deletion branch
        mapping[u] = None
        recurse(i + 1, mapping, used, acc + cost.node_delete + pair_delta(None))
        del mapping[u]

    recurse(0, {}, set(), 0.0)
    return best[0]
