import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planverify import geometry, grids
from planverify.errors import DegenerateAfterSnapError, NonSimplePolygonError
from planverify.geometry import GridResolution
from planverify.schema import Point, Polygon

from conftest import (
    area_oracle,
    intersection_area_oracle,
    overlap_area_oracle,
    rect,
    square,
    union_area_oracle,
)

RES = GridResolution(0.001)


def random_rectilinear_rooms(seed: int, n: int = 3, jitter: int = 3) -> list[Polygon]:
    """Room polygons from a synthesized grid, translated to create overlaps."""
    rng = random.Random(seed)
    grid = grids.synthesize_grid(seed % 40, 5 + seed % 4)
    plan, _, _ = grids.grid_to_plan(grid)
    rooms = list(plan.rooms())
    rng.shuffle(rooms)
    out = []
    for room in rooms[:n]:
        dx = rng.randint(-jitter, jitter) * grid.cell_size
        dy = rng.randint(-jitter, jitter) * grid.cell_size
        out.append(room.floor_polygon.translated(dx, dy))
    return out


class TestSnap:
    def test_on_grid_square_unchanged(self):
        sq = square(0, 0)
        assert geometry.snap(sq, RES) == sq

    def test_rounding_to_nearest_multiple(self):
        poly = Polygon((Point(0, 0.0004), Point(1, 0), Point(1, 1), Point(0, 1)))
        snapped = geometry.snap(poly, RES)
        assert snapped.vertices[0] == Point(0.0, 0.0)

    def test_all_coordinates_on_grid(self):
        rng = random.Random(5)
        poly = Polygon(
            tuple(Point(rng.uniform(0, 5), rng.uniform(0, 5)) for _ in range(8))
        )
        try:
            snapped = geometry.snap(poly, RES)
        except (DegenerateAfterSnapError, Exception):
            snapped = geometry.snap(square(0.123456, 0.987654, 2.5), RES)
        for p in snapped.vertices:
            assert round(p.x / RES.cell) * RES.cell == pytest.approx(p.x, abs=1e-12)
            assert round(p.y / RES.cell) * RES.cell == pytest.approx(p.y, abs=1e-12)

    def test_collapse_raises(self):
        thin = Polygon((Point(0, 0), Point(1, 0.0001), Point(2, 0)))
        with pytest.raises(DegenerateAfterSnapError):
            geometry.snap(thin, RES)


class TestArea:
    def test_unit_square(self):
        assert geometry.area(square(0, 0)) == 1.0

    def test_l_shape(self):
        l_shape = Polygon(
            (Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 1), Point(1, 2), Point(0, 2))
        )
        assert geometry.area(l_shape) == 3.0

    def test_nonsimple_raises(self):
        bowtie = Polygon((Point(0, 0), Point(2, 2), Point(2, 0), Point(0, 2)))
        with pytest.raises(NonSimplePolygonError):
            geometry.area(bowtie)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_cell_count_oracle(self, seed):
        cell = 0.1
        poly = random_rectilinear_rooms(seed, n=1)[0].scaled(0.1)
        res = GridResolution(cell)
        assert geometry.area(poly) == pytest.approx(area_oracle(poly, cell), abs=1e-12)
        assert geometry.union_area([poly], res) == area_oracle(poly, cell)


class TestIntersection:
    def test_shared_edge_is_zero(self):
        assert geometry.intersection_area(square(0, 0), square(1, 0), RES) == 0.0

    def test_half_overlap(self):
        assert geometry.intersection_area(square(0, 0), square(0.5, 0), RES) == 0.5

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_rasterization_oracle(self, seed):
        a, b = random_rectilinear_rooms(seed, n=2)
        res = GridResolution(1.0)
        assert geometry.intersection_area(a, b, res) == intersection_area_oracle(a, b, 1.0)

    def test_symmetry_and_bounds(self):
        a, b = random_rectilinear_rooms(3, n=2)
        res = GridResolution(1.0)
        ab = geometry.intersection_area(a, b, res)
        assert ab == geometry.intersection_area(b, a, res)
        assert ab <= min(geometry.area(a), geometry.area(b))

    def test_containment_equals_smaller_area(self):
        outer, inner = rect(0, 0, 4, 4), rect(1, 1, 2, 2)
        assert geometry.intersection_area(outer, inner, RES) == geometry.area(inner)


class TestUnion:
    def test_disjoint(self):
        assert geometry.union_area([square(0, 0), square(3, 0)], RES) == 2.0

    def test_identical(self):
        assert geometry.union_area([square(0, 0), square(0, 0)], RES) == 1.0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_rasterization_oracle(self, seed):
        polys = random_rectilinear_rooms(seed, n=6)
        res = GridResolution(1.0)
        assert geometry.union_area(polys, res) == union_area_oracle(polys, 1.0)

    def test_never_exceeds_sum(self):
        polys = random_rectilinear_rooms(11, n=4)
        res = GridResolution(1.0)
        total = sum(geometry.area(p) for p in polys)
        union = geometry.union_area(polys, res)
        assert union <= total + 1e-12
        if geometry.overlapped_area(polys, res) == 0:
            assert union == total


class TestOverlapped:
    def test_disjoint_rooms(self):
        assert geometry.overlapped_area([square(0, 0), square(2, 0)], RES) == 0.0

    def test_identical_squares(self):
        assert geometry.overlapped_area([square(0, 0), square(0, 0)], RES) == 1.0

    def test_triple_cover_counts_multiplicity(self):
        # three unit-area rectangles whose only overlap is a common 0.25 m^2
        # region covered three times: multiplicity 2 there, so 0.5 total
        r1 = rect(0, 0, 2, 0.5)
        r2 = rect(0, 0, 0.5, 2)
        r3 = rect(-1.5, 0, 2, 0.5)
        res = GridResolution(0.25)
        assert geometry.overlapped_area([r1, r2, r3], res) == 0.5
        assert overlap_area_oracle([r1, r2, r3], 0.25) == 0.5

    def test_zero_iff_pairwise_disjoint(self):
        polys = random_rectilinear_rooms(17, n=4)
        res = GridResolution(1.0)
        pairwise = any(
            geometry.intersection_area(polys[i], polys[j], res) > 0
            for i in range(len(polys))
            for j in range(i + 1, len(polys))
        )
        assert (geometry.overlapped_area(polys, res) > 0) == pairwise


class TestMinDistance:
    def test_touching(self):
        assert geometry.min_distance(square(0, 0), square(1, 0)) == 0.0

    def test_gap(self):
        assert geometry.min_distance(square(0, 0), square(1.2, 0)) == pytest.approx(0.2)

    def test_overlap_is_zero(self):
        assert geometry.min_distance(square(0, 0), square(0.5, 0.5)) == 0.0

    def test_containment_is_zero(self):
        assert geometry.min_distance(rect(0, 0, 4, 4), rect(1, 1, 1, 1)) == 0.0

    def test_corner_to_corner(self):
        p = rect(0, 0, 2, 1)
        q = rect(3.5, 2.5, 1, 2)
        computed = geometry.min_distance(p, q)
        assert computed == pytest.approx(math.hypot(1.5, 1.5), rel=1e-12)

    def test_lower_bounds_sampling(self):
        rng = random.Random(2)
        p = rect(0, 0, 2, 1)
        q = rect(3.5, 2.5, 1, 2)
        computed = geometry.min_distance(p, q)
        for _ in range(5000):
            px, py = rng.uniform(0, 2), rng.uniform(0, 1)
            qx, qy = rng.uniform(3.5, 4.5), rng.uniform(2.5, 4.5)
            assert computed <= math.hypot(px - qx, py - qy) + 1e-9


scales = st.sampled_from([1.0, 2.0, 0.5, 3.0, 10.0])


@given(seed=st.integers(min_value=0, max_value=50), s=scales)
@settings(max_examples=25, deadline=None)
def test_scale_covariance(seed, s):
    polys = random_rectilinear_rooms(seed, n=3)
    res = GridResolution(1.0)
    res_s = GridResolution(s)
    scaled = [p.scaled(s) for p in polys]
    assert geometry.union_area(scaled, res_s) == pytest.approx(
        geometry.union_area(polys, res) * s * s, rel=1e-12
    )
    assert geometry.overlapped_area(scaled, res_s) == pytest.approx(
        geometry.overlapped_area(polys, res) * s * s, rel=1e-12
    )
    assert geometry.min_distance(scaled[0], scaled[1]) == pytest.approx(
        geometry.min_distance(polys[0], polys[1]) * s, rel=1e-9, abs=1e-12
    )


def test_nonrectilinear_fallback_triangle():
    tri = Polygon((Point(0, 0), Point(2, 0), Point(0, 2)))
    assert geometry.area(tri) == 2.0
    # the hypotenuse x + y = 2 touches the unit square only at (1, 1),
    # so the square lies entirely inside the triangle
    sq = square(0, 0)
    inter = geometry.intersection_area(tri, sq, RES)
    assert inter == pytest.approx(1.0, rel=1e-9)
    union = geometry.union_area([tri, sq], RES)
    assert union == pytest.approx(2.0, rel=1e-9)
    half = square(0.5, 0.5)
    # the line clips the corner triangle (0.5,1.5)-(1.5,0.5)-(1.5,1.5) off
    # the shifted square, leaving half its area
    assert geometry.intersection_area(tri, half, RES) == pytest.approx(0.5, rel=1e-9)
