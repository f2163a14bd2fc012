import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discfill.geometry import (
    Disc,
    GeometryError,
    Polygon,
    disc_inside,
    distance_to_boundary,
    polygon_area,
)

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


class TestPolygonArea:
    def test_unit_right_triangle(self):
        assert polygon_area(Polygon([(0, 0), (1, 0), (0, 1)])) == pytest.approx(0.5)

    def test_square_side_two(self):
        assert polygon_area(Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])) == pytest.approx(4.0)

    def test_l_shaped_hexagon(self):
        # shoelace by hand: 0 + 2 + 1 + 1 + 2 + 0 = 6 -> area 3
        assert polygon_area(Polygon(L_SHAPE)) == pytest.approx(3.0)

    def test_cyclic_permutation_invariant(self):
        base = Polygon(L_SHAPE)
        for k in range(1, len(L_SHAPE)):
            rolled = L_SHAPE[k:] + L_SHAPE[:k]
            assert polygon_area(Polygon(rolled)) == pytest.approx(base.area, rel=1e-15)

    def test_cw_input_is_normalized(self):
        p = Polygon(L_SHAPE[::-1])
        assert p.area == pytest.approx(3.0)
        # internal orientation is CCW again
        from discfill.geometry import shoelace_area

        assert shoelace_area(p.vertices) > 0

    def test_collinear_vertices_merged(self):
        p = Polygon([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])
        assert p.n == 4

    def test_duplicate_vertices_merged(self):
        p = Polygon([(0, 0), (0, 0), (2, 0), (2, 2), (0, 2)])
        assert p.n == 4

    def test_self_intersection_rejected(self):
        with pytest.raises(GeometryError):
            Polygon([(0, 0), (2, 2), (2, 0), (0, 2)])

    def test_too_few_vertices(self):
        with pytest.raises(GeometryError):
            Polygon([(0, 0), (1, 0)])

    def test_nonfinite_rejected(self):
        with pytest.raises(GeometryError):
            Polygon([(0, 0), (1, float("nan")), (0, 1)])


class TestDistanceToBoundary:
    def test_square_center(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        d, feature = distance_to_boundary(p, (0.0, 0.0))
        assert d == pytest.approx(1.0)

    def test_square_off_center(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        d, feature = distance_to_boundary(p, (0.5, 0.0))
        assert d == pytest.approx(0.5)
        assert feature[0] == "edge"

    def test_l_shape_reflex_vertex_nearest(self):
        # Interior point whose nearest boundary feature is the reflex
        # vertex (1, 1); oracle below compares against all six edges.
        p = Polygon(L_SHAPE)
        q = np.array([0.7, 0.7])
        edge_dists = p.edge_distances(q)
        assert float(np.min(edge_dists)) == pytest.approx(math.hypot(0.3, 0.3))
        d, feature = distance_to_boundary(p, q)
        assert d == pytest.approx(math.hypot(0.3, 0.3))
        assert feature == ("vertex", 3)
        assert tuple(p.vertices[3]) == (1.0, 1.0)

    def test_l_shape_notch_point_is_outside(self):
        # (1.5, 1.5) lies in the removed quadrant of this hexagon.
        p = Polygon(L_SHAPE)
        assert not p.contains((1.5, 1.5))
        with pytest.raises(GeometryError):
            distance_to_boundary(p, (1.5, 1.5))

    def test_outside_point_rejected(self):
        p = Polygon(L_SHAPE)
        with pytest.raises(GeometryError):
            distance_to_boundary(p, (1.5, 1.5 + 1.0))

    def test_boundary_point_rejected(self):
        p = Polygon(L_SHAPE)
        with pytest.raises(GeometryError):
            distance_to_boundary(p, (1.0, 0.0))


class TestDiscInside:
    def test_inscribed(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        assert disc_inside(p, Disc(0, 0, 1.0), 1e-9)

    def test_slightly_too_large(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        assert not disc_inside(p, Disc(0, 0, 1.0 + 1e-6), 1e-9)

    def test_l_shape_disc(self):
        # check against all edges: min distance from (0.5, 0.5) is 0.5
        p = Polygon(L_SHAPE)
        assert float(np.min(p.edge_distances(np.array([0.5, 0.5])))) == pytest.approx(0.5)
        assert disc_inside(p, Disc(0.5, 0.5, 0.5))

    def test_degenerate_radius(self):
        p = Polygon(L_SHAPE)
        assert disc_inside(p, Disc(0.5, 0.5, 0.0))

    def test_negative_radius_rejected(self):
        with pytest.raises(GeometryError):
            Disc(0, 0, -0.1)


@settings(max_examples=40, deadline=None)
@given(
    x=st.floats(-0.95, 0.95),
    y=st.floats(-0.95, 0.95),
)
def test_interior_maximal_disc_fits(x, y):
    """Shrinking the boundary-distance disc slightly always fits."""
    p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    d = p.boundary_distance((x, y))
    assert disc_inside(p, Disc(x, y, d * (1 - 1e-9)))


def test_random_interior_disc_property(shapes):
    rng = np.random.default_rng(3)
    for p in shapes.values():
        pts = p.sample_interior(50, rng)
        for q in pts:
            d = p.boundary_distance(q)
            assert disc_inside(p, Disc(float(q[0]), float(q[1]), d * (1 - 1e-9)))
