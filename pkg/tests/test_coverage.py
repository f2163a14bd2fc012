import math

import numpy as np
import pytest

from discfill.coverage import (
    FillingSolution,
    Placement,
    contributions,
    lens_area,
    neighbors,
    phi,
    region_area,
    union_area,
    unique_area,
    unique_area_full,
)
from discfill.geometry import Disc, GeometryError, Polygon
from discfill.local_opt import build_solution

from conftest import axis_of, tree_path_positions


class TestPhi:
    def test_square_inscribed(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        sol = FillingSolution(discs=[Disc(0, 0, 1)], phi=0.0)
        assert phi(sol, p) == pytest.approx(math.pi / 4)

    def test_empty_solution(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        assert phi(FillingSolution(discs=[], phi=0.0), p) == 0.0

    def test_triangle_incircle(self):
        p = Polygon([(0, 0), (2, 0), (1, math.sqrt(3))])
        r = 1 / math.sqrt(3)
        sol = FillingSolution(discs=[Disc(1, r, r)], phi=0.0)
        # pi * (1/3) over sqrt(3)
        assert phi(sol, p) == pytest.approx(math.pi / (3 * math.sqrt(3)))
        assert phi(sol, p) == pytest.approx(0.604600, abs=1e-6)

    def test_disc_outside_rejected(self):
        p = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        sol = FillingSolution(discs=[Disc(0.5, 0, 1.0)], phi=0.0)
        with pytest.raises(GeometryError):
            phi(sol, p)


class TestContributions:
    def test_two_coincident(self):
        rep = contributions([Disc(0, 0, 1), Disc(0, 0, 1)])
        assert rep.contribution[0] == pytest.approx(math.pi / 2, abs=1e-9)
        assert rep.contribution[1] == pytest.approx(math.pi / 2, abs=1e-9)

    def test_two_disjoint(self):
        rep = contributions([Disc(0, 0, 1), Disc(5, 0, 1)])
        assert rep.contribution == pytest.approx([math.pi, math.pi])
        assert rep.unique_area == pytest.approx([math.pi, math.pi])

    def test_chain_sums_to_union(self):
        discs = [Disc(0, 0, 1), Disc(1.2, 0, 1), Disc(2.4, 0, 1)]
        rep = contributions(discs)
        want = union_area(discs)
        assert np.sum(rep.contribution) == pytest.approx(want, rel=1e-9)
        assert rep.union_area == pytest.approx(want, rel=1e-9)

    def test_random_sets_sum_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(2, 10))
            discs = [
                Disc(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 0.8))
                for _ in range(n)
            ]
            rep = contributions(discs)
            want = union_area(discs)
            assert np.sum(rep.contribution) == pytest.approx(want, rel=1e-9)

    def test_lens_matrix(self):
        d = 1.0
        rep = contributions([Disc(0, 0, 1), Disc(d, 0, 1)])
        expect = 2 * math.acos(0.5) - 0.5 * math.sqrt(3)
        assert rep.lens[0, 1] == pytest.approx(expect, rel=1e-12)
        assert rep.lens[1, 0] == rep.lens[0, 1]

    def test_zero_radius_contributes_nothing(self):
        rep = contributions([Disc(0, 0, 0.0), Disc(0, 0, 1.0)])
        assert rep.contribution[0] == 0.0
        assert rep.contribution[1] == pytest.approx(math.pi, rel=1e-9)

    def test_jitter_noted(self):
        rep = contributions([Disc(0, 0, 1)])
        assert any("jitter" in d for d in rep.diagnostics)


class TestRegionArea:
    def test_pair_intersection(self):
        discs = [Disc(0, 0, 1), Disc(1, 0, 1)]
        got = region_area(discs, lambda cover: cover[0] and cover[1])
        assert got == pytest.approx(lens_area(1.0, 1.0, 1.0), rel=1e-12)

    def test_a_and_c_not_b_disjoint_case(self):
        discs = [Disc(0, 0, 1), Disc(3, 0, 1), Disc(1.5, 0, 1)]
        got = region_area(discs, lambda c: c[0] and c[1] and not c[2])
        assert got == pytest.approx(0.0, abs=1e-12)


class TestNeighbors:
    def test_three_on_one_piece(self, rect_axis):
        central = next(
            pc.index
            for pc in rect_axis.pieces
            if pc.kind == "section" and pc.length > 2
        )
        way = [0] * rect_axis.K
        way[central] = 3
        sol = build_solution(rect_axis, way, {central: np.array([0.25, 0.5, 0.75])})
        adj = neighbors(sol, rect_axis)
        sizes = sorted(len(s) for s in adj)
        assert sizes == [1, 1, 2]

    def test_disc_adjacent_to_junction_on_each_piece(self, tri_axis):
        # junction occupied + one disc on each section: the junction disc
        # has three neighbors.
        way = [0] * tri_axis.K
        u = {}
        j_piece = next(pc.index for pc in tri_axis.pieces if pc.kind == "junction")
        way[j_piece] = 1
        for pc in tri_axis.pieces:
            if pc.kind == "section":
                way[pc.index] = 1
                u[pc.index] = np.array([0.6])
        sol = build_solution(tri_axis, way, u)
        adj = neighbors(sol, tri_axis)
        j_disc = next(
            i for i, pl in enumerate(sol.placements) if pl.piece == j_piece
        )
        assert len(adj[j_disc]) == 3

    def test_single_disc(self, square_axis):
        j_piece = next(pc.index for pc in square_axis.pieces if pc.kind == "junction")
        way = [0] * square_axis.K
        way[j_piece] = 1
        sol = build_solution(square_axis, way, {})
        assert neighbors(sol, square_axis) == [set()]

    def test_off_axis_rejected(self, square_axis):
        sol = FillingSolution(
            discs=[Disc(0.3, 0.3, 0.2)],
            phi=0.0,
            placements=[Placement(0, 0.5)],
        )
        with pytest.raises(GeometryError):
            neighbors(sol, square_axis)


class TestUniqueArea:
    def test_isolated_disc(self, rect_axis):
        central = next(
            pc.index for pc in rect_axis.pieces if pc.kind == "section" and pc.length > 2
        )
        way = [0] * rect_axis.K
        way[central] = 1
        sol = build_solution(rect_axis, way, {central: np.array([0.5])})
        got = unique_area(0, sol, rect_axis)
        assert got == pytest.approx(math.pi * sol.discs[0].r ** 2, rel=1e-9)

    def test_middle_of_three_closed_form(self, rect_axis):
        central = next(
            pc.index for pc in rect_axis.pieces if pc.kind == "section" and pc.length > 2
        )
        way = [0] * rect_axis.K
        way[central] = 3
        # spacing d = 0.6 > r so only adjacent discs overlap and the two
        # lens corrections are disjoint
        us = np.array([0.3, 0.5, 0.7])
        sol = build_solution(rect_axis, way, {central: us})
        r = sol.discs[0].r
        d = abs(sol.discs[1].x - sol.discs[0].x)
        got = unique_area(1, sol, rect_axis)
        expect = math.pi * r * r - 2 * lens_area(d, r, r)
        assert got == pytest.approx(expect, rel=1e-9)
        assert got == pytest.approx(unique_area_full(1, sol.discs), rel=1e-9)

    def test_neighbor_only_equals_full(self, l_axis):
        rng = np.random.default_rng(12)
        way = [0] * l_axis.K
        u = {}
        sections = [pc for pc in l_axis.pieces if pc.kind == "section"]
        picks = rng.choice(len(sections), size=6, replace=True)
        for k in picks:
            way[sections[k].index] += 1
        for pc in sections:
            if way[pc.index]:
                u[pc.index] = np.sort(rng.uniform(0.15, 0.95, way[pc.index]))
        sol = build_solution(l_axis, way, u)
        for k in range(len(sol.discs)):
            a = unique_area(k, sol, l_axis)
            b = unique_area_full(k, sol.discs)
            assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


class TestTheorem3And4:
    def test_overlap_containment_on_paths(self):
        """Ordered triples along axis paths: the A-C overlap lies inside B."""
        rng = np.random.default_rng(99)
        checked = 0
        for name in ("square", "l_hexagon", "hourglass_octagon", "t_shape"):
            axis = axis_of(name)
            for _ in range(40):
                triple = tree_path_positions(axis, rng, 3)
                if triple is None:
                    continue
                discs = [Disc(*t) for t in triple]
                if any(d.r <= 1e-9 for d in discs):
                    continue
                ac = region_area(discs, lambda c: c[0] and c[2])
                if ac <= 0:
                    continue
                leak = region_area(discs, lambda c: c[0] and c[2] and not c[1])
                assert leak <= 1e-9 * ac + 1e-14
                checked += 1
        assert checked > 50

    def test_junction_isolates_sides(self, tri_axis):
        """With the junction occupied, one side's uniquely covered area is
        unaffected by rearranging the other side."""
        rng = np.random.default_rng(5)
        secs = [pc.index for pc in tri_axis.pieces if pc.kind == "section"]
        j_piece = next(pc.index for pc in tri_axis.pieces if pc.kind == "junction")
        way = [0] * tri_axis.K
        way[j_piece] = 1
        way[secs[0]] = 2
        way[secs[1]] = 2
        fixed_u = np.sort(rng.uniform(0.2, 0.95, 2))

        def side1_area(other_u):
            sol = build_solution(
                tri_axis, way, {secs[0]: fixed_u, secs[1]: np.sort(other_u)}
            )
            n_side1 = [i for i, pl in enumerate(sol.placements) if pl.piece == secs[0]]
            return region_area(
                sol.discs,
                lambda c: any(c[i] for i in n_side1)
                and not any(c[i] for i in range(len(sol.discs)) if i not in n_side1),
            )

        base = side1_area(np.array([0.3, 0.8]))
        for _ in range(4):
            variant = side1_area(rng.uniform(0.15, 0.95, 2))
            assert variant == pytest.approx(base, abs=1e-9)
