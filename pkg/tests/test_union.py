import math

import numpy as np
import pytest

from discfill import _union
from discfill.coverage import union_area
from discfill.geometry import Disc

TWO_DISC_UNION = 2 * math.pi - (2 * math.acos(0.5) - 0.5 * math.sqrt(3))


def mc_union(x, y, r, rng, samples=1_000_000):
    lo = np.array([np.min(x - r), np.min(y - r)])
    hi = np.array([np.max(x + r), np.max(y + r)])
    pts = rng.uniform(lo, hi, size=(samples, 2))
    inside = (
        (pts[:, 0][:, None] - x) ** 2 + (pts[:, 1][:, None] - y) ** 2 < (r**2)[None, :]
    ).any(axis=1)
    box = float(np.prod(hi - lo))
    frac = inside.mean()
    return frac * box, box * math.sqrt(max(frac * (1 - frac), 1e-12) / samples)


class TestUnionAreaValues:
    def test_single_disc(self):
        assert union_area([Disc(0, 0, 1)]) == pytest.approx(math.pi, abs=1e-12)

    def test_two_unit_discs_distance_one(self):
        # oracle: closed-form lens; cross-checked by Monte Carlo below
        got = union_area([Disc(0, 0, 1), Disc(1, 0, 1)])
        assert got == pytest.approx(TWO_DISC_UNION, abs=1e-12)
        assert got == pytest.approx(5.05481561, abs=1e-7)

    def test_two_discs_monte_carlo(self):
        rng = np.random.default_rng(11)
        x = np.array([0.0, 1.0])
        y = np.zeros(2)
        r = np.ones(2)
        mc, sigma = mc_union(x, y, r, rng, samples=2_000_000)
        assert abs(union_area([Disc(0, 0, 1), Disc(1, 0, 1)]) - mc) < 3 * sigma

    def test_contained_disc(self):
        assert union_area([Disc(0, 0, 1), Disc(0, 0, 0.5)]) == pytest.approx(math.pi)

    def test_coincident_discs(self):
        assert union_area([Disc(0, 0, 1), Disc(0, 0, 1)]) == pytest.approx(math.pi)

    def test_disjoint(self):
        assert union_area([Disc(0, 0, 1), Disc(5, 0, 2)]) == pytest.approx(5 * math.pi)

    def test_tangent_treated_as_disjoint(self):
        assert union_area([Disc(0, 0, 1), Disc(2, 0, 1)]) == pytest.approx(2 * math.pi)

    def test_zero_radius(self):
        assert union_area([Disc(0, 0, 0.0), Disc(0.3, 0, 1)]) == pytest.approx(math.pi)

    def test_empty(self):
        assert union_area([]) == 0.0

    def test_hole_in_union(self):
        # Ring of discs enclosing an uncovered hole: Green's theorem over
        # boundary arcs must subtract the hole automatically.
        k = 8
        centers = [(2 * math.cos(2 * math.pi * i / k), 2 * math.sin(2 * math.pi * i / k)) for i in range(k)]
        discs = [Disc(cx, cy, 1.1) for cx, cy in centers]
        rng = np.random.default_rng(5)
        x = np.array([d.x for d in discs])
        y = np.array([d.y for d in discs])
        r = np.array([d.r for d in discs])
        mc, sigma = mc_union(x, y, r, rng, samples=2_000_000)
        assert abs(union_area(discs) - mc) < 3 * sigma


class TestKernelPaths:
    def test_numpy_matches_numba_random(self):
        if not _union.USING_NUMBA:
            pytest.skip("numba disabled in this environment")
        rng = np.random.default_rng(0)
        for _ in range(40):
            n = int(rng.integers(1, 14))
            x = rng.uniform(-1, 1, n)
            y = rng.uniform(-1, 1, n)
            r = rng.uniform(0.05, 0.9, n)
            a = _union.union_area_numpy(x, y, r)
            b = _union.IMPLEMENTATIONS["numba"](x, y, r)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

    def test_batch_matches_single(self):
        rng = np.random.default_rng(1)
        xs = rng.uniform(-1, 1, (6, 5))
        ys = rng.uniform(-1, 1, (6, 5))
        rs = rng.uniform(0.1, 0.7, (6, 5))
        batch = _union.union_area_batch(xs, ys, rs)
        for g in range(6):
            assert batch[g] == pytest.approx(
                _union.union_area(xs[g], ys[g], rs[g]), rel=1e-12
            )

    def test_env_flag_selects_numpy(self, monkeypatch):
        monkeypatch.setenv("DISCFILL_DISABLE_NUMBA", "1")
        import importlib
        import subprocess
        import sys

        code = (
            "import discfill._union as u; print(u.USING_NUMBA)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"DISCFILL_DISABLE_NUMBA": "1", "PATH": "/usr/bin:/bin"},
        )
        assert out.stdout.strip() == "False"

    def test_random_sets_vs_monte_carlo(self):
        rng = np.random.default_rng(2024)
        for _ in range(6):
            n = int(rng.integers(2, 12))
            x = rng.uniform(-1, 1, n)
            y = rng.uniform(-1, 1, n)
            r = rng.uniform(0.05, 0.8, n)
            mc, sigma = mc_union(x, y, r, rng, samples=400_000)
            assert abs(_union.union_area(x, y, r) - mc) < 3.5 * sigma
