import math

import numpy as np
import pytest

from discfill.geometry import Polygon
from discfill.medial_axis import compute_medial_axis

SQ3 = math.sqrt(3.0)

SHAPES = {
    "square": [(-1, -1), (1, -1), (1, 1), (-1, 1)],
    "rect_4x1": [(0, 0), (4, 0), (4, 1), (0, 1)],
    "tri_equilateral": [(0, 0), (2, 0), (1, SQ3)],
    "tri_30_60_90": [(0, 0), (SQ3, 0), (0, 1)],
    "l_hexagon": [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)],
    "hourglass_octagon": [
        (0, 0), (2, 1), (4.2, 0), (5, 1.6), (4, 3.1), (2, 2.05), (-0.2, 3), (-1, 1.4),
    ],
    "t_shape": [(0, 0), (3, 0), (3, 1), (2, 1), (2, 2.5), (1, 2.5), (1, 1), (0, 1)],
}

_axis_cache = {}


@pytest.fixture(scope="session")
def shapes():
    return {name: Polygon(v) for name, v in SHAPES.items()}


def axis_of(name):
    if name not in _axis_cache:
        _axis_cache[name] = compute_medial_axis(Polygon(SHAPES[name]))
    return _axis_cache[name]


@pytest.fixture(scope="session")
def square_axis():
    return axis_of("square")


@pytest.fixture(scope="session")
def tri_axis():
    return axis_of("tri_equilateral")


@pytest.fixture(scope="session")
def rect_axis():
    return axis_of("rect_4x1")


@pytest.fixture(scope="session")
def l_axis():
    return axis_of("l_hexagon")


@pytest.fixture(scope="session")
def right_tri_axis():
    return axis_of("tri_30_60_90")


def random_simple_polygon(rng, n_lo=4, n_hi=9):
    """Star-shaped random polygon around the origin (always simple).

    Every angular gap must stay below pi, otherwise the edge spanning the
    wide gap can cross the rest of the boundary.
    """
    n = int(rng.integers(n_lo, n_hi + 1))
    while True:
        angles = np.sort(rng.uniform(0, 2 * math.pi, n))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
        if np.min(gaps) >= 0.15 and np.max(gaps) <= math.pi - 0.1:
            break
    radii = rng.uniform(0.4, 1.6, n)
    pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    return Polygon(pts)


def tree_path_positions(axis, rng, count=3):
    """Sample `count` ordered maximal discs along one random tree path.

    Returns a list of (x, y, r) ordered along the path, or None when the
    axis has fewer than two leaf-ish nodes.
    """
    # Node adjacency via branches.
    adj = {}
    for b in axis.branches:
        adj.setdefault(b.node0, []).append((b.node1, b.index))
        adj.setdefault(b.node1, []).append((b.node0, b.index))
    nodes = sorted(adj)
    if len(nodes) < 2:
        return None
    a, b_node = rng.choice(nodes, size=2, replace=False)
    # BFS path.
    prev = {a: None}
    queue = [a]
    while queue:
        cur = queue.pop(0)
        if cur == b_node:
            break
        for nxt, b_idx in adj[cur]:
            if nxt not in prev:
                prev[nxt] = (cur, b_idx)
                queue.append(nxt)
    if b_node not in prev:
        return None
    hops = []
    cur = b_node
    while prev[cur] is not None:
        par, b_idx = prev[cur]
        hops.append((par, cur, b_idx))
        cur = par
    hops.reverse()
    # Arclength positions along the concatenated path.
    lengths = []
    for (_, _, b_idx) in hops:
        lengths.append(axis.branches[b_idx].length)
    total = float(np.sum(lengths))
    if total <= 0:
        return None
    s_samples = np.sort(rng.uniform(0.05 * total, 0.95 * total, count))
    out = []
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    for s in s_samples:
        k = min(int(np.searchsorted(cum, s, side="right")) - 1, len(hops) - 1)
        frm, to, b_idx = hops[k]
        br = axis.branches[b_idx]
        local = s - cum[k]
        if frm == br.node0:
            t = br.t_at_arclength(br.t0, br.t1, local)
        else:
            t = br.t_at_arclength(br.t1, br.t0, local)
        q = br.point(float(t))
        out.append((float(q[0]), float(q[1]), float(br.radius(float(t)))))
    return out
