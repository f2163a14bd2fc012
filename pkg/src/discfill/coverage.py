"""Evaluation of the filling measure: union areas, per-disc contributions,
overlap reports and the neighbor relation along the medial axis.

The union area itself is computed by the kernels in ``_union``.  This module
adds the depth-weighted quantities (how much area a disc shares with exactly
``i`` others) via a full circle-arrangement sweep: every circle is split at
all pairwise intersection points and each arc is integrated with a
coefficient derived from the covering sets on its two sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _union
from .geometry import Disc, GeometryError, Polygon, disc_inside

TWO_PI = 2.0 * math.pi


@dataclass
class Placement:
    """Location of a disc on the medial axis: a piece index plus the
    normalized coordinate along it (ignored for junction pieces)."""

    piece: int
    u: float = 0.0


@dataclass
class FillingSolution:
    """A set of discs inside a polygon together with its filling measure."""

    discs: list[Disc]
    phi: float
    placements: list[Placement] | None = None
    way: tuple[int, ...] | None = None
    method: str = "ha"
    converged: bool = True
    diagnostics: list[str] = field(default_factory=list)
    trace: list[float] | None = None  # accepted objective values per iteration

    @property
    def n(self) -> int:
        return len(self.discs)


@dataclass
class OverlapReport:
    unique_area: np.ndarray
    contribution: np.ndarray
    lens: np.ndarray
    union_area: float
    diagnostics: list[str] = field(default_factory=list)


def _disc_arrays(discs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if len(discs) == 0:
        return np.empty(0), np.empty(0), np.empty(0)
    if isinstance(discs[0], Disc):
        arr = np.array([[d.x, d.y, d.r] for d in discs], float)
    else:
        arr = np.asarray(discs, float).reshape(len(discs), 3)
    return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()


def union_area(discs, tol: float = 1e-12) -> float:
    """Exact area of the union of a list of discs."""
    x, y, r = _disc_arrays(discs)
    return _union.union_area(x, y, r, tol)


def phi(sol: FillingSolution, p: Polygon) -> float:
    """Covered fraction of the polygon; rejects discs poking outside."""
    for d in sol.discs:
        if not disc_inside(p, d, p.tol * 10.0):
            raise GeometryError(f"disc {d} is not inside the polygon")
    if not sol.discs:
        return 0.0
    return union_area(sol.discs) / p.area


def lens_area(d: float, r1: float, r2: float) -> float:
    """Intersection area of two discs at center distance d."""
    if d >= r1 + r2:
        return 0.0
    small = min(r1, r2)
    if d <= abs(r1 - r2):
        return math.pi * small * small
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
    tri = 0.5 * math.sqrt(
        max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
    )
    return r1 * r1 * a1 + r2 * r2 * a2 - tri


def _arrangement_arcs(x, y, r, tol):
    """Split every circle at its intersection points.

    Yields (i, theta_a, theta_b, cover) where cover[j] says whether the
    region just inside circle i along this arc lies inside disc j.
    """
    n = x.size
    arcs = []
    for i in range(n):
        if r[i] <= tol:
            continue
        cuts = []
        for j in range(n):
            if j == i or r[j] <= tol:
                continue
            d = math.hypot(x[j] - x[i], y[j] - y[i])
            if d >= r[i] + r[j] - tol or d <= abs(r[i] - r[j]) + tol:
                continue
            ch = (d * d + r[i] ** 2 - r[j] ** 2) / (2.0 * d * r[i])
            half = math.acos(min(1.0, max(-1.0, ch)))
            base = math.atan2(y[j] - y[i], x[j] - x[i])
            cuts.append((base - half) % TWO_PI)
            cuts.append((base + half) % TWO_PI)
        if cuts:
            cs = np.sort(np.array(cuts))
            starts = cs
            ends = np.roll(cs, -1).copy()
            ends[-1] += TWO_PI
        else:
            starts = np.array([0.0])
            ends = np.array([TWO_PI])
        mids = 0.5 * (starts + ends)
        px = x[i] + r[i] * np.cos(mids)
        py = y[i] + r[i] * np.sin(mids)
        dx = px[:, None] - x[None, :]
        dy = py[:, None] - y[None, :]
        cover = dx * dx + dy * dy < (r * r)[None, :]
        cover[:, i] = True
        cover[:, r <= tol] = False
        for k in range(len(starts)):
            arcs.append((i, float(starts[k]), float(ends[k]), cover[k]))
    return arcs


def _green_term(i, a, b, x, y, r) -> float:
    return r[i] * r[i] * (b - a) + r[i] * (
        x[i] * (math.sin(b) - math.sin(a)) - y[i] * (math.cos(b) - math.cos(a))
    )


def contributions(discs, tol: float = 1e-12) -> OverlapReport:
    """Per-disc contributions: unique area plus 1/i of each i-fold overlap.

    Radii receive a deterministic 1e-12 relative jitter before the sweep so
    that coincident circles and mutually tangent triples cannot produce
    numerically coincident arcs; the jitter is recorded in diagnostics.
    """
    x, y, r0 = _disc_arrays(discs)
    n = x.size
    report = OverlapReport(
        unique_area=np.zeros(n),
        contribution=np.zeros(n),
        lens=np.zeros((n, n)),
        union_area=0.0,
    )
    if n == 0:
        return report
    jitter = 1e-12 * (1.0 + np.arange(n))
    r = r0 * (1.0 + jitter)
    report.diagnostics.append("radii jittered by <=%.1e relative" % jitter[-1])

    for i in range(n):
        for j in range(i + 1, n):
            d = math.hypot(x[j] - x[i], y[j] - y[i])
            report.lens[i, j] = report.lens[j, i] = lens_area(d, r0[i], r0[j])

    union = 0.0
    for i, a, b, cover in _arrangement_arcs(x, y, r, tol):
        term = 0.5 * _green_term(i, a, b, x, y, r)
        d_in = int(np.sum(cover))
        out = cover.copy()
        out[i] = False
        d_out = d_in - 1
        report.contribution[cover] += term / d_in
        if d_out > 0:
            report.contribution[out] -= term / d_out
        else:
            union += term
        if d_in == 1:
            report.unique_area[i] += term
        if d_out == 1:
            report.unique_area[np.argmax(out)] -= term
    report.union_area = union
    return report


def region_area(discs, predicate, tol: float = 1e-12) -> float:
    """Area of the region where the covering set satisfies ``predicate``.

    ``predicate`` receives a boolean cover row (which discs cover the
    region) and must be False for the empty set.
    """
    x, y, r = _disc_arrays(discs)
    if x.size == 0:
        return 0.0
    total = 0.0
    for i, a, b, cover in _arrangement_arcs(x, y, r, tol):
        out = cover.copy()
        out[i] = False
        w_in = 1.0 if predicate(cover) else 0.0
        w_out = 1.0 if (out.any() and predicate(out)) else 0.0
        if w_in != w_out:
            total += 0.5 * _green_term(i, a, b, x, y, r) * (w_in - w_out)
    return total


# ----------------------------------------------------------------------
# Neighbors along the medial axis
# ----------------------------------------------------------------------


def neighbors(sol: FillingSolution, axis) -> list[set[int]]:
    """Adjacency between discs: pairs connected by an axis path that does
    not traverse a third disc center."""
    if sol.placements is None or len(sol.placements) != len(sol.discs):
        raise GeometryError("solution has no axis placements")
    _check_on_axis(sol, axis)

    # Tokens: ("n", node_id) for bare axis nodes, ("d", k) for disc beads.
    node_owner: dict[int, int] = {}
    for k, pl in enumerate(sol.placements):
        piece = axis.pieces[pl.piece]
        if piece.kind == "junction":
            node_owner[piece.junction] = k

    def node_token(node_id):
        if node_id in node_owner:
            return ("d", node_owner[node_id])
        return ("n", node_id)

    adj: dict[tuple, set] = {}

    def connect(t1, t2):
        adj.setdefault(t1, set()).add(t2)
        adj.setdefault(t2, set()).add(t1)

    per_piece: dict[int, list[tuple[float, int]]] = {}
    for k, pl in enumerate(sol.placements):
        piece = axis.pieces[pl.piece]
        if piece.kind == "section":
            per_piece.setdefault(pl.piece, []).append((pl.u, k))

    for piece in axis.pieces:
        if piece.kind != "section":
            continue
        seq = [node_token(piece.node_u0)]
        for _, k in sorted(per_piece.get(piece.index, [])):
            seq.append(("d", k))
        seq.append(node_token(piece.node_u1))
        for a, b in zip(seq, seq[1:]):
            if a != b:
                connect(a, b)

    result = [set() for _ in sol.discs]
    for k in range(len(sol.discs)):
        start = ("d", k)
        if start not in adj:
            continue
        seen = {start}
        stack = [start]
        while stack:
            tok = stack.pop()
            for nxt in adj.get(tok, ()):
                if nxt in seen:
                    continue
                seen.add(nxt)
                if nxt[0] == "d":
                    result[k].add(nxt[1])
                else:
                    stack.append(nxt)
    return result


def _check_on_axis(sol: FillingSolution, axis):
    tol = axis.polygon.tol * 1e3
    for d, pl in zip(sol.discs, sol.placements):
        piece = axis.pieces[pl.piece]
        if piece.kind == "junction":
            pos = axis.node_pos[piece.junction]
            rr = axis.node_radius[piece.junction]
        else:
            pos, rr = piece.point_at(pl.u)
        if math.hypot(d.x - pos[0], d.y - pos[1]) > tol or abs(d.r - rr) > tol:
            raise GeometryError("placement does not lie on the medial axis")


def unique_area(k: int, sol: FillingSolution, axis=None, neighbor_sets=None) -> float:
    """Uniquely covered area of disc k, using only its neighbors."""
    if neighbor_sets is None:
        neighbor_sets = neighbors(sol, axis)
    group = [k] + sorted(neighbor_sets[k])
    discs = [sol.discs[i] for i in group]

    def only_first(cover):
        return bool(cover[0]) and not cover[1:].any()

    return region_area(discs, only_first)


def unique_area_full(k: int, discs) -> float:
    """Uniquely covered area of disc k against the entire disc set."""
    order = [k] + [i for i in range(len(discs)) if i != k]
    reordered = [discs[i] for i in order]

    def only_first(cover):
        return bool(cover[0]) and not cover[1:].any()

    return region_area(reordered, only_first)


def validate_solution(sol: FillingSolution, p: Polygon, tol_phi: float = 1e-10) -> None:
    """Re-validate a solution: discs inside, stored phi matches recomputation."""
    fresh = phi(sol, p)
    if abs(fresh - sol.phi) > tol_phi:
        raise GeometryError(
            f"stored phi {sol.phi!r} differs from recomputed {fresh!r}"
        )
