"""Medial axis of a simple polygon as a graph of parameterized branches.

Construction walks all pairs of boundary sites (open edges and reflex
vertices), builds the exact bisector curve of each pair, and clips it to the
parameter intervals where the pair is the nearest boundary feature set.
Interval endpoints are found analytically: equidistance with any third
feature reduces to a linear or quadratic equation for every curve type, so
no sampling resolution is involved.

Branch taxonomy:

* ``edge_edge``     straight segment, linear radius  r(t) = r0 + c t
* ``vertex_edge``   parabolic arc, radius            r(t) = r0 (1 + t^2)
* ``vertex_vertex`` straight segment, radius         r(t) = sqrt(a^2 + t^2)

The axis is then decomposed into pieces: junction nodes (degree >= 3) plus
maximal chains of branch sections with non-decreasing radius, the search
unit used by the filling optimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Feature, GeometryError, Polygon


@dataclass
class Branch:
    index: int
    case: str  # "edge_edge" | "vertex_edge" | "vertex_vertex"
    parents: tuple[Feature, Feature]
    t0: float
    t1: float
    origin: np.ndarray
    direction: np.ndarray | None = None  # line cases
    xdir: np.ndarray | None = None  # parabola frame
    ydir: np.ndarray | None = None
    c: float = 0.0  # edge_edge slope
    r0: float = 0.0  # edge_edge offset / parabola focal half-distance
    a: float = 0.0  # vertex_vertex half separation
    node0: int = -1
    node1: int = -1

    # -- geometry ------------------------------------------------------

    def point(self, t):
        t = np.asarray(t, float)
        if self.case == "vertex_edge":
            return (
                self.origin[None, :]
                + (2.0 * self.r0 * t)[..., None] * self.xdir[None, :]
                + (self.r0 * t * t)[..., None] * self.ydir[None, :]
            ).reshape(t.shape + (2,))
        return (self.origin[None, :] + t[..., None] * self.direction[None, :]).reshape(
            t.shape + (2,)
        )

    def radius(self, t):
        t = np.asarray(t, float)
        if self.case == "edge_edge":
            return self.r0 + self.c * t
        if self.case == "vertex_vertex":
            return np.sqrt(self.a * self.a + t * t)
        return self.r0 * (1.0 + t * t)

    def radius_prime_arc(self, t):
        """dr/ds with s the arclength parameter."""
        t = np.asarray(t, float)
        if self.case == "edge_edge":
            return np.full_like(t, self.c)
        if self.case == "vertex_vertex":
            return t / np.sqrt(self.a * self.a + t * t)
        return t / np.sqrt(1.0 + t * t)

    def speed(self, t):
        """|dq/dt|."""
        t = np.asarray(t, float)
        if self.case == "vertex_edge":
            return 2.0 * self.r0 * np.sqrt(1.0 + t * t)
        return np.ones_like(t)

    def _s(self, t):
        if self.case != "vertex_edge":
            return t
        t = np.asarray(t, float)
        return self.r0 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))

    def arclength(self, ta, tb) -> float:
        return float(abs(self._s(tb) - self._s(ta)))

    @property
    def length(self) -> float:
        return self.arclength(self.t0, self.t1)

    def t_at_arclength(self, t_from: float, t_to: float, s):
        """Parameter at arclength s measured from t_from toward t_to."""
        s = np.asarray(s, float)
        sign = 1.0 if t_to >= t_from else -1.0
        if self.case != "vertex_edge":
            return t_from + sign * s
        target = self._s(t_from) + sign * s
        t = t_from + sign * s / max(self.speed(t_from), 1e-300)
        for _ in range(60):
            f = self._s(t) - target
            df = np.maximum(self.speed(t), 1e-300)
            step = f / df
            t = t - step
            if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(t))):
                break
        return t


@dataclass
class JunctionPoint:
    node: int
    position: np.ndarray
    radius: float
    degree: int
    branches: tuple[int, ...]


@dataclass
class Piece:
    index: int
    kind: str  # "section" | "junction"
    junction: int | None = None
    # Ordered (branch index, t_from, t_to); radius is non-decreasing along
    # the traversal from t_from of the first segment to t_to of the last.
    segments: list[tuple[int, float, float]] = field(default_factory=list)
    node_u0: int = -1
    node_u1: int = -1
    length: float = 0.0
    _axis: "MedialAxis" = None
    _cum: np.ndarray | None = None

    def point_at(self, u):
        """Map u in [0, 1] to (position, radius); u=0 is the low-radius end."""
        if self.kind != "section":
            raise GeometryError("point_at is undefined for junction pieces")
        scalar = np.isscalar(u)
        u = np.atleast_1d(np.asarray(u, float))
        if np.any((u < -1e-12) | (u > 1.0 + 1e-12)):
            raise GeometryError("u outside [0, 1]")
        u = np.clip(u, 0.0, 1.0)
        s = u * self.length
        seg_idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self.segments) - 1)
        pos = np.empty((len(u), 2))
        rad = np.empty(len(u))
        for si in np.unique(seg_idx):
            mask = seg_idx == si
            b_idx, t_from, t_to = self.segments[si]
            br = self._axis.branches[b_idx]
            t = br.t_at_arclength(t_from, t_to, s[mask] - self._cum[si])
            pos[mask] = br.point(t)
            rad[mask] = br.radius(t)
        if scalar:
            return pos[0], float(rad[0])
        return pos, rad

    def radius_bounds(self) -> tuple[float, float]:
        _, r0 = self.point_at(0.0)
        _, r1 = self.point_at(1.0)
        return r0, r1


class MedialAxis:
    """Branches + junction nodes + piece decomposition for one polygon."""

    def __init__(self, polygon: Polygon, branches, node_pos, node_radius, diagnostics):
        self.polygon = polygon
        self.branches: list[Branch] = branches
        self.node_pos = node_pos
        self.node_radius = node_radius
        self.n_branch_nodes = len(node_pos)
        self.node_degree = np.zeros(len(node_pos), int)
        for br in branches:
            self.node_degree[br.node0] += 1
            self.node_degree[br.node1] += 1
        self.diagnostics: list[str] = diagnostics
        self.junctions: list[JunctionPoint] = []
        for node in np.nonzero(self.node_degree >= 3)[0]:
            incident = tuple(
                b.index for b in branches if node in (b.node0, b.node1)
            )
            self.junctions.append(
                JunctionPoint(
                    node=int(node),
                    position=node_pos[node],
                    radius=float(node_radius[node]),
                    degree=int(self.node_degree[node]),
                    branches=incident,
                )
            )
        self.pieces: list[Piece] = []
        self._branch_to_piece: dict[int, list[tuple[int, int]]] = {}
        self._build_pieces()
        self.junction_piece: dict[int, int] = {
            p.junction: p.index for p in self.pieces if p.kind == "junction"
        }

    # ------------------------------------------------------------------

    @property
    def K(self) -> int:
        return len(self.pieces)

    @property
    def J(self) -> int:
        return len(self.junctions)

    def piece_nodes(self, piece: Piece) -> tuple[int, ...]:
        if piece.kind == "junction":
            return (piece.junction,)
        return (piece.node_u0, piece.node_u1)

    def piece_adjacency(self) -> dict[int, set[int]]:
        """Adjacency of pieces.  At a junction node the sections connect
        only through the junction piece (so an occupied junction separates
        them); elsewhere pieces sharing a node touch directly."""
        at_node: dict[int, set[int]] = {}
        for p in self.pieces:
            for nd in self.piece_nodes(p):
                at_node.setdefault(nd, set()).add(p.index)
        adj: dict[int, set[int]] = {p.index: set() for p in self.pieces}
        for nd, group in at_node.items():
            jp = self.junction_piece.get(nd)
            if jp is not None:
                for a in group:
                    if a != jp:
                        adj[a].add(jp)
                        adj[jp].add(a)
            else:
                for a in group:
                    adj[a] |= group - {a}
        return adj

    # ------------------------------------------------------------------

    def _build_pieces(self):
        tol_r = 1e-9 * self.polygon.bbox_diag
        teps = 1e-12
        # Monotone sections: (branch, t_from, t_to, node_from, node_to)
        sections = []
        for br in self.branches:
            if br.case == "edge_edge":
                sections.append((br.index, br.t0, br.t1, br.node0, br.node1))
                continue
            if br.t0 < -teps and br.t1 > teps:
                # Interior radius minimum at t=0: split into two sections.
                split = self._split_node(br)
                sections.append((br.index, 0.0, br.t0, split, br.node0))
                sections.append((br.index, 0.0, br.t1, split, br.node1))
            else:
                r_a = float(br.radius(br.t0))
                r_b = float(br.radius(br.t1))
                if r_a <= r_b:
                    sections.append((br.index, br.t0, br.t1, br.node0, br.node1))
                else:
                    sections.append((br.index, br.t1, br.t0, br.node1, br.node0))

        # Chain sections through degree-2 nodes while radius keeps rising.
        # A chain is a list of (section index, flipped) traversed from its
        # minimum-radius end; chains that are constant throughout may be
        # reversed to continue another chain.
        def is_const(si):
            b, ta, tb, _, _ = sections[si]
            br = self.branches[b]
            return abs(float(br.radius(ta)) - float(br.radius(tb))) <= tol_r

        chains = [
            {
                "secs": [(si, False)],
                "u0": sections[si][3],
                "u1": sections[si][4],
                "const": is_const(si),
            }
            for si in range(len(sections))
        ]

        def reversed_chain(ch):
            return {
                "secs": [(si, not fl) for si, fl in reversed(ch["secs"])],
                "u0": ch["u1"],
                "u1": ch["u0"],
                "const": ch["const"],
            }

        merged = True
        while merged:
            merged = False
            ends_at: dict[int, list[tuple[int, str]]] = {}
            for ci, ch in enumerate(chains):
                ends_at.setdefault(ch["u0"], []).append((ci, "u0"))
                ends_at.setdefault(ch["u1"], []).append((ci, "u1"))
            for node, ends in ends_at.items():
                if len(ends) != 2:
                    continue
                (ca, ka), (cb, kb) = ends
                if ca == cb:
                    continue
                P, Q = chains[ca], chains[cb]
                if ka == "u1" and kb == "u0":
                    combo = (P, Q)
                elif ka == "u0" and kb == "u1":
                    combo = (Q, P)
                elif ka == "u1" and kb == "u1" and Q["const"]:
                    combo = (P, reversed_chain(Q))
                elif ka == "u1" and kb == "u1" and P["const"]:
                    combo = (Q, reversed_chain(P))
                elif ka == "u0" and kb == "u0" and Q["const"]:
                    combo = (reversed_chain(Q), P)
                elif ka == "u0" and kb == "u0" and P["const"]:
                    combo = (reversed_chain(P), Q)
                else:
                    continue
                first, second = combo
                new = {
                    "secs": first["secs"] + second["secs"],
                    "u0": first["u0"],
                    "u1": second["u1"],
                    "const": first["const"] and second["const"],
                }
                chains = [c for i, c in enumerate(chains) if i not in (ca, cb)]
                chains.append(new)
                merged = True
                break

        for ch in chains:
            segs = []
            for si, flip in ch["secs"]:
                b, ta, tb, _, _ = sections[si]
                segs.append((b, tb, ta) if flip else (b, ta, tb))
            piece = Piece(
                index=len(self.pieces),
                kind="section",
                segments=segs,
                node_u0=ch["u0"],
                node_u1=ch["u1"],
                _axis=self,
            )
            lens = [
                self.branches[b].arclength(ta, tb) for b, ta, tb in segs
            ]
            piece._cum = np.concatenate([[0.0], np.cumsum(lens)])[:-1]
            piece.length = float(np.sum(lens))
            self.pieces.append(piece)
            for order, (si, _) in enumerate(ch["secs"]):
                b = sections[si][0]
                self._branch_to_piece.setdefault(b, []).append((piece.index, order))
            r_lo, r_hi = piece.radius_bounds()
            if r_lo > r_hi + tol_r:
                self.diagnostics.append(
                    f"piece {piece.index}: radius not monotone ({r_lo:.3g} > {r_hi:.3g})"
                )
        for node in np.nonzero(self.node_degree >= 3)[0]:
            self.pieces.append(
                Piece(
                    index=len(self.pieces),
                    kind="junction",
                    junction=int(node),
                    _axis=self,
                )
            )

    def node_degree_of(self, node) -> int:
        return int(self.node_degree[node])

    def _split_node(self, br: Branch) -> int:
        pos = br.point(0.0)
        rad = float(br.radius(0.0))
        self.node_pos = np.vstack([self.node_pos, pos[None, :]])
        self.node_radius = np.append(self.node_radius, rad)
        self.node_degree = np.append(self.node_degree, 2)
        return len(self.node_pos) - 1

    # ------------------------------------------------------------------

    def nearest_point(self, q) -> tuple[int, float, float]:
        """Project a point onto the axis: (piece index, u, distance)."""
        q = np.asarray(q, float)
        best = (None, None, math.inf)
        for br in self.branches:
            for t in self._candidate_ts(br, q):
                p = br.point(t)
                d = float(np.hypot(*(p - q)))
                if d < best[2]:
                    best = (br.index, float(t), d)
        b_idx, t, d = best
        piece_idx, u = self._locate(b_idx, t)
        return piece_idx, u, d

    def _candidate_ts(self, br: Branch, q):
        cands = [br.t0, br.t1]
        if br.case == "vertex_edge":
            w = br.origin - q
            roots = np.roots(
                [br.r0, 0.0, float(np.dot(w, br.ydir)) + 2.0 * br.r0, float(np.dot(w, br.xdir))]
            )
            for rt in roots:
                if abs(rt.imag) < 1e-9:
                    t = float(rt.real)
                    if br.t0 - 1e-12 <= t <= br.t1 + 1e-12:
                        cands.append(min(max(t, br.t0), br.t1))
        else:
            t = float(np.dot(q - br.origin, br.direction))
            cands.append(min(max(t, br.t0), br.t1))
        return cands

    def _locate(self, branch_idx: int, t: float) -> tuple[int, float]:
        br = self.branches[branch_idx]
        for piece_idx, order in self._branch_to_piece.get(branch_idx, []):
            piece = self.pieces[piece_idx]
            b, ta, tb = piece.segments[order]
            lo, hi = (ta, tb) if ta <= tb else (tb, ta)
            if lo - 1e-9 <= t <= hi + 1e-9:
                s = piece._cum[order] + br.arclength(ta, t)
                return piece_idx, float(min(max(s / piece.length, 0.0), 1.0))
        # Fall back to the first hosting piece endpoint.
        piece_idx, order = self._branch_to_piece[branch_idx][0]
        return piece_idx, 0.0

    def sample_maximal_discs(self, per_branch: int = 1000):
        """Interior samples of every branch: arrays (x, y, r)."""
        xs, ys, rs = [], [], []
        for br in self.branches:
            t = np.linspace(br.t0, br.t1, per_branch + 2)[1:-1]
            p = br.point(t)
            r = br.radius(t)
            xs.append(p[:, 0])
            ys.append(p[:, 1])
            rs.append(r)
        return np.concatenate(xs), np.concatenate(ys), np.concatenate(rs)


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


def radius_at(b: Branch, t: float) -> float:
    """Closed-form branch radius; t must lie in the branch interval."""
    if not (b.t0 - 1e-12 <= t <= b.t1 + 1e-12):
        raise GeometryError("parameter outside branch interval")
    return float(b.radius(float(t)))


class _Curve:
    """Unclipped bisector curve of a feature pair."""

    __slots__ = ("kind", "f1", "f2", "origin", "direction", "xdir", "ydir", "c", "r0", "a", "tmax")

    def __init__(self, kind, f1, f2, **kw):
        self.kind = kind
        self.f1 = f1
        self.f2 = f2
        self.origin = kw.get("origin")
        self.direction = kw.get("direction")
        self.xdir = kw.get("xdir")
        self.ydir = kw.get("ydir")
        self.c = kw.get("c", 0.0)
        self.r0 = kw.get("r0", 0.0)
        self.a = kw.get("a", 0.0)
        self.tmax = kw.get("tmax")

    def point(self, t):
        t = np.asarray(t, float)
        if self.kind == "parabola":
            return (
                self.origin[None, :]
                + (2.0 * self.r0 * t)[..., None] * self.xdir[None, :]
                + (self.r0 * t * t)[..., None] * self.ydir[None, :]
            ).reshape(t.shape + (2,))
        return (self.origin[None, :] + t[..., None] * self.direction[None, :]).reshape(t.shape + (2,))

    def radius(self, t):
        t = np.asarray(t, float)
        if self.kind == "line":
            return self.r0 + self.c * t
        if self.kind == "pointpair":
            return np.sqrt(self.a * self.a + t * t)
        return self.r0 * (1.0 + t * t)


def _perp(v):
    return np.array([-v[1], v[0]])


def _line_intersection(p1, u1, p2, u2):
    cross = u1[0] * u2[1] - u1[1] * u2[0]
    w = p2 - p1
    s = (w[0] * u2[1] - w[1] * u2[0]) / cross
    return p1 + s * u1


def _pair_curves(poly: Polygon, f1: Feature, f2: Feature, diag: float) -> list[_Curve]:
    """Bisector curve candidates for one site pair."""
    curves = []
    k1, i1 = f1
    k2, i2 = f2
    if k1 == "edge" and k2 == "edge":
        p1, u1 = poly.edge_start[i1], poly.edge_dir[i1]
        p2, u2 = poly.edge_start[i2], poly.edge_dir[i2]
        cross = abs(u1[0] * u2[1] - u1[1] * u2[0])
        if cross < 1e-9:
            n1 = _perp(u1)
            h = float(np.dot(p2 - p1, n1))
            if abs(h) < poly.tol:
                return []  # collinear edges: no interior bisector
            origin = p1 + 0.5 * h * n1
            # Re-center near the bbox for conditioning.
            mid = 0.5 * (poly.bbox[0] + poly.bbox[1])
            origin = origin + float(np.dot(mid - origin, u1)) * u1
            curves.append(
                _Curve(
                    "line", f1, f2,
                    origin=origin, direction=u1, r0=abs(h) / 2.0, c=0.0,
                    tmax=(-2.0 * diag, 2.0 * diag),
                )
            )
            return curves
        x = _line_intersection(p1, u1, p2, u2)
        mid = 0.5 * (poly.bbox[0] + poly.bbox[1])
        for base in (u1 + u2, u1 - u2):
            norm = float(np.hypot(*base))
            if norm < 1e-12:
                continue
            b = base / norm
            slope = abs(b[0] * u1[1] - b[1] * u1[0])
            if slope < 1e-12:
                continue
            s0 = float(np.dot(x - mid, b))  # position of x along the line
            if abs(s0) <= 4.0 * diag:
                # Intersection near the polygon: two rays with r = slope*t.
                reach = abs(s0) + 3.0 * diag
                for sgn in (1.0, -1.0):
                    curves.append(
                        _Curve(
                            "line", f1, f2,
                            origin=x, direction=sgn * b, r0=0.0, c=slope,
                            tmax=(0.0, reach),
                        )
                    )
            else:
                # Nearly parallel lines meeting far away: on the polygon
                # window the radius is linear with a bounded offset, so
                # rebase to the projection of the bbox center for
                # conditioning.
                origin = x - s0 * b
                curves.append(
                    _Curve(
                        "line", f1, f2,
                        origin=origin, direction=b,
                        r0=slope * abs(s0), c=-slope * np.sign(s0),
                        tmax=(-3.0 * diag, 3.0 * diag),
                    )
                )
        return curves
    if k1 == "vertex" and k2 == "vertex":
        q1 = poly.vertices[i1]
        q2 = poly.vertices[i2]
        sep = q2 - q1
        dist = float(np.hypot(*sep))
        if dist <= poly.tol:
            return []
        mid = 0.5 * (q1 + q2)
        d = _perp(sep / dist)
        curves.append(
            _Curve(
                "pointpair", f1, f2,
                origin=mid, direction=d, a=dist / 2.0,
                tmax=(-2.0 * diag, 2.0 * diag),
            )
        )
        return curves
    # vertex + edge
    if k1 == "vertex":
        fv, fe = f1, f2
    else:
        fv, fe = f2, f1
    v = poly.vertices[fv[1]]
    pe, ue = poly.edge_start[fe[1]], poly.edge_dir[fe[1]]
    ne = _perp(ue)
    h = float(np.dot(v - pe, ne))
    if abs(h) <= poly.tol:
        return []  # focus on the directrix: degenerate, never a branch
    ydir = ne * np.sign(h)
    r0 = abs(h) / 2.0
    foot = v - h * ne
    vertex = 0.5 * (v + foot)
    xdir = _perp(ydir)
    tmax = math.sqrt(3.0 * diag / r0)
    curves.append(
        _Curve(
            "parabola", fv, fe,
            origin=vertex, xdir=xdir, ydir=ydir, r0=r0,
            tmax=(-tmax, tmax),
        )
    )
    return curves


def _real_roots(coeffs, lo, hi):
    """Real roots of a polynomial (low degree) inside [lo, hi]."""
    coeffs = np.asarray(coeffs, float)
    nz = np.nonzero(np.abs(coeffs) > 0.0)[0]
    if nz.size == 0:
        return []
    coeffs = coeffs[nz[0]:]
    if len(coeffs) == 1:
        return []
    if len(coeffs) == 2:
        roots = np.array([-coeffs[1] / coeffs[0]])
    else:
        roots = np.roots(coeffs)
    out = []
    span = hi - lo
    for rt in roots:
        # Double roots of tangential configurations surface as conjugate
        # pairs with small imaginary parts; admit them generously, since a
        # spurious breakpoint is harmless while a missed one loses a branch.
        if abs(rt.imag) <= 1e-4 * max(1.0, abs(rt.real)):
            t = float(rt.real)
            if lo - 1e-9 * span <= t <= hi + 1e-9 * span:
                out.append(min(max(t, lo), hi))
    return out


def _equidistance_roots(curve: _Curve, poly: Polygon) -> list[float]:
    """Parameters where some third feature reaches distance r(t)."""
    lo, hi = curve.tmax
    roots: list[float] = []
    skip = {curve.f1, curve.f2}
    # Vertices (all of them): |q(t) - p|^2 = r(t)^2.
    for vi in range(poly.n):
        if ("vertex", vi) in skip:
            continue
        p = poly.vertices[vi]
        if curve.kind == "line":
            w = curve.origin - p
            c2 = 1.0 - curve.c * curve.c
            c1 = 2.0 * (float(np.dot(w, curve.direction)) - curve.r0 * curve.c)
            c0 = float(np.dot(w, w)) - curve.r0 * curve.r0
            roots += _real_roots([c2, c1, c0], lo, hi)
        elif curve.kind == "pointpair":
            w = curve.origin - p
            c1 = 2.0 * float(np.dot(w, curve.direction))
            c0 = float(np.dot(w, w)) - curve.a * curve.a
            roots += _real_roots([c1, c0], lo, hi)
        else:
            w = curve.origin - p
            c2 = 2.0 * curve.r0 * float(np.dot(w, curve.ydir)) + 2.0 * curve.r0**2
            c1 = 4.0 * curve.r0 * float(np.dot(w, curve.xdir))
            c0 = float(np.dot(w, w)) - curve.r0 * curve.r0
            roots += _real_roots([c2, c1, c0], lo, hi)
    # Edge lines, both signed sides.
    for ei in range(poly.n):
        if ("edge", ei) in skip:
            continue
        pe = poly.edge_start[ei]
        ne = _perp(poly.edge_dir[ei])
        if curve.kind in ("line", "pointpair"):
            alpha = float(np.dot(curve.origin - pe, ne))
            beta = float(np.dot(curve.direction, ne))
            if curve.kind == "line":
                for sgn in (1.0, -1.0):
                    roots += _real_roots(
                        [beta - sgn * curve.c, alpha - sgn * curve.r0], lo, hi
                    )
            else:
                roots += _real_roots(
                    [beta * beta - 1.0, 2.0 * alpha * beta, alpha * alpha - curve.a * curve.a],
                    lo,
                    hi,
                )
        else:
            A = float(np.dot(curve.origin - pe, ne))
            B = 2.0 * curve.r0 * float(np.dot(curve.xdir, ne))
            C = curve.r0 * float(np.dot(curve.ydir, ne))
            for sgn in (1.0, -1.0):
                roots += _real_roots(
                    [C - sgn * curve.r0, B, A - sgn * curve.r0], lo, hi
                )
    return roots


def _boundary_crossings(curve: _Curve, poly: Polygon) -> list[float]:
    lo, hi = curve.tmax
    out: list[float] = []
    for ei in range(poly.n):
        pe = poly.edge_start[ei]
        ne = _perp(poly.edge_dir[ei])
        if curve.kind in ("line", "pointpair"):
            beta = float(np.dot(curve.direction, ne))
            alpha = float(np.dot(curve.origin - pe, ne))
            ts = _real_roots([beta, alpha], lo, hi)
        else:
            A = float(np.dot(curve.origin - pe, ne))
            B = 2.0 * curve.r0 * float(np.dot(curve.xdir, ne))
            C = curve.r0 * float(np.dot(curve.ydir, ne))
            ts = _real_roots([C, B, A], lo, hi)
        for t in ts:
            q = curve.point(np.array([t]))[0]
            s = float(np.dot(q - pe, poly.edge_dir[ei]))
            if -poly.tol <= s <= poly.edge_len[ei] + poly.tol:
                out.append(t)
    return out


def compute_medial_axis(p: Polygon) -> MedialAxis:
    """Medial axis transform of a simple polygon."""
    diag = p.bbox_diag
    tol_valid = max(1e-9 * diag, 1e-13)
    # Sliver branches below the node-clustering tolerance are artifacts of
    # tangential degeneracies (their endpoints merge into one node anyway).
    min_len = 1e-7 * diag

    features: list[Feature] = [("edge", i) for i in range(p.n)]
    reflex = [("vertex", int(i)) for i in p.reflex_indices]
    sites = features + reflex

    diagnostics: list[str] = []
    raw_branches: list[tuple[_Curve, float, float]] = []

    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            f1, f2 = sites[a], sites[b]
            if f1[0] == "vertex" and f2[0] == "edge":
                f1, f2 = f2, f1
            if f1[0] == "edge" and f2[0] == "vertex":
                if f2[1] == f1[1] or f2[1] == (f1[1] + 1) % p.n:
                    continue  # vertex incident to the edge
            for curve in _pair_curves(p, f1, f2, diag):
                lo, hi = curve.tmax
                cuts = [lo, hi]
                cuts += _equidistance_roots(curve, p)
                cuts += _boundary_crossings(curve, p)
                cuts = sorted(cuts)
                merged = [cuts[0]]
                for t in cuts[1:]:
                    if t - merged[-1] > 1e-12 * max(1.0, abs(t)):
                        merged.append(t)
                valid_runs = []
                run_start = None
                for ta, tb in zip(merged, merged[1:]):
                    tm = 0.5 * (ta + tb)
                    ok = _midpoint_valid(curve, tm, p, tol_valid)
                    if ok and run_start is None:
                        run_start = ta
                    if not ok and run_start is not None:
                        valid_runs.append((run_start, ta))
                        run_start = None
                if run_start is not None:
                    valid_runs.append((run_start, merged[-1]))
                for ta, tb in valid_runs:
                    length = _curve_arclength(curve, ta, tb)
                    if length <= min_len:
                        continue
                    if length < 1e-6 * diag:
                        diagnostics.append(
                            f"short branch ({length:.3e}) between {curve.f1} and {curve.f2}"
                        )
                    raw_branches.append((curve, ta, tb))

    if not raw_branches:
        raise GeometryError("no medial axis branches found")

    branches = _finalize_branches(raw_branches, p)
    node_pos, node_radius = _cluster_nodes(branches, p, diagnostics)
    axis = MedialAxis(p, branches, node_pos, node_radius, diagnostics)

    if len(branches) != axis.n_branch_nodes - 1:
        diagnostics.append(
            f"axis graph is not a tree: {len(branches)} branches, "
            f"{axis.n_branch_nodes} nodes"
        )
    return axis


def _curve_arclength(curve: _Curve, ta, tb) -> float:
    if curve.kind != "parabola":
        return abs(tb - ta)

    def s(t):
        return curve.r0 * (t * math.sqrt(1 + t * t) + math.asinh(t))

    return abs(s(tb) - s(ta))


def _midpoint_valid(curve: _Curve, t: float, p: Polygon, tol: float) -> bool:
    q = curve.point(np.array([t]))[0]
    rr = float(curve.radius(np.array([t]))[0])
    if rr < -tol:
        return False
    if not p.contains(q):
        return False
    d1 = p.feature_distance(q, curve.f1)
    d2 = p.feature_distance(q, curve.f2)
    db = p.boundary_distance(q)
    return max(abs(d1 - rr), abs(d2 - rr), abs(db - rr)) <= tol


def _finalize_branches(raw, p: Polygon) -> list[Branch]:
    branches = []
    for curve, ta, tb in raw:
        if curve.kind == "line":
            origin = curve.point(np.array([ta]))[0]
            r_a = float(curve.radius(np.array([ta]))[0])
            r_b = float(curve.radius(np.array([tb]))[0])
            length = tb - ta
            if r_b >= r_a:
                direction = curve.direction
                r0, c = r_a, (r_b - r_a) / length
                t0, t1 = 0.0, length
            else:
                origin = curve.point(np.array([tb]))[0]
                direction = -curve.direction
                r0, c = r_b, (r_a - r_b) / length
                t0, t1 = 0.0, length
            branches.append(
                Branch(
                    index=len(branches), case="edge_edge",
                    parents=(curve.f1, curve.f2), t0=t0, t1=t1,
                    origin=origin, direction=direction, c=max(c, 0.0), r0=r0,
                )
            )
        elif curve.kind == "pointpair":
            branches.append(
                Branch(
                    index=len(branches), case="vertex_vertex",
                    parents=(curve.f1, curve.f2), t0=ta, t1=tb,
                    origin=curve.origin, direction=curve.direction, a=curve.a,
                )
            )
        else:
            branches.append(
                Branch(
                    index=len(branches), case="vertex_edge",
                    parents=(curve.f1, curve.f2), t0=ta, t1=tb,
                    origin=curve.origin, xdir=curve.xdir, ydir=curve.ydir,
                    r0=curve.r0,
                )
            )
    return branches


def _cluster_nodes(branches, p: Polygon, diagnostics) -> tuple[np.ndarray, np.ndarray]:
    tol_node = 1e-7 * p.bbox_diag
    endpoints = []
    for br in branches:
        endpoints.append(br.point(np.array([br.t0]))[0])
        endpoints.append(br.point(np.array([br.t1]))[0])
    endpoints = np.array(endpoints)
    labels = -np.ones(len(endpoints), int)
    centers: list[np.ndarray] = []
    for i, q in enumerate(endpoints):
        for ci, c in enumerate(centers):
            if np.hypot(*(q - c)) <= tol_node:
                labels[i] = ci
                break
        if labels[i] < 0:
            labels[i] = len(centers)
            centers.append(q)
    # Refine each cluster position to the mean, then Newton-polish
    # equidistance for junction-grade clusters.
    counts = np.bincount(labels, minlength=len(centers))
    node_pos = np.zeros((len(centers), 2))
    for i, q in enumerate(endpoints):
        node_pos[labels[i]] += q
    node_pos /= counts[:, None]

    feat_by_node: dict[int, set[Feature]] = {}
    for bi, br in enumerate(branches):
        br.node0 = int(labels[2 * bi])
        br.node1 = int(labels[2 * bi + 1])
        for nd in (br.node0, br.node1):
            feat_by_node.setdefault(nd, set()).update(br.parents)

    node_radius = np.zeros(len(centers))
    for nd in range(len(centers)):
        feats = sorted(feat_by_node.get(nd, set()))
        if counts[nd] >= 3 and len(feats) >= 3:
            node_pos[nd] = _refine_equidistant(node_pos[nd], feats, p)
        dists = [p.feature_distance(node_pos[nd], f) for f in feats]
        node_radius[nd] = float(np.mean(dists)) if dists else 0.0
    return node_pos, node_radius


def _refine_equidistant(q0, feats, p: Polygon):
    q = q0.copy()
    for _ in range(25):
        ds = []
        grads = []
        for f in feats:
            d = p.feature_distance(q, f)
            if f[0] == "vertex":
                v = p.vertices[f[1]]
                g = (q - v) / max(d, 1e-300)
            else:
                i = f[1]
                w = q - p.edge_start[i]
                t = min(max(float(np.dot(w, p.edge_vec[i]) / p.edge_len[i] ** 2), 0.0), 1.0)
                foot = p.edge_start[i] + t * p.edge_vec[i]
                g = (q - foot) / max(d, 1e-300)
            ds.append(d)
            grads.append(g)
        res = np.array(ds[1:]) - ds[0]
        if np.max(np.abs(res)) < 1e-15 * p.bbox_diag:
            break
        jac = np.array(grads[1:]) - grads[0]
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        limit = 0.05 * p.bbox_diag
        norm = float(np.hypot(*step))
        if norm > limit:
            step *= limit / norm
        q = q + step
    return q


def decompose_pieces(m: MedialAxis) -> list[Piece]:
    """The K pieces of the axis (already built during construction)."""
    return m.pieces
