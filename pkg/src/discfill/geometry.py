"""Planar primitives: simple polygons, discs, boundary distances, containment.

Everything downstream (medial axis, coverage, optimizers) is built on the
types in this module.  All geometric comparisons use a single tolerance
derived from the polygon's bounding-box diagonal so that results are
scale-invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Relative tolerance for geometric comparisons, scaled by bbox diagonal.
TOL_FACTOR = 1e-9


class GeometryError(ValueError):
    """Raised for invalid geometric input (bad polygon, point out of domain)."""


# A boundary feature is an edge or a vertex of the polygon, identified by
# kind + index.  Branch parents and nearest-feature queries use these.
Feature = tuple[str, int]


def _as_points(vertices) -> np.ndarray:
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GeometryError("vertices must be an (n, 2) array of points")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("vertices must be finite")
    return arr


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed area of a vertex loop (positive for CCW)."""
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_properly_intersect(p1, p2, q1, q2, tol) -> bool:
    """True if the open segments cross or overlap beyond shared endpoints."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and (
        (d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)
    ):
        return True
    # Collinear overlap check: project onto the dominant axis.
    if abs(d1) <= tol and abs(d2) <= tol and abs(d3) <= tol and abs(d4) <= tol:
        axis = 0 if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]) else 1
        a0, a1 = sorted((p1[axis], p2[axis]))
        b0, b1 = sorted((q1[axis], q2[axis]))
        return min(a1, b1) - max(a0, b0) > tol
    return False


class Polygon:
    """A simple polygon with CCW orientation and strict internal invariants.

    Ingest is permissive: CW input is reversed, consecutive duplicate and
    collinear vertices are merged.  Self-intersecting input is rejected.
    """

    def __init__(self, vertices):
        raw = _as_points(vertices)
        if len(raw) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        span = float(np.max(np.ptp(raw, axis=0)))
        if span <= 0.0:
            raise GeometryError("polygon is degenerate (zero extent)")
        merge_tol = TOL_FACTOR * span * math.sqrt(2.0)

        pts = self._merge_duplicates(raw, merge_tol)
        pts = self._merge_collinear(pts, merge_tol)
        if len(pts) < 3:
            raise GeometryError("polygon degenerates after merging vertices")

        area = shoelace_area(pts)
        if area < 0:
            pts = pts[::-1].copy()
            area = -area
        if area <= (merge_tol * span):
            raise GeometryError("polygon area is below tolerance")

        self.vertices = pts
        self.n = len(pts)
        self.area = float(area)
        lo = np.min(pts, axis=0)
        hi = np.max(pts, axis=0)
        self.bbox = (lo, hi)
        self.bbox_diag = float(np.hypot(*(hi - lo)))
        self.tol = TOL_FACTOR * self.bbox_diag

        self._check_simple()

        # Precomputed edge data for vectorized distance queries.
        self.edge_start = pts
        self.edge_end = np.roll(pts, -1, axis=0)
        self.edge_vec = self.edge_end - self.edge_start
        self.edge_len = np.hypot(self.edge_vec[:, 0], self.edge_vec[:, 1])
        self.edge_dir = self.edge_vec / self.edge_len[:, None]
        # Inward normal: interior is on the left of a CCW edge.
        self.edge_normal = np.stack(
            [-self.edge_dir[:, 1], self.edge_dir[:, 0]], axis=1
        )
        prev_dir = np.roll(self.edge_dir, 1, axis=0)
        cross = prev_dir[:, 0] * self.edge_dir[:, 1] - prev_dir[:, 1] * self.edge_dir[:, 0]
        self.reflex = cross < 0.0
        self.reflex_indices = np.nonzero(self.reflex)[0]

    @staticmethod
    def _merge_duplicates(pts, tol):
        keep = [pts[0]]
        for p in pts[1:]:
            if np.hypot(*(p - keep[-1])) > tol:
                keep.append(p)
        if len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol:
            keep.pop()
        return np.array(keep)

    @staticmethod
    def _merge_collinear(pts, tol):
        changed = True
        pts = list(pts)
        while changed and len(pts) >= 3:
            changed = False
            for i in range(len(pts)):
                a = pts[i - 1]
                b = pts[i]
                c = pts[(i + 1) % len(pts)]
                u = b - a
                v = c - b
                cross = u[0] * v[1] - u[1] * v[0]
                scale = np.hypot(*u) * np.hypot(*v)
                if abs(cross) <= tol * max(scale, 1e-300) * 1e3:
                    if np.dot(u, v) < 0:
                        raise GeometryError("degenerate spike vertex")
                    pts.pop(i)
                    changed = True
                    break
        return np.array(pts)

    def _check_simple(self):
        pts = self.vertices
        n = self.n
        tol = self.tol * self.bbox_diag
        for i in range(n):
            p1, p2 = pts[i], pts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                q1, q2 = pts[j], pts[(j + 1) % n]
                if _segments_properly_intersect(p1, p2, q1, q2, tol):
                    raise GeometryError("polygon is self-intersecting")

    # ------------------------------------------------------------------
    # Containment and distances
    # ------------------------------------------------------------------

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Crossing-number test for an (m, 2) array of points."""
        x = points[:, 0][:, None]
        y = points[:, 1][:, None]
        x1 = self.edge_start[None, :, 0]
        y1 = self.edge_start[None, :, 1]
        x2 = self.edge_end[None, :, 0]
        y2 = self.edge_end[None, :, 1]
        crosses = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = (x2 - x1) * (y - y1) / (y2 - y1) + x1
        hits = crosses & (x < xint)
        return np.sum(hits, axis=1) % 2 == 1

    def contains(self, point) -> bool:
        return bool(self.contains_many(np.asarray(point, float)[None, :])[0])

    def edge_distances(self, point) -> np.ndarray:
        """Distance from a point to every (closed) edge."""
        p = np.asarray(point, float)
        w = p[None, :] - self.edge_start
        t = np.clip(np.einsum("ij,ij->i", w, self.edge_vec) / self.edge_len**2, 0.0, 1.0)
        foot = self.edge_start + t[:, None] * self.edge_vec
        return np.hypot(*(p[None, :] - foot).T)

    def boundary_distance_many(self, points: np.ndarray) -> np.ndarray:
        """Unsigned distance to the boundary for an (m, 2) array of points."""
        w = points[:, None, :] - self.edge_start[None, :, :]
        t = np.einsum("mij,ij->mi", w, self.edge_vec) / (self.edge_len**2)[None, :]
        t = np.clip(t, 0.0, 1.0)
        foot = self.edge_start[None, :, :] + t[:, :, None] * self.edge_vec[None, :, :]
        d = np.linalg.norm(points[:, None, :] - foot, axis=2)
        return np.min(d, axis=1)

    def boundary_distance(self, point) -> float:
        return float(np.min(self.edge_distances(point)))

    def feature_point(self, feature: Feature) -> np.ndarray:
        kind, idx = feature
        if kind != "vertex":
            raise GeometryError("feature_point is defined for vertices only")
        return self.vertices[idx]

    def feature_distance(self, point, feature: Feature) -> float:
        """Distance from a point to one closed boundary feature."""
        kind, idx = feature
        p = np.asarray(point, float)
        if kind == "vertex":
            return float(np.hypot(*(p - self.vertices[idx])))
        w = p - self.edge_start[idx]
        t = float(np.dot(w, self.edge_vec[idx]) / self.edge_len[idx] ** 2)
        t = min(max(t, 0.0), 1.0)
        foot = self.edge_start[idx] + t * self.edge_vec[idx]
        return float(np.hypot(*(p - foot)))

    def sample_interior(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform interior points by rejection from the bounding box."""
        lo, hi = self.bbox
        out = np.empty((count, 2))
        filled = 0
        while filled < count:
            batch = rng.uniform(lo, hi, size=(max(count - filled, 64) * 2, 2))
            good = batch[self.contains_many(batch)]
            take = min(len(good), count - filled)
            out[filled : filled + take] = good[:take]
            filled += take
        return out

    def __repr__(self):
        return f"Polygon(n={self.n}, area={self.area:.6g})"


@dataclass(frozen=True)
class Disc:
    """A disc given by center coordinates and radius."""

    x: float
    y: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.r)):
            raise GeometryError("disc parameters must be finite")
        if self.r < 0:
            raise GeometryError("disc radius must be non-negative")

    @property
    def center(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def area(self) -> float:
        return math.pi * self.r * self.r


def polygon_area(p: Polygon) -> float:
    """Area of a validated polygon (always positive)."""
    return p.area


def distance_to_boundary(p: Polygon, point) -> tuple[float, Feature]:
    """Minimum distance from a strictly interior point to the boundary.

    Returns the distance together with the nearest boundary feature.  Ties
    between features are resolved arbitrarily; the distance itself is
    unique.  Raises for points outside or on the boundary.
    """
    q = np.asarray(point, float)
    dists = p.edge_distances(q)
    k = int(np.argmin(dists))
    d = float(dists[k])
    if d <= p.tol or not p.contains(q):
        raise GeometryError("point is not strictly inside the polygon")
    w = q - p.edge_start[k]
    t = float(np.dot(w, p.edge_vec[k]) / p.edge_len[k] ** 2)
    span = p.tol / p.edge_len[k]
    if t <= span:
        feature: Feature = ("vertex", k)
    elif t >= 1.0 - span:
        feature = ("vertex", (k + 1) % p.n)
    else:
        feature = ("edge", k)
    return d, feature


def disc_inside(p: Polygon, d: Disc, tol: float | None = None) -> bool:
    """True iff the disc lies inside the polygon within tolerance."""
    if tol is None:
        tol = p.tol
    c = d.center
    bd = p.boundary_distance(c)
    if d.r <= tol:
        # Degenerate discs are allowed anywhere inside or on the boundary.
        return p.contains(c) or bd <= tol
    return p.contains(c) and bd >= d.r - tol
