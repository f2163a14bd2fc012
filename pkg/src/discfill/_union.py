"""Hot numeric kernels: exact area of a union of discs.

The union boundary is decomposed into circular arcs: every pairwise circle
intersection splits the circles into arcs, arcs lying strictly inside
another disc are discarded, and the survivors are integrated with Green's
theorem.  Tangent circles (discriminant below tolerance) are treated as
non-intersecting so no degenerate arcs appear.

Two implementations are provided: a pure-numpy path and numba ``@njit``
kernels.  Selection is automatic (numba when importable) and can be forced
to numpy by setting the environment variable ``DISCFILL_DISABLE_NUMBA=1``.
"""

from __future__ import annotations

import math
import os

import numpy as np

TWO_PI = 2.0 * math.pi


def _numba_requested() -> bool:
    return os.environ.get("DISCFILL_DISABLE_NUMBA", "").strip().lower() not in (
        "1",
        "true",
        "yes",
    )


# ----------------------------------------------------------------------
# Pure numpy implementation
# ----------------------------------------------------------------------


def _alive_mask(x, y, r, tol):
    """Drop zero-radius, duplicate and strictly contained discs."""
    n = x.size
    alive = r > tol
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    d = np.hypot(dx, dy)
    idx = np.arange(n)
    same = (d <= tol) & (np.abs(r[:, None] - r[None, :]) <= tol)
    np.fill_diagonal(same, False)
    dup = (same & (idx[None, :] < idx[:, None]) & alive[None, :]).any(axis=1)
    alive &= ~dup
    contained = (d + r[:, None] <= r[None, :] + tol) & (r[:, None] < r[None, :])
    np.fill_diagonal(contained, False)
    alive &= ~(contained & alive[None, :]).any(axis=1)
    return alive, d


def union_area_numpy(x, y, r, tol: float = 1e-12) -> float:
    """Exact area of the union of discs (numpy reference path)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    r = np.asarray(r, float)
    n = x.size
    if n == 0:
        return 0.0
    alive, d = _alive_mask(x, y, r, tol)
    live = np.nonzero(alive)[0]
    total = 0.0
    for i in live:
        others = live[live != i]
        if others.size:
            di = d[i, others]
            proper = (di < r[i] + r[others] - tol) & (di > np.abs(r[i] - r[others]) + tol)
            js = others[proper]
        else:
            js = others
        if js.size == 0:
            total += math.pi * r[i] * r[i]
            continue
        di = d[i, js]
        cos_half = (di * di + r[i] * r[i] - r[js] * r[js]) / (2.0 * di * r[i])
        cos_half = np.clip(cos_half, -1.0, 1.0)
        half = np.arccos(cos_half)
        base = np.arctan2(y[js] - y[i], x[js] - x[i])
        cuts = np.concatenate([base - half, base + half]) % TWO_PI
        cuts = np.sort(cuts)
        starts = cuts
        ends = np.roll(cuts, -1)
        ends[-1] += TWO_PI
        mids = 0.5 * (starts + ends)
        px = x[i] + r[i] * np.cos(mids)
        py = y[i] + r[i] * np.sin(mids)
        dx = px[:, None] - x[None, js]
        dy = py[:, None] - y[None, js]
        covered = (dx * dx + dy * dy < (r[js] ** 2)[None, :]).any(axis=1)
        keep = ~covered
        if not np.any(keep):
            continue
        a = starts[keep]
        b = ends[keep]
        seg = r[i] * r[i] * (b - a) + r[i] * (
            x[i] * (np.sin(b) - np.sin(a)) - y[i] * (np.cos(b) - np.cos(a))
        )
        total += 0.5 * float(np.sum(seg))
    return total


def union_area_batch_numpy(xs, ys, rs, tol: float = 1e-12) -> np.ndarray:
    """Union areas for a batch of disc sets, shapes (m, n)."""
    m = xs.shape[0]
    out = np.empty(m)
    for g in range(m):
        out[g] = union_area_numpy(xs[g], ys[g], rs[g], tol)
    return out


def coverage_count_numpy(points, cx, cy, cr) -> int:
    """Number of points covered by at least one disc.

    Processes the largest discs first against the shrinking set of still
    uncovered points, which keeps the work modest for dense disc sets.
    """
    order = np.argsort(-cr)
    remaining = np.asarray(points, float)
    total = len(remaining)
    for lo in range(0, len(order), 256):
        idx = order[lo : lo + 256]
        dx = remaining[:, 0][:, None] - cx[idx][None, :]
        dy = remaining[:, 1][:, None] - cy[idx][None, :]
        hit = (dx * dx + dy * dy <= (cr[idx] ** 2)[None, :]).any(axis=1)
        remaining = remaining[~hit]
        if len(remaining) == 0:
            break
    return total - len(remaining)


# ----------------------------------------------------------------------
# Numba implementation
# ----------------------------------------------------------------------

_NUMBA_OK = False
if _numba_requested():
    try:
        from numba import njit, prange

        @njit(cache=True)
        def _union_area_jit(x, y, r, tol):  # pragma: no cover - numba
            n = x.size
            if n == 0:
                return 0.0
            alive = np.ones(n, np.bool_)
            for i in range(n):
                if r[i] <= tol:
                    alive[i] = False
            for i in range(n):
                if not alive[i]:
                    continue
                for j in range(n):
                    if j == i:
                        continue
                    dij = math.hypot(x[i] - x[j], y[i] - y[j])
                    if dij <= tol and abs(r[i] - r[j]) <= tol:
                        if j < i and alive[j]:
                            alive[i] = False
                            break
                    elif dij + r[i] <= r[j] + tol and r[i] < r[j]:
                        alive[i] = False
                        break
            total = 0.0
            cuts = np.empty(2 * n, np.float64)
            for i in range(n):
                if not alive[i]:
                    continue
                ncut = 0
                for j in range(n):
                    if j == i or not alive[j]:
                        continue
                    dij = math.hypot(x[i] - x[j], y[i] - y[j])
                    if dij >= r[i] + r[j] - tol or dij <= abs(r[i] - r[j]) + tol:
                        continue
                    ch = (dij * dij + r[i] * r[i] - r[j] * r[j]) / (2.0 * dij * r[i])
                    if ch > 1.0:
                        ch = 1.0
                    elif ch < -1.0:
                        ch = -1.0
                    half = math.acos(ch)
                    base = math.atan2(y[j] - y[i], x[j] - x[i])
                    a = (base - half) % TWO_PI
                    b = (base + half) % TWO_PI
                    cuts[ncut] = a
                    cuts[ncut + 1] = b
                    ncut += 2
                if ncut == 0:
                    total += math.pi * r[i] * r[i]
                    continue
                cs = np.sort(cuts[:ncut])
                for k in range(ncut):
                    a = cs[k]
                    b = cs[k + 1] if k + 1 < ncut else cs[0] + TWO_PI
                    mid = 0.5 * (a + b)
                    px = x[i] + r[i] * math.cos(mid)
                    py = y[i] + r[i] * math.sin(mid)
                    covered = False
                    for j in range(n):
                        if j == i or not alive[j]:
                            continue
                        ddx = px - x[j]
                        ddy = py - y[j]
                        if ddx * ddx + ddy * ddy < r[j] * r[j]:
                            covered = True
                            break
                    if not covered:
                        total += 0.5 * (
                            r[i] * r[i] * (b - a)
                            + r[i]
                            * (
                                x[i] * (math.sin(b) - math.sin(a))
                                - y[i] * (math.cos(b) - math.cos(a))
                            )
                        )
            return total

        @njit(cache=True, parallel=True)
        def _union_area_batch_jit(xs, ys, rs, tol):  # pragma: no cover - numba
            m = xs.shape[0]
            out = np.empty(m)
            for g in prange(m):
                out[g] = _union_area_jit(xs[g], ys[g], rs[g], tol)
            return out

        @njit(cache=True, parallel=True)
        def _coverage_count_jit(px, py, cx, cy, cr):  # pragma: no cover - numba
            m = px.size
            n = cx.size
            covered = 0
            for i in prange(m):
                hit = 0
                for j in range(n):
                    dx = px[i] - cx[j]
                    dy = py[i] - cy[j]
                    if dx * dx + dy * dy <= cr[j] * cr[j]:
                        hit = 1
                        break
                covered += hit
            return covered

        _NUMBA_OK = True
    except ImportError:  # pragma: no cover
        _NUMBA_OK = False

USING_NUMBA = _NUMBA_OK


def union_area(x, y, r, tol: float = 1e-12) -> float:
    """Area of the union of discs; dispatches to the active kernel."""
    if USING_NUMBA:
        return float(
            _union_area_jit(
                np.ascontiguousarray(x, np.float64),
                np.ascontiguousarray(y, np.float64),
                np.ascontiguousarray(r, np.float64),
                tol,
            )
        )
    return union_area_numpy(x, y, r, tol)


def union_area_batch(xs, ys, rs, tol: float = 1e-12) -> np.ndarray:
    if USING_NUMBA:
        return _union_area_batch_jit(
            np.ascontiguousarray(xs, np.float64),
            np.ascontiguousarray(ys, np.float64),
            np.ascontiguousarray(rs, np.float64),
            tol,
        )
    return union_area_batch_numpy(xs, ys, rs, tol)


def coverage_count(points, cx, cy, cr) -> int:
    if USING_NUMBA:
        pts = np.ascontiguousarray(points, np.float64)
        return int(
            _coverage_count_jit(
                pts[:, 0].copy(),
                pts[:, 1].copy(),
                np.ascontiguousarray(cx, np.float64),
                np.ascontiguousarray(cy, np.float64),
                np.ascontiguousarray(cr, np.float64),
            )
        )
    return coverage_count_numpy(points, cx, cy, cr)


IMPLEMENTATIONS = {"numpy": union_area_numpy}
if USING_NUMBA:

    def _union_area_numba(x, y, r, tol=1e-12):
        return float(
            _union_area_jit(
                np.ascontiguousarray(x, np.float64),
                np.ascontiguousarray(y, np.float64),
                np.ascontiguousarray(r, np.float64),
                tol,
            )
        )

    IMPLEMENTATIONS["numba"] = _union_area_numba
