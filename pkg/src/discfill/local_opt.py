"""Constrained ascent of the filling measure for a fixed way.

A way assigns disc counts to the axis pieces.  Discs on junction pieces are
pinned to the junction point; discs on section pieces move along the
normalized coordinate u in [0, 1].  The objective is the covered fraction,
evaluated over the moving discs plus any fixed discs near enough to matter
(occupied junctions isolate the rest of the axis, so distant fixed discs
cannot change the local optimum).

Gradients use central finite differences with a neighbor-local union: only
discs that can overlap the perturbed disc enter the difference, which keeps
a gradient evaluation O(n) small unions instead of O(n) full unions.

If a coordinate converges onto a piece endpoint that adjoins an unoccupied
junction, the disc is snapped onto the junction and the way reclassified,
then the ascent resumes with the remaining free coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._union import union_area
from .coverage import FillingSolution, Placement
from .geometry import Disc, GeometryError
from .medial_axis import MedialAxis

Way = tuple[int, ...]


@dataclass
class AscentConfig:
    fd_step: float = 1e-6
    grad_tol: float = 1e-8
    phi_tol: float = 1e-10
    max_iters: int = 500
    snap_tol: float = 1e-6
    max_snap_rounds: int = 8


def validate_way(axis: MedialAxis, way) -> Way:
    way = tuple(int(c) for c in way)
    if len(way) != axis.K:
        raise GeometryError(f"way length {len(way)} != K = {axis.K}")
    if any(c < 0 for c in way):
        raise GeometryError("way counts must be non-negative")
    for piece in axis.pieces:
        if piece.kind == "junction" and way[piece.index] not in (0, 1):
            raise GeometryError("junction pieces hold at most one disc")
    return way


def occupied_junctions(axis: MedialAxis, way: Way) -> set[int]:
    return {
        p.index
        for p in axis.pieces
        if p.kind == "junction" and way[p.index] == 1
    }


def partition_parts(axis: MedialAxis, occupied: set[int]) -> list[frozenset[int]]:
    """Connected components of the piece graph after removing occupied
    junction pieces."""
    adj = axis.piece_adjacency()
    todo = {p.index for p in axis.pieces} - set(occupied)
    parts = []
    while todo:
        seed = min(todo)
        comp = {seed}
        stack = [seed]
        todo.discard(seed)
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt in todo:
                    todo.discard(nxt)
                    comp.add(nxt)
                    stack.append(nxt)
        parts.append(frozenset(comp))
    return parts


def spread_init(axis: MedialAxis, way: Way) -> dict[int, np.ndarray]:
    """Evenly spread u values on every populated section piece."""
    init = {}
    for piece in axis.pieces:
        n = way[piece.index]
        if piece.kind == "section" and n > 0:
            init[piece.index] = (np.arange(n) + 0.5) / n
    return init


class _Problem:
    """One ascent problem: moving coordinates plus a fixed disc backdrop."""

    def __init__(self, axis, way, u_by_piece, free_pieces, cfg):
        self.axis = axis
        self.cfg = cfg
        self.area = axis.polygon.area
        self.slots = []  # (piece index, slot) per coordinate
        u0 = []
        for pi in sorted(free_pieces):
            piece = axis.pieces[pi]
            if piece.kind != "section" or way[pi] == 0:
                continue
            us = np.asarray(u_by_piece[pi], float)
            if len(us) != way[pi]:
                raise GeometryError("init length does not match way count")
            for k, u in enumerate(np.sort(us)):
                self.slots.append((pi, k))
                u0.append(u)
        self.x0 = np.clip(np.array(u0), 0.0, 1.0)
        fixed = []
        for piece in axis.pieces:
            if piece.kind == "junction" and way[piece.index] == 1:
                pos = axis.node_pos[piece.junction]
                fixed.append([pos[0], pos[1], axis.node_radius[piece.junction]])
            elif piece.kind == "section" and way[piece.index] > 0 and piece.index not in free_pieces:
                pos, rad = piece.point_at(np.asarray(u_by_piece[piece.index], float))
                fixed.extend([[p[0], p[1], r] for p, r in zip(pos, rad)])
        self.fixed = np.array(fixed).reshape(-1, 3)
        self._filter_fixed(free_pieces)
        self.trace: list[float] = []

    def _filter_fixed(self, free_pieces):
        """Keep only fixed discs that can reach a free piece."""
        if len(self.fixed) == 0 or not len(self.slots):
            return
        keep = np.zeros(len(self.fixed), bool)
        for pi in {pi for pi, _ in self.slots}:
            piece = self.axis.pieces[pi]
            pts, rad = piece.point_at(np.linspace(0.0, 1.0, 17))
            margin = piece.length / 16.0 + float(np.max(rad))
            d = np.linalg.norm(
                self.fixed[None, :, :2] - pts[:, None, :], axis=2
            ).min(axis=0)
            keep |= d <= self.fixed[:, 2] + margin + 1e-9
        self.fixed = self.fixed[keep]

    def positions(self, x) -> np.ndarray:
        """(n, 3) moving discs for coordinate vector x."""
        out = np.empty((len(x), 3))
        by_piece: dict[int, list[int]] = {}
        for i, (pi, _) in enumerate(self.slots):
            by_piece.setdefault(pi, []).append(i)
        for pi, idx in by_piece.items():
            piece = self.axis.pieces[pi]
            pos, rad = piece.point_at(np.clip(x[idx], 0.0, 1.0))
            out[idx, :2] = pos
            out[idx, 2] = rad
        return out

    def objective(self, x) -> float:
        discs = np.vstack([self.positions(x), self.fixed])
        return union_area(discs[:, 0], discs[:, 1], discs[:, 2]) / self.area

    def _perturbed(self, x, h):
        """Positions and radii at x+h and x-h for every coordinate."""
        n = len(x)
        up = np.minimum(x + h, 1.0)
        dn = np.maximum(x - h, 0.0)
        pos = np.empty((2 * n, 2))
        rad = np.empty(2 * n)
        by_piece: dict[int, list[int]] = {}
        for i, (pi, _) in enumerate(self.slots):
            by_piece.setdefault(pi, []).extend([i, i + n])
        both = np.concatenate([up, dn])
        for pi, idx in by_piece.items():
            piece = self.axis.pieces[pi]
            p, r = piece.point_at(both[idx])
            pos[idx] = p
            rad[idx] = r
        return up, dn, pos[:n], rad[:n], pos[n:], rad[n:]

    def _near_mask(self, moving, discs, reach):
        """(n, m) mask of discs within overlap reach of each moving disc."""
        d = np.hypot(
            moving[:, 0][:, None] - discs[:, 0][None, :],
            moving[:, 1][:, None] - discs[:, 1][None, :],
        )
        mask = d <= discs[:, 2][None, :] + reach[:, None]
        mask[np.arange(len(moving)), np.arange(len(moving))] = False
        return mask

    def value_and_grad(self, x):
        moving = self.positions(x)
        discs = np.vstack([moving, self.fixed])
        f = union_area(discs[:, 0], discs[:, 1], discs[:, 2]) / self.area
        g = np.zeros_like(x)
        h = self.cfg.fd_step
        if len(x) == 0:
            return f, g
        up, dn, pos_u, rad_u, pos_d, rad_d = self._perturbed(x, h)
        lengths = np.array([self.axis.pieces[pi].length for pi, _ in self.slots])
        reach = np.maximum(rad_u, rad_d) + lengths * h * 2.5 + 1e-12
        mask = self._near_mask(moving, discs, reach)
        for i in range(len(x)):
            if up[i] - dn[i] <= 0:
                continue
            near = discs[mask[i]]
            plus = np.concatenate([[pos_u[i][0], pos_u[i][1], rad_u[i]], near.ravel()])
            minus = np.concatenate([[pos_d[i][0], pos_d[i][1], rad_d[i]], near.ravel()])
            plus = plus.reshape(-1, 3)
            minus = minus.reshape(-1, 3)
            a_plus = union_area(plus[:, 0], plus[:, 1], plus[:, 2])
            a_minus = union_area(minus[:, 0], minus[:, 1], minus[:, 2])
            g[i] = (a_plus - a_minus) / (up[i] - dn[i]) / self.area
        return f, g

    def kinked_coordinates(self, x, h):
        """Coordinates where the objective rises on BOTH sides: symmetric
        configurations create V-shaped saddles invisible to central
        differences."""
        if len(x) == 0:
            return []
        moving = self.positions(x)
        discs = np.vstack([moving, self.fixed])
        thresh = max(25.0 * self.cfg.phi_tol, 1e-13) * self.area
        up, dn, pos_u, rad_u, pos_d, rad_d = self._perturbed(x, h)
        lengths = np.array([self.axis.pieces[pi].length for pi, _ in self.slots])
        reach = np.maximum(np.maximum(rad_u, rad_d), moving[:, 2]) + lengths * h * 2.5 + 1e-12
        mask = self._near_mask(moving, discs, reach)
        out = []
        for i in range(len(x)):
            near = discs[mask[i]]

            def area_at(px, py, pr):
                grp = np.vstack([[px, py, pr], near])
                return union_area(grp[:, 0], grp[:, 1], grp[:, 2])

            base = area_at(moving[i, 0], moving[i, 1], moving[i, 2])
            gain_up = (
                area_at(pos_u[i][0], pos_u[i][1], rad_u[i]) - base
                if up[i] > x[i]
                else -np.inf
            )
            gain_dn = (
                area_at(pos_d[i][0], pos_d[i][1], rad_d[i]) - base
                if dn[i] < x[i]
                else -np.inf
            )
            if gain_up > thresh and gain_dn > thresh:
                out.append(i)
        return out


def _ascend(problem: _Problem, cfg: AscentConfig):
    if len(problem.x0) == 0:
        return problem.x0, True

    def fun(x):
        f, g = problem.value_and_grad(x)
        return -f, -g

    def cb(xk):
        problem.trace.append(problem.objective(xk))

    res = minimize(
        fun,
        problem.x0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(0.0, 1.0)] * len(problem.x0),
        callback=cb,
        options={
            "maxiter": cfg.max_iters,
            "ftol": cfg.phi_tol,
            "gtol": cfg.grad_tol,
            "maxls": 40,
        },
    )
    converged = bool(res.success) or res.status == 0
    return np.clip(res.x, 0.0, 1.0), converged


def local_maximum(
    axis: MedialAxis,
    way,
    init="spread",
    free_parts=None,
    cfg: AscentConfig | None = None,
) -> FillingSolution:
    """Unique local maximum of the filling measure for one way.

    ``init`` is "spread" or a dict piece->sorted u array; ``free_parts``
    restricts which parts may move (defaults to all).  Returns a solution
    whose way may differ from the request when discs snapped onto junctions.
    """
    cfg = cfg or AscentConfig()
    way = validate_way(axis, way)
    requested = way
    occ = occupied_junctions(axis, way)
    parts = partition_parts(axis, occ)
    if free_parts is None:
        free = {pi for part in parts for pi in part}
    else:
        free = {pi for part in free_parts for pi in part}

    u_by_piece = spread_init(axis, way) if init == "spread" else {
        pi: np.sort(np.asarray(us, float)) for pi, us in init.items()
    }
    for piece in axis.pieces:
        if piece.kind == "section" and way[piece.index] > 0 and piece.index not in u_by_piece:
            u_by_piece[piece.index] = (np.arange(way[piece.index]) + 0.5) / way[piece.index]

    diagnostics: list[str] = []
    trace: list[float] = []
    converged = True
    for _ in range(cfg.max_snap_rounds):
        problem = _Problem(axis, way, u_by_piece, free, cfg)
        x, ok = _ascend(problem, cfg)
        # Escape symmetry saddles: kick kinked coordinates apart and resume.
        for _kick in range(3):
            kinks = problem.kinked_coordinates(x, h=1e-3)
            if not kinks:
                break
            x = x.copy()
            x[kinks[0]] = min(x[kinks[0]] + 1e-3, 1.0)
            if len(kinks) > 1:
                x[kinks[1]] = max(x[kinks[1]] - 1e-3, 0.0)
            problem.x0 = x
            x, ok = _ascend(problem, cfg)
        converged = converged and ok
        trace.extend(problem.trace)
        new_u: dict[int, list[float]] = {}
        for i, (pi, _) in enumerate(problem.slots):
            new_u.setdefault(pi, []).append(float(x[i]))
        for pi, us in new_u.items():
            u_by_piece[pi] = np.sort(np.array(us))
        way, snapped = _snap_pass(axis, way, u_by_piece, free, cfg)
        if not snapped:
            break
        diagnostics.append(f"reclassified to way {way}")
    if way != requested:
        diagnostics.append(f"requested way {requested} has no interior maximum")
    sol = build_solution(axis, way, u_by_piece)
    sol.converged = converged
    sol.diagnostics.extend(diagnostics)
    sol.trace = trace
    return sol


def _snap_pass(axis, way, u_by_piece, free, cfg):
    """Move boundary-converged discs onto adjacent unoccupied junctions."""
    way = list(way)
    snapped = False
    for pi in sorted(list(u_by_piece.keys())):
        if pi not in free or way[pi] == 0:
            continue
        piece = axis.pieces[pi]
        us = list(u_by_piece[pi])
        for endpoint, node in ((1.0, piece.node_u1), (0.0, piece.node_u0)):
            if not us:
                break
            jpiece = axis.junction_piece.get(node)
            if jpiece is None or way[jpiece] == 1:
                continue
            u_edge = us[-1] if endpoint == 1.0 else us[0]
            if abs(u_edge - endpoint) <= cfg.snap_tol:
                us.remove(u_edge)
                way[pi] -= 1
                way[jpiece] = 1
                snapped = True
        u_by_piece[pi] = np.array(us)
    return tuple(way), snapped


def build_solution(axis: MedialAxis, way, u_by_piece) -> FillingSolution:
    """Assemble discs and placements for a way plus per-piece coordinates."""
    discs: list[Disc] = []
    placements: list[Placement] = []
    for piece in axis.pieces:
        n = way[piece.index]
        if n == 0:
            continue
        if piece.kind == "junction":
            pos = axis.node_pos[piece.junction]
            discs.append(Disc(float(pos[0]), float(pos[1]), float(axis.node_radius[piece.junction])))
            placements.append(Placement(piece.index, 0.0))
        else:
            us = np.sort(np.asarray(u_by_piece[piece.index], float))
            pos, rad = piece.point_at(us)
            for u, p, r in zip(us, pos, rad):
                discs.append(Disc(float(p[0]), float(p[1]), float(r)))
                placements.append(Placement(piece.index, float(u)))
    if discs:
        arr = np.array([[d.x, d.y, d.r] for d in discs])
        phi_val = union_area(arr[:, 0], arr[:, 1], arr[:, 2]) / axis.polygon.area
    else:
        phi_val = 0.0
    return FillingSolution(
        discs=discs,
        phi=float(phi_val),
        placements=placements,
        way=tuple(way),
        method="ha",
    )


def enumerate_local_maxima(axis: MedialAxis, ways, cfg: AscentConfig | None = None) -> list[FillingSolution]:
    """One converged candidate per way, merged by final way identity.

    When two requests converge to the same way the better filling is kept;
    a second distinct maximum for one way would contradict the one-maximum
    assumption and is surfaced as a diagnostic instead of silently chosen.
    """
    cfg = cfg or AscentConfig()
    best: dict[Way, FillingSolution] = {}
    for way in ways:
        sol = local_maximum(axis, way, cfg=cfg)
        cur = best.get(sol.way)
        if cur is None:
            best[sol.way] = sol
        else:
            if abs(cur.phi - sol.phi) > 1e-9 * max(cur.phi, 1e-12):
                worse = min(cur, sol, key=lambda s: s.phi)
                keep = max(cur, sol, key=lambda s: s.phi)
                keep.diagnostics.append(
                    f"two distinct maxima for way {sol.way}: "
                    f"{worse.phi:.12f} vs {keep.phi:.12f}"
                )
                best[sol.way] = keep
            elif sol.phi > cur.phi:
                best[sol.way] = sol
    return sorted(best.values(), key=lambda s: (-s.phi, s.way))
