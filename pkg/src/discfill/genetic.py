"""Genetic algorithm baseline for polygon filling.

Members are ordered sets of N disc centers.  Before scoring, every member
is coerced toward maximality: centers outside the polygon are resampled
inside, radii grow to the boundary distance, and centers caught in a
convex corner snap onto the corner's bisector (the local medial-axis
branch).  Selection is rank-weighted with p ~ 1/sqrt(rank); children are
built by one of four mutations or by single-point crossover after a
spatial sort, and elites pass through unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._union import union_area_batch
from .coverage import FillingSolution, Placement
from .geometry import Disc, GeometryError, Polygon
from .medial_axis import MedialAxis, compute_medial_axis


@dataclass
class GAConfig:
    population_multiplier: int = 100
    best_fraction: float = 0.05
    mutation_fraction: float = 0.60
    crossover_fraction: float = 0.35
    stall_generations: int = 200
    max_generations: int = 20000
    seeds: int = 10
    seed: int = 0
    improve_tol: float = 1e-10

    def __post_init__(self):
        total = self.best_fraction + self.mutation_fraction + self.crossover_fraction
        if abs(total - 1.0) > 1e-9:
            raise GeometryError("generation fractions must sum to 1")
        if not (100 <= self.population_multiplier <= 400):
            raise GeometryError("population multiplier must lie in [100, 400]")


class _CornerSnapper:
    """Precomputed convex-corner bisectors for the snap rule."""

    def __init__(self, polygon: Polygon):
        self.polygon = polygon
        n = polygon.n
        dirs = polygon.edge_dir
        self.bis_origin = np.zeros((n, 2))
        self.bis_dir = np.zeros((n, 2))
        self.pair_vertex = -np.ones((n, n), int)
        convex = ~polygon.reflex
        for v in range(n):
            if not convex[v]:
                continue
            b = dirs[v] - dirs[v - 1]
            norm = float(np.hypot(*b))
            if norm < 1e-12:
                continue
            self.bis_origin[v] = polygon.vertices[v]
            self.bis_dir[v] = b / norm
            a = (v - 1) % n
            self.pair_vertex[a, v] = self.pair_vertex[v, a] = v

    def snap(self, pts: np.ndarray):
        """Snap points whose two nearest edges meet at a convex vertex and
        which sit closer to the corner bisector than to the boundary.

        Returns (points, radii) with radii equal to the boundary distance
        of the returned points.
        """
        p = self.polygon
        w = pts[:, None, :] - p.edge_start[None, :, :]
        t = np.einsum("mij,ij->mi", w, p.edge_vec) / (p.edge_len**2)[None, :]
        t = np.clip(t, 0.0, 1.0)
        foot = p.edge_start[None, :, :] + t[:, :, None] * p.edge_vec[None, :, :]
        diff = pts[:, None, :] - foot
        d = np.hypot(diff[:, :, 0], diff[:, :, 1])
        near2 = np.argpartition(d, 1, axis=1)[:, :2]
        rows = np.arange(len(pts))
        d_pair = np.stack([d[rows, near2[:, 0]], d[rows, near2[:, 1]]], axis=1)
        swap = d_pair[:, 0] > d_pair[:, 1]
        near2[swap] = near2[swap][:, ::-1]
        e1 = near2[:, 0]
        d1 = d[rows, e1]
        v = self.pair_vertex[e1, near2[:, 1]]
        cand = v >= 0
        out = pts.copy()
        radii = d1.copy()
        if not np.any(cand):
            return out, radii
        vc = v[cand]
        rel = pts[cand] - self.bis_origin[vc]
        along = np.einsum("ij,ij->i", rel, self.bis_dir[vc])
        perp = rel - along[:, None] * self.bis_dir[vc]
        ok = np.hypot(perp[:, 0], perp[:, 1]) <= d1[cand]
        target = self.bis_origin[vc] + np.maximum(along, 0.0)[:, None] * self.bis_dir[vc]
        idx = rows[cand][ok]
        out[idx] = target[ok]
        radii[idx] = p.boundary_distance_many(target[ok])
        return out, radii


def enforce_maximal(
    centers: np.ndarray, p: Polygon, m: MedialAxis | None, rng: np.random.Generator,
    snapper: _CornerSnapper | None = None,
):
    """Grow genome discs into (approximately) maximal discs.

    centers has shape (..., 2); returns (centers, radii) with outside
    points resampled into the interior, corner points snapped onto the
    corner bisector, and radii set to the boundary distance.
    """
    shape = centers.shape[:-1]
    flat = centers.reshape(-1, 2).copy()
    lo, hi = p.bbox
    pending = np.nonzero(~p.contains_many(flat))[0]
    while pending.size:
        flat[pending] = rng.uniform(lo, hi, size=(pending.size, 2))
        pending = pending[~p.contains_many(flat[pending])]
    snapper = snapper or _CornerSnapper(p)
    flat, radii = snapper.snap(flat)
    return flat.reshape(shape + (2,)), radii.reshape(shape)


def rank_weights(count: int) -> np.ndarray:
    """Selection probabilities proportional to 1/sqrt(rank)."""
    w = 1.0 / np.sqrt(np.arange(1, count + 1))
    return w / np.sum(w)


def crossover_children(parents_a, parents_b, width: float, rng) -> np.ndarray:
    """Single-point crossover after sorting discs by the key x*w + y."""
    m, n, _ = parents_a.shape
    key_a = parents_a[:, :, 0] * width + parents_a[:, :, 1]
    key_b = parents_b[:, :, 0] * width + parents_b[:, :, 1]
    a_sorted = np.take_along_axis(parents_a, np.argsort(key_a, axis=1)[:, :, None], axis=1)
    b_sorted = np.take_along_axis(parents_b, np.argsort(key_b, axis=1)[:, :, None], axis=1)
    cut = rng.integers(1, n + 1, size=m)
    mask = np.arange(n)[None, :] < cut[:, None]
    return np.where(mask[:, :, None], a_sorted, b_sorted)


def next_generation(pop: np.ndarray, p: Polygon, m: MedialAxis, cfg: GAConfig, rng):
    """Build the next population from a fitness-sorted one (best first)."""
    count, n, _ = pop.shape
    n_best = max(1, int(round(cfg.best_fraction * count)))
    n_mut = int(round(cfg.mutation_fraction * count))
    n_cross = max(count - n_best - n_mut, 0)
    width = float(np.max(p.bbox[1] - p.bbox[0]))
    probs = rank_weights(count)

    children = [pop[:n_best].copy()]

    if n_mut:
        idx = rng.choice(count, size=n_mut, p=probs)
        mut = pop[idx].copy()
        kinds = rng.integers(0, 4, size=n_mut)
        which = rng.integers(0, n, size=n_mut)
        rows = np.arange(n_mut)
        lo, hi = p.bbox
        relocate = kinds == 0
        mut[rows[relocate], which[relocate]] = rng.uniform(
            lo, hi, size=(int(np.sum(relocate)), 2)
        )
        for kind, scale in ((1, width / 2.0), (2, width / 200.0)):
            sel = kinds == kind
            cnt = int(np.sum(sel))
            ang = rng.uniform(0.0, 2.0 * math.pi, size=cnt)
            mag = rng.uniform(0.0, scale, size=cnt)
            step = np.stack([mag * np.cos(ang), mag * np.sin(ang)], axis=1)
            mut[rows[sel], which[sel]] += step
        to_junction = kinds == 3
        if m.junctions:
            jpos = np.array([j.position for j in m.junctions])
            pick = rng.integers(0, len(jpos), size=int(np.sum(to_junction)))
            mut[rows[to_junction], which[to_junction]] = jpos[pick]
        else:
            sel = to_junction
            cnt = int(np.sum(sel))
            ang = rng.uniform(0.0, 2.0 * math.pi, size=cnt)
            mag = rng.uniform(0.0, width / 2.0, size=cnt)
            mut[rows[sel], which[sel]] += np.stack(
                [mag * np.cos(ang), mag * np.sin(ang)], axis=1
            )
        children.append(mut)

    if n_cross:
        ia = rng.choice(count, size=n_cross, p=probs)
        ib = rng.choice(count, size=n_cross, p=probs)
        children.append(crossover_children(pop[ia], pop[ib], width, rng))

    return np.concatenate(children, axis=0)[:count]


def _score(centers, radii, area) -> np.ndarray:
    return union_area_batch(centers[:, :, 0], centers[:, :, 1], radii) / area


def run_ga(
    p: Polygon, n: int, cfg: GAConfig | None = None, axis: MedialAxis | None = None
) -> FillingSolution:
    """Best filling of n discs found by the GA over all seeds."""
    cfg = cfg or GAConfig()
    if axis is None:
        axis = compute_medial_axis(p)
    snapper = _CornerSnapper(p)
    count = cfg.population_multiplier * n
    lo, hi = p.bbox

    best_phi = -1.0
    best_centers = None
    best_info = ""
    for s in range(cfg.seeds):
        rng = np.random.default_rng([cfg.seed, s])
        pop = rng.uniform(lo, hi, size=(count, n, 2))
        pop, radii = enforce_maximal(pop, p, axis, rng, snapper)
        fitness = _score(pop, radii, p.area)
        order = np.argsort(-fitness)
        pop, fitness = pop[order], fitness[order]
        seed_best = float(fitness[0])
        seed_best_centers = pop[0].copy()
        stall = 0
        gen = 0
        while stall < cfg.stall_generations and gen < cfg.max_generations:
            gen += 1
            pop = next_generation(pop, p, axis, cfg, rng)
            pop, radii = enforce_maximal(pop, p, axis, rng, snapper)
            fitness = _score(pop, radii, p.area)
            order = np.argsort(-fitness)
            pop, fitness = pop[order], fitness[order]
            if fitness[0] > seed_best + cfg.improve_tol:
                seed_best = float(fitness[0])
                seed_best_centers = pop[0].copy()
                stall = 0
            else:
                stall += 1
        if seed_best > best_phi:
            best_phi = seed_best
            best_centers = seed_best_centers
            best_info = f"seed {s}: {gen} generations"
    centers, radii = enforce_maximal(best_centers, p, axis, np.random.default_rng(0), snapper)
    discs = [Disc(float(c[0]), float(c[1]), float(r)) for c, r in zip(centers, radii)]
    placements = []
    for c in centers:
        piece, u, _ = axis.nearest_point(c)
        placements.append(Placement(piece, u))
    sol = FillingSolution(
        discs=discs,
        phi=float(_score(centers[None], radii[None], p.area)[0]),
        placements=placements,
        way=ga_way(axis, centers, radii),
        method="ga",
        diagnostics=[best_info],
    )
    return sol


def ga_way(axis: MedialAxis, centers, radii, snap_u: float = 0.005) -> tuple[int, ...]:
    """Assign GA discs to pieces; near-endpoint discs adjacent to a
    junction count as occupying it (comparison convention)."""
    way = [0] * axis.K
    for c in np.asarray(centers).reshape(-1, 2):
        piece_idx, u, _ = axis.nearest_point(c)
        piece = axis.pieces[piece_idx]
        if piece.kind == "section":
            node = None
            if u >= 1.0 - snap_u:
                node = piece.node_u1
            elif u <= snap_u:
                node = piece.node_u0
            jp = axis.junction_piece.get(node) if node is not None else None
            if jp is not None and way[jp] == 0:
                way[jp] = 1
                continue
        way[piece_idx] += 1
    for piece in axis.pieces:
        if piece.kind == "junction" and way[piece.index] > 1:
            way[piece.index] = 1
    return tuple(way)
