"""Heuristic filling: grow the N-disc solution out of the (N-1)-disc one.

For each N the candidate ways are (a) the previous best way plus one disc
on every piece, and (b) for every occupied junction, the ways that vacate
it and insert two discs onto distinct pieces within a small hop
neighborhood.  Occupied junctions cut the axis into independent parts, so
each candidate is optimized part by part and part solutions are cached by
(part, bounding junctions, counts); unchanged parts cost nothing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coverage import FillingSolution
from .geometry import GeometryError, Polygon
from .local_opt import (
    AscentConfig,
    Way,
    build_solution,
    local_maximum,
    occupied_junctions,
    partition_parts,
    validate_way,
)
from .medial_axis import MedialAxis, compute_medial_axis


@dataclass
class HAConfig:
    neighborhood_hops: int = 2
    ascent: AscentConfig = field(default_factory=AscentConfig)
    pin_junctions: bool = False
    use_cache: bool = True
    enumerate_all: bool = False


@dataclass
class HATrace:
    ways_evaluated: list[int] = field(default_factory=list)
    part_optimizations: list[int] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)

    @property
    def total_ways(self) -> int:
        return sum(self.ways_evaluated)


class FillRun(list):
    """Solutions for N = 1..n_max plus the search trace."""

    def __init__(self, solutions, trace: HATrace, axis: MedialAxis):
        super().__init__(solutions)
        self.trace = trace
        self.axis = axis


def way_search_count(trace: HATrace | FillRun) -> int:
    """Total number of candidate ways searched over the whole run."""
    if isinstance(trace, FillRun):
        trace = trace.trace
    return trace.total_ways


def neighborhood_ways(best_prev, m: MedialAxis, a: int) -> list[Way]:
    """Greedy candidate ways for N given the best way for N-1.

    Single insertions everywhere, plus junction deoccupations that spread
    two discs over distinct pieces within ``a`` hops of the junction.
    """
    prev = validate_way(m, best_prev)
    adj = m.piece_adjacency()
    ways: set[Way] = set()
    junction_pieces = {p.index for p in m.pieces if p.kind == "junction"}

    for piece in m.pieces:
        if piece.index in junction_pieces and prev[piece.index] == 1:
            continue
        w = list(prev)
        w[piece.index] += 1
        ways.add(tuple(w))

    for j in sorted(junction_pieces):
        if prev[j] != 1:
            continue
        # Pieces within `a` hops of the junction.
        dist = {j: 0}
        frontier = [j]
        while frontier:
            nxt = []
            for cur in frontier:
                for other in adj[cur]:
                    if other not in dist and dist[cur] + 1 <= a:
                        dist[other] = dist[cur] + 1
                        nxt.append(other)
            frontier = nxt
        nearby = sorted(
            pi
            for pi in dist
            if pi != j and not (pi in junction_pieces and prev[pi] == 1)
        )
        base = list(prev)
        base[j] = 0
        for ai in range(len(nearby)):
            for bi in range(ai + 1, len(nearby)):
                w = list(base)
                w[nearby[ai]] += 1
                w[nearby[bi]] += 1
                if all(
                    w[p] <= 1 for p in junction_pieces
                ):
                    ways.add(tuple(w))
    return sorted(ways)


def _all_ways(m: MedialAxis, n: int, limit: int = 500_000) -> list[Way]:
    junction_pieces = {p.index for p in m.pieces if p.kind == "junction"}
    out: list[Way] = []

    def rec(k, left, cur):
        if len(out) > limit:
            raise GeometryError("way enumeration limit exceeded")
        if k == m.K:
            if left == 0:
                out.append(tuple(cur))
            return
        cap = 1 if k in junction_pieces else left
        for c in range(min(left, cap) + 1):
            cur.append(c)
            rec(k + 1, left - c, cur)
            cur.pop()

    rec(0, n, [])
    return out


class _PartCache:
    def __init__(self):
        self.store: dict = {}
        self.hits = 0
        self.misses = 0

    def key(self, part, bounding, counts):
        return (part, frozenset(bounding), counts)


def _bounding_junctions(axis: MedialAxis, part, occupied) -> set[int]:
    adj = axis.piece_adjacency()
    out = set()
    for j in occupied:
        if adj[j] & part:
            out.add(j)
    return out


def _masked_way(axis: MedialAxis, way, part, occupied) -> Way:
    w = [0] * axis.K
    for pi in part:
        w[pi] = way[pi]
    for j in occupied:
        w[j] = 1
    return tuple(w)


def _extract_part(sol: FillingSolution, axis: MedialAxis, part) -> dict:
    counts = {pi: sol.way[pi] for pi in part}
    u_map: dict[int, list[float]] = {pi: [] for pi in part}
    for disc_i, pl in enumerate(sol.placements):
        if pl.piece in part and axis.pieces[pl.piece].kind == "section":
            u_map[pl.piece].append(pl.u)
    return {
        "counts": counts,
        "u": {pi: np.sort(np.array(us)) for pi, us in u_map.items() if us},
    }


def fill_sequence(p, n_max: int, cfg: HAConfig | None = None, axis: MedialAxis | None = None) -> FillRun:
    """Best filling solutions found for N = 1..n_max."""
    cfg = cfg or HAConfig()
    if axis is None:
        axis = compute_medial_axis(p if isinstance(p, Polygon) else Polygon(p))
    polygon = axis.polygon
    trace = HATrace()
    cache = _PartCache()
    solutions: list[FillingSolution] = []
    prev_way: Way = tuple([0] * axis.K)
    prev_entry_u: dict[int, np.ndarray] = {}

    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        if cfg.enumerate_all:
            candidates = _all_ways(axis, n)
        elif cfg.pin_junctions and n >= axis.J and axis.J > 0:
            candidates = _pinned_candidates(axis, prev_way, n)
        else:
            candidates = neighborhood_ways(prev_way, axis, cfg.neighborhood_hops)
        candidates = [w for w in candidates if sum(w) == n]
        if not candidates:
            raise GeometryError(f"no candidate ways for N={n}")

        evaluated: dict[Way, tuple[float, dict]] = {}
        n_opts = 0
        for way in candidates:
            way_final, u_map, fresh = _evaluate_way(
                axis, way, prev_way, prev_entry_u, cache, cfg
            )
            n_opts += fresh
            sol = build_solution(axis, way_final, u_map)
            cur = evaluated.get(sol.way)
            if cur is None or sol.phi > cur[0]:
                evaluated[sol.way] = (sol.phi, u_map)

        best_phi = max(v[0] for v in evaluated.values())
        contenders = sorted(
            w for w, v in evaluated.items() if v[0] >= best_phi - 1e-12
        )
        best_way = contenders[0]
        best_u = evaluated[best_way][1]
        sol = build_solution(axis, best_way, best_u)
        sol.method = "ha"
        if solutions and sol.phi < solutions[-1].phi - 1e-12:
            sol.diagnostics.append(
                f"phi decreased from N={n-1}: {solutions[-1].phi} -> {sol.phi}"
            )
        solutions.append(sol)
        prev_way = best_way
        prev_entry_u = {pi: np.array(us) for pi, us in best_u.items()}
        trace.ways_evaluated.append(len(candidates))
        trace.part_optimizations.append(n_opts)
        trace.wall_times.append(time.perf_counter() - t0)
    return FillRun(solutions, trace, axis)


def fill_exhaustive(p, n: int, cfg: HAConfig | None = None, axis: MedialAxis | None = None):
    """Best filling over every way of n discs (full enumeration mode).

    Returns (solution, ways_searched).
    """
    cfg = cfg or HAConfig()
    if axis is None:
        axis = compute_medial_axis(p if isinstance(p, Polygon) else Polygon(p))
    cache = _PartCache()
    zero = tuple([0] * axis.K)
    candidates = _all_ways(axis, n)
    best = None
    for way in candidates:
        way_final, u_map, _ = _evaluate_way(axis, way, zero, {}, cache, cfg)
        sol = build_solution(axis, way_final, u_map)
        if best is None or sol.phi > best.phi + 1e-12 or (
            abs(sol.phi - best.phi) <= 1e-12 and sol.way < best.way
        ):
            best = sol
    best.method = "ha"
    return best, len(candidates)


def _pinned_candidates(axis: MedialAxis, prev_way, n) -> list[Way]:
    junction_pieces = sorted(p.index for p in axis.pieces if p.kind == "junction")
    sections = sorted(p.index for p in axis.pieces if p.kind == "section")
    if n == axis.J:
        w = [0] * axis.K
        for j in junction_pieces:
            w[j] = 1
        return [tuple(w)]
    base = list(prev_way)
    for j in junction_pieces:
        base[j] = 1
    deficit = sum(base) - n + 1
    # Normally prev already holds n-1 discs with junctions occupied.
    while deficit > 0:
        sec_counts = [(base[s], s) for s in sections if base[s] > 0]
        if not sec_counts:
            break
        _, s = max(sec_counts)
        base[s] -= 1
        deficit -= 1
    out = []
    for s in sections:
        w = list(base)
        w[s] += 1
        out.append(tuple(w))
    return sorted(out)


def _evaluate_way(axis, way, prev_way, prev_u, cache: _PartCache, cfg: HAConfig):
    """Resolve a candidate way into optimized per-piece coordinates."""
    way = validate_way(axis, way)
    occ = occupied_junctions(axis, way)
    parts = partition_parts(axis, occ)
    way_final = list(way)
    u_map: dict[int, np.ndarray] = {}
    fresh = 0
    for part in parts:
        counts = tuple(way[pi] for pi in sorted(part))
        if sum(counts) == 0:
            continue
        bounding = _bounding_junctions(axis, part, occ)
        key = cache.key(part, bounding, counts)
        entry = cache.store.get(key) if cfg.use_cache else None
        if entry is None:
            init = _warm_init(axis, part, way, prev_way, prev_u)
            masked = _masked_way(axis, way, part, occ)
            sol = local_maximum(
                axis, masked, init=init, free_parts=[part], cfg=cfg.ascent
            )
            entry = _extract_part(sol, axis, part)
            if cfg.use_cache:
                cache.store[key] = entry
                achieved = tuple(entry["counts"][pi] for pi in sorted(part))
                cache.store.setdefault(
                    cache.key(part, bounding, achieved), entry
                )
            fresh += 1
            cache.misses += 1
        else:
            cache.hits += 1
        for pi in part:
            way_final[pi] = entry["counts"].get(pi, 0)
            if pi in entry["u"]:
                u_map[pi] = entry["u"][pi]
    return tuple(way_final), u_map, fresh


def _warm_init(axis, part, way, prev_way, prev_u):
    """Initial coordinates for a part: keep the previous configuration
    where counts match, insert single new discs into the widest gap, and
    spread pieces whose counts changed in any other fashion."""
    init = {}
    for qi in part:
        if axis.pieces[qi].kind != "section" or way[qi] == 0:
            continue
        prev = prev_u.get(qi)
        if way[qi] == prev_way[qi] and prev is not None and len(prev) == way[qi]:
            init[qi] = prev
        elif (
            way[qi] == prev_way[qi] + 1
            and prev is not None
            and len(prev) == way[qi] - 1
        ):
            edges = np.concatenate([[0.0], np.sort(prev), [1.0]])
            gaps = np.diff(edges)
            k = int(np.argmax(gaps))
            u_new = 0.5 * (edges[k] + edges[k + 1])
            init[qi] = np.sort(np.append(prev, u_new))
        else:
            init[qi] = (np.arange(way[qi]) + 0.5) / way[qi]
    return init
