"""Large-N behavior: optimal center densities, branch constants, disc
allocation fractions, and way counting.

Along a branch with radius function r(s) (s = arclength), the uncovered
area left by centers at density rho(s) is  A = integral C(s) / rho(s)^2 ds
with a per-case gap coefficient C:

* two edge parents:         C = (1 - r'^2)^(3/2) / (12 r)
* reflex vertex + edge:     C = (1 - r'^2)^(3/2) / (24 r)   (one open side)
* constant curvature kappa: C = (kappa^2 r + 1/r) / 12

Minimizing A at fixed disc count gives rho proportional to C^(1/3), a
power law rho ~ r^(-1/3) on straight branches and r^(-5/6) on parabolic
ones, and a branch constant  C_total = (integral C^(1/3) ds)^3  so that
A = C_total / N^2.  Equalizing marginal gains across branches yields
allocation fractions proportional to C_total^(1/3).

Branches between two reflex vertices hold no interior centers in the
large-N limit (their ends alone cover the whole strip), so they are
excluded from allocation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError
from .medial_axis import Branch, MedialAxis

CASE_ALPHA = {"edge_edge": 1.0 / 3.0, "vertex_edge": 5.0 / 6.0}


class ExcludedBranchError(GeometryError):
    """Raised for branches that carry no centers in the continuum limit."""


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, depth: int = 50) -> float:
    """Adaptive Simpson quadrature with absolute tolerance."""
    if a == b:
        return 0.0

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def rec(lo, hi, flo, fmid, fhi, whole, eps, d):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if d <= 0 or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) + rec(
            mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return rec(a, b, fa, fm, fb, whole, tol, depth)


def _gap_coefficient(branch: Branch, t):
    """C(t) in arclength terms for an included branch."""
    rp = branch.radius_prime_arc(t)
    r = branch.radius(t)
    one_sided = branch.case == "vertex_edge"
    denom = 24.0 if one_sided else 12.0
    return (1.0 - rp * rp) ** 1.5 / (denom * r)


@dataclass
class ContinuumBranchModel:
    branch: int
    case: str
    alpha: float
    r0_integral: float  # integral of r^(-alpha) ds
    c_total: float  # uncovered-area constant: A = c_total / N^2
    excluded: bool = False


@dataclass
class AllocationPlan:
    branches: list[int]
    fractions: np.ndarray
    counts: np.ndarray
    excluded: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return int(np.sum(self.counts))


def branch_constant(b: Branch, tol: float = 1e-10) -> float:
    """Uncovered-area constant of one branch: A = constant / N^2.

    Straight two-edge branches admit a closed form; parabolic branches are
    integrated by adaptive Simpson.  Branches between two reflex vertices
    are excluded (their interiors hold no centers in the limit).
    """
    if b.case == "vertex_vertex":
        raise ExcludedBranchError("reflex-reflex branches carry no centers")
    if b.case == "edge_edge":
        # integral of C^(1/3) ds has a regular antiderivative in r.
        c = b.c
        r_a = max(b.radius(b.t0), 0.0)
        r_b = b.radius(b.t1)
        pref = (1.0 - c * c) ** 0.5 / 12.0 ** (1.0 / 3.0)
        if c <= 1e-14:
            integral = (b.t1 - b.t0) * pref * r_a ** (-1.0 / 3.0)
        else:
            integral = pref * 1.5 / c * (r_b ** (2.0 / 3.0) - r_a ** (2.0 / 3.0))
        return float(integral**3)
    # Parabolic branch: integrate C^(1/3) ds over the parameter t.
    r0 = b.r0

    def f(t):
        ds = 2.0 * r0 * math.sqrt(1.0 + t * t)
        return (1.0 / (24.0 * r0)) ** (1.0 / 3.0) * (1.0 + t * t) ** (-5.0 / 6.0) * ds

    integral = adaptive_simpson(f, b.t0, b.t1, tol)
    return float(integral**3)


def constant_curvature_constant(length: float, kappa: float, r: float) -> float:
    """Branch constant for constant curvature and constant radius."""
    if r <= 0:
        raise GeometryError("radius must be positive")
    return length**3 * (kappa * kappa * r + 1.0 / r) / 12.0


def two_disc_gap(d: float, r: float, r_prime: float, both_sides: bool = False) -> float:
    """Leading-order uncovered area between two nearby maximal discs and
    one tangent edge; doubled when both sides are open edges."""
    area = d**3 * (1.0 - r_prime * r_prime) ** 1.5 / (24.0 * r)
    return 2.0 * area if both_sides else area


def branch_models(m: MedialAxis, tol: float = 1e-10) -> list[ContinuumBranchModel]:
    out = []
    for b in m.branches:
        if b.case == "vertex_vertex":
            out.append(
                ContinuumBranchModel(
                    branch=b.index, case=b.case, alpha=float("nan"),
                    r0_integral=float("nan"), c_total=0.0, excluded=True,
                )
            )
            continue
        alpha = CASE_ALPHA[b.case]

        def f(t, b=b, alpha=alpha):
            ds = float(b.speed(np.asarray(t, float)))
            return float(b.radius(np.asarray(t, float))) ** (-alpha) * ds

        t_lo = b.t0
        if b.case == "edge_edge" and b.radius(b.t0) <= 0:
            t_lo = b.t0 + 1e-8 * (b.t1 - b.t0)
        r0_int = adaptive_simpson(f, t_lo, b.t1, tol)
        out.append(
            ContinuumBranchModel(
                branch=b.index, case=b.case, alpha=alpha,
                r0_integral=float(r0_int),
                c_total=branch_constant(b, tol),
            )
        )
    return out


def allocate(m: MedialAxis, n: int, tol: float = 1e-10) -> AllocationPlan:
    """Distribute n discs over branches by the cube-root rule with
    largest-remainder rounding (ties to the larger constant)."""
    models = branch_models(m, tol)
    included = [mod for mod in models if not mod.excluded]
    if not included:
        raise ExcludedBranchError("no branches admit a continuum allocation")
    weights = np.array([mod.c_total ** (1.0 / 3.0) for mod in included])
    fractions = weights / np.sum(weights)
    ideal = fractions * n
    counts = np.floor(ideal).astype(int)
    remainder = n - int(np.sum(counts))
    if remainder > 0:
        order = sorted(
            range(len(included)),
            key=lambda i: (-(ideal[i] - counts[i]), -included[i].c_total),
        )
        for i in order[:remainder]:
            counts[i] += 1
    return AllocationPlan(
        branches=[mod.branch for mod in included],
        fractions=fractions,
        counts=counts,
        excluded=[mod.branch for mod in models if mod.excluded],
    )


def predicted_uncovered(m: MedialAxis, n: int, tol: float = 1e-10):
    """Predicted total uncovered area for n optimally distributed discs.

    Returns (area, diagnostics).  Included branches that receive no discs
    report their whole parent-region gap as a diagnostic instead of being
    dropped silently.
    """
    plan = allocate(m, n, tol)
    models = {mod.branch: mod for mod in branch_models(m, tol)}
    total = 0.0
    diagnostics = []
    for b_idx, cnt in zip(plan.branches, plan.counts):
        mod = models[b_idx]
        if cnt == 0:
            gap = _parent_region_area(m.branches[b_idx])
            diagnostics.append(
                f"branch {b_idx} received no discs; parent-region gap {gap:.6g}"
            )
            total += gap
        else:
            total += mod.c_total / cnt**2
    return total, diagnostics


def predicted_phi(m: MedialAxis, n: int, tol: float = 1e-10) -> float:
    area, _ = predicted_uncovered(m, n, tol)
    return 1.0 - area / m.polygon.area


def _parent_region_area(b: Branch) -> float:
    """Area swept between a branch and its open parent sides."""
    sides = 1.0 if b.case == "vertex_edge" else 2.0

    def f(t):
        rp = float(b.radius_prime_arc(np.asarray(t, float)))
        return (
            sides
            * float(b.radius(np.asarray(t, float)))
            * math.sqrt(max(1.0 - rp * rp, 0.0))
            * float(b.speed(np.asarray(t, float)))
        )

    return adaptive_simpson(f, b.t0, b.t1, 1e-10)


def density_profile(b: Branch, n: int, num: int = 101):
    """Center density rho(t) = (n / R0) r(t)^(-alpha) sampled along the
    branch; integrates back to n over arclength."""
    if b.case == "vertex_vertex":
        raise ExcludedBranchError("reflex-reflex branches carry no centers")
    alpha = CASE_ALPHA[b.case]

    def f(t):
        return float(b.radius(np.asarray(t, float))) ** (-alpha) * float(
            b.speed(np.asarray(t, float))
        )

    t_lo = b.t0
    if b.case == "edge_edge" and b.radius(b.t0) <= 0:
        t_lo = b.t0 + 1e-8 * (b.t1 - b.t0)
    r0_int = adaptive_simpson(f, t_lo, b.t1, 1e-10)
    t = np.linspace(t_lo, b.t1, num)
    rho = (n / r0_int) * b.radius(t) ** (-alpha)
    return t, rho


def triangle_cot_fractions(angles) -> np.ndarray:
    """Allocation fractions for a triangle's three corner branches.

    The branch from the corner with internal angle theta makes angle
    theta/2 with its edges, and its constant scales as cot^3(theta/2);
    sharper corners take more discs.
    """
    angles = np.asarray(angles, float)
    if angles.shape != (3,) or abs(float(np.sum(angles)) - math.pi) > 1e-9:
        raise GeometryError("expected three internal angles summing to pi")
    w = 1.0 / np.tan(angles / 2.0)
    return w / np.sum(w)


def count_ways(n: int, k: int, j: int) -> int:
    """Exact number of ways to place n discs over k pieces of which j are
    junctions (occupancy 0 or 1): weak compositions summed over junction
    occupation patterns."""
    if not (0 <= j < k):
        raise GeometryError("need 0 <= j < k")
    if n < 0:
        raise GeometryError("n must be non-negative")
    total = 0
    for m_occ in range(min(j, n) + 1):
        total += math.comb(j, m_occ) * math.comb(n - m_occ + k - j - 1, k - j - 1)
    return total
