"""Command-line front end.

Subcommands: ma, fill, sweep, compare, continuum, ways, check.
Exit codes: 0 success, 2 input validation failure, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import continuum as ct
from . import io as dio
from .coverage import phi as coverage_phi
from .genetic import GAConfig, ga_way, run_ga
from .geometry import GeometryError, disc_inside
from .heuristic import HAConfig, fill_exhaustive, fill_sequence
from .local_opt import AscentConfig
from .medial_axis import compute_medial_axis
from .svg import render_svg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="discfill",
        description="Optimal filling of simple polygons with overlapping maximal discs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ma = sub.add_parser("ma", help="compute the medial axis of a polygon")
    ma.add_argument("polygon")
    ma.add_argument("--json", dest="json_out")
    ma.add_argument("--svg", dest="svg_out")

    fill = sub.add_parser("fill", help="fill a polygon with N discs")
    fill.add_argument("polygon")
    fill.add_argument("-n", type=int, required=True)
    fill.add_argument("--method", choices=("ha", "ga", "both"), default="ha")
    fill.add_argument("--seed", type=int, default=0)
    fill.add_argument("--seeds", type=int, default=10)
    fill.add_argument("--pop-mult", type=int, default=100)
    fill.add_argument("--stall", type=int, default=200)
    fill.add_argument("--neighborhood", type=int, default=2, metavar="A")
    fill.add_argument("--enumerate-all", action="store_true")
    fill.add_argument("--pin-junctions", action="store_true")
    fill.add_argument("--json", dest="json_out")
    fill.add_argument("--svg", dest="svg_out")

    sweep = sub.add_parser("sweep", help="fill for every N = 1..n-max")
    sweep.add_argument("polygon")
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--neighborhood", type=int, default=2, metavar="A")
    sweep.add_argument("--pin-junctions", action="store_true")
    sweep.add_argument("--csv", dest="csv_out")
    sweep.add_argument("--out-dir")

    comp = sub.add_parser("compare", help="HA vs GA over a polygon corpus")
    comp.add_argument("corpus_dir")
    comp.add_argument("--n-max", type=int, default=10)
    comp.add_argument("--seed", type=int, default=0)
    comp.add_argument("--seeds", type=int, default=3)
    comp.add_argument("--pop-mult", type=int, default=100)
    comp.add_argument("--stall", type=int, default=200)
    comp.add_argument("--csv", dest="csv_out")

    cont = sub.add_parser("continuum", help="large-N allocation prediction")
    cont.add_argument("polygon")
    cont.add_argument("-n", type=int, required=True)
    cont.add_argument("--json", dest="json_out")

    ways = sub.add_parser("ways", help="count ways of n discs over k pieces")
    ways.add_argument("--k", type=int, required=True)
    ways.add_argument("--j", type=int, required=True)
    ways.add_argument("-n", type=int, required=True)

    chk = sub.add_parser("check", help="re-validate a solution file")
    chk.add_argument("solution")
    return ap


def _ha_config(args) -> HAConfig:
    return HAConfig(
        neighborhood_hops=getattr(args, "neighborhood", 2),
        pin_junctions=getattr(args, "pin_junctions", False),
        ascent=AscentConfig(),
    )


def _ga_config(args) -> GAConfig:
    return GAConfig(
        population_multiplier=args.pop_mult,
        seeds=args.seeds,
        seed=args.seed,
        stall_generations=args.stall,
    )


def cmd_ma(args) -> int:
    p = dio.load_polygon(args.polygon)
    m = compute_medial_axis(p)
    payload = json.dumps(dio.axis_to_dict(m), indent=1)
    if args.json_out:
        Path(args.json_out).write_text(payload)
    else:
        print(payload)
    if args.svg_out:
        Path(args.svg_out).write_text(render_svg(p, axis=m))
    return 0


def cmd_fill(args) -> int:
    p = dio.load_polygon(args.polygon)
    m = compute_medial_axis(p)
    results = {}
    if args.method in ("ha", "both"):
        if args.enumerate_all:
            sol, searched = fill_exhaustive(p, args.n, _ha_config(args), axis=m)
            print(f"ways searched: {searched}")
        else:
            run = fill_sequence(p, args.n, _ha_config(args), axis=m)
            sol = run[-1]
            print(f"ways searched: {run.trace.total_ways}")
        results["ha"] = sol
        print(f"phi_ha = {sol.phi:.9f}")
    if args.method in ("ga", "both"):
        sol = run_ga(p, args.n, _ga_config(args), axis=m)
        results["ga"] = sol
        print(f"phi_ga = {sol.phi:.9f}")
    if args.method == "both":
        match = results["ha"].way == results["ga"].way
        print(f"way match: {'yes' if match else 'no'}")
    primary = results.get("ha", results.get("ga"))
    stem = Path(args.polygon).stem
    json_out = args.json_out or f"{stem}.fill-n{args.n}.{args.method}.json"
    dio.save_solution(json_out, primary, p)
    if args.svg_out:
        Path(args.svg_out).write_text(render_svg(p, axis=m, discs=primary.discs))
    return 0


def cmd_sweep(args) -> int:
    p = dio.load_polygon(args.polygon)
    m = compute_medial_axis(p)
    run = fill_sequence(p, args.n_max, _ha_config(args), axis=m)
    stem = Path(args.polygon).stem
    out_dir = Path(args.out_dir) if args.out_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for n, sol in enumerate(run, start=1):
        rows.append(
            [
                n,
                f"{sol.phi:.12f}",
                " ".join(map(str, sol.way)),
                run.trace.ways_evaluated[n - 1],
                f"{run.trace.wall_times[n - 1]:.3f}",
            ]
        )
        dio.save_solution(out_dir / f"{stem}.n{n}.ha.json", sol, p)
    csv_out = args.csv_out or str(out_dir / f"{stem}.sweep.csv")
    dio.write_csv(csv_out, ["n", "phi", "way", "searches", "wall_s"], rows)
    print(f"wrote {csv_out}")
    return 0


def cmd_compare(args) -> int:
    corpus = sorted(Path(args.corpus_dir).glob("*.json"))
    if not corpus:
        print("no polygons found in corpus directory", file=sys.stderr)
        return 2
    rows = []
    n_match = 0
    n_ha_way = 0
    n_ga_way = 0
    n_ha_phi = 0
    total = 0
    for path in corpus:
        p = dio.load_polygon(path)
        m = compute_medial_axis(p)
        run = fill_sequence(p, args.n_max, HAConfig(), axis=m)
        for n in range(1, args.n_max + 1):
            t0 = time.perf_counter()
            ga_sol = run_ga(p, n, _ga_config(args), axis=m)
            dt = time.perf_counter() - t0
            ha_sol = run[n - 1]
            match = ha_sol.way == ga_sol.way
            total += 1
            n_match += match
            if not match:
                if ha_sol.phi > ga_sol.phi + 1e-9:
                    n_ha_way += 1
                elif ga_sol.phi > ha_sol.phi + 1e-9:
                    n_ga_way += 1
            if ha_sol.phi >= ga_sol.phi - 1e-9:
                n_ha_phi += 1
            rows.append(
                [
                    path.stem,
                    n,
                    f"{ha_sol.phi:.9f}",
                    f"{ga_sol.phi:.9f}",
                    " ".join(map(str, ha_sol.way)),
                    " ".join(map(str, ga_sol.way)),
                    int(match),
                    run.trace.ways_evaluated[n - 1],
                    f"{dt:.2f}",
                ]
            )
    header = [
        "polygon", "n", "phi_ha", "phi_ga", "way_ha", "way_ga",
        "way_match", "searches", "ga_wall_s",
    ]
    if args.csv_out:
        dio.write_csv(args.csv_out, header, rows)
    print(f"instances:      {total}")
    print(f"way match:      {100.0 * n_match / total:.1f}%")
    print(f"best way HA:    {100.0 * n_ha_way / total:.1f}%")
    print(f"best way GA:    {100.0 * n_ga_way / total:.1f}%")
    print(f"best phi HA:    {100.0 * n_ha_phi / total:.1f}%")
    return 0


def cmd_continuum(args) -> int:
    p = dio.load_polygon(args.polygon)
    m = compute_medial_axis(p)
    plan = ct.allocate(m, args.n)
    models = {mod.branch: mod for mod in ct.branch_models(m)}
    branches = []
    for b_idx, frac, cnt in zip(plan.branches, plan.fractions, plan.counts):
        branches.append(
            {
                "branch": int(b_idx),
                "case": m.branches[b_idx].case,
                "C_i": models[b_idx].c_total,
                "f_i": float(frac),
                "N_i": int(cnt),
            }
        )
    for b_idx in plan.excluded:
        branches.append(
            {"branch": int(b_idx), "case": m.branches[b_idx].case, "excluded": True}
        )
    payload = json.dumps(
        {"branches": branches, "predicted_phi": ct.predicted_phi(m, args.n)},
        indent=1,
    )
    if args.json_out:
        Path(args.json_out).write_text(payload)
    else:
        print(payload)
    return 0


def cmd_ways(args) -> int:
    print(ct.count_ways(args.n, args.k, args.j))
    return 0


def cmd_check(args) -> int:
    p, sol = dio.load_solution(args.solution)
    fresh = coverage_phi(sol, p)
    if abs(fresh - sol.phi) > 1e-10:
        print(f"FAIL: stored phi {sol.phi!r} != recomputed {fresh!r}", file=sys.stderr)
        return 2
    for d in sol.discs:
        if not disc_inside(p, d, p.tol * 10):
            print(f"FAIL: disc {d} outside polygon", file=sys.stderr)
            return 2
    print(f"OK: n={len(sol.discs)} phi={sol.phi:.9f}")
    return 0


_COMMANDS = {
    "ma": cmd_ma,
    "fill": cmd_fill,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "continuum": cmd_continuum,
    "ways": cmd_ways,
    "check": cmd_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GeometryError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
