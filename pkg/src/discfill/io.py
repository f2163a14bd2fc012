"""JSON schemas for polygons, solutions and axes, plus CSV helpers."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .coverage import FillingSolution, Placement
from .geometry import Disc, GeometryError, Polygon
from .medial_axis import MedialAxis


def polygon_to_dict(p: Polygon) -> dict:
    return {"vertices": [[float(x), float(y)] for x, y in p.vertices]}


def _read_maybe_path(source) -> str:
    text = str(source)
    try:
        if Path(text).exists():
            return Path(text).read_text()
    except OSError:
        pass
    return text


def load_polygon(source) -> Polygon:
    """Read a polygon from a path, JSON string, or dict."""
    data = source if isinstance(source, dict) else json.loads(_read_maybe_path(source))
    if "vertices" not in data:
        raise GeometryError("polygon JSON must contain a 'vertices' array")
    return Polygon(data["vertices"])


def solution_to_dict(sol: FillingSolution, p: Polygon) -> dict:
    discs = []
    for i, d in enumerate(sol.discs):
        entry = {"x": d.x, "y": d.y, "r": d.r}
        if sol.placements is not None:
            entry["piece"] = int(sol.placements[i].piece)
            entry["u"] = float(sol.placements[i].u)
        discs.append(entry)
    return {
        "polygon": polygon_to_dict(p),
        "n": len(sol.discs),
        "discs": discs,
        "phi": sol.phi,
        "way": list(sol.way) if sol.way is not None else None,
        "method": sol.method,
    }


def save_solution(path, sol: FillingSolution, p: Polygon) -> None:
    Path(path).write_text(json.dumps(solution_to_dict(sol, p), indent=1))


def load_solution(source) -> tuple[Polygon, FillingSolution]:
    data = json.loads(_read_maybe_path(source))
    p = load_polygon(data["polygon"])
    discs = [Disc(float(d["x"]), float(d["y"]), float(d["r"])) for d in data["discs"]]
    placements = None
    if data["discs"] and "piece" in data["discs"][0]:
        placements = [
            Placement(int(d["piece"]), float(d.get("u", 0.0))) for d in data["discs"]
        ]
    sol = FillingSolution(
        discs=discs,
        phi=float(data["phi"]),
        placements=placements,
        way=tuple(data["way"]) if data.get("way") is not None else None,
        method=data.get("method", "ha"),
    )
    return p, sol


def axis_to_dict(m: MedialAxis) -> dict:
    branches = []
    for b in m.branches:
        entry = {
            "index": b.index,
            "case": b.case,
            "parents": [list(f) for f in b.parents],
            "t_range": [b.t0, b.t1],
            "origin": [float(v) for v in b.origin],
        }
        if b.case == "vertex_edge":
            entry["xdir"] = [float(v) for v in b.xdir]
            entry["ydir"] = [float(v) for v in b.ydir]
            entry["r0"] = b.r0
        else:
            entry["direction"] = [float(v) for v in b.direction]
            if b.case == "edge_edge":
                entry["r0"] = b.r0
                entry["c"] = b.c
            else:
                entry["a"] = b.a
        branches.append(entry)
    junctions = [
        {
            "node": j.node,
            "position": [float(v) for v in j.position],
            "radius": j.radius,
            "degree": j.degree,
            "branches": list(j.branches),
        }
        for j in m.junctions
    ]
    pieces = []
    for piece in m.pieces:
        if piece.kind == "junction":
            pieces.append({"index": piece.index, "kind": "junction", "node": piece.junction})
        else:
            pieces.append(
                {
                    "index": piece.index,
                    "kind": "section",
                    "segments": [[int(b), float(ta), float(tb)] for b, ta, tb in piece.segments],
                    "length": piece.length,
                }
            )
    return {
        "polygon": polygon_to_dict(m.polygon),
        "branches": branches,
        "junctions": junctions,
        "pieces": pieces,
        "diagnostics": list(m.diagnostics),
    }


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def corpus_dir() -> Path:
    """Directory of the bundled comparison polygons."""
    return Path(__file__).parent / "data" / "corpus"


def corpus_paths() -> list[Path]:
    return sorted(corpus_dir().glob("*.json"))
