"""Readers and writers for the artifacts the CLI produces.

Floats are written with ``repr`` (via the json module or explicitly in CSV),
which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .correlations import Behavior, entry_of
from .geometry import Face
from .quantum import QubitConfig, QutritConfig

__all__ = [
    "behavior_to_json",
    "behavior_from_json",
    "write_behavior",
    "read_behavior",
    "write_witness",
    "read_witness",
    "config_from_json",
    "FACE_COLUMNS",
    "write_faces_csv",
    "read_faces_csv",
    "write_faces_json",
    "read_faces_json",
    "write_summary",
    "read_summary",
    "PRINCIPLE_COLUMNS",
    "write_principles_csv",
    "read_principles_csv",
    "write_pairs_csv",
    "read_pairs_csv",
    "dump_json",
]


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# behaviors


def behavior_to_json(beh: Behavior) -> dict:
    if beh.is_chsh:
        return {"scenario": [2, 2, 2, 2], "p": [float(v) for v in beh.vector()]}
    nx, ny = beh.p.shape[:2]
    entries = {f"{a},{b}|{x},{y}": float(beh.p[x, y, a, b])
               for x in range(nx) for y in range(ny) for a in (0, 1) for b in (0, 1)}
    return {"scenario": [nx, ny, 2, 2], "p": entries}


def behavior_from_json(data: dict) -> Behavior:
    nx, ny, oa, ob = data["scenario"]
    if (oa, ob) != (2, 2):
        raise ValueError("only binary outcomes are supported")
    if isinstance(data["p"], list):
        return Behavior.from_vector(np.array(data["p"], dtype=float))
    p = np.full((nx, ny, 2, 2), np.nan)
    for key, val in data["p"].items():
        ab, xy = key.split("|")
        a, b = map(int, ab.split(","))
        x, y = map(int, xy.split(","))
        p[x, y, a, b] = val
    if np.isnan(p).any():
        raise ValueError("missing entries in keyed behavior")
    return Behavior(p)


def write_behavior(beh: Behavior, path) -> None:
    dump_json(behavior_to_json(beh), path)


def read_behavior(path) -> Behavior:
    return behavior_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# quantum witnesses


def config_from_json(data: dict):
    if data["kind"] == "qubit":
        return QubitConfig.from_json(data)
    return QutritConfig.from_json(data)


def write_witness(path, face: Face, config, value: float, behavior: Behavior, source: str) -> None:
    dump_json({
        "mask": face.mask,
        "zeroed": sorted(face.zeroed),
        "source": source,
        "chsh_value": float(value),
        "config": config.to_json(),
        "behavior": behavior_to_json(behavior),
    }, path)


def read_witness(path) -> dict:
    data = json.loads(Path(path).read_text())
    data["config"] = config_from_json(data["config"])
    data["behavior"] = behavior_from_json(data["behavior"])
    return data


# ---------------------------------------------------------------------------
# face tables

FACE_COLUMNS = ("mask", "dim", "verdict", "evidence_kind", "evidence_detail")


def _face_rows(table, witness_paths=None):
    witness_paths = witness_paths or {}
    for c in table:
        detail = witness_paths.get(c.face.mask, c.evidence_detail)
        yield {"mask": c.face.mask, "dim": c.face.dim, "verdict": c.verdict,
               "evidence_kind": c.evidence_kind, "evidence_detail": detail}


def write_faces_csv(table, path, witness_paths=None) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, FACE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(_face_rows(table, witness_paths))


def read_faces_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r["mask"], r["dim"] = int(r["mask"]), int(r["dim"])
    return rows


def write_faces_json(table, path, witness_paths=None) -> None:
    dump_json(list(_face_rows(table, witness_paths)), path)


def read_faces_json(path) -> list[dict]:
    return json.loads(Path(path).read_text())


def write_summary(counts: dict, path) -> None:
    rows = [{"dim": d, "faces": n, "voids": v} for d, (n, v) in sorted(counts.items())]
    dump_json({"rows": rows, "total_faces": sum(r["faces"] for r in rows),
               "total_voids": sum(r["voids"] for r in rows)}, path)


def read_summary(path) -> dict[int, tuple[int, int]]:
    data = json.loads(Path(path).read_text())
    return {r["dim"]: (r["faces"], r["voids"]) for r in data["rows"]}


# ---------------------------------------------------------------------------
# principle reports and plot data

PRINCIPLE_COLUMNS = ("mask", "principle", "mu_star", "reproducible")


def write_principles_csv(rows, path) -> None:
    """``rows`` are (mask, principle, mu_star, reproducible) tuples."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PRINCIPLE_COLUMNS)
        for mask, name, mu, ok in rows:
            w.writerow([mask, name, repr(float(mu)), str(bool(ok)).lower()])


def read_principles_csv(path) -> list[tuple]:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        next(rd)
        return [(int(m), n, float(mu), ok == "true") for m, n, mu, ok in rd]


def write_pairs_csv(pairs, path, header=("mu", "statistic")) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in pairs:
            w.writerow([repr(float(v)) for v in row])


def read_pairs_csv(path) -> list[tuple[float, ...]]:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        next(rd)
        return [tuple(float(v) for v in row) for row in rd]


def entry_label(i: int) -> str:
    a, b, x, y = entry_of(i)
    return f"p({a},{b}|{x},{y})"
