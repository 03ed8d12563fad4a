"""Solution snapshots, population JSONL, trajectory CSV and atomic file writes."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .engine import TrajectoryRow
from .instance import Instance
from .solution import PackingList, Tour, TtpSolution, evaluate

TRAJECTORY_HEADER = "iteration,H,He,Hi,accepted"


class ValidationError(ValueError):
    pass


def atomic_write(path: str | Path, text: str):
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def parse_tour(inst: Instance, cities: Sequence[int]) -> Tour:
    cities = list(cities)
    if sorted(cities) != list(range(1, inst.n + 1)):
        raise ValidationError(f"tour is not a permutation of cities 1..{inst.n}")
    if cities[0] != 1:
        raise ValidationError("tour must start at city 1")
    return Tour.from_cities(cities)


def solution_from_snapshot(inst: Instance, record: dict) -> TtpSolution:
    """Validate a ``{tour, packing, z}`` record against ``inst``; z is recomputed."""
    try:
        tour = parse_tour(inst, [int(c) for c in record["tour"]])
        items = [int(i) for i in record["packing"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed solution record: {exc}") from exc
    if len(set(items)) != len(items) or any(not 1 <= i <= inst.m for i in items):
        raise ValidationError(f"packing must list distinct items in 1..{inst.m}")
    packing = PackingList.from_items(inst, items)
    if not packing.feasible(inst):
        raise ValidationError(f"packing weight {packing.total_weight} exceeds capacity {inst.capacity}")
    return TtpSolution(tour, packing, evaluate(inst, tour, packing))


def load_snapshot(inst: Instance, path: str | Path) -> TtpSolution:
    try:
        record = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    return solution_from_snapshot(inst, record)


def snapshot_json(sol: TtpSolution) -> str:
    return json.dumps(sol.snapshot())


def population_jsonl(members: Iterable[TtpSolution]) -> str:
    return "".join(snapshot_json(s) + "\n" for s in members)


def load_population(inst: Instance, path: str | Path) -> list[TtpSolution]:
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(solution_from_snapshot(inst, json.loads(line)))
        except (json.JSONDecodeError, ValidationError) as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    if not out:
        raise ValidationError(f"{path}: no solutions")
    return out


def trajectory_csv(rows: Iterable[TrajectoryRow]) -> str:
    lines = [TRAJECTORY_HEADER]
    lines += [f"{r.iteration},{r.H!r},{r.He!r},{r.Hi!r},{int(r.accepted)}" for r in rows]
    return "\n".join(lines) + "\n"


def read_trajectory(path: str | Path) -> list[TrajectoryRow]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != TRAJECTORY_HEADER:
        raise ValidationError(f"{path}: expected header {TRAJECTORY_HEADER!r}")
    rows = []
    for line in lines[1:]:
        it, h, he, hi, acc = line.split(",")
        rows.append(TrajectoryRow(int(it), float(h), float(he), float(hi), acc == "1"))
    return rows


def load_tour_file(inst: Instance, path: str | Path) -> Tour:
    """Tour as a JSON list, a snapshot-like JSON object, or whitespace-separated cities."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise ValidationError(f"{path}: cannot read tour ({exc})") from exc
    if isinstance(data, dict):
        data = data.get("tour")
    if not isinstance(data, list) or not all(isinstance(c, int) for c in data):
        raise ValidationError(f"{path}: tour must be a list of city indices")
    return parse_tour(inst, data)
