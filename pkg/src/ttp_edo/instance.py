"""TTP benchmark instances: parsing, serialisation and CEIL_2D distances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

HEADER_KEYS = {
    "PROBLEM NAME": "name",
    "KNAPSACK DATA TYPE": "data_type",
    "DIMENSION": "n",
    "NUMBER OF ITEMS": "m",
    "CAPACITY OF KNAPSACK": "capacity",
    "MIN SPEED": "v_min",
    "MAX SPEED": "v_max",
    "RENTING RATIO": "rent",
    "EDGE_WEIGHT_TYPE": "edge_weight_type",
}


class ParseError(ValueError):
    """Malformed benchmark text. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Item:
    profit: int
    weight: int
    city: int  # 1-based home city


@dataclass(frozen=True)
class Instance:
    """Immutable TTP problem.

    Cities and items are 1-based at this boundary (``cities[0]`` is city 1,
    ``items[0]`` is item 1).  The numpy views (``dist``, ``weights``,
    ``profits``, ``item_city``) are 0-based and are what the operators use.
    """

    name: str
    cities: tuple[tuple[float, float], ...]
    items: tuple[Item, ...]
    capacity: int
    v_min: float
    v_max: float
    rent: float
    data_type: str = ""
    dist: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.cities) < 3:
            raise ValueError(f"need at least 3 cities, got {len(self.cities)}")
        if self.capacity <= 0:
            raise ValueError(f"capacity must be positive, got {self.capacity}")
        if not 0 < self.v_min <= self.v_max:
            raise ValueError(f"speeds must satisfy 0 < v_min <= v_max, got {self.v_min}, {self.v_max}")
        if self.rent < 0:
            raise ValueError(f"renting ratio must be non-negative, got {self.rent}")
        n = len(self.cities)
        for k, it in enumerate(self.items, start=1):
            if not 2 <= it.city <= n:
                raise ValueError(f"item {k} placed at city {it.city}; items live in cities 2..{n}")
            if it.weight <= 0 or it.profit < 0:
                raise ValueError(f"item {k} needs weight > 0 and profit >= 0")
        xy = np.asarray(self.cities, dtype=float)
        diff = xy[:, None, :] - xy[None, :, :]
        d = np.ceil(np.sqrt((diff**2).sum(axis=2))).astype(np.int64)
        d.flags.writeable = False
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return len(self.cities)

    @property
    def m(self) -> int:
        return len(self.items)

    @property
    def nu(self) -> float:
        return (self.v_max - self.v_min) / self.capacity

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([it.weight for it in self.items], dtype=np.int64)

    @cached_property
    def profits(self) -> np.ndarray:
        return np.array([it.profit for it in self.items], dtype=float)

    @cached_property
    def item_city(self) -> np.ndarray:
        """0-based home city per 0-based item."""
        return np.array([it.city - 1 for it in self.items], dtype=np.int64)

    @cached_property
    def inv_speed(self) -> np.ndarray:
        """1 / (v_max - nu * w) for every carried weight w in 0..W."""
        w = np.arange(self.capacity + 1, dtype=float)
        return 1.0 / (self.v_max - self.nu * w)

    def distance(self, u: int, v: int) -> int:
        """CEIL_2D distance between 1-based cities ``u`` and ``v``."""
        for c in (u, v):
            if not 1 <= c <= self.n:
                raise IndexError(f"city {c} outside 1..{self.n}")
        return int(self.dist[u - 1, v - 1])


def ceil_2d(a: tuple[float, float], b: tuple[float, float]) -> int:
    return math.ceil(math.hypot(a[0] - b[0], a[1] - b[1]))


def _number(token: str, lineno: int):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", lineno) from None
    return int(value) if value.is_integer() else value


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    header: dict[str, str] = {}
    coords: list[tuple[float, float]] = []
    items: list[Item] = []
    section = "header"
    header_line: dict[str, int] = {}

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line == "EOF":
            continue
        if line.startswith("NODE_COORD_SECTION"):
            section = "nodes"
            continue
        if line.startswith("ITEMS SECTION"):
            section = "items"
            continue
        if section == "header":
            key, sep, value = line.partition(":")
            key = key.strip()
            if not sep or key not in HEADER_KEYS:
                raise ParseError(f"unrecognised header line {line!r}", lineno)
            header[HEADER_KEYS[key]] = value.strip()
            header_line[HEADER_KEYS[key]] = lineno
            continue

        cols = line.split()
        if section == "nodes":
            if len(cols) != 3:
                raise ParseError("node lines need 'index x y'", lineno)
            idx = _number(cols[0], lineno)
            if idx != len(coords) + 1:
                raise ParseError(f"node index {idx} out of sequence", lineno)
            coords.append((float(_number(cols[1], lineno)), float(_number(cols[2], lineno))))
        else:
            if len(cols) != 4:
                raise ParseError("item lines need 'index profit weight city'", lineno)
            idx, profit, weight, city = (_number(c, lineno) for c in cols)
            if idx != len(items) + 1:
                raise ParseError(f"item index {idx} out of sequence", lineno)
            if not isinstance(weight, int) or weight <= 0:
                raise ParseError(f"item weight must be a positive integer, got {cols[2]}", lineno)
            if profit < 0:
                raise ParseError(f"item profit must be non-negative, got {cols[1]}", lineno)
            if not isinstance(city, int) or city == 1:
                raise ParseError("items cannot be placed at city 1", lineno)
            items.append(Item(profit, weight, city))

    missing = [k for k in ("n", "m", "capacity", "v_min", "v_max", "rent") if k not in header]
    if missing:
        raise ParseError(f"missing header fields: {', '.join(missing)}")

    def header_int(key: str) -> int:
        value = _number(header[key], header_line[key])
        if not isinstance(value, int):
            raise ParseError(f"{key} must be an integer", header_line[key])
        return value

    n, m, capacity = header_int("n"), header_int("m"), header_int("capacity")
    if capacity <= 0:
        raise ParseError("capacity must be positive", header_line["capacity"])
    ewt = header.get("edge_weight_type", "CEIL_2D")
    if ewt != "CEIL_2D":
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {ewt}", header_line["edge_weight_type"])
    if len(coords) != n:
        raise ParseError(f"DIMENSION says {n} cities, NODE_COORD_SECTION has {len(coords)}", header_line["n"])
    if len(items) != m:
        raise ParseError(f"NUMBER OF ITEMS says {m}, ITEMS SECTION has {len(items)}", header_line["m"])
    for k, it in enumerate(items, start=1):
        if it.city > n:
            raise ParseError(f"item {k} placed at city {it.city} > {n}")

    try:
        return Instance(
            name=header.get("name", ""),
            cities=tuple(coords),
            items=tuple(items),
            capacity=capacity,
            v_min=float(_number(header["v_min"], header_line["v_min"])),
            v_max=float(_number(header["v_max"], header_line["v_max"])),
            rent=float(_number(header["rent"], header_line["rent"])),
            data_type=header.get("data_type", ""),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_instance(inst: Instance) -> str:
    """Serialise back to the benchmark text format."""
    out = [
        f"PROBLEM NAME: \t{inst.name}",
        f"KNAPSACK DATA TYPE: \t{inst.data_type}",
        f"DIMENSION:\t{inst.n}",
        f"NUMBER OF ITEMS: \t{inst.m}",
        f"CAPACITY OF KNAPSACK: \t{inst.capacity}",
        f"MIN SPEED: \t{_fmt(inst.v_min)}",
        f"MAX SPEED: \t{_fmt(inst.v_max)}",
        f"RENTING RATIO: \t{_fmt(inst.rent)}",
        "EDGE_WEIGHT_TYPE:\tCEIL_2D",
        "NODE_COORD_SECTION\t(INDEX, X, Y): ",
    ]
    out += [f"{k}\t{_fmt(x)}\t{_fmt(y)}" for k, (x, y) in enumerate(inst.cities, start=1)]
    out.append("ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER): ")
    out += [f"{k}\t{_fmt(it.profit)}\t{it.weight}\t{it.city}" for k, it in enumerate(inst.items, start=1)]
    return "\n".join(out) + "\n"
