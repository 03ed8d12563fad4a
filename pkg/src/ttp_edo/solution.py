"""Tours, packing lists and the TTP objective."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .instance import Instance


class CapacityError(ValueError):
    pass


class Tour:
    """A permutation of the cities that starts at city 1.

    ``order`` and ``pos`` are 0-based internal views: ``order[k]`` is the city
    visited at position ``k`` and ``pos[c]`` is the position of city ``c``.
    """

    def __init__(self, order: Sequence[int] | np.ndarray):
        order = np.asarray(order, dtype=np.int64)
        n = len(order)
        if n < 3 or order[0] != 0 or not np.array_equal(np.sort(order), np.arange(n)):
            raise ValueError("tour must be a permutation of all cities starting at city 1")
        pos = np.empty(n, dtype=np.int64)
        pos[order] = np.arange(n)
        order.flags.writeable = False
        pos.flags.writeable = False
        self.order = order
        self.pos = pos

    @classmethod
    def from_cities(cls, cities: Iterable[int]) -> "Tour":
        """Build from 1-based city labels."""
        return cls(np.asarray(list(cities), dtype=np.int64) - 1)

    @property
    def n(self) -> int:
        return len(self.order)

    def cities(self) -> list[int]:
        return (self.order + 1).tolist()

    def succ(self, c: int) -> int:
        return int(self.order[(self.pos[c] + 1) % self.n])

    def pred(self, c: int) -> int:
        return int(self.order[self.pos[c] - 1])

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted integer keys ``min*n + max`` of the n undirected edges."""
        a = self.order
        b = np.roll(a, -1)
        keys = np.minimum(a, b) * self.n + np.maximum(a, b)
        keys.sort()
        keys.flags.writeable = False
        return keys

    def edges(self) -> set[tuple[int, int]]:
        """Undirected edges as 0-based ``(low, high)`` pairs."""
        return {(int(k) // self.n, int(k) % self.n) for k in self.edge_keys}

    def length(self, inst: Instance) -> int:
        return int(inst.dist[self.order, np.roll(self.order, -1)].sum())

    def __eq__(self, other):
        return isinstance(other, Tour) and np.array_equal(self.order, other.order)

    def __hash__(self):
        return hash(self.order.tobytes())

    def __repr__(self):
        return f"Tour({self.cities()})"


class PackingList:
    """Item inclusion bits with cached weight and profit totals."""

    __slots__ = ("selected", "total_weight", "total_profit")

    def __init__(self, inst: Instance, selected: Sequence[bool] | np.ndarray):
        sel = np.array(selected, dtype=bool)
        if sel.shape != (inst.m,):
            raise ValueError(f"packing needs {inst.m} bits, got shape {sel.shape}")
        sel.flags.writeable = False
        self.selected = sel
        self.total_weight = int(inst.weights[sel].sum())
        self.total_profit = float(inst.profits[sel].sum())

    @classmethod
    def empty(cls, inst: Instance) -> "PackingList":
        return cls(inst, np.zeros(inst.m, dtype=bool))

    @classmethod
    def from_items(cls, inst: Instance, items: Iterable[int]) -> "PackingList":
        """Build from 1-based item indices."""
        sel = np.zeros(inst.m, dtype=bool)
        for i in items:
            if not 1 <= i <= inst.m:
                raise ValueError(f"item {i} outside 1..{inst.m}")
            sel[i - 1] = True
        return cls(inst, sel)

    def items(self) -> list[int]:
        return (np.flatnonzero(self.selected) + 1).tolist()

    def feasible(self, inst: Instance) -> bool:
        return self.total_weight <= inst.capacity

    def __eq__(self, other):
        return isinstance(other, PackingList) and np.array_equal(self.selected, other.selected)

    def __hash__(self):
        return hash(self.selected.tobytes())

    def __repr__(self):
        return f"PackingList({self.items()})"


@dataclass(frozen=True, eq=False)
class TtpSolution:
    tour: Tour
    packing: PackingList
    z: float

    @classmethod
    def build(cls, inst: Instance, tour: Tour, packing: PackingList) -> "TtpSolution":
        return cls(tour, packing, evaluate(inst, tour, packing))

    def snapshot(self) -> dict:
        return {"tour": self.tour.cities(), "packing": self.packing.items(), "z": self.z}


def cumulative_weights(inst: Instance, tour: Tour, packing: PackingList) -> np.ndarray:
    """Knapsack weight when leaving each tour position (items picked up on arrival)."""
    at_city = np.bincount(inst.item_city, weights=inst.weights * packing.selected, minlength=inst.n)
    return np.cumsum(at_city[tour.order]).astype(np.int64)


def leg_lengths(inst: Instance, tour: Tour) -> np.ndarray:
    """Length of the leg leaving each position; the last one closes the tour."""
    return inst.dist[tour.order, np.roll(tour.order, -1)]


def evaluate(inst: Instance, tour: Tour, packing: PackingList) -> float:
    if packing.total_weight > inst.capacity:
        raise CapacityError(f"packing weight {packing.total_weight} exceeds capacity {inst.capacity}")
    carried = cumulative_weights(inst, tour, packing)
    travel_time = float(np.dot(leg_lengths(inst, tour), inst.inv_speed[carried]))
    return packing.total_profit - inst.rent * travel_time
