"""Edge/item entropy of a population and entropy-maximising survivor selection.

Entropies are computed from a histogram ``hist[c]`` = number of edges (or
items) that appear in exactly ``c`` solutions.  Two populations with the same
frequency profile therefore get bit-identical entropies no matter in which
order members were added, which keeps survivor selection exactly monotone.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .instance import Instance
from .solution import TtpSolution


class FitnessMode(str, Enum):
    H = "h"
    H_E = "he"
    H_I = "hi"


# "2nmu": undirected counts over 2*n*mu (the default; probabilities sum to 1/2).
# "nmu": undirected counts over n*mu.
# "directed": each edge counted in both orientations over 2*n*mu, i.e. twice "2nmu".
EDGE_DENOMINATORS = ("2nmu", "nmu", "directed")


def _entropy_from_hist(hist: np.ndarray, total: float) -> float:
    """sum_c hist[c] * -(c/total) ln(c/total), skipping c = 0."""
    if total <= 0:
        return 0.0
    c = np.arange(1, len(hist), dtype=float)
    p = c / total
    return float(np.dot(hist[1:], -p * np.log(p)))


class DiversityIndex:
    """Edge and item frequencies of a multiset of TTP solutions."""

    def __init__(self, n: int, m: int, capacity: int, edge_denominator: str = "2nmu"):
        if edge_denominator not in EDGE_DENOMINATORS:
            raise ValueError(f"edge_denominator must be one of {EDGE_DENOMINATORS}")
        self.n = n
        self.m = m
        self.edge_denominator = edge_denominator
        self.size = 0
        self.edge_freq = np.zeros(n * n, dtype=np.int64)
        self.item_freq = np.zeros(m, dtype=np.int64)
        # hist[c] for c in 0..capacity; hist[0] is unused
        self.edge_hist = np.zeros(capacity + 2, dtype=np.int64)
        self.item_hist = np.zeros(capacity + 2, dtype=np.int64)

    @classmethod
    def from_solutions(cls, inst: Instance, sols: Iterable[TtpSolution], capacity: int | None = None,
                       edge_denominator: str = "2nmu") -> "DiversityIndex":
        sols = list(sols)
        idx = cls(inst.n, inst.m, capacity if capacity is not None else len(sols), edge_denominator)
        for s in sols:
            idx.add(s)
        return idx

    def _ensure_room(self, count: int):
        if count >= len(self.edge_hist):
            size = max(count + 1, 2 * len(self.edge_hist))
            self.edge_hist = np.pad(self.edge_hist, (0, size - len(self.edge_hist)))
            self.item_hist = np.pad(self.item_hist, (0, size - len(self.item_hist)))

    @staticmethod
    def _shift(freq: np.ndarray, hist: np.ndarray, keys: np.ndarray, delta: int):
        old = freq[keys]
        np.subtract.at(hist, old, 1)
        np.add.at(hist, old + delta, 1)
        freq[keys] = old + delta

    def add(self, sol: TtpSolution):
        self._ensure_room(self.size + 1)
        self._shift(self.edge_freq, self.edge_hist, sol.tour.edge_keys, +1)
        self._shift(self.item_freq, self.item_hist, np.flatnonzero(sol.packing.selected), +1)
        self.size += 1

    def remove(self, sol: TtpSolution):
        keys = sol.tour.edge_keys
        items = np.flatnonzero(sol.packing.selected)
        if self.size == 0 or np.any(self.edge_freq[keys] == 0) or np.any(self.item_freq[items] == 0):
            raise ValueError("solution is not part of this index")
        self._shift(self.edge_freq, self.edge_hist, keys, -1)
        self._shift(self.item_freq, self.item_hist, items, -1)
        self.size -= 1

    def edge_total(self, size: int | None = None) -> int:
        size = self.size if size is None else size
        factor = 1 if self.edge_denominator == "nmu" else 2
        return factor * self.n * size

    def _edge_value(self, hist: np.ndarray, size: int) -> float:
        value = _entropy_from_hist(hist, self.edge_total(size))
        return 2 * value if self.edge_denominator == "directed" else value

    def _item_total(self, hist: np.ndarray) -> int:
        return int(np.dot(np.arange(len(hist)), hist))

    def edge_entropy(self) -> float:
        return self._edge_value(self.edge_hist, self.size)

    def item_entropy(self) -> float:
        return _entropy_from_hist(self.item_hist, self._item_total(self.item_hist))

    def total_entropy(self) -> float:
        return self.edge_entropy() + self.item_entropy()

    def entropy(self, mode: FitnessMode) -> float:
        mode = FitnessMode(mode)
        if mode is FitnessMode.H_E:
            return self.edge_entropy()
        if mode is FitnessMode.H_I:
            return self.item_entropy()
        return self.total_entropy()

    def entropy_without(self, sol: TtpSolution, mode: FitnessMode) -> float:
        """Entropy of the indexed multiset minus one copy of ``sol``, index left unchanged."""
        mode = FitnessMode(mode)
        value = 0.0
        if mode in (FitnessMode.H, FitnessMode.H_E):
            hist = self.edge_hist.copy()
            old = self.edge_freq[sol.tour.edge_keys]
            np.subtract.at(hist, old, 1)
            np.add.at(hist, old - 1, 1)
            value += self._edge_value(hist, self.size - 1)
        if mode in (FitnessMode.H, FitnessMode.H_I):
            hist = self.item_hist.copy()
            old = self.item_freq[np.flatnonzero(sol.packing.selected)]
            np.subtract.at(hist, old, 1)
            np.add.at(hist, old - 1, 1)
            value += _entropy_from_hist(hist, self._item_total(hist))
        return value

    def same_counts(self, other: "DiversityIndex") -> bool:
        return (self.size == other.size and np.array_equal(self.edge_freq, other.edge_freq)
                and np.array_equal(self.item_freq, other.item_freq))


def edge_entropy(idx: DiversityIndex) -> float:
    return idx.edge_entropy()


def item_entropy(idx: DiversityIndex) -> float:
    return idx.item_entropy()


def total_entropy(idx: DiversityIndex) -> float:
    return idx.total_entropy()


class Population:
    """Solutions plus a frequency index that is kept in step with them."""

    def __init__(self, inst: Instance, members: Sequence[TtpSolution] = (), capacity: int = 0,
                 edge_denominator: str = "2nmu"):
        self.inst = inst
        self.members: list[TtpSolution] = []
        self.index = DiversityIndex(inst.n, inst.m, max(capacity, len(members)) + 1, edge_denominator)
        for s in members:
            self.add(s)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, k: int) -> TtpSolution:
        return self.members[k]

    def add(self, sol: TtpSolution):
        self.members.append(sol)
        self.index.add(sol)

    def pop(self, k: int) -> TtpSolution:
        sol = self.members.pop(k)
        self.index.remove(sol)
        return sol

    def entropies(self) -> tuple[float, float, float]:
        he, hi = self.index.edge_entropy(), self.index.item_entropy()
        return he + hi, he, hi


def select_removal(pop: Population, mode: FitnessMode) -> int:
    """Index of the member whose removal leaves the highest entropy (first on ties)."""
    best_k, best_value = 0, -np.inf
    for k, sol in enumerate(pop.members):
        value = pop.index.entropy_without(sol, mode)
        if value > best_value:
            best_k, best_value = k, value
    return best_k
