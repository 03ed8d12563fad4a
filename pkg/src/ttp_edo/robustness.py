"""How well a population covers alternatives to its best solution's edges and items."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .solution import TtpSolution


@dataclass(frozen=True)
class RobustnessReport:
    E: float
    I: float
    best_z: float

    def to_dict(self) -> dict:
        return asdict(self)


def best_index(members: Sequence[TtpSolution]) -> int:
    if not members:
        raise ValueError("empty population")
    zs = [s.z for s in members]
    return zs.index(max(zs))


def edge_robustness(members: Sequence[TtpSolution]) -> float:
    """Percentage of the best tour's edges that some member does not use."""
    b = best_index(members)
    best_keys = members[b].tour.edge_keys
    uses = np.zeros(len(best_keys), dtype=np.int64)
    for s in members:
        uses += np.isin(best_keys, s.tour.edge_keys, assume_unique=True)
    return 100.0 * np.count_nonzero(uses < len(members)) / len(best_keys)


def item_robustness(members: Sequence[TtpSolution]) -> float:
    """Percentage of items for which some member makes the opposite choice to the best."""
    b = best_index(members)
    best_sel = members[b].packing.selected
    m = len(best_sel)
    if m == 0:
        raise ValueError("item robustness needs at least one item")
    differs = np.zeros(m, dtype=bool)
    for s in members:
        differs |= s.packing.selected != best_sel
    return 100.0 * np.count_nonzero(differs) / m


def robustness(members: Sequence[TtpSolution]) -> RobustnessReport:
    b = best_index(members)
    return RobustnessReport(edge_robustness(members), item_robustness(members), members[b].z)
