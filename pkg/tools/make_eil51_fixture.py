"""Build the eil51 / 50-item test instance and a high-quality seed solution.

The city coordinates are TSPLIB eil51.  The items follow the benchmark's
bounded-strongly-correlated recipe (one item per city 2..51, weight uniform
in 1..1000, profit = weight + 100, capacity = total weight / 11) drawn from a
fixed seed, so the file is a stand-in for the published instance, not a copy.

The seed solution comes from iterated 2-opt/or-opt on the tour, DP packing
of both orientations, then 2-opt hill climbing on the full TTP objective.

    python tools/make_eil51_fixture.py tests/data
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from ttp_edo.instance import Instance, Item, format_instance
from ttp_edo.packing import dp_pack, dp_value
from ttp_edo.solution import Tour, TtpSolution
from ttp_edo.tour_ops import two_opt_move

NAME = "eil51_n50_bounded-strongly-corr_01"

EIL51 = [
    (37, 52), (49, 49), (52, 64), (20, 26), (40, 30), (21, 47), (17, 63), (31, 62), (52, 33),
    (51, 21), (42, 41), (31, 32), (5, 25), (12, 42), (36, 16), (52, 41), (27, 23), (17, 33),
    (13, 13), (57, 58), (62, 42), (42, 57), (16, 57), (8, 52), (7, 38), (27, 68), (30, 48),
    (43, 67), (58, 48), (58, 27), (37, 69), (38, 46), (46, 10), (61, 33), (62, 63), (63, 69),
    (32, 22), (45, 35), (59, 15), (5, 6), (10, 17), (21, 10), (5, 64), (30, 15), (39, 10),
    (32, 39), (25, 32), (25, 55), (48, 28), (56, 37), (30, 40),
]


def make_instance(seed: int = 20220101) -> Instance:
    rng = np.random.default_rng(seed)
    weights = rng.integers(1, 1001, size=len(EIL51) - 1)
    items = tuple(Item(int(w) + 100, int(w), city) for city, w in enumerate(weights, start=2))
    return Instance(
        name="eil51-TTP",
        cities=tuple((float(x), float(y)) for x, y in EIL51),
        items=items,
        capacity=int(weights.sum()) // 11,
        v_min=0.1,
        v_max=1.0,
        rent=1.6,
        data_type="bounded strongly corr.",
    )


def _length(d: np.ndarray, order: list[int]) -> int:
    return int(d[order, np.roll(order, -1)].sum())


def _two_opt(d: np.ndarray, order: list[int]) -> list[int]:
    n = len(order)
    improved = True
    while improved:
        improved = False
        for i in range(1, n - 1):
            for j in range(i + 1, n):
                a, b, c, e = order[i - 1], order[i], order[j], order[(j + 1) % n]
                if d[a, c] + d[b, e] < d[a, b] + d[c, e]:
                    order[i:j + 1] = order[i:j + 1][::-1]
                    improved = True
    return order


def tsp_tour(inst: Instance, rng: np.random.Generator, rounds: int = 2000) -> list[int]:
    d = inst.dist
    n = inst.n
    best = _two_opt(d, [0] + (rng.permutation(n - 1) + 1).tolist())
    for _ in range(rounds):
        a, b, c = sorted(rng.choice(np.arange(1, n), size=3, replace=False).tolist())
        cand = _two_opt(d, best[:a] + best[b:c] + best[a:b] + best[c:])
        if _length(d, cand) <= _length(d, best):
            best = cand
    return best


def ttp_climb(inst: Instance, tour: Tour, rng: np.random.Generator) -> Tour:
    best = dp_value(inst, tour)
    improved = True
    while improved:
        improved = False
        moves = [(i, j) for i in range(1, inst.n - 1) for j in range(i + 1, inst.n)]
        for k in rng.permutation(len(moves)):
            cand = two_opt_move(tour, *moves[k])
            value = dp_value(inst, cand)
            if value > best + 1e-9:
                tour, best, improved = cand, value, True
    return tour


def main(out_dir: str):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    inst = make_instance()
    (out / f"{NAME}.ttp").write_text(format_instance(inst))

    rng = np.random.default_rng(7)
    order = tsp_tour(inst, rng)
    print("tsp length", _length(inst.dist, order))
    fwd = Tour(order)
    bwd = Tour([0] + order[:0:-1])
    tour = max((fwd, bwd), key=lambda t: dp_value(inst, t))
    tour = ttp_climb(inst, tour, rng)
    sol = TtpSolution.build(inst, tour, dp_pack(inst, tour))
    print("seed z", sol.z)
    (out / f"{NAME}.seed.json").write_text(json.dumps(sol.snapshot()) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
