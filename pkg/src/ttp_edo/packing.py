"""Packing operators for a fixed tour: exact DP and a (1+1)EA."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .instance import Instance
from .solution import PackingList, Tour, evaluate, leg_lengths


@dataclass(frozen=True)
class PackingBudget:
    max_evaluations: int

    def __post_init__(self):
        if self.max_evaluations < 0:
            raise ValueError("max_evaluations must be >= 0")


def item_visit_order(inst: Instance, tour: Tour) -> np.ndarray:
    """0-based items sorted by their city's tour position, then by index."""
    return np.lexsort((np.arange(inst.m), tour.pos[inst.item_city]))


@dataclass(frozen=True)
class PackingContext:
    """Tour-dependent data shared by every DP transition.

    ``remaining[i]`` is the distance still to travel after picking up item
    ``i`` (0-based), closing leg included.
    """

    inst: Instance
    tour: Tour
    order: np.ndarray
    remaining: np.ndarray
    empty_value: float

    @classmethod
    def build(cls, inst: Instance, tour: Tour) -> "PackingContext":
        legs = leg_lengths(inst, tour)
        suffix = np.cumsum(legs[::-1])[::-1]
        remaining = suffix[tour.pos[inst.item_city]] if inst.m else np.zeros(0, dtype=np.int64)
        empty_value = -inst.rent * float(legs.sum()) / inst.v_max
        return cls(inst, tour, item_visit_order(inst, tour), remaining, empty_value)


def dp_transition(ctx: PackingContext, prev_value: float, item: int, j: int) -> float:
    """Value of adding 0-based ``item`` on top of a prefix selection weighing ``j - w``.

    ``prev_value`` is that prefix selection's objective; the result is the
    objective with the item added (total weight ``j``).
    """
    inst = ctx.inst
    w = int(inst.weights[item])
    if j < w or j > inst.capacity:
        raise ValueError(f"weight {j} cannot hold item {item + 1} of weight {w}")
    slower = inst.inv_speed[j] - inst.inv_speed[j - w]
    return prev_value + inst.profits[item] - inst.rent * ctx.remaining[item] * slower


def dp_pack(inst: Instance, tour: Tour, ctx: PackingContext | None = None) -> PackingList:
    """Optimal packing for ``tour``.

    Row ``beta[j]`` holds the best objective over selections of the items
    processed so far with weight exactly ``j`` (``-inf`` if none); items are
    processed in visit order so adding one only slows the legs after its city.
    """
    if inst.m == 0:
        return PackingList.empty(inst)
    ctx = ctx or PackingContext.build(inst, tour)
    cap = inst.capacity
    inv = inst.inv_speed
    beta = np.full(cap + 1, -np.inf)
    beta[0] = ctx.empty_value
    taken = np.zeros((inst.m, (cap + 8) // 8), dtype=np.uint8)

    for row, i in enumerate(ctx.order):
        w = int(inst.weights[i])
        if w > cap:
            continue
        # candidate for every j in w..cap
        cand = beta[: cap + 1 - w] + inst.profits[i] - inst.rent * ctx.remaining[i] * (inv[w:] - inv[: cap + 1 - w])
        better = np.zeros(cap + 1, dtype=bool)
        better[w:] = cand > beta[w:]
        beta[w:] = np.where(better[w:], cand, beta[w:])
        taken[row] = np.packbits(better)

    j = int(np.argmax(beta))
    sel = np.zeros(inst.m, dtype=bool)
    for row in range(inst.m - 1, -1, -1):
        if j == 0:
            break
        if (taken[row, j >> 3] >> (7 - (j & 7))) & 1:
            i = ctx.order[row]
            sel[i] = True
            j -= int(inst.weights[i])
    return PackingList(inst, sel)


def dp_value(inst: Instance, tour: Tour) -> float:
    """``max_j beta[m, j]`` without reconstruction."""
    ctx = PackingContext.build(inst, tour)
    cap = inst.capacity
    inv = inst.inv_speed
    beta = np.full(cap + 1, -np.inf)
    beta[0] = ctx.empty_value
    for i in ctx.order:
        w = int(inst.weights[i])
        if w > cap:
            continue
        cand = beta[: cap + 1 - w] + inst.profits[i] - inst.rent * ctx.remaining[i] * (inv[w:] - inv[: cap + 1 - w])
        beta[w:] = np.maximum(beta[w:], cand)
    return float(beta.max())


def bit_flip(inst: Instance, p: PackingList, rng: np.random.Generator) -> PackingList:
    """Flip each bit independently with probability 1/m."""
    m = inst.m
    if m < 1:
        raise ValueError("bit-flip needs at least one item")
    mask = rng.random(m) < 1.0 / m
    return PackingList(inst, p.selected ^ mask)


def repair(inst: Instance, p: PackingList, rng: np.random.Generator) -> PackingList:
    """Drop selected items in random order until the packing fits."""
    if p.feasible(inst):
        return p
    sel = p.selected.copy()
    weight = p.total_weight
    for i in rng.permutation(np.flatnonzero(sel)):
        if weight <= inst.capacity:
            break
        sel[i] = False
        weight -= int(inst.weights[i])
    return PackingList(inst, sel)


def one_plus_one_ea(inst: Instance, tour: Tour, seed: PackingList, budget: PackingBudget,
                    rng: np.random.Generator,
                    on_step: Callable[[int, float, bool], None] | None = None) -> PackingList:
    """Elitist (1+1)EA over packings for a fixed tour.

    Exactly ``budget.max_evaluations`` mutate-evaluate steps are made; an
    offspring replaces the parent only if it is feasible and strictly better.
    ``on_step(step, z_current, accepted)`` is called after every step.
    """
    best = repair(inst, seed, rng)
    if inst.m == 0:
        return best
    best_z = evaluate(inst, tour, best)
    for step in range(budget.max_evaluations):
        child = bit_flip(inst, best, rng)
        accepted = False
        if child.total_weight <= inst.capacity:
            z = evaluate(inst, tour, child)
            if z > best_z:
                best, best_z, accepted = child, z, True
        if on_step is not None:
            on_step(step, best_z, accepted)
    return best
