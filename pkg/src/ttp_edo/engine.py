"""Bi-level diversity-maximising EA and its initial-population procedure."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .diversity import EDGE_DENOMINATORS, FitnessMode, Population, select_removal
from .instance import Instance
from .packing import PackingBudget, PackingContext, dp_pack, one_plus_one_ea
from .solution import TtpSolution, evaluate
from .tour_ops import eax_1ab, two_opt_mutation

log = logging.getLogger(__name__)

MAX_INIT_REJECTIONS = 1_000_000


class ThresholdTooTightError(RuntimeError):
    pass


class NonCompliantSeedError(ValueError):
    pass


def quality_threshold(cfg: "EdoConfig") -> float:
    """Minimum admissible objective, ``z* - alpha * |z*|``.

    For positive ``z*`` this is ``(1 - alpha) z*``; for negative ``z*`` the
    slack still points downwards.
    """
    if cfg.z_star < 0:
        log.warning("z* = %g is negative; using z_min = z* - alpha*|z*| = %g",
                    cfg.z_star, cfg.z_star - cfg.alpha * abs(cfg.z_star))
    return cfg.z_star - cfg.alpha * abs(cfg.z_star)


@dataclass(frozen=True)
class EdoConfig:
    z_star: float
    alpha: float = 0.1
    mu: int = 50
    iterations: int = 10_000
    fitness: FitnessMode = FitnessMode.H
    kp_operator: str = "dp"
    ea_budget: int | None = None  # None means 2m
    seed: int = 0
    edge_denominator: str = "2nmu"
    z_min: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.mu < 1:
            raise ValueError(f"mu must be >= 1, got {self.mu}")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.kp_operator not in ("dp", "ea"):
            raise ValueError(f"kp_operator must be 'dp' or 'ea', got {self.kp_operator!r}")
        if self.ea_budget is not None and self.ea_budget < 0:
            raise ValueError("ea_budget must be >= 0")
        if self.edge_denominator not in EDGE_DENOMINATORS:
            raise ValueError(f"edge_denominator must be one of {EDGE_DENOMINATORS}")
        object.__setattr__(self, "fitness", FitnessMode(self.fitness))
        object.__setattr__(self, "z_min", quality_threshold(self))

    def packing_budget(self, inst: Instance) -> PackingBudget:
        return PackingBudget(2 * inst.m if self.ea_budget is None else self.ea_budget)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fitness"] = self.fitness.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EdoConfig":
        d = {k: v for k, v in d.items() if k != "z_min"}
        return cls(**d)


@dataclass(frozen=True)
class TrajectoryRow:
    iteration: int
    H: float
    He: float
    Hi: float
    accepted: bool


def _check_seed(inst: Instance, seed: TtpSolution, cfg: EdoConfig) -> TtpSolution:
    z = evaluate(inst, seed.tour, seed.packing)
    if not np.isclose(z, seed.z, rtol=1e-9, atol=1e-6):
        log.warning("seed solution z=%r disagrees with re-evaluation %r; using the latter", seed.z, z)
    if z < cfg.z_min:
        raise NonCompliantSeedError(f"seed z={z:.6f} is below the quality threshold z_min={cfg.z_min:.6f}")
    if z > cfg.z_star:
        log.warning("seed z=%.6f exceeds z*=%.6f; z* is not the best known value", z, cfg.z_star)
    return TtpSolution(seed.tour, seed.packing, z)


def init_population(inst: Instance, seed_solution: TtpSolution, cfg: EdoConfig,
                    rng: np.random.Generator) -> Population:
    """Grow a compliant population from one seed by 2-opt + DP repacking."""
    pop = Population(inst, [_check_seed(inst, seed_solution, cfg)], capacity=cfg.mu + 1,
                     edge_denominator=cfg.edge_denominator)
    rejections = 0
    while len(pop) < cfg.mu:
        parent = pop[int(rng.integers(len(pop)))]
        tour = two_opt_mutation(parent.tour, rng)
        child = TtpSolution.build(inst, tour, dp_pack(inst, tour))
        if child.z >= cfg.z_min:
            pop.add(child)
            rejections = 0
        else:
            rejections += 1
            if rejections >= MAX_INIT_REJECTIONS:
                raise ThresholdTooTightError(
                    f"{MAX_INIT_REJECTIONS} consecutive 2-opt neighbours fell below z_min={cfg.z_min}")
    return pop


def _offspring(inst: Instance, pop: Population, cfg: EdoConfig, rng: np.random.Generator) -> TtpSolution:
    if len(pop) > 1:
        i, j = rng.choice(len(pop), size=2, replace=False)
    else:
        i = j = 0
    p1, p2 = pop[int(i)], pop[int(j)]
    tour = eax_1ab(inst, p1.tour, p2.tour, rng)
    if cfg.kp_operator == "dp":
        packing = dp_pack(inst, tour, PackingContext.build(inst, tour))
    else:
        packing = one_plus_one_ea(inst, tour, p1.packing, cfg.packing_budget(inst), rng)
    return TtpSolution.build(inst, tour, packing)


def run_edo(inst: Instance, cfg: EdoConfig, seed_solution: TtpSolution, rng: np.random.Generator | None = None,
            callback: Callable[[int, Population], None] | None = None,
            ) -> tuple[Population, list[TrajectoryRow]]:
    """Run the bi-level EA.

    The trajectory has one row per iteration plus a row 0 for the initial
    population.  ``accepted`` means the offspring passed the quality filter
    and survived selection.  ``callback(iteration, population)`` sees the
    population at every iteration boundary.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    pop = init_population(inst, seed_solution, cfg, rng)
    rows = [TrajectoryRow(0, *pop.entropies(), False)]
    if callback is not None:
        callback(0, pop)
    for it in range(1, cfg.iterations + 1):
        child = _offspring(inst, pop, cfg, rng)
        accepted = False
        if child.z >= cfg.z_min:
            pop.add(child)
            if len(pop) == cfg.mu + 1:
                k = select_removal(pop, cfg.fitness)
                pop.pop(k)
                accepted = k != len(pop)
            else:
                accepted = True
        rows.append(TrajectoryRow(it, *pop.entropies(), accepted))
        if callback is not None:
            callback(it, pop)
    return pop, rows
