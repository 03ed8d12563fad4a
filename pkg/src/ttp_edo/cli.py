"""Command line: ``ttp-edo run | robustness | pack | replay``.

Exit codes: 0 ok, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import io
from .diversity import EDGE_DENOMINATORS, FitnessMode
from .engine import EdoConfig, NonCompliantSeedError, ThresholdTooTightError, run_edo
from .instance import ParseError, load_instance
from .packing import PackingBudget, dp_pack, one_plus_one_ea
from .robustness import robustness
from .solution import PackingList, evaluate

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("ttp_edo")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _code_version() -> str:
    try:
        return version("ttp-edo")
    except PackageNotFoundError:
        return "unknown"


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _write_run(out: Path, instance_path: Path, cfg: EdoConfig, seed_path: Path | None, seed_snapshot: dict):
    inst = load_instance(instance_path)
    seed = io.solution_from_snapshot(inst, seed_snapshot)
    started = time.perf_counter()
    pop, rows = run_edo(inst, cfg, seed, np.random.default_rng(cfg.seed))
    elapsed = time.perf_counter() - started

    H, He, Hi = pop.entropies()
    zs = [s.z for s in pop]
    report = robustness(pop.members) if inst.m else None
    paths = {
        "trajectory": "trajectory.csv",
        "population": "population.jsonl",
        "summary": "summary.json",
        "robustness": "robustness.json",
    }
    summary = {
        "H": H, "He": He, "Hi": Hi,
        "min_z": min(zs), "max_z": max(zs),
        "z_min": cfg.z_min,
        "population_size": len(pop),
        "accepted": sum(r.accepted for r in rows),
        "iterations": cfg.iterations,
    }
    manifest = {
        "instance": str(instance_path.resolve()),
        "seed_solution": str(seed_path.resolve()) if seed_path else None,
        "seed_snapshot": seed_snapshot,
        "config": cfg.to_dict(),
        "artifacts": paths,
        "wall_clock_seconds": elapsed,
        "code_version": _code_version(),
    }
    io.atomic_write(out / paths["trajectory"], io.trajectory_csv(rows))
    io.atomic_write(out / paths["population"], io.population_jsonl(pop.members))
    io.atomic_write(out / paths["summary"], json.dumps(summary, indent=2) + "\n")
    if report is not None:
        io.atomic_write(out / paths["robustness"], json.dumps(report.to_dict(), indent=2) + "\n")
    io.atomic_write(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    print(json.dumps(summary))


def cmd_run(args) -> int:
    instance_path = _existing(args.instance)
    seed_path = _existing(args.seed_solution)
    try:
        seed_snapshot = json.loads(seed_path.read_text())
    except json.JSONDecodeError as exc:
        raise io.ValidationError(f"{seed_path}: not valid JSON ({exc})") from exc
    try:
        cfg = EdoConfig(
            z_star=args.z_star, alpha=args.alpha, mu=args.mu, iterations=args.iterations,
            fitness=FitnessMode(args.fitness), kp_operator=args.kp, ea_budget=args.ea_budget,
            seed=args.seed, edge_denominator=args.edge_denominator,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write_run(Path(args.out), instance_path, cfg, seed_path, seed_snapshot)
    return EXIT_OK


def cmd_replay(args) -> int:
    manifest = json.loads(_existing(args.manifest).read_text())
    cfg = EdoConfig.from_dict(manifest["config"])
    _write_run(Path(args.out), _existing(manifest["instance"]), cfg,
               Path(manifest["seed_solution"]) if manifest.get("seed_solution") else None,
               manifest["seed_snapshot"])
    return EXIT_OK


def cmd_robustness(args) -> int:
    inst = load_instance(_existing(args.instance))
    members = io.load_population(inst, _existing(args.population))
    print(json.dumps(robustness(members).to_dict()))
    return EXIT_OK


def cmd_pack(args) -> int:
    inst = load_instance(_existing(args.instance))
    tour = io.load_tour_file(inst, _existing(args.tour))
    if args.method == "dp":
        packing = dp_pack(inst, tour)
    else:
        budget = PackingBudget(2 * inst.m if args.ea_budget is None else args.ea_budget)
        packing = one_plus_one_ea(inst, tour, PackingList.empty(inst), budget, np.random.default_rng(args.seed))
    print(json.dumps({"packing": packing.items(), "z": evaluate(inst, tour, packing)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ttp-edo", description="Diverse high-quality Traveling Thief solutions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run the diversity-maximising EA")
    run.add_argument("--instance", required=True)
    run.add_argument("--z-star", type=float, required=True, help="best known objective value")
    run.add_argument("--seed-solution", required=True, help="snapshot JSON of a compliant solution")
    run.add_argument("--alpha", type=float, default=0.1)
    run.add_argument("--mu", type=int, default=50)
    run.add_argument("--iterations", type=int, default=10_000)
    run.add_argument("--fitness", choices=[m.value for m in FitnessMode], default="h")
    run.add_argument("--kp", choices=["dp", "ea"], default="dp")
    run.add_argument("--ea-budget", type=int, default=None, help="(1+1)EA evaluations (default 2m)")
    run.add_argument("--edge-denominator", choices=list(EDGE_DENOMINATORS), default="2nmu")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True)
    run.set_defaults(func=cmd_run)

    replay = sub.add_parser("replay", help="re-run the configuration stored in a manifest")
    replay.add_argument("manifest")
    replay.add_argument("--out", required=True)
    replay.set_defaults(func=cmd_replay)

    rob = sub.add_parser("robustness", help="edge/item robustness of a population")
    rob.add_argument("--population", required=True)
    rob.add_argument("--instance", required=True)
    rob.set_defaults(func=cmd_robustness)

    pack = sub.add_parser("pack", help="pack items for a fixed tour")
    pack.add_argument("--instance", required=True)
    pack.add_argument("--tour", required=True)
    pack.add_argument("--method", choices=["dp", "ea"], default="dp")
    pack.add_argument("--ea-budget", type=int, default=None)
    pack.add_argument("--seed", type=int, default=0)
    pack.set_defaults(func=cmd_pack)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ttp-edo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, io.ValidationError, NonCompliantSeedError, ThresholdTooTightError,
            ValueError, OSError) as exc:
        print(f"ttp-edo: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
