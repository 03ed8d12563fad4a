"""Evolutionary diversity optimisation for the Traveling Thief Problem."""

from .diversity import DiversityIndex, FitnessMode, Population, select_removal
from .engine import EdoConfig, TrajectoryRow, init_population, quality_threshold, run_edo
from .instance import Instance, Item, ParseError, format_instance, load_instance, parse_instance
from .packing import PackingBudget, bit_flip, dp_pack, item_visit_order, one_plus_one_ea
from .robustness import RobustnessReport, edge_robustness, item_robustness, robustness
from .solution import PackingList, Tour, TtpSolution, cumulative_weights, evaluate
from .tour_ops import apply_ab_cycle, build_ab_cycle, eax_1ab, merge_subtours, two_opt_mutation

__all__ = [
    "DiversityIndex", "FitnessMode", "Population", "select_removal",
    "EdoConfig", "TrajectoryRow", "init_population", "quality_threshold", "run_edo",
    "Instance", "Item", "ParseError", "format_instance", "load_instance", "parse_instance",
    "PackingBudget", "bit_flip", "dp_pack", "item_visit_order", "one_plus_one_ea",
    "RobustnessReport", "edge_robustness", "item_robustness", "robustness",
    "PackingList", "Tour", "TtpSolution", "cumulative_weights", "evaluate",
    "apply_ab_cycle", "build_ab_cycle", "eax_1ab", "merge_subtours", "two_opt_mutation",
]
