"""Online metric matching with parsimonious action predictions."""

from .adversary import (
    AdversaryReport,
    budget_schedule_k,
    harmonic,
    run_det_budget,
    run_det_wellsep,
    run_rand_star,
    star_servers,
    star_space,
)
from .assignment import (
    Matching,
    OptimalReference,
    constrained_identity_matching,
    constrained_identity_pairs,
    offline_opt,
    solve_left_saturating,
    solve_min_cost_perfect,
)
from .combiner import CombinerMatcher, rescale_for_combination
from .errors import (
    ContractViolationError,
    DataInsufficiencyError,
    DegenerateMetricError,
    IngestionError,
    SkipInstance,
    UsageError,
)
from .ftp import FtpMatcher, FtpState, ftp_step, make_state
from .harness import Instance, Transcript, ratio, run
from .hst import BbgnMatcher, EmbeddedBbgnMatcher, Hst, frt_embed, hst_distance, hst_space, star_hst
from .instances import GenConfig, gen_line, gen_plane, gen_taxi, generate
from .metric import Configuration, MetricSpace, config_dist, noise_scale_stats
from .netcost import GreedyMatcher, NetCostMatcher
from .parsimonious import ParsimoniousMatcher, preset
from .predictions import NoisyOracle, PerfectOracle, noise_norm, noise_radius_grid, prediction_error

__all__ = [
    "AdversaryReport",
    "BbgnMatcher",
    "CombinerMatcher",
    "Configuration",
    "ContractViolationError",
    "DataInsufficiencyError",
    "DegenerateMetricError",
    "EmbeddedBbgnMatcher",
    "FtpMatcher",
    "FtpState",
    "GenConfig",
    "GreedyMatcher",
    "Hst",
    "IngestionError",
    "Instance",
    "Matching",
    "MetricSpace",
    "NetCostMatcher",
    "NoisyOracle",
    "OptimalReference",
    "ParsimoniousMatcher",
    "PerfectOracle",
    "SkipInstance",
    "Transcript",
    "UsageError",
    "budget_schedule_k",
    "config_dist",
    "constrained_identity_matching",
    "constrained_identity_pairs",
    "frt_embed",
    "ftp_step",
    "gen_line",
    "gen_plane",
    "gen_taxi",
    "generate",
    "harmonic",
    "hst_distance",
    "hst_space",
    "make_state",
    "noise_norm",
    "noise_radius_grid",
    "noise_scale_stats",
    "offline_opt",
    "prediction_error",
    "preset",
    "ratio",
    "run",
    "run_det_budget",
    "run_det_wellsep",
    "run_rand_star",
    "solve_left_saturating",
    "solve_min_cost_perfect",
    "star_hst",
    "star_servers",
    "star_space",
]
