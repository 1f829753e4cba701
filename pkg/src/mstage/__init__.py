"""Solvers for multistage combinatorial minimization problems.

Five problems (min cut, vertex cover, f-set cover, prize-collecting
Steiner tree, prize-collecting TSP) over a time horizon, trading per-step
solution cost against the cost of changing decisions between steps.
Approximation ratios are certified empirically against brute-force
oracles and LP lower bounds; see tests/test_acceptance.py.
"""

from .mincut import MsCutInstance, solve_ms_mincut
from .vertexcover import MsVcInstance, solve_ms_vertexcover
from .setcover import MsScInstance, frequency, solve_ms_setcover
from .pcst import MsPcstInstance, gw_steiner_tree, pcst_lp_solve, solve_ms_pcst
from .pctsp import MsPctspInstance, christofides_tour, pctsp_lp_solve, solve_ms_pctsp
from .oracle import brute_force_schedule, exact_steiner, exact_tsp
from .generator import generate_instance
from .instance_io import parse_instance, serialize_instance
from .rounding import (
    DerandomizationConfig,
    RoundingParams,
    candidate_alphas,
    transition_count,
    two_threshold_round,
)
from .solution import CostBreakdown, FractionalSolution, RoundedSchedule, SolveReport

__all__ = [
    "MsCutInstance",
    "MsVcInstance",
    "MsScInstance",
    "MsPcstInstance",
    "MsPctspInstance",
    "solve_ms_mincut",
    "solve_ms_vertexcover",
    "solve_ms_setcover",
    "solve_ms_pcst",
    "solve_ms_pctsp",
    "frequency",
    "gw_steiner_tree",
    "pcst_lp_solve",
    "pctsp_lp_solve",
    "christofides_tour",
    "brute_force_schedule",
    "exact_steiner",
    "exact_tsp",
    "generate_instance",
    "parse_instance",
    "serialize_instance",
    "RoundingParams",
    "DerandomizationConfig",
    "two_threshold_round",
    "transition_count",
    "candidate_alphas",
    "CostBreakdown",
    "FractionalSolution",
    "RoundedSchedule",
    "SolveReport",
]
