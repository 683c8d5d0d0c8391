"""Solvers and certification tools for activation edge-cover problems.

The library covers the general-threshold density greedy, the average-price
greedy for locally uniform bipartite instances, unit-threshold set-cover
style solvers, an exact branch-and-bound oracle, closed-form ratio bounds,
and seeded instance generators with a benchmark harness.
"""

from .core import (
    ActivationSpec,
    Assignment,
    DerivedCosts,
    Edge,
    InstallationActivation,
    Instance,
    SpecEdge,
    TableActivation,
    activated_edges,
    cheapest_edge_cover,
    covers,
    derive_costs,
    levels_reduction,
)
from .bounds import harmonic, k_theta, omega, omega_bar, setcover_greedy_bound, table1
from .errors import (
    AecError,
    BudgetExceeded,
    DomainError,
    EmptyLevels,
    GenerationFailed,
    Infeasible,
    InvalidInstance,
    IsolatedTerminal,
    LimitExceeded,
    NonUniformFacility,
    NotBipartite,
    NotUnitThresholds,
    OracleViolation,
    SizeBoundViolated,
)
from .fileio import instance_digest, load_instance, loads_instance, save_instance
from .general import CandidateStar, complete, min_density_star, solve_general
from .generators import (
    FamilySpec,
    from_facility_location,
    from_installation,
    from_theta_setcover,
    generate,
    random_general,
    random_installation,
    random_minpower,
    random_theta_setcover,
    random_uniform,
    random_unit,
    tight73,
)
from .gmc import Augmentation, GreedyTrace, gmc_greedy, greedy_ratio_bound
from .locally_uniform import (
    UniformBipartiteInstance,
    solve_locally_uniform,
    validate_locally_uniform,
)
from .oracle import ExactResult, exact_solve, exact_star_decomposition
from .report import BenchReport, SolveReport
from .unit import (
    EXACT_SUBSOLVER,
    GREEDY_SUBSOLVER,
    KSetCoverSolver,
    SetCoverInstance,
    SetCoverSolution,
    UnitResidual,
    exact_2setcover,
    exact_bb,
    greedy_hk,
    matching2,
    reduce_unit,
    solve_unit_a1,
    solve_unit_a2,
)

__version__ = "0.1.0"
