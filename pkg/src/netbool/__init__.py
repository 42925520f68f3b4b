"""Distributed solving of Boolean equation systems over simulated networks.

Each node of a connected graph privately holds one Boolean equation.  The
equation is lifted to a linear equation on unit-vector coordinates, the
network solves the stacked linear system by projection consensus, and
every node recovers the exact Boolean solution set by searching the
affine hull of the consensus outputs for unit vectors.  Satisfiability
can be verified distributedly the same way.
"""

from .formula import (
    And,
    BooleanFormula,
    BooleanSystem,
    Const,
    FormulaSyntaxError,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    evaluate,
    format_formula,
    parse_formula,
    truth_table,
)
from .linalg import (
    AffineSubspace,
    LocalLinearEquation,
    affine_from_points,
    best_affine_fit,
    dist_to_affine,
    project_affine,
    pseudoinverse,
    rank_and_echelon,
)
from .matricization import (
    BooleanMatrix,
    boolean_matricization,
    btoi,
    chi0,
    itob,
    theta,
    unit_vector,
    upsilon,
)
from .network import (
    ConsensusWeights,
    Graph,
    NetworkRun,
    build_weights,
    make_run,
    run_to_convergence,
    step_average_consensus,
    step_projection_consensus,
)
from .problem import ProblemError, ProblemFile, load_problem
from .search import boolean_vector_search, boolean_vector_search_bruteforce
from .solver import (
    RunConfig,
    SolveOutcome,
    central_projected_average,
    distributed_lae,
    lift_system,
    oracle_solve,
    solve_approximate,
    solve_exact,
    stacked_rank_consistent,
    verify_satisfiability,
)

__version__ = "0.1.0"
