"""Random k-SAT phase-transition experiments: generators, a DPLL solver,
clausal-network metrics and a sweep harness."""
from ._accel import NUMBA_ENABLED, backend
from .cnf import CnfFormula, DimacsError, Truth, constrainedness, evaluate, is_k_uniform, parse_dimacs, write_dimacs
from .generators import (
    NeighborhoodSpec,
    RichSpec,
    UniformSpec,
    gen_neighborhood,
    gen_rich,
    gen_uniform,
    generate,
    num_clauses,
)
from .network import (
    ClausalGraph,
    NetworkMetrics,
    avg_clustering,
    avg_path_length,
    build_graph,
    centrality_histogram,
    eigenvector_centrality,
    network_metrics,
    proximity_ratio,
)
from .solver import SolveResult, SolverLimits, Status, brute_force, solve
from .sweep import SweepRow, SweepSpec, crossover_estimate, derive_seed, median, run_sweep, write_csv

__version__ = "0.1.0"
