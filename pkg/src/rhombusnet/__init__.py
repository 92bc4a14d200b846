"""Fastest-averaging consensus on chain-of-rhombus networks.

Core layers: topology (graph construction), weights (orbit weights and
matrix assembly), spectral (stratified quotient, SLEM), charpoly (recursion
polynomial and roots), optimizer (numerical weight optimization), simulator
(averaging iteration), reference (published benchmark grid).  A FastAPI
service in rhombusnet.service wraps the same operations; the CLI is a thin
client over the service handlers.
"""

from .charpoly import (
    EvenPolynomial,
    RootInconsistencyError,
    UnsupportedOrderError,
    charpoly,
    charpoly_roots,
    largest_root,
)
from .optimizer import (
    BranchOptimizationResult,
    OptimizationResult,
    branch_bridge,
    minimize_slem,
    verify_no_improvement,
)
from .reference import REFERENCE_SLEM, BenchmarkRow, benchmark_rows, sweep_inner
from .simulator import (
    InsufficientSignalError,
    IterationTrace,
    SchemeComparison,
    compare_schemes,
    convergence_factor,
    iterate,
    random_initial_state,
)
from .spectral import (
    QuotientPair,
    SlemReport,
    Spectrum,
    contraction_factor,
    eig_sym,
    gram,
    interlacing_check,
    quotient,
    slem,
    slem_of_matrix,
    spectrum_union_check,
    stratification_vector,
)
from .topology import (
    BranchTopology,
    ChainSpec,
    HostGraph,
    InvalidHostError,
    InvalidSpecError,
    Topology,
    automorphism_check,
    build_branch,
    build_chain,
    host_random_connected,
    host_single_node,
    host_triangle,
    parse_host,
)
from .weights import assemble, baseline_weights, optimal_weights

__version__ = "0.1.0"
