"""Region-based effective resistance on point-cloud graphs.

Build kernel resistor graphs on sampled points, compute effective resistance
between nodes or between node regions (Schur elimination and Dirichlet
current flow agree), and keep the computation size fixed with density-weighted
covers.  The ``regioner.harness`` subpackage reproduces the convergence
experiments at desk scale.
"""

from . import harness
from ._core import USING_COMPILED, backend_name
from .cover import (
    AlphaCover,
    DensityWeights,
    assign_voronoi,
    build_alpha_cover,
    cover_graph,
    cover_region_er,
    estimate_density,
)
from .errors import (
    ConvergenceError,
    EmptyRegionError,
    IsolatedPointError,
    NoPathError,
    RegionerError,
    SingularBlockError,
)
from .graph import (
    Kernel,
    PointCloud,
    ScalingMode,
    WeightedGraph,
    build_graph,
    eval_kernel,
    knn_adjacency,
    laplacian,
    load_points,
    max_knn_distance,
)
from .resistance import (
    DeviationStats,
    ReducedGraph,
    RegionPair,
    aggregated_degree,
    deviation_stats,
    pairwise_er,
    pairwise_er_many,
    reduce_graph,
    schur_complement,
    set_er,
    von_luxburg_limit,
)
from .voltage import (
    VoltageProblem,
    VoltageSolution,
    energy,
    extend_voltage,
    region_er,
    solve_direct,
    solve_fixed_point,
    total_current,
)

__version__ = "0.1.0"

__all__ = [
    "harness",
    "USING_COMPILED",
    "backend_name",
    "AlphaCover",
    "DensityWeights",
    "assign_voronoi",
    "build_alpha_cover",
    "cover_graph",
    "cover_region_er",
    "estimate_density",
    "ConvergenceError",
    "EmptyRegionError",
    "IsolatedPointError",
    "NoPathError",
    "RegionerError",
    "SingularBlockError",
    "Kernel",
    "PointCloud",
    "ScalingMode",
    "WeightedGraph",
    "build_graph",
    "eval_kernel",
    "knn_adjacency",
    "laplacian",
    "load_points",
    "max_knn_distance",
    "DeviationStats",
    "ReducedGraph",
    "RegionPair",
    "aggregated_degree",
    "deviation_stats",
    "pairwise_er",
    "pairwise_er_many",
    "reduce_graph",
    "schur_complement",
    "set_er",
    "von_luxburg_limit",
    "VoltageProblem",
    "VoltageSolution",
    "energy",
    "extend_voltage",
    "region_er",
    "solve_direct",
    "solve_fixed_point",
    "total_current",
    "__version__",
]
