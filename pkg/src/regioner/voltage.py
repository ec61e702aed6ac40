"""Dirichlet voltages on resistor graphs and the current-flow resistance.

Pinning the source region to 1 and the sink region to 0, the energy-minimizing
voltage is harmonic at every interior node.  The region resistance is the
inverse of the total current leaving the source.  Two solvers are provided:
a direct factorization of the interior block (production path) and a
simultaneous-update fixed-point iteration

    v(x) <- sum_j W[x, j] * v(j) / sum_j W[x, j]

with boundary values substituted, whose iteration operator is a contraction
in the sup norm once enough sweeps are composed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _core
from .errors import ConvergenceError, IsolatedPointError, NoPathError
from .graph import Kernel, PointCloud, WeightedGraph, eval_kernel
from .resistance import (
    RegionPair,
    _canonical_pair,
    _InteriorSolver,
    component_labels,
    strip_stranded_interior,
)


@dataclass(frozen=True)
class VoltageProblem:
    """A graph with source nodes pinned to 1 and sink nodes pinned to 0."""

    graph: WeightedGraph
    regions: RegionPair

    def __post_init__(self):
        self.regions.validate_for(self.graph.n)


@dataclass(frozen=True)
class VoltageSolution:
    """Per-node voltages plus solver diagnostics.

    ``iterations`` is 0 for the direct solver; ``residual`` is the final
    sup-norm update of the fixed-point sweep (0.0 for direct).
    ``residual_history`` is populated only when sweep tracking was requested.
    """

    values: np.ndarray
    iterations: int
    residual: float
    residual_history: tuple[float, ...] | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def _check_interior_connected(problem: VoltageProblem) -> np.ndarray:
    """Interior indices; raises when any interior node cannot reach the boundary."""
    graph, regions = problem.graph, problem.regions
    boundary = regions.boundary()
    interior = np.setdiff1d(np.arange(graph.n), boundary)
    if interior.size:
        labels = component_labels(graph)
        reachable = np.unique(labels[boundary])
        stranded = ~np.isin(labels[interior], reachable)
        if stranded.any():
            raise NoPathError(
                f"{int(stranded.sum())} interior node(s) have no path to the boundary"
            )
    return interior


def _assemble(problem: VoltageProblem, interior: np.ndarray):
    """Interior weight block, full interior degrees, and source in-weights."""
    w = problem.graph.weights
    w_cc = w[interior][:, interior].tocsr()
    w_cs = np.asarray(w[interior][:, problem.regions.source].sum(axis=1)).ravel()
    deg = problem.graph.degrees[interior]
    return w_cc, w_cs, deg


def _fill(problem: VoltageProblem, interior: np.ndarray, v_int: np.ndarray) -> np.ndarray:
    values = np.zeros(problem.graph.n)
    values[problem.regions.source] = 1.0
    values[interior] = v_int
    return values


def solve_direct(problem: VoltageProblem) -> VoltageSolution:
    """Solve the pinned-boundary problem by factorizing the interior block.

    The interior voltages satisfy ``L_cc v_c = W_cs 1`` (harmonicity at every
    interior node); boundary values are pinned exactly.
    """
    interior = _check_interior_connected(problem)
    if interior.size == 0:
        return VoltageSolution(_fill(problem, interior, np.empty(0)), 0, 0.0)
    lap = problem.graph.laplacian()
    solver = _InteriorSolver(lap[interior][:, interior])
    _, w_cs, _ = _assemble(problem, interior)
    v_int = solver.solve(w_cs)
    return VoltageSolution(_fill(problem, interior, v_int), 0, 0.0)


def solve_fixed_point(
    problem: VoltageProblem,
    tol: float = 1e-10,
    max_iter: int = 1_000_000,
    track_residuals: bool = False,
) -> VoltageSolution:
    """Solve by simultaneous-update (Jacobi-style) neighbor averaging.

    Every sweep replaces each interior voltage by the degree-normalized
    weighted average of its neighbors' voltages, with source neighbors
    contributing 1 and sink neighbors 0.  Updates are simultaneous, so sweep
    counts do not depend on node order.  Stops once the sup-norm update drops
    below ``tol``; raises :class:`ConvergenceError` (carrying the last
    residual) if ``max_iter`` sweeps were not enough.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if max_iter < 1:
        raise ValueError("iteration cap must be at least 1")
    interior = _check_interior_connected(problem)
    if interior.size == 0:
        return VoltageSolution(
            _fill(problem, interior, np.empty(0)), 0, 0.0, () if track_residuals else None
        )
    w_cc, w_cs, deg = _assemble(problem, interior)
    inv_deg = 1.0 / deg
    sweep_mat = sp.csr_matrix(
        (w_cc.data * np.repeat(inv_deg, np.diff(w_cc.indptr)), w_cc.indices, w_cc.indptr),
        shape=w_cc.shape,
    )
    shift = w_cs * inv_deg
    v0 = np.zeros(interior.size)
    v_int, sweeps, residual, history = _core.jacobi_iterate(
        sweep_mat.indptr, sweep_mat.indices, sweep_mat.data,
        shift, v0, tol, max_iter, record=track_residuals,
    )
    if residual >= tol:
        raise ConvergenceError(
            f"fixed-point solver stalled at residual {residual:.3e} "
            f"after {sweeps} sweeps (tol {tol:.3e})",
            residual=residual,
            iterations=sweeps,
        )
    return VoltageSolution(
        _fill(problem, interior, v_int),
        sweeps,
        residual,
        tuple(history) if track_residuals else None,
    )


def total_current(graph: WeightedGraph, voltage, source) -> float:
    """Total current leaving the source nodes under the given voltages.

    Source-to-source edge terms cancel (equal voltages), and by conservation
    the same magnitude is extracted at the sink.
    """
    values = np.asarray(getattr(voltage, "values", voltage), dtype=np.float64).ravel()
    if values.shape[0] != graph.n:
        raise ValueError(f"voltage vector has length {values.shape[0]}, expected {graph.n}")
    src = np.asarray(source, dtype=np.int64).ravel()
    flow_in = np.asarray(graph.weights[src] @ values).ravel()
    return float((graph.degrees[src] * values[src] - flow_in).sum())


def region_er(graph: WeightedGraph, regions: RegionPair) -> float:
    """Region resistance as the inverse total current of the Dirichlet solve.

    Agrees with the Schur-complement route in :func:`regioner.resistance.set_er`.
    Interior nodes stranded away from both regions are dropped with a warning.
    """
    regions = _canonical_pair(regions)
    graph, regions, _ = strip_stranded_interior(graph, regions)
    solution = solve_direct(VoltageProblem(graph, regions))
    current = total_current(graph, solution, regions.source)
    if current <= 0.0:
        raise NoPathError("no current flows between the regions")
    return 1.0 / current


def energy(graph: WeightedGraph, values) -> float:
    """Sum of ``W[i, j] * (v_i - v_j)**2`` over unordered node pairs.

    With the unordered-pair convention this equals the Laplacian quadratic
    form ``v' L v`` exactly.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.shape[0] != graph.n:
        raise ValueError(f"voltage vector has length {v.shape[0]}, expected {graph.n}")
    upper = sp.triu(graph.weights, k=1).tocoo()
    diff = v[upper.row] - v[upper.col]
    return float((upper.data * diff * diff).sum())


def extend_voltage(cloud: PointCloud, kernel: Kernel, solution, source, sink, x) -> float:
    """Voltage at an arbitrary ambient point.

    Returns 1 inside the source region, 0 inside the sink region, and the
    kernel-weighted average of the sample voltages elsewhere.  ``source`` and
    ``sink`` are predicates on ambient points (e.g.
    :class:`regioner.harness.datasets.RegionSpec`).  Raises
    :class:`IsolatedPointError` when the point has zero kernel weight to the
    whole sample.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if source(x):
        return 1.0
    if sink(x):
        return 0.0
    values = np.asarray(getattr(solution, "values", solution), dtype=np.float64).ravel()
    if values.shape[0] != cloud.n:
        raise ValueError(f"voltage vector has length {values.shape[0]}, expected {cloud.n}")
    weights = eval_kernel(kernel, cloud.distances_to(x))
    total = float(weights.sum())
    if total <= 0.0:
        raise IsolatedPointError("query point has zero kernel weight to every sample point")
    return float(weights @ values) / total


def write_voltage_csv(fh, cloud: PointCloud, solution) -> None:
    """Per-node voltage dump: node_index, coordinates..., voltage."""
    values = np.asarray(getattr(solution, "values", solution), dtype=np.float64).ravel()
    coord_names = ",".join(f"x{k}" for k in range(cloud.dim))
    fh.write(f"node_index,{coord_names},voltage\n")
    for i in range(cloud.n):
        coords = ",".join(f"{c:.17g}" for c in cloud.points[i])
        fh.write(f"{i},{coords},{values[i]:.17g}\n")
