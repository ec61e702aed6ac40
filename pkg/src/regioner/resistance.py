"""Effective resistance: pairwise, between node sets, and on reduced graphs.

The set-to-set resistance eliminates the interior (every node outside the two
regions) through the Schur complement of the Laplacian and inverts the
quadratic form of the source indicator on the reduced system.  Aggregating
node sets into single nodes (``reduce_graph``) gives the equivalent
circuit-theoretic picture and the degree notion used by the degenerate-limit
diagnostics.
"""

from __future__ import annotations

import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from .errors import NoPathError, SingularBlockError
from .graph import WeightedGraph

# Dense linear algebra below these sizes, sparse factorizations above.
_DENSE_PINV_LIMIT = 2000
_DENSE_SOLVE_LIMIT = 600
# Interior blocks denser than this switch from sparse LU to preconditioned CG.
_CG_NNZ_LIMIT = 2_000_000


def _as_index_set(idx, name: str) -> np.ndarray:
    arr = np.unique(np.asarray(idx, dtype=np.int64).ravel())
    if arr.size == 0:
        raise ValueError(f"{name} index set must be non-empty")
    if arr.size != np.asarray(idx).size:
        raise ValueError(f"{name} index set contains duplicates")
    if arr.min() < 0:
        raise ValueError(f"{name} indices must be non-negative")
    return arr


@dataclass(frozen=True)
class RegionPair:
    """Disjoint, non-empty source and sink node-index sets."""

    source: np.ndarray
    sink: np.ndarray

    def __post_init__(self):
        src = _as_index_set(self.source, "source")
        snk = _as_index_set(self.sink, "sink")
        if np.intersect1d(src, snk).size:
            raise ValueError("source and sink sets must be disjoint")
        src.setflags(write=False)
        snk.setflags(write=False)
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "sink", snk)

    def validate_for(self, n: int) -> None:
        if self.source.max() >= n or self.sink.max() >= n:
            raise ValueError(f"region indices must be < {n}")

    def boundary(self) -> np.ndarray:
        return np.union1d(self.source, self.sink)


@dataclass(frozen=True)
class DeviationStats:
    """Max and mean relative deviation of resistances from their limits."""

    max_rel: float
    mean_rel: float


@dataclass(frozen=True)
class ReducedGraph:
    """Laplacian after aggregating node sets into single nodes.

    Aggregated sets occupy rows ``0 .. s-1`` in the order given; remaining
    nodes follow in ascending original order.  ``node_rows`` maps each
    un-aggregated original node to its row.
    """

    laplacian: sp.csr_matrix
    set_rows: tuple[int, ...]
    node_rows: dict[int, int]

    @property
    def size(self) -> int:
        return self.laplacian.shape[0]

    def to_graph(self) -> WeightedGraph:
        """Weighted graph whose Laplacian equals the reduced Laplacian."""
        lap = self.laplacian
        w = sp.diags(lap.diagonal()) - lap
        return WeightedGraph(w.tocsr(), validate=False)

    def dump(self, fh=None) -> None:
        """Write the reduced Laplacian as a dense text matrix (debug aid)."""
        out = fh if fh is not None else sys.stdout
        np.savetxt(out, self.laplacian.toarray(), fmt="%.17g")


def component_labels(graph: WeightedGraph) -> np.ndarray:
    """Connected-component label per node."""
    _, labels = csgraph.connected_components(graph.weights, directed=False)
    return labels


def largest_component(graph: WeightedGraph) -> np.ndarray:
    """Node indices of the largest connected component."""
    labels = component_labels(graph)
    return np.flatnonzero(labels == np.bincount(labels).argmax())


def strip_stranded_interior(graph: WeightedGraph, regions: RegionPair):
    """Drop interior nodes with no path to either region.

    Sampled radial graphs routinely contain stray isolated points, so this is
    a warning rather than a failure.  Raises :class:`NoPathError` when no
    component contains nodes of both regions.  Returns
    ``(graph, regions, kept)`` where ``kept`` maps new indices to old; the
    inputs are returned unchanged when nothing is stranded.
    """
    regions.validate_for(graph.n)
    labels = component_labels(graph)
    src_labels = np.unique(labels[regions.source])
    snk_labels = np.unique(labels[regions.sink])
    if np.intersect1d(src_labels, snk_labels).size == 0:
        raise NoPathError("no connected component contains both source and sink nodes")
    boundary_labels = np.union1d(src_labels, snk_labels)
    kept = np.flatnonzero(np.isin(labels, boundary_labels))
    if kept.size == graph.n:
        return graph, regions, np.arange(graph.n)
    dropped = graph.n - kept.size
    warnings.warn(
        f"dropping {dropped} interior node(s) with no path to source or sink",
        stacklevel=3,
    )
    remap = np.full(graph.n, -1, dtype=np.int64)
    remap[kept] = np.arange(kept.size)
    sub = WeightedGraph(graph.weights[kept][:, kept], validate=False)
    pair = RegionPair(remap[regions.source], remap[regions.sink])
    return sub, pair, kept


def _grounded_factor(lap: sp.csr_matrix, ground: int):
    """Factor the Laplacian with one node's row and column deleted."""
    n = lap.shape[0]
    keep = np.delete(np.arange(n), ground)
    sub = lap[keep][:, keep].tocsc()
    try:
        lu = spla.splu(sub)
    except RuntimeError as exc:
        raise SingularBlockError(f"grounded Laplacian is singular: {exc}") from exc
    return keep, lu


def pairwise_er(graph: WeightedGraph, i: int, j: int) -> float:
    """Effective resistance between two nodes.

    This is the quadratic form of ``e_i - e_j`` in the Laplacian
    pseudoinverse.  Small graphs use a dense eigendecomposition-based
    pseudoinverse; larger ones ground one node and solve the resulting
    nonsingular system, which is identical for connected graphs.
    """
    return float(pairwise_er_many(graph, [(i, j)])[0])


def pairwise_er_many(graph: WeightedGraph, pairs) -> np.ndarray:
    """Effective resistances for many node pairs, sharing one factorization."""
    pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    n = graph.n
    if (pairs < 0).any() or (pairs >= n).any():
        raise ValueError(f"node indices must lie in [0, {n})")
    if (pairs[:, 0] == pairs[:, 1]).any():
        raise ValueError("pairwise resistance needs two distinct nodes")
    labels = component_labels(graph)
    if (labels[pairs[:, 0]] != labels[pairs[:, 1]]).any():
        raise NoPathError("queried nodes lie in different connected components")

    out = np.empty(pairs.shape[0])
    if n <= _DENSE_PINV_LIMIT:
        pinv = scipy.linalg.pinvh(graph.laplacian().toarray())
        diag = np.diag(pinv)
        out = diag[pairs[:, 0]] + diag[pairs[:, 1]] - 2.0 * pinv[pairs[:, 0], pairs[:, 1]]
        return out.astype(np.float64)

    # Factor once per component that actually appears in the queries.
    for lbl in np.unique(labels[pairs[:, 0]]):
        comp = np.flatnonzero(labels == lbl)
        remap = np.full(n, -1, dtype=np.int64)
        remap[comp] = np.arange(comp.size)
        sub = WeightedGraph(graph.weights[comp][:, comp], validate=False)
        ground = sub.n - 1
        keep, lu = _grounded_factor(sub.laplacian(), ground)
        pos = np.full(sub.n, -1, dtype=np.int64)
        pos[keep] = np.arange(keep.size)
        sel = np.flatnonzero(labels[pairs[:, 0]] == lbl)
        for row in sel:
            a, b = remap[pairs[row, 0]], remap[pairs[row, 1]]
            rhs = np.zeros(keep.size)
            if a != ground:
                rhs[pos[a]] = 1.0
            if b != ground:
                rhs[pos[b]] = -1.0
            v = lu.solve(rhs)
            va = v[pos[a]] if a != ground else 0.0
            vb = v[pos[b]] if b != ground else 0.0
            out[row] = va - vb
    return out


def schur_complement(matrix, eliminate) -> np.ndarray:
    """Schur complement ``A - B D^{-1} C`` after eliminating an index set.

    ``matrix`` may be dense or sparse and must be square; ``eliminate`` picks
    the principal block ``D`` to remove.  The result is returned dense on the
    kept indices (ascending order) and symmetrized to remove roundoff skew.
    Raises :class:`SingularBlockError` when ``D`` is singular.
    """
    if sp.issparse(matrix):
        mat = matrix.tocsr()
    else:
        mat = np.asarray(matrix, dtype=np.float64)
        if mat.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
    n = mat.shape[0]
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    elim = np.unique(np.asarray(eliminate, dtype=np.int64).ravel())
    if elim.size and (elim.min() < 0 or elim.max() >= n):
        raise ValueError(f"eliminated indices must lie in [0, {n})")
    keep = np.setdiff1d(np.arange(n), elim)
    if keep.size == 0:
        raise ValueError("cannot eliminate every index")
    if sp.issparse(mat):
        a = mat[keep][:, keep].toarray()
        if elim.size == 0:
            return a
        b = mat[keep][:, elim].toarray()
        c = mat[elim][:, keep].toarray()
        d = mat[elim][:, elim].tocsc()
        if elim.size > _DENSE_SOLVE_LIMIT:
            try:
                x = spla.splu(d).solve(c)
            except RuntimeError as exc:
                raise SingularBlockError(f"eliminated block is singular: {exc}") from exc
        else:
            x = _solve_sym(d.toarray(), c)
    else:
        a = mat[np.ix_(keep, keep)]
        if elim.size == 0:
            return a.copy()
        b = mat[np.ix_(keep, elim)]
        c = mat[np.ix_(elim, keep)]
        x = _solve_sym(mat[np.ix_(elim, elim)], c)
    s = a - b @ x
    return (s + s.T) * 0.5


def _solve_sym(d: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.solve(d, rhs, assume_a="sym")
    except scipy.linalg.LinAlgError as exc:
        raise SingularBlockError(f"eliminated block is singular: {exc}") from exc
    except ValueError as exc:  # e.g. NaN/inf contamination
        raise SingularBlockError(f"eliminated block cannot be factorized: {exc}") from exc


class _InteriorSolver:
    """One factorization of the interior Laplacian block, reused per query.

    The interior block of a Laplacian is symmetric positive definite whenever
    every interior node has a path to the boundary.  Small blocks get a dense
    Cholesky factorization and mid-size blocks a sparse LU.  Very large blocks
    (dense kernel neighborhoods make LU fill explode) are solved with
    diagonally preconditioned conjugate gradients at a residual tolerance far
    below every resistance tolerance in use; a failed CG falls back to LU.
    """

    def __init__(self, lap_cc: sp.csr_matrix):
        self.size = lap_cc.shape[0]
        self._cho = self._lu = self._cg_mat = None
        try:
            if self.size <= _DENSE_SOLVE_LIMIT:
                self._cho = scipy.linalg.cho_factor(lap_cc.toarray())
            elif lap_cc.nnz <= _CG_NNZ_LIMIT:
                self._lu = spla.splu(lap_cc.tocsc())
            else:
                self._cg_mat = lap_cc.tocsr()
                self._cg_precond = sp.diags(1.0 / self._cg_mat.diagonal())
        except (scipy.linalg.LinAlgError, RuntimeError) as exc:
            raise SingularBlockError(f"interior block is singular: {exc}") from exc

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.size == 0:
            return np.zeros_like(rhs)
        if self._cho is not None:
            return scipy.linalg.cho_solve(self._cho, rhs)
        if self._lu is not None:
            return self._lu.solve(rhs)
        x, info = spla.cg(
            self._cg_mat, rhs, rtol=1e-12, atol=0.0,
            M=self._cg_precond, maxiter=100 * self.size,
        )
        if info != 0:
            warnings.warn(
                f"conjugate gradients stalled (info={info}); falling back to LU"
            )
            try:
                self._lu = spla.splu(self._cg_mat.tocsc())
            except RuntimeError as exc:
                raise SingularBlockError(f"interior block is singular: {exc}") from exc
            self._cg_mat = None
            return self._lu.solve(rhs)
        return x


def _canonical_pair(regions: RegionPair) -> RegionPair:
    """Fixed orientation (set holding the smallest index first) so that the
    resistance of (A, B) and (B, A) runs bit-identical arithmetic."""
    if regions.sink.min() < regions.source.min():
        return RegionPair(regions.sink, regions.source)
    return regions


def set_er(graph: WeightedGraph, regions: RegionPair) -> float:
    """Effective resistance between two node sets via Schur elimination.

    Every node outside the two regions is eliminated; the resistance is the
    inverse of the quadratic form of the source-indicator vector in the
    reduced Laplacian.  Interior nodes with no path to the regions are
    dropped with a warning; a region pair covering all nodes makes the
    elimination a no-op.
    """
    regions = _canonical_pair(regions)
    graph, regions, _ = strip_stranded_interior(graph, regions)
    lap = graph.laplacian()
    boundary = regions.boundary()
    interior = np.setdiff1d(np.arange(graph.n), boundary)
    src = regions.source
    quad = float(lap[src][:, src].sum())
    if interior.size:
        solver = _InteriorSolver(lap[interior][:, interior])
        w = np.asarray(lap[interior][:, src].sum(axis=1)).ravel()
        quad -= float(w @ solver.solve(w))
    if quad <= 0.0:
        raise NoPathError("no current can flow between the regions")
    return 1.0 / quad


def reduce_graph(graph: WeightedGraph, sets: Sequence) -> ReducedGraph:
    """Aggregate each node set into a single node via the 0/1 projection.

    The reduced Laplacian is the congruence of the original by the indicator
    projection: aggregated node p keeps every external edge of its members
    (weights summed), and its degree is the member-degree total minus all
    internal ordered pair weights.
    """
    idx_sets = [_as_index_set(s, f"set {k}") for k, s in enumerate(sets)]
    if not idx_sets:
        raise ValueError("need at least one set to aggregate")
    all_members = np.concatenate(idx_sets)
    if np.unique(all_members).size != all_members.size:
        raise ValueError("aggregated sets must be pairwise disjoint")
    if all_members.max() >= graph.n:
        raise ValueError(f"set indices must be < {graph.n}")
    s = len(idx_sets)
    others = np.setdiff1d(np.arange(graph.n), all_members)
    group = np.empty(graph.n, dtype=np.int64)
    for k, members in enumerate(idx_sets):
        group[members] = k
    group[others] = s + np.arange(others.size)
    m = s + others.size
    proj = sp.csr_matrix(
        (np.ones(graph.n), (np.arange(graph.n), group)), shape=(graph.n, m)
    )
    red = (proj.T @ graph.laplacian() @ proj).tocsr()
    red = ((red + red.T) * 0.5).tocsr()
    node_rows = {int(orig): int(s + k) for k, orig in enumerate(others)}
    return ReducedGraph(red, tuple(range(s)), node_rows)


def aggregated_degree(graph: WeightedGraph, nodes) -> float:
    """Degree of the aggregated node for a set: total member degree minus all
    internal (ordered) pair weights."""
    idx = _as_index_set(nodes, "aggregated")
    if idx.max() >= graph.n:
        raise ValueError(f"set indices must be < {graph.n}")
    internal = float(graph.weights[idx][:, idx].sum())
    return float(graph.degrees[idx].sum() - internal)


def von_luxburg_limit(deg_a: float, deg_b: float) -> float:
    """Degenerate large-sample limit of pairwise resistance: 1/d_a + 1/d_b."""
    if deg_a <= 0 or deg_b <= 0:
        raise ValueError("degrees must be positive")
    return 1.0 / deg_a + 1.0 / deg_b


def deviation_stats(resistances, limits) -> DeviationStats:
    """Max and mean of the relative deviations ``|R - eta| / R``."""
    r = np.asarray(resistances, dtype=np.float64).ravel()
    eta = np.asarray(limits, dtype=np.float64).ravel()
    if r.size != eta.size:
        raise ValueError(f"length mismatch: {r.size} resistances vs {eta.size} limits")
    if r.size == 0:
        raise ValueError("need at least one resistance")
    if (r <= 0).any():
        raise ValueError("resistances must be positive")
    rel = np.abs(r - eta) / r
    return DeviationStats(float(rel.max()), float(rel.mean()))
