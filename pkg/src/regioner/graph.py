"""Point clouds, kernel functions, and scaled resistor-graph construction.

A resistor graph on a point cloud carries edge conductances
``W[i, j] = s_ij * k(x_i, x_j)`` where ``k`` is a kernel (radial, gaussian,
or symmetric k-nearest-neighbor) and ``s_ij`` is a scaling factor:
``1`` (none), ``1/n**2`` (pointwise, for sample graphs), or ``g_i * g_j``
(regionwise, for density-weighted cover graphs).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

# Gaussian weights below this fraction of the largest weight are dropped so
# that gaussian graphs stay sparse; radial and knn graphs need no floor.
GAUSSIAN_FLOOR = 1e-12


def _as_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise ValueError("points must be an (n, d) array with d >= 1")
    if not np.isfinite(pts).all():
        raise ValueError("point coordinates must be finite")
    return pts


@dataclass(frozen=True)
class PointCloud:
    """Immutable point set in d-dimensional Euclidean space.

    ``metric`` is an optional override ``f(a, B) -> distances`` from one point
    to a stack of points; when left ``None`` the built-in Euclidean distance
    (and its KD-tree fast paths) is used.  Only the Euclidean metric is
    exercised by this package; the hook exists so another metric is a
    one-argument extension rather than a rewrite.
    """

    points: np.ndarray
    metric: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        pts = _as_points(self.points)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distances_to(self, x) -> np.ndarray:
        """Distances from a single point ``x`` to every cloud point."""
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.dim:
            raise ValueError(f"query point has dimension {x.shape[0]}, cloud has {self.dim}")
        if self.metric is not None:
            return np.asarray(self.metric(x, self.points), dtype=np.float64)
        diff = self.points - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def subset(self, idx) -> "PointCloud":
        return PointCloud(self.points[np.asarray(idx, dtype=np.intp)], metric=self.metric)


@dataclass(frozen=True)
class Kernel:
    """Similarity kernel with values in [0, 1].

    Kinds: ``radial`` (indicator of distance <= r), ``gaussian``
    (``exp(-d^2 / (2 sigma^2))``), and ``knn`` (symmetric 0/1 relation:
    an edge exists iff either endpoint is among the other's k nearest
    neighbors).  The knn kernel is relational and cannot be evaluated on a
    bare distance.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("radial", "gaussian", "knn"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not np.isfinite(self.param) or self.param <= 0:
            raise ValueError("kernel parameter must be positive and finite")
        if self.kind == "knn" and self.param != int(self.param):
            raise ValueError("knn kernel parameter must be an integer count")

    @classmethod
    def radial(cls, radius: float) -> "Kernel":
        return cls("radial", float(radius))

    @classmethod
    def gaussian(cls, sigma: float) -> "Kernel":
        return cls("gaussian", float(sigma))

    @classmethod
    def knn(cls, kappa: int) -> "Kernel":
        return cls("knn", int(kappa))


@dataclass(frozen=True)
class ScalingMode:
    """Edge-weight scaling: none, pointwise 1/n**2, or regionwise g_i*g_j."""

    kind: str
    node_weights: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("none", "pointwise", "regionwise"):
            raise ValueError(f"unknown scaling kind {self.kind!r}")
        if self.kind == "regionwise":
            w = np.asarray(self.node_weights, dtype=np.float64)
            if w.ndim != 1:
                raise ValueError("regionwise node weights must be a 1-d array")
            if ((w < 0) | (w > 1)).any():
                raise ValueError("regionwise node weights must lie in [0, 1]")
            if abs(w.sum() - 1.0) > 1e-9:
                raise ValueError("regionwise node weights must sum to 1")
            w.setflags(write=False)
            object.__setattr__(self, "node_weights", w)
        elif self.node_weights is not None:
            raise ValueError(f"{self.kind} scaling takes no node weights")

    @classmethod
    def none(cls) -> "ScalingMode":
        return cls("none")

    @classmethod
    def pointwise(cls) -> "ScalingMode":
        return cls("pointwise")

    @classmethod
    def regionwise(cls, node_weights) -> "ScalingMode":
        return cls("regionwise", np.asarray(node_weights, dtype=np.float64))


class WeightedGraph:
    """Symmetric non-negative sparse conductance matrix with cached degrees.

    Invariants enforced at construction: square, zero diagonal, bit-exact
    symmetry, non-negative weights.  ``degrees`` are the row sums and the
    Laplacian is ``diag(degrees) - W``.
    """

    __slots__ = ("weights", "degrees", "n", "_laplacian")

    def __init__(self, weights, validate: bool = True):
        w = sp.csr_matrix(weights, dtype=np.float64)
        if validate:
            if w.shape[0] != w.shape[1]:
                raise ValueError("weight matrix must be square")
            if w.nnz and w.data.min() < 0:
                raise ValueError("weights must be non-negative")
            if w.diagonal().any():
                raise ValueError("weight matrix must have a zero diagonal")
            if (w != w.T).nnz != 0:
                raise ValueError("weight matrix must be symmetric")
        w.eliminate_zeros()
        w.sort_indices()
        self.weights = w
        self.n = w.shape[0]
        self.degrees = np.asarray(w.sum(axis=1)).ravel()
        self.degrees.setflags(write=False)
        self._laplacian = None

    def laplacian(self) -> sp.csr_matrix:
        """Graph Laplacian ``L = D - W`` (positive semidefinite, zero row sums)."""
        if self._laplacian is None:
            lap = sp.diags(self.degrees) - self.weights
            self._laplacian = lap.tocsr()
        return self._laplacian

    def rescaled(self, factor: float) -> "WeightedGraph":
        """Copy of the graph with every weight multiplied by ``factor > 0``."""
        if factor <= 0:
            raise ValueError("rescaling factor must be positive")
        return WeightedGraph(self.weights * factor, validate=False)

    @classmethod
    def from_edges(cls, n: int, rows, cols, weights) -> "WeightedGraph":
        """Build from one evaluation per unordered pair (rows[k] < cols[k]).

        Mirroring each entry guarantees bit-exact symmetry.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.float64)
        if (rows >= cols).any():
            raise ValueError("edges must be given with rows < cols")
        coo = sp.coo_matrix(
            (np.concatenate([weights, weights]),
             (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n),
        )
        return cls(coo.tocsr(), validate=False)


def eval_kernel(kernel: Kernel, distance):
    """Kernel weight for one distance or an array of distances.

    Radial returns the indicator of ``distance <= r``; gaussian returns
    ``exp(-distance**2 / (2 sigma**2))``.  The knn kernel is rejected since
    it is a relation between points, not a function of distance.
    """
    if kernel.kind == "knn":
        raise ValueError("knn kernel cannot be evaluated on a distance")
    d = np.asarray(distance, dtype=np.float64)
    if not np.isfinite(d).all() or (d < 0).any():
        raise ValueError("distance must be finite and non-negative")
    if kernel.kind == "radial":
        out = (d <= kernel.param).astype(np.float64)
    else:
        out = np.exp(-(d * d) / (2.0 * kernel.param**2))
    return float(out) if np.isscalar(distance) else out


def _brute_distance_matrix(cloud: PointCloud) -> np.ndarray:
    if cloud.metric is None:
        return cdist(cloud.points, cloud.points)
    return np.stack([cloud.distances_to(p) for p in cloud.points])


def _knn_neighbor_indices(cloud: PointCloud, k: int) -> np.ndarray:
    """(n, k) indices of each point's k nearest neighbors, self excluded.

    Ties at distance zero (duplicate points) are broken arbitrarily but
    deterministically.
    """
    n = cloud.n
    if not 1 <= k < n:
        raise ValueError(f"neighbor count must satisfy 1 <= k < n, got k={k}, n={n}")
    if cloud.metric is None:
        _, idx = cKDTree(cloud.points).query(cloud.points, k=k + 1)
    else:
        idx = np.argsort(_brute_distance_matrix(cloud), axis=1, kind="stable")[:, : k + 1]
    self_mask = idx == np.arange(n)[:, None]
    has_self = self_mask.any(axis=1)
    drop = np.where(has_self, self_mask.argmax(axis=1), k)
    keep = np.ones((n, k + 1), dtype=bool)
    keep[np.arange(n), drop] = False
    return idx[keep].reshape(n, k)


def knn_adjacency(cloud: PointCloud, kappa: int) -> WeightedGraph:
    """Symmetric 0/1 graph: edge iff either endpoint is in the other's
    kappa-nearest-neighbor list (self excluded)."""
    neigh = _knn_neighbor_indices(cloud, kappa)
    a = np.repeat(np.arange(cloud.n, dtype=np.int64), kappa)
    b = neigh.astype(np.int64).ravel()
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    keep = lo != hi
    pairs = np.unique(lo[keep] * cloud.n + hi[keep])
    rows, cols = pairs // cloud.n, pairs % cloud.n
    return WeightedGraph.from_edges(cloud.n, rows, cols, np.ones(rows.shape[0]))


def max_knn_distance(cloud: PointCloud, k: int) -> float:
    """Max over points of the distance to that point's k-th nearest neighbor
    (self excluded); the experiment sweeps use it as kernel bandwidth."""
    n = cloud.n
    if not 1 <= k < n:
        raise ValueError(f"neighbor count must satisfy 1 <= k < n, got k={k}, n={n}")
    if cloud.metric is None:
        dist, _ = cKDTree(cloud.points).query(cloud.points, k=k + 1)
        return float(dist[:, k].max())
    dmat = np.sort(_brute_distance_matrix(cloud), axis=1)
    return float(dmat[:, k].max())


def _radial_pairs(cloud: PointCloud, radius: float):
    if cloud.metric is None:
        pairs = cKDTree(cloud.points).query_pairs(radius, output_type="ndarray")
        return pairs[:, 0].astype(np.int64), pairs[:, 1].astype(np.int64)
    dmat = _brute_distance_matrix(cloud)
    rows, cols = np.nonzero(np.triu(dmat <= radius, k=1))
    return rows.astype(np.int64), cols.astype(np.int64)


def _gaussian_pairs(cloud: PointCloud, sigma: float):
    """Gaussian edges above the sparsity floor, evaluated once per pair."""
    pts = cloud.points
    n = cloud.n
    if cloud.metric is None:
        nn_dist, _ = cKDTree(pts).query(pts, k=2)
        min_dist = float(nn_dist[:, 1].min())
    else:
        dmat = _brute_distance_matrix(cloud)
        min_dist = float(dmat[~np.eye(n, dtype=bool)].min())
    max_weight = math.exp(-(min_dist**2) / (2.0 * sigma**2))
    floor = GAUSSIAN_FLOOR * max_weight
    # The floor translates to a cutoff distance, so a radial query finds the
    # surviving pairs without materializing the dense weight matrix.
    cutoff = sigma * math.sqrt(-2.0 * math.log(floor)) if floor > 0 else np.inf
    if cloud.metric is None and np.isfinite(cutoff):
        rows, cols = _radial_pairs(cloud, cutoff)
        diff = pts[rows] - pts[cols]
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    else:
        dmat = _brute_distance_matrix(cloud)
        rows, cols = np.nonzero(np.triu(dmat <= cutoff, k=1))
        rows, cols = rows.astype(np.int64), cols.astype(np.int64)
        d = dmat[rows, cols]
    w = np.exp(-(d * d) / (2.0 * sigma**2))
    keep = w >= floor
    return rows[keep], cols[keep], w[keep]


def build_graph(cloud: PointCloud, kernel: Kernel, scaling: ScalingMode | str) -> WeightedGraph:
    """Resistor graph on a cloud: ``W[i, j] = s_ij * k(x_i, x_j)``.

    The diagonal is always zero (self-loops do not affect the Laplacian) and
    every unordered pair is evaluated once, so the result is bit-exact
    symmetric.  Duplicate points are kept and simply produce distance-zero
    edges.
    """
    if isinstance(scaling, str):
        scaling = ScalingMode(scaling)
    n = cloud.n
    if n < 2:
        raise ValueError("graph construction needs at least 2 points")
    if kernel.kind == "radial":
        rows, cols = _radial_pairs(cloud, kernel.param)
        w = np.ones(rows.shape[0])
    elif kernel.kind == "gaussian":
        rows, cols, w = _gaussian_pairs(cloud, kernel.param)
    else:
        g = knn_adjacency(cloud, int(kernel.param))
        coo = sp.triu(g.weights, k=1).tocoo()
        rows, cols, w = coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()

    if scaling.kind == "pointwise":
        w = w / float(n) ** 2
    elif scaling.kind == "regionwise":
        g = scaling.node_weights
        if g.shape[0] != n:
            raise ValueError(
                f"regionwise weights have length {g.shape[0]}, expected {n}"
            )
        w = w * g[rows] * g[cols]
    return WeightedGraph.from_edges(n, rows, cols, w)


def laplacian(graph: WeightedGraph) -> sp.csr_matrix:
    """Functional alias for :meth:`WeightedGraph.laplacian`."""
    return graph.laplacian()


_INT_TOKEN = re.compile(r"^[+-]?\d+$")


def load_points(path) -> PointCloud:
    """Read a point cloud from a delimited text file.

    One point per line; fields split on whitespace or commas; lines starting
    with ``#`` and blank lines are skipped.  A trailing column made up of
    integer literals on every line is treated as a label column and dropped.
    """
    rows: list[list[str]] = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.replace(",", " ").split()
                rows.append(fields)
                if len(fields) != len(rows[0]):
                    raise ValueError(
                        f"{path}: line {lineno} has {len(fields)} fields, "
                        f"expected {len(rows[0])}"
                    )
    except OSError as exc:
        raise OSError(f"cannot read point file {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: no data lines")
    ncols = len(rows[0])
    drop_label = ncols >= 2 and all(_INT_TOKEN.match(r[-1]) for r in rows)
    if drop_label:
        rows = [r[:-1] for r in rows]
    try:
        pts = np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric field ({exc})") from exc
    return PointCloud(pts)
