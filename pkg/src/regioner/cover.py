"""Alpha-covers: packed-and-covering center sets with empirical cell weights.

A cover at resolution ``alpha`` satisfies two properties: centers are pairwise
at least ``alpha`` apart (packing), and every input point is within ``alpha``
of some center (covering).  Greedy sequential insertion in data order gives
both by construction: a point becomes a center iff it is at least ``alpha``
from every earlier center, and every rejected point was within ``alpha`` of
one.  Cell counts over a sample give per-center density weights that refine
incrementally as more samples stream in, while the cover itself stays fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import _core
from .errors import EmptyRegionError
from .graph import Kernel, PointCloud, ScalingMode, WeightedGraph, build_graph
from .resistance import RegionPair
from .voltage import region_er

_ASSIGN_CHUNK = 2048


@dataclass(frozen=True)
class AlphaCover:
    """Cover centers (a subset of the input cloud) at resolution alpha."""

    centers: np.ndarray
    alpha: float
    indices: np.ndarray  # positions of the centers in the source cloud

    def __post_init__(self):
        centers = np.ascontiguousarray(self.centers, dtype=np.float64)
        idx = np.asarray(self.indices, dtype=np.int64)
        centers.setflags(write=False)
        idx.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "indices", idx)

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]

    def as_cloud(self) -> PointCloud:
        return PointCloud(self.centers)


@dataclass(frozen=True)
class DensityWeights:
    """Per-center sample counts; the weight of center i is counts[i] / total.

    Counts are integers, so merging the counts of two disjoint samples equals
    recomputing on their union exactly.
    """

    counts: np.ndarray
    total: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if (counts < 0).any():
            raise ValueError("cell counts must be non-negative")
        if counts.sum() != self.total:
            raise ValueError("cell counts must sum to the sample size")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def fractions(self) -> np.ndarray:
        if self.total == 0:
            raise ValueError("no samples counted yet")
        return self.counts / float(self.total)

    def merge(self, other: "DensityWeights") -> "DensityWeights":
        """Combine counts from a disjoint sample (streaming refinement)."""
        if other.counts.shape != self.counts.shape:
            raise ValueError("cannot merge weights for different covers")
        return DensityWeights(self.counts + other.counts, self.total + other.total)


def build_alpha_cover(cloud: PointCloud, alpha: float) -> AlphaCover:
    """Greedy sequential cover construction in data order.

    Insertion order matters (earlier points win), which also makes the result
    deterministic for a fixed input order.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if cloud.n < 1:
        raise ValueError("need at least one point")
    if cloud.metric is None:
        idx = _core.greedy_cover(cloud.points, float(alpha))
    else:
        accepted: list[int] = []
        for i, p in enumerate(cloud.points):
            if not accepted:
                accepted.append(i)
                continue
            d = np.asarray(cloud.metric(p, cloud.points[accepted]))
            if d.min() >= alpha:
                accepted.append(i)
        idx = np.asarray(accepted, dtype=np.int64)
    return AlphaCover(cloud.points[idx], float(alpha), idx)


def assign_voronoi(cover: AlphaCover, cloud: PointCloud) -> np.ndarray:
    """Nearest-center cell index per point; ties go to the lowest center index."""
    if cover.n_centers == 0:
        raise ValueError("cover has no centers")
    if cloud.metric is not None:
        return np.array(
            [int(np.argmin(cloud.metric(p, cover.centers))) for p in cloud.points],
            dtype=np.int64,
        )
    out = np.empty(cloud.n, dtype=np.int64)
    for start in range(0, cloud.n, _ASSIGN_CHUNK):
        chunk = cloud.points[start : start + _ASSIGN_CHUNK]
        out[start : start + chunk.shape[0]] = cdist(chunk, cover.centers).argmin(axis=1)
    return out


def estimate_density(cover: AlphaCover, sample: PointCloud) -> DensityWeights:
    """Empirical cell mass of a sample: count per Voronoi cell over total."""
    if sample.n == 0:
        raise ValueError("sample must be non-empty")
    cells = assign_voronoi(cover, sample)
    counts = np.bincount(cells, minlength=cover.n_centers)
    return DensityWeights(counts, sample.n)


def _centers_in_region(cover: AlphaCover, predicate, name: str) -> np.ndarray:
    hits = np.fromiter(
        (bool(predicate(c)) for c in cover.centers), dtype=bool, count=cover.n_centers
    )
    idx = np.flatnonzero(hits)
    if idx.size == 0:
        raise EmptyRegionError(f"{name} region contains no cover center")
    return idx


def cover_graph(cover: AlphaCover, weights: DensityWeights, kernel: Kernel) -> WeightedGraph:
    """Density-weighted resistor graph on the cover centers."""
    return build_graph(
        cover.as_cloud(), kernel, ScalingMode.regionwise(weights.fractions)
    )


def cover_region_er(
    cover: AlphaCover,
    weights: DensityWeights,
    kernel: Kernel,
    source_region,
    sink_region,
) -> float:
    """Region resistance on the density-weighted cover graph.

    ``source_region`` and ``sink_region`` are ambient-space predicates; a
    center belongs to a region iff the predicate holds at the center's
    coordinates.  Centers with zero weight keep their place in the graph but
    all their edges vanish, so the solver's stranded-interior policy removes
    them.
    """
    src = _centers_in_region(cover, source_region, "source")
    snk = _centers_in_region(cover, sink_region, "sink")
    if np.intersect1d(src, snk).size:
        raise ValueError("source and sink regions overlap on cover centers")
    graph = cover_graph(cover, weights, kernel)
    return region_er(graph, RegionPair(src, snk))


def write_cover_csv(fh, cover: AlphaCover, weights: DensityWeights | None = None) -> None:
    """Cover dump: center_index, coordinates..., gamma, cell_count."""
    dim = cover.centers.shape[1]
    coord_names = ",".join(f"x{k}" for k in range(dim))
    fh.write(f"center_index,{coord_names},gamma,cell_count\n")
    fracs = weights.fractions if weights is not None else np.zeros(cover.n_centers)
    counts = weights.counts if weights is not None else np.zeros(cover.n_centers, dtype=np.int64)
    for i in range(cover.n_centers):
        coords = ",".join(f"{c:.17g}" for c in cover.centers[i])
        fh.write(f"{i},{coords},{fracs[i]:.17g},{counts[i]}\n")
