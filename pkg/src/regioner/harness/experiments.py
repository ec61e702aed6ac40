"""The four experiment sweeps, emitted as reproducible records.

Each sweep point gets its own RNG stream (``base_seed XOR point-index``), so
running points in parallel cannot change any emitted value.  Wall times are
measured around the resistance solves only (graph construction excluded) and
land in the ``wall_ms`` column; with ``timing=False`` they are recorded as 0.0
so reruns are byte-identical.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..cover import build_alpha_cover, cover_graph, estimate_density
from ..errors import EmptyRegionError
from ..graph import Kernel, PointCloud, build_graph, load_points, max_knn_distance
from ..resistance import (
    RegionPair,
    aggregated_degree,
    deviation_stats,
    largest_component,
    pairwise_er_many,
    set_er,
    von_luxburg_limit,
)
from . import datasets
from .datasets import RegionSpec, ball_region, require_region
from .records import ExperimentRecord

_MAX_REGION_DRAWS = 500

DEFAULT_ALPHA = (2.0 / 3.0) * 3.0**-6


@dataclass
class VonLuxburgConfig:
    dataset: str = "uniform_cube"  # uniform_cube | file
    path: str | None = None
    dim: int = 3
    kernel: str = "radial"  # radial | gaussian | knn
    sweep: tuple[int, ...] = (500, 1000, 2000, 5000)
    pair_count: int = 50
    region_pair_count: int = 50
    bandwidth_k: int | None = None  # None -> max(1, n // 100)
    source_k: int = 20
    seed: int = 0
    timing: bool = True
    threads: int = 1


@dataclass
class HalfmoonConfig:
    n_background: int = 10000
    sweep: tuple[int, ...] = (1000, 2000, 4000, 8000, 12000, 16000)
    t: float = 0.3
    noise_sd: float = 0.01
    angle_range: tuple[float, float] = (-20.0, 200.0)
    kernel_radius: float = 0.08
    source_radius: float = 0.05
    anchor_angles: tuple[float, ...] = (0.0, 45.0, 90.0, 180.0)
    seed: int = 0
    timing: bool = True
    threads: int = 1


@dataclass
class SwissRollConfig:
    sweep: tuple[int, ...] = (1000, 2000, 4000, 8000)
    kernel_radius: float = 0.2
    source_radius: float = 0.1
    anchor_count: int = 5
    seed: int = 0
    timing: bool = True
    threads: int = 1


@dataclass
class CoverCompareConfig:
    alpha: float = DEFAULT_ALPHA
    gamma_sweep: tuple[int, ...] = (1000, 2000, 5000, 10000, 21122)
    dense_sweep: tuple[int, ...] = (500, 1000, 2000, 4000)
    kernel_radius: float = 0.1
    source_radius: float = 0.1
    anchors: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    seed: int = 0
    timing: bool = True
    threads: int = 1


def _annotate(exc: Exception, n: int, seed: int) -> Exception:
    """Tag a propagated error with the sweep point that produced it."""
    note = f" [sweep point n={n}, seed={seed}]"
    if exc.args and isinstance(exc.args[0], str):
        exc.args = (exc.args[0] + note,) + exc.args[1:]
    else:
        exc.args = exc.args + (note,)
    return exc


def _map_sweep(worker, count: int, threads: int) -> list:
    """Run sweep points (each already seeded independently) possibly in parallel."""
    if threads <= 1 or count <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(count)))


def _elapsed_ms(t0: float, timing: bool) -> float:
    return (time.perf_counter() - t0) * 1000.0 if timing else 0.0


def standard_branch_stats(graph, pairs):
    """Deviation of pairwise resistances from the degree-based limit.

    On a complete unit-weight graph of n nodes every pairwise resistance is
    2/n while the limit is 2/(n-1), a closed-form sanity anchor.
    """
    pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    res = pairwise_er_many(graph, pairs)
    limits = [von_luxburg_limit(graph.degrees[i], graph.degrees[j]) for i, j in pairs]
    return deviation_stats(res, limits), res


def region_branch_stats(graph, region_pairs):
    """Deviation of set resistances from the aggregated-degree limit."""
    res, limits = [], []
    for pair in region_pairs:
        res.append(set_er(graph, pair))
        limits.append(
            von_luxburg_limit(
                aggregated_degree(graph, pair.source),
                aggregated_degree(graph, pair.sink),
            )
        )
    return deviation_stats(res, limits), np.asarray(res)


def _sample_node_pairs(rng, nodes, count: int) -> np.ndarray:
    pairs = np.empty((count, 2), dtype=np.int64)
    for k in range(count):
        pairs[k] = rng.choice(nodes, size=2, replace=False)
    return pairs


def _sample_region_pairs(rng, cloud, graph, nodes, radius, count):
    """Disjoint ball-region pairs around sampled points.

    Draws are rejected until both index sets are disjoint and both aggregated
    degrees are positive (a ball can otherwise swallow an entire component).
    """
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > _MAX_REGION_DRAWS * count:
            raise RuntimeError(
                f"could not draw {count} disjoint region pairs with radius {radius}"
            )
        a, b = rng.choice(nodes, size=2, replace=False)
        set_a = ball_region(cloud, RegionSpec(cloud.points[a], radius))
        set_b = ball_region(cloud, RegionSpec(cloud.points[b], radius))
        if np.intersect1d(set_a, set_b).size:
            continue
        if aggregated_degree(graph, set_a) <= 0 or aggregated_degree(graph, set_b) <= 0:
            continue
        out.append(RegionPair(set_a, set_b))
    return out


def _vonluxburg_cloud(cfg: VonLuxburgConfig, n: int, rng) -> PointCloud:
    if cfg.dataset == "uniform_cube":
        return datasets.uniform_cube(n, cfg.dim, rng)
    if cfg.dataset != "file":
        raise ValueError(f"unknown dataset {cfg.dataset!r} for the limit experiment")
    if not cfg.path:
        raise ValueError("file dataset needs a path")
    full = load_points(cfg.path)
    if n > full.n:
        raise ValueError(f"requested {n} points but {cfg.path} holds {full.n}")
    return full.subset(rng.choice(full.n, size=n, replace=False))


def run_vonluxburg(cfg: VonLuxburgConfig) -> list[ExperimentRecord]:
    """Deviation-from-degree-limit sweep for standard and region resistance.

    For each n: the unscaled graph feeds pairwise resistances against the
    node-degree limit, and the 1/n**2-scaled graph feeds ball-region
    resistances against the aggregated-degree limit.  Emits max and mean
    relative deviation for each branch (4 quantities per sweep point).
    """

    def point(idx: int) -> list[ExperimentRecord]:
        n = cfg.sweep[idx]
        seed = cfg.seed ^ idx
        rng = np.random.default_rng(seed)
        try:
            cloud = _vonluxburg_cloud(cfg, n, rng)
            k_bw = cfg.bandwidth_k if cfg.bandwidth_k else max(1, n // 100)
            bandwidth = max_knn_distance(cloud, k_bw)
            if cfg.kernel == "radial":
                kernel = Kernel.radial(bandwidth)
            elif cfg.kernel == "gaussian":
                kernel = Kernel.gaussian(bandwidth)
            elif cfg.kernel == "knn":
                kernel = Kernel.knn(k_bw)
            else:
                raise ValueError(f"unknown kernel family {cfg.kernel!r}")

            g_std = build_graph(cloud, kernel, "none")
            nodes = largest_component(g_std)
            pairs = _sample_node_pairs(rng, nodes, cfg.pair_count)
            t0 = time.perf_counter()
            std_stats, _ = standard_branch_stats(g_std, pairs)
            wall_std = _elapsed_ms(t0, cfg.timing)

            g_region = build_graph(cloud, kernel, "pointwise")
            r_s = max_knn_distance(cloud, cfg.source_k)
            region_pairs = _sample_region_pairs(
                rng, cloud, g_region, nodes, r_s, cfg.region_pair_count
            )
            t0 = time.perf_counter()
            region_stats, _ = region_branch_stats(g_region, region_pairs)
            wall_region = _elapsed_ms(t0, cfg.timing)
        except Exception as exc:
            raise _annotate(exc, n, seed)
        name = "vonluxburg"
        return [
            ExperimentRecord(name, n, "std_max_rel_dev", std_stats.max_rel, seed, wall_std),
            ExperimentRecord(name, n, "std_mean_rel_dev", std_stats.mean_rel, seed, wall_std),
            ExperimentRecord(name, n, "region_max_rel_dev", region_stats.max_rel, seed, wall_region),
            ExperimentRecord(name, n, "region_mean_rel_dev", region_stats.mean_rel, seed, wall_region),
        ]

    chunks = _map_sweep(point, len(cfg.sweep), cfg.threads)
    return [rec for chunk in chunks for rec in chunk]


def run_halfmoon(cfg: HalfmoonConfig) -> list[ExperimentRecord]:
    """Arc-distance ratio sweep on the halfmoon cloud.

    The arc density grows along the sweep: one background and one full-size
    arc sample are drawn up front, and sweep point n uses the first n arc
    points.  Nesting the samples removes redraw noise between adjacent sweep
    points, which is what "increasing density" means here.  Anchors sit on
    the arc at the configured angles (reference order: i, j, k, p); the
    emitted ratios R(i,j)/R(i,p) and R(i,k)/R(i,p) approach the arc-length
    ratios 0.25 and 0.5.
    """
    if len(cfg.anchor_angles) != 4:
        raise ValueError("halfmoon needs exactly four anchor angles (i, j, k, p)")
    full = datasets.halfmoon(
        cfg.n_background, max(cfg.sweep), np.random.default_rng(cfg.seed),
        t=cfg.t, angle_range=cfg.angle_range, noise_sd=cfg.noise_sd,
    )

    def point(idx: int) -> list[ExperimentRecord]:
        n_moon = cfg.sweep[idx]
        seed = cfg.seed
        try:
            cloud = PointCloud(full.points[: cfg.n_background + n_moon])
            regions = [
                require_region(
                    cloud,
                    RegionSpec(datasets.halfmoon_anchor(angle, cfg.t), cfg.source_radius),
                    f"anchor theta={angle}",
                )
                for angle in cfg.anchor_angles
            ]
            graph = build_graph(cloud, Kernel.radial(cfg.kernel_radius), "pointwise")
            resistances = {}
            walls = {}
            for label, other in (("ij", 1), ("ik", 2), ("ip", 3)):
                t0 = time.perf_counter()
                resistances[label] = set_er(graph, RegionPair(regions[0], regions[other]))
                walls[label] = _elapsed_ms(t0, cfg.timing)
        except Exception as exc:
            raise _annotate(exc, n_moon, seed)
        name = "halfmoon"
        recs = [
            ExperimentRecord(name, n_moon, f"R_s_{lbl}", resistances[lbl], seed, walls[lbl])
            for lbl in ("ij", "ik", "ip")
        ]
        recs.append(
            ExperimentRecord(
                name, n_moon, "ratio_ij_ip",
                resistances["ij"] / resistances["ip"], seed, walls["ij"] + walls["ip"],
            )
        )
        recs.append(
            ExperimentRecord(
                name, n_moon, "ratio_ik_ip",
                resistances["ik"] / resistances["ip"], seed, walls["ik"] + walls["ip"],
            )
        )
        return recs

    chunks = _map_sweep(point, len(cfg.sweep), cfg.threads)
    return [rec for chunk in chunks for rec in chunk]


def run_swissroll(cfg: SwissRollConfig) -> list[ExperimentRecord]:
    """Resistance ordering between anchors along the spiral sheet."""
    if cfg.anchor_count < 2:
        raise ValueError("need at least two anchors")

    def point(idx: int) -> list[ExperimentRecord]:
        n = cfg.sweep[idx]
        seed = cfg.seed ^ idx
        rng = np.random.default_rng(seed)
        try:
            cloud = datasets.swiss_roll(n, rng)
            anchors = datasets.swiss_roll_anchors(cfg.anchor_count)
            regions = [
                require_region(
                    cloud, RegionSpec(anchors[k], cfg.source_radius), f"anchor {k + 1}"
                )
                for k in range(cfg.anchor_count)
            ]
            graph = build_graph(cloud, Kernel.radial(cfg.kernel_radius), "pointwise")
            recs = []
            for j in range(1, cfg.anchor_count):
                t0 = time.perf_counter()
                res = set_er(graph, RegionPair(regions[0], regions[j]))
                wall = _elapsed_ms(t0, cfg.timing)
                recs.append(
                    ExperimentRecord("swissroll", n, f"R_s_1{j + 1}", res, seed, wall)
                )
        except Exception as exc:
            raise _annotate(exc, n, seed)
        return recs

    chunks = _map_sweep(point, len(cfg.sweep), cfg.threads)
    return [rec for chunk in chunks for rec in chunk]


def run_cover_compare(cfg: CoverCompareConfig) -> list[ExperimentRecord]:
    """Dense-sample pipeline vs fixed cover pipeline on the two-bump density.

    One sample stream is drawn up front and both pipelines consume prefixes
    of it: the dense branch builds a 1/n**2-scaled graph per prefix size,
    while the cover branch builds one cover from the density-sample budget
    and refines the per-cell weights over prefixes, keeping the graph size
    fixed.  Both branches solve with the same Schur-elimination route so the
    recorded solve times are comparable.
    """
    name = "cover_compare"
    specs = [
        RegionSpec(np.array([x]), cfg.source_radius) for x in cfg.anchors
    ]
    budget = max(max(cfg.gamma_sweep), max(cfg.dense_sweep))
    stream_seed = cfg.seed
    full = datasets.two_bump_1d(budget, np.random.default_rng(stream_seed))

    def dense_point(idx: int) -> list[ExperimentRecord]:
        # Both pipelines consume prefixes of the same sample stream, so their
        # difference reflects the method, not independent sampling noise.
        n = cfg.dense_sweep[idx]
        try:
            cloud = PointCloud(full.points[:n])
            regions = [
                require_region(cloud, spec, f"anchor {k + 1}") for k, spec in enumerate(specs)
            ]
            graph = build_graph(cloud, Kernel.radial(cfg.kernel_radius), "pointwise")
            recs = []
            for j in range(1, len(specs)):
                t0 = time.perf_counter()
                res = set_er(graph, RegionPair(regions[0], regions[j]))
                wall = _elapsed_ms(t0, cfg.timing)
                recs.append(
                    ExperimentRecord(name, n, f"dense_R_s_1{j + 1}", res, stream_seed, wall)
                )
        except Exception as exc:
            raise _annotate(exc, n, stream_seed)
        return recs

    records = [r for chunk in _map_sweep(dense_point, len(cfg.dense_sweep), cfg.threads)
               for r in chunk]

    cover_seed = stream_seed
    gamma_budget = max(cfg.gamma_sweep)
    try:
        t0 = time.perf_counter()
        cover = build_alpha_cover(PointCloud(full.points[:gamma_budget]), cfg.alpha)
        build_wall = _elapsed_ms(t0, cfg.timing)
        records.append(
            ExperimentRecord(
                name, gamma_budget, "n_centers", cover.n_centers, cover_seed, build_wall
            )
        )
        center_regions = []
        for k, spec in enumerate(specs):
            idx = spec.select(cover.centers)
            if idx.size == 0:
                raise EmptyRegionError(f"anchor {k + 1} region contains no cover center")
            center_regions.append(idx)
    except Exception as exc:
        raise _annotate(exc, gamma_budget, cover_seed)

    def cover_point(idx: int) -> list[ExperimentRecord]:
        m = cfg.gamma_sweep[idx]
        try:
            t0 = time.perf_counter()
            weights = estimate_density(cover, full.subset(np.arange(m)))
            gamma_wall = _elapsed_ms(t0, cfg.timing)
            graph = cover_graph(cover, weights, Kernel.radial(cfg.kernel_radius))
            recs = [
                ExperimentRecord(name, m, "gamma_estimate", float(m), cover_seed, gamma_wall)
            ]
            for j in range(1, len(specs)):
                t0 = time.perf_counter()
                res = set_er(graph, RegionPair(center_regions[0], center_regions[j]))
                wall = _elapsed_ms(t0, cfg.timing)
                recs.append(
                    ExperimentRecord(name, m, f"cover_R_s_1{j + 1}", res, cover_seed, wall)
                )
        except Exception as exc:
            raise _annotate(exc, m, cover_seed)
        return recs

    records.extend(
        r for chunk in _map_sweep(cover_point, len(cfg.gamma_sweep), cfg.threads)
        for r in chunk
    )
    return records
