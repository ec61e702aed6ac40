"""Dataset generators, ambient ball regions, and file ingestion.

Every generator is deterministic for a fixed seed and documents its exact
sampling recipe, since the experiment sweeps must be reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyRegionError
from ..graph import PointCloud, load_points

HALFMOON_CENTER = (0.5, 0.5)
SWISS_ROLL_TURNS = (1.5 * math.pi, 4.5 * math.pi)


@dataclass(frozen=True)
class RegionSpec:
    """Closed ball in ambient space: all x with ``d(x, center) <= radius``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64).reshape(-1)
        if self.radius <= 0:
            raise ValueError("region radius must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    def __call__(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        return bool(np.linalg.norm(x - self.center) <= self.radius)

    def select(self, points: np.ndarray) -> np.ndarray:
        """Indices of the rows of ``points`` inside the ball."""
        diff = np.asarray(points, dtype=np.float64) - self.center
        return np.flatnonzero(np.einsum("ij,ij->i", diff, diff) <= self.radius**2)


def ball_region(cloud: PointCloud, spec: RegionSpec) -> np.ndarray:
    """Indices of cloud points inside the ball; may be empty."""
    if cloud.metric is not None:
        return np.flatnonzero(
            np.asarray([spec(p) for p in cloud.points], dtype=bool)
        )
    return spec.select(cloud.points)


def require_region(cloud: PointCloud, spec: RegionSpec, name: str) -> np.ndarray:
    """Like :func:`ball_region` but raises :class:`EmptyRegionError` when empty."""
    idx = ball_region(cloud, spec)
    if idx.size == 0:
        raise EmptyRegionError(f"{name} region (radius {spec.radius}) selects no points")
    return idx


def uniform_cube(n: int, dim: int, rng: np.random.Generator) -> PointCloud:
    """``n`` points drawn uniformly from the unit cube ``[0, 1]**dim``."""
    if n < 1 or dim < 1:
        raise ValueError("need n >= 1 and dim >= 1")
    return PointCloud(rng.random((n, dim)))


def halfmoon(
    n_background: int,
    n_moon: int,
    rng: np.random.Generator,
    t: float = 0.3,
    angle_range: tuple[float, float] = (-20.0, 200.0),
    noise_sd: float = 0.01,
) -> PointCloud:
    """Low-density background with a high-density arc.

    Recipe: ``n_background`` points uniform on ``[0, 1]**2`` are drawn first.
    Then for each of ``n_moon`` arc points an angle (degrees) is drawn
    uniformly from ``angle_range`` and a radius from ``Normal(t, noise_sd)``
    (noise applies to the radial coordinate only); the point is placed at
    that polar offset from the arc center (0.5, 0.5).
    """
    if n_background < 0 or n_moon < 0 or n_background + n_moon < 2:
        raise ValueError("need at least two points in total")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    if angle_range[1] <= angle_range[0]:
        raise ValueError("angle range must be non-degenerate")
    bg = rng.random((n_background, 2))
    theta = np.radians(rng.uniform(angle_range[0], angle_range[1], n_moon))
    rho = rng.normal(t, noise_sd, n_moon)
    moon = np.column_stack(
        (HALFMOON_CENTER[0] + rho * np.cos(theta), HALFMOON_CENTER[1] + rho * np.sin(theta))
    )
    return PointCloud(np.vstack([bg, moon]))


def halfmoon_anchor(angle_deg: float, t: float = 0.3) -> np.ndarray:
    """Point on the arc at the given angle (degrees)."""
    a = math.radians(angle_deg)
    return np.array([HALFMOON_CENTER[0] + t * math.cos(a), HALFMOON_CENTER[1] + t * math.sin(a)])


def _swiss_roll_map(turn: np.ndarray, height: np.ndarray) -> np.ndarray:
    """Spiral ``(t cos t, h, t sin t)`` affinely rescaled into [0, 1]**3.

    The rescaling uses the fixed parameter bounds (not the sample), so anchor
    points can be placed deterministically with the same map.
    """
    hi = SWISS_ROLL_TURNS[1]
    x = turn * np.cos(turn) / (2.0 * hi) + 0.5
    z = turn * np.sin(turn) / (2.0 * hi) + 0.5
    return np.column_stack((x, height, z))


def swiss_roll(n: int, rng: np.random.Generator) -> PointCloud:
    """Spiral sheet in the unit cube.

    Recipe: turn parameter uniform on ``[1.5*pi, 4.5*pi]``, height uniform on
    ``[0, 1]``, mapped through the fixed spiral parametrization.  Successive
    windings are about 0.22 apart after rescaling, so a radial kernel with
    radius 0.2 connects along the sheet but not across windings.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    turn = rng.uniform(SWISS_ROLL_TURNS[0], SWISS_ROLL_TURNS[1], n)
    height = rng.random(n)
    return PointCloud(_swiss_roll_map(turn, height))


def swiss_roll_anchors(count: int = 5, height: float = 0.5) -> np.ndarray:
    """``count`` anchor points at equal turn spacing, mid-height by default.

    Anchors are inset by half a gap from the ends of the turn range so every
    anchor has sampled sheet on both sides of it.
    """
    lo, hi = SWISS_ROLL_TURNS
    gap = (hi - lo) / count
    turns = np.linspace(lo + gap / 2.0, hi - gap / 2.0, count)
    return _swiss_roll_map(turns, np.full(count, height))


def two_bump_1d(n: int, rng: np.random.Generator) -> PointCloud:
    """1-d mixture: two high-density bumps separated by a low-density valley.

    Recipe: with probability 0.45 each, draw from Normal(0.25, 0.05**2) or
    Normal(0.75, 0.05**2); with probability 0.10 draw uniform on [0, 1].
    Normal draws falling outside [0, 1] are redrawn (truncation).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    comp = rng.random(n)
    out = np.where(comp < 0.90, rng.normal(np.where(comp < 0.45, 0.25, 0.75), 0.05), rng.random(n))
    bad = (out < 0.0) | (out > 1.0)
    while bad.any():
        redraw = rng.normal(np.where(comp[bad] < 0.45, 0.25, 0.75), 0.05)
        out[bad] = redraw
        bad = (out < 0.0) | (out > 1.0)
    return PointCloud(out.reshape(-1, 1))


@dataclass(frozen=True)
class DatasetSpec:
    """Declarative dataset description used by the experiment configs."""

    kind: str  # uniform_cube | halfmoon | swiss_roll | two_bump_1d | file
    seed: int = 0
    n: int | None = None
    dim: int = 3
    n_background: int = 10000
    n_moon: int | None = None
    t: float = 0.3
    angle_range: tuple[float, float] = (-20.0, 200.0)
    noise_sd: float = 0.01
    path: str | None = None

    _KINDS = ("uniform_cube", "halfmoon", "swiss_roll", "two_bump_1d", "file")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown dataset kind {self.kind!r}")


def generate(spec: DatasetSpec) -> PointCloud:
    """Materialize a dataset spec (deterministic for a fixed seed)."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "uniform_cube":
        return uniform_cube(spec.n, spec.dim, rng)
    if spec.kind == "halfmoon":
        return halfmoon(
            spec.n_background, spec.n_moon, rng,
            t=spec.t, angle_range=spec.angle_range, noise_sd=spec.noise_sd,
        )
    if spec.kind == "swiss_roll":
        return swiss_roll(spec.n, rng)
    if spec.kind == "two_bump_1d":
        return two_bump_1d(spec.n, rng)
    return load_points(spec.path)
