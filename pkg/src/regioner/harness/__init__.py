"""Experiment harness: dataset generators, sweeps, records, config, CLI."""

from .datasets import DatasetSpec, RegionSpec, ball_region, generate, require_region
from .experiments import (
    CoverCompareConfig,
    HalfmoonConfig,
    SwissRollConfig,
    VonLuxburgConfig,
    run_cover_compare,
    run_halfmoon,
    run_swissroll,
    run_vonluxburg,
)
from .records import ExperimentRecord, emit, read_csv, write_csv, write_svg

__all__ = [
    "DatasetSpec",
    "RegionSpec",
    "ball_region",
    "generate",
    "require_region",
    "VonLuxburgConfig",
    "HalfmoonConfig",
    "SwissRollConfig",
    "CoverCompareConfig",
    "run_vonluxburg",
    "run_halfmoon",
    "run_swissroll",
    "run_cover_compare",
    "ExperimentRecord",
    "emit",
    "read_csv",
    "write_csv",
    "write_svg",
]
