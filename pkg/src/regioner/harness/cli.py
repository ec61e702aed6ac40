"""Command-line interface.

Subcommands: the four experiment sweeps (``vonluxburg``, ``halfmoon``,
``swissroll``, ``cover-compare``), a one-shot resistance query (``er``), and
cover construction (``cover``).  Every flag can also come from an INI config
file (see ``regioner.harness.config``); explicit flags win.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .. import cover as cover_mod
from ..graph import Kernel, build_graph, load_points
from ..resistance import RegionPair, reduce_graph, set_er
from ..voltage import (
    VoltageProblem,
    solve_direct,
    solve_fixed_point,
    total_current,
    write_voltage_csv,
)
from . import experiments
from .config import apply_section, load_config, parse_bool
from .datasets import RegionSpec, require_region
from .records import emit

_EXPERIMENTS = {
    "vonluxburg": (experiments.VonLuxburgConfig, experiments.run_vonluxburg),
    "halfmoon": (experiments.HalfmoonConfig, experiments.run_halfmoon),
    "swissroll": (experiments.SwissRollConfig, experiments.run_swissroll),
    "cover-compare": (experiments.CoverCompareConfig, experiments.run_cover_compare),
}


def parse_kernel(spec: str) -> Kernel:
    """Kernel spec strings: ``radial:0.08``, ``gaussian:0.5``, ``knn:100``."""
    kind, sep, param = spec.partition(":")
    if not sep:
        raise ValueError(f"kernel spec {spec!r} must look like kind:parameter")
    if kind == "radial":
        return Kernel.radial(float(param))
    if kind == "gaussian":
        return Kernel.gaussian(float(param))
    if kind == "knn":
        return Kernel.knn(int(param))
    raise ValueError(f"unknown kernel kind {kind!r}")


def parse_region(spec: str) -> RegionSpec:
    """Region spec strings: ``x,y,...:radius`` for a closed ball."""
    coords, sep, radius = spec.rpartition(":")
    if not sep:
        raise ValueError(f"region spec {spec!r} must look like x,y,...:radius")
    center = [float(s) for s in coords.replace(",", " ").split()]
    return RegionSpec(np.asarray(center), float(radius))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file mirroring the flags")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument("--out", help="output directory (default: current)")
    parser.add_argument("--format", help="comma list of output formats: csv,svg")
    parser.add_argument("--tol", type=float, help="fixed-point solver tolerance")
    parser.add_argument("--threads", type=int, help="sweep-point parallelism")
    parser.add_argument(
        "--no-timing", action="store_true", default=None,
        help="record wall_ms as 0.0 so reruns are byte-identical",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regioner",
        description="Region-based effective resistance experiments and queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in _EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        _add_common(p)
        if name == "vonluxburg":
            p.add_argument("--sweep", help="comma list of sample sizes")
            p.add_argument("--kernel", choices=("radial", "gaussian", "knn"))
            p.add_argument("--dim", type=int)
            p.add_argument("--dataset", choices=("uniform_cube", "file"))
            p.add_argument("--points", dest="path", help="point file for --dataset file")
            p.add_argument("--pair-count", type=int)
            p.add_argument("--region-pair-count", type=int)
            p.add_argument("--bandwidth-k", type=int)
            p.add_argument("--source-k", type=int)
        elif name == "halfmoon":
            p.add_argument("--sweep", help="comma list of arc sample sizes")
            p.add_argument("--background", dest="n_background", type=int)
            p.add_argument("--kernel-radius", type=float)
            p.add_argument("--source-radius", type=float)
            p.add_argument("--noise-sd", type=float)
        elif name == "swissroll":
            p.add_argument("--sweep", help="comma list of sample sizes")
            p.add_argument("--kernel-radius", type=float)
            p.add_argument("--source-radius", type=float)
            p.add_argument("--anchor-count", type=int)
        else:  # cover-compare
            p.add_argument("--alpha", type=float)
            p.add_argument("--gamma-sweep", help="comma list of density sample sizes")
            p.add_argument("--dense-sweep", help="comma list of dense sample sizes")
            p.add_argument("--kernel-radius", type=float)
            p.add_argument("--source-radius", type=float)

    p = sub.add_parser("er", help="one-shot set resistance query on a point file")
    _add_common(p)
    p.add_argument("--points", help="point file (see README for format)")
    p.add_argument("--kernel", help="radial:R | gaussian:S | knn:K")
    p.add_argument("--scaling", choices=("none", "pointwise"))
    p.add_argument("--source", help="ball region x,y,...:radius")
    p.add_argument("--sink", help="ball region x,y,...:radius")
    p.add_argument("--solver", choices=("direct", "fixed-point"))
    p.add_argument("--max-iter", type=int, help="fixed-point sweep cap (default 10**6)")
    p.add_argument("--dump-voltage", help="write per-node voltages to this CSV")
    p.add_argument("--debug-reduced", help="write the source/sink reduced Laplacian here")

    p = sub.add_parser("cover", help="build a cover and dump centers with densities")
    _add_common(p)
    p.add_argument("--points", help="point file to cover")
    p.add_argument("--alpha", type=float, help="cover resolution")
    p.add_argument(
        "--density-points",
        help="optional second point file used for the density weights",
    )
    p.add_argument("--dump", help="output CSV (default OUT/cover.csv)")
    return parser


def _resolve(args, section: dict, key: str, required: bool = False, cast=None):
    """Flag value if given, else config-file value, else None (or an error)."""
    value = getattr(args, key.replace("-", "_"), None)
    if value is None and key in section:
        value = section[key]
        if cast is not None:
            value = cast(value)
    if value is None and required:
        raise SystemExit(f"error: --{key} is required (flag or config file)")
    return value


def _common_settings(args, file_cfg) -> dict:
    common = dict(file_cfg.get("common", {}))
    settings = {
        "seed": int(common.get("seed", 0)),
        "out": common.get("out", "."),
        "format": common.get("format", "csv"),
        "tol": float(common.get("tol", 1e-10)),
        "threads": int(common.get("threads", 1)),
        "timing": parse_bool(common.get("timing", "true")),
    }
    if args.seed is not None:
        settings["seed"] = args.seed
    if args.out is not None:
        settings["out"] = args.out
    if args.format is not None:
        settings["format"] = args.format
    if args.tol is not None:
        settings["tol"] = args.tol
    if args.threads is not None:
        settings["threads"] = args.threads
    if args.no_timing:
        settings["timing"] = False
    return settings


def _experiment_config(name: str, args, file_cfg, settings):
    cfg_cls, _ = _EXPERIMENTS[name]
    cfg = cfg_cls()
    cfg = apply_section(cfg, file_cfg.get(name))
    cfg = dataclasses.replace(
        cfg, seed=settings["seed"], threads=settings["threads"], timing=settings["timing"]
    )
    flag_fields = {f.name for f in dataclasses.fields(cfg)}
    overrides = {}
    for field in flag_fields:
        value = getattr(args, field, None)
        if value is None:
            continue
        if field in ("sweep", "gamma_sweep", "dense_sweep") and isinstance(value, str):
            value = tuple(int(s) for s in value.replace(",", " ").split())
        overrides[field] = value
    return dataclasses.replace(cfg, **overrides)


def _run_experiment(name: str, args) -> int:
    file_cfg = load_config(args.config) if args.config else {}
    settings = _common_settings(args, file_cfg)
    cfg = _experiment_config(name, args, file_cfg, settings)
    _, runner = _EXPERIMENTS[name]
    records = runner(cfg)
    out_dir = Path(settings["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = name.replace("-", "_")
    for fmt in (f.strip() for f in settings["format"].split(",")):
        if fmt:
            path = emit(records, fmt, out_dir / f"{stem}.{fmt}")
            print(f"wrote {path}")
    return 0


def _run_er(args) -> int:
    file_cfg = load_config(args.config) if args.config else {}
    settings = _common_settings(args, file_cfg)
    section = file_cfg.get("er", {})
    kernel = parse_kernel(_resolve(args, section, "kernel", required=True))
    scaling = _resolve(args, section, "scaling") or "none"
    solver = _resolve(args, section, "solver") or "direct"
    cloud = load_points(_resolve(args, section, "points", required=True))
    src_spec = parse_region(_resolve(args, section, "source", required=True))
    snk_spec = parse_region(_resolve(args, section, "sink", required=True))
    source = require_region(cloud, src_spec, "source")
    sink = require_region(cloud, snk_spec, "sink")
    graph = build_graph(cloud, kernel, scaling)
    regions = RegionPair(source, sink)
    resistance = set_er(graph, regions)
    print(f"effective resistance: {resistance:.17g}")

    dump_voltage = _resolve(args, section, "dump-voltage")
    if solver == "fixed-point" or dump_voltage:
        problem = VoltageProblem(graph, regions)
        if solver == "fixed-point":
            max_iter = _resolve(args, section, "max-iter", cast=int) or 1_000_000
            solution = solve_fixed_point(problem, tol=settings["tol"], max_iter=max_iter)
            print(
                f"fixed-point solve: {solution.iterations} sweeps, "
                f"residual {solution.residual:.3e}, "
                f"resistance {1.0 / total_current(graph, solution, regions.source):.17g}"
            )
        else:
            solution = solve_direct(problem)
        if dump_voltage:
            with open(dump_voltage, "w", encoding="utf-8", newline="\n") as fh:
                write_voltage_csv(fh, cloud, solution)
            print(f"wrote {dump_voltage}")
    debug_reduced = _resolve(args, section, "debug-reduced")
    if debug_reduced:
        reduced = reduce_graph(graph, [regions.source, regions.sink])
        with open(debug_reduced, "w", encoding="utf-8", newline="\n") as fh:
            reduced.dump(fh)
        print(f"wrote {debug_reduced}")
    return 0


def _run_cover(args) -> int:
    file_cfg = load_config(args.config) if args.config else {}
    settings = _common_settings(args, file_cfg)
    section = file_cfg.get("cover", {})
    alpha = _resolve(args, section, "alpha", required=True, cast=float)
    cloud = load_points(_resolve(args, section, "points", required=True))
    built = cover_mod.build_alpha_cover(cloud, alpha)
    density_points = _resolve(args, section, "density-points")
    sample = load_points(density_points) if density_points else cloud
    weights = cover_mod.estimate_density(built, sample)
    out_dir = Path(settings["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    dump = _resolve(args, section, "dump")
    dump = Path(dump) if dump else out_dir / "cover.csv"
    with open(dump, "w", encoding="utf-8", newline="\n") as fh:
        cover_mod.write_cover_csv(fh, built, weights)
    print(f"{built.n_centers} centers at alpha={alpha:g}; wrote {dump}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in _EXPERIMENTS:
        return _run_experiment(args.command, args)
    if args.command == "er":
        return _run_er(args)
    return _run_cover(args)


if __name__ == "__main__":
    sys.exit(main())
