"""Experiment records and their CSV / SVG emission.

CSV schema: header ``experiment,n,quantity,value,seed,wall_ms``, floats with
17 significant digits, LF line endings.  Records are sorted before writing so
output bytes never depend on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

CSV_HEADER = "experiment,n,quantity,value,seed,wall_ms"

_SVG_COLORS = (
    "#d4619b", "#4daf4a", "#808080", "#377eb8", "#ff7f00",
    "#984ea3", "#a65628", "#17becf", "#e41a1c", "#555555",
)


@dataclass(frozen=True)
class ExperimentRecord:
    """One measured quantity at one sweep point of one experiment."""

    experiment: str
    n: int
    quantity: str
    value: float
    seed: int
    wall_ms: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(
                f"non-finite value for {self.experiment}/{self.quantity} at n={self.n}"
            )


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def sort_records(records) -> list[ExperimentRecord]:
    return sorted(records, key=lambda r: (r.experiment, r.n, r.quantity, r.seed))


def write_csv(records, path) -> Path:
    """Write sorted records as CSV; returns the path written."""
    records = sort_records(records)
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in records:
                fh.write(
                    f"{r.experiment},{r.n},{r.quantity},{_fmt(r.value)},"
                    f"{r.seed},{_fmt(r.wall_ms)}\n"
                )
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> list[ExperimentRecord]:
    """Parse a CSV produced by :func:`write_csv` back into records."""
    out = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in fh:
            exp, n, quantity, value, seed, wall = line.rstrip("\n").split(",")
            out.append(
                ExperimentRecord(exp, int(n), quantity, float(value), int(seed), float(wall))
            )
    return out


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def write_svg(records, path, width: int = 860, height: int = 520) -> Path:
    """Render one polyline per (experiment, quantity) against log10(n).

    Output is plain hand-built SVG (well-formed XML), intentionally free of
    plotting-library dependencies so emission stays deterministic.
    """
    records = sort_records(records)
    if not records:
        raise ValueError("no records to plot")
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for r in records:
        series.setdefault((r.experiment, r.quantity), []).append((r.n, r.value))

    xs = [math.log10(r.n) for r in records if r.n > 0]
    if not xs:
        raise ValueError("log-x axis needs positive n values")
    ys = [r.value for r in records]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    ml, mr, mt, mb = 70, 200, 20, 45
    pw, ph = width - ml - mr, height - mt - mb

    def px(n: int) -> float:
        return ml + (math.log10(n) - x_lo) / (x_hi - x_lo) * pw

    def py(v: float) -> float:
        return mt + (y_hi - v) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for tick in range(math.floor(x_lo), math.floor(x_hi) + 1):
        n_tick = 10**tick
        if x_lo <= tick <= x_hi:
            x = px(n_tick)
            parts.append(
                f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 5}" stroke="black"/>'
            )
            parts.append(
                f'<text x="{x:.2f}" y="{mt + ph + 20}" font-size="11" text-anchor="middle">'
                f"{n_tick}</text>"
            )
    for v in _ticks(y_lo, y_hi):
        y = py(v)
        parts.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{v:.4g}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 8}" font-size="12" '
        f'text-anchor="middle">n (log scale)</text>'
    )
    for k, ((exp, quantity), pts) in enumerate(sorted(series.items())):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        pts = sorted(pts)
        coords = " ".join(f"{px(n):.2f},{py(v):.2f}" for n, v in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = mt + 16 + 16 * k
        parts.append(
            f'<line x1="{ml + pw + 10}" y1="{ly - 4}" x2="{ml + pw + 30}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{ml + pw + 35}" y="{ly}" font-size="11">'
            f"{escape(exp)}:{escape(quantity)}</text>"
        )
    parts.append("</svg>")
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def emit(records, fmt: str, path) -> Path:
    """Write records as ``csv`` or ``svg``."""
    if fmt == "csv":
        return write_csv(records, path)
    if fmt == "svg":
        return write_svg(records, path)
    raise ValueError(f"unknown emission format {fmt!r}")
