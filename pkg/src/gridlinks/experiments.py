"""Monte Carlo sweeps over grid size (or knot length).

A sweep is split into work units of at most ``stream_size`` samples. Each unit
draws from its own ``RandomStream`` keyed by (grid size, chunk number), and
unit results are merged in plan order, so output does not depend on how many
worker processes ran the units.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from gridlinks import exact
from gridlinks.errors import DegenerateSample
from gridlinks.grid import knot_to_link
from gridlinks.invariants import component_count, knot_length, knot_size, writhe
from gridlinks.sampler import RandomStream, sample_closing_knot, sample_full_knot, sample_link
from gridlinks.stats import FitResult, SampleSummary, kurtosis, mean_ci95, ols_fit

EXPERIMENTS = ("knot-size", "components", "writhe-grid", "writhe-length")
FORMAT_VERSION = "gridlinks v1"

# full-size sweeps; the acceptance suite runs reduced versions
PRESETS = {
    "knot-size": {"n_values": range(10, 1001, 10), "samples": 10_000},
    "components": {"n_values": range(10, 1001, 10), "samples": 10_000},
    "writhe-grid": {"n_values": range(10, 1001, 10), "samples": 10_000},
    "writhe-length": {"n_values": [1000], "samples": 1_000_000},
}


@dataclass(frozen=True)
class WorkUnit:
    experiment: str
    n: int
    chunk: int
    samples: int
    seed: int
    bin_width: int = 10_000

    @property
    def stream_index(self) -> int:
        return (self.n << 32) | self.chunk


def length_bin(length: int, width: int) -> int:
    """Round to the nearest multiple of ``width``, halves rounding up."""
    return (length + width // 2) // width * width


def run_unit(unit: WorkUnit) -> dict[int, SampleSummary]:
    rs = RandomStream(unit.seed, unit.stream_index)
    n = unit.n
    if unit.experiment == "knot-size":
        values = [knot_size(sample_closing_knot(n, rs)) for _ in range(unit.samples)]
        return {n: SampleSummary.from_values(values)}
    if unit.experiment == "components":
        values = [component_count(sample_link(n, rs)) for _ in range(unit.samples)]
        return {n: SampleSummary.from_values(values)}
    if unit.experiment == "writhe-grid":
        values = [writhe(knot_to_link(sample_full_knot(n, rs))) for _ in range(unit.samples)]
        return {n: SampleSummary.from_values(values)}
    if unit.experiment == "writhe-length":
        # here n is the largest grid size; each knot picks its own
        groups: dict[int, list[int]] = {}
        for _ in range(unit.samples):
            k = sample_full_knot(rs.integers(2, n), rs)
            b = length_bin(knot_length(k), unit.bin_width)
            groups.setdefault(b, []).append(writhe(knot_to_link(k)))
        return {b: SampleSummary.from_values(v) for b, v in groups.items()}
    raise ValueError(f"unknown experiment {unit.experiment!r}")


def plan_units(
    experiment: str, n_values: Iterable[int], samples: int, seed: int = 0, stream_size: int = 1000, bin_width: int = 10_000
) -> list[WorkUnit]:
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if samples < 1 or stream_size < 1:
        raise ValueError("samples and stream_size must be positive")
    units = []
    for n in n_values:
        if n < 2:
            raise ValueError(f"grid size must be at least 2, got {n}")
        chunks = math.ceil(samples / stream_size)
        for c in range(chunks):
            size = min(stream_size, samples - c * stream_size)
            units.append(WorkUnit(experiment, n, c, size, seed, bin_width))
    return units


def run_experiment(
    experiment: str,
    n_values: Iterable[int],
    samples: int,
    seed: int = 0,
    workers: int = 1,
    stream_size: int = 1000,
    bin_width: int = 10_000,
    length_cap: int | None = 650_000,
) -> dict[int, SampleSummary]:
    """Run a sweep and return one merged summary per grid size (or length bin)."""
    units = plan_units(experiment, n_values, samples, seed, stream_size, bin_width)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_unit, units, chunksize=max(1, len(units) // (4 * workers))))
    else:
        parts = [run_unit(u) for u in units]
    merged: dict[int, SampleSummary] = {}
    for part in parts:
        for key in sorted(part):
            if key in merged:
                merged[key]._absorb(part[key])
            else:
                merged[key] = part[key].copy()
    if experiment == "writhe-length" and length_cap is not None:
        merged = {k: v for k, v in merged.items() if k <= length_cap}
    return dict(sorted(merged.items()))


def summary_row(key: int, s: SampleSummary, key_name: str = "n") -> dict:
    try:
        kurt = kurtosis(s)
    except DegenerateSample:
        kurt = math.nan
    try:
        lo, hi = mean_ci95(s)
    except DegenerateSample:
        lo = hi = math.nan
    return {
        key_name: key,
        "count": s.count,
        "mean": s.mean,
        "variance": s.variance,
        "m4": s.fourth_moment,
        "kurtosis": kurt,
        "ci_low": lo,
        "ci_high": hi,
    }


def summary_rows(experiment: str, results: dict[int, SampleSummary]) -> list[dict]:
    key_name = "length" if experiment == "writhe-length" else "n"
    return [summary_row(k, s, key_name) for k, s in results.items()]


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def format_csv(experiment: str, rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# {FORMAT_VERSION} {experiment}\n")
    buf.write("# variance: population (divide by count); kurtosis: raw m4/variance^2\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def format_json(experiment: str, rows: Sequence[dict]) -> str:
    clean = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()} for r in rows]
    return json.dumps({"format": FORMAT_VERSION, "experiment": experiment, "rows": clean}, indent=2) + "\n"


def verify(experiment: str, results: dict[int, SampleSummary], sigmas: float = 4.0) -> list[str]:
    """Compare sampled means with exact expectations; return the failures.

    Only knot size and component count have closed-form means. The standard
    error uses the exact variance.
    """
    failures = []
    if experiment == "knot-size":
        for n, s in results.items():
            dist = exact.knot_size_distribution(n)
            se = math.sqrt(float(dist.var) / s.count)
            if abs(s.mean - float(dist.ev)) > sigmas * se:
                failures.append(f"n={n}: mean {s.mean:.5f} vs exact {float(dist.ev):.5f} (> {sigmas} SE)")
    elif experiment == "components":
        H = exact.HarmonicTable(max(results))
        for n, s in results.items():
            ev = float(exact.expected_components(n, H))
            var = float(exact.variance_components(n, H))
            se = math.sqrt(var / s.count)
            if abs(s.mean - ev) > sigmas * se:
                failures.append(f"n={n}: mean {s.mean:.5f} vs exact {ev:.5f} (> {sigmas} SE)")
    return failures


MODELS = ("linear", "log2", "zero-intercept")


def fit_columns(
    rows: Sequence[dict], x_col: str, y_col: str, model: str = "linear", x_power: float = 1.0
) -> FitResult:
    """Fit ``y_col`` against ``x_col`` (raised to ``x_power``) under ``model``.

    ``log2`` regresses on log2 of x; ``zero-intercept`` forces the line
    through the origin. Rows with a missing or nan value are skipped.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    xs, ys = [], []
    for r in rows:
        if x_col not in r or y_col not in r:
            raise KeyError(x_col if x_col not in r else y_col)
        x, y = float(r[x_col]), float(r[y_col])
        if math.isnan(x) or math.isnan(y):
            continue
        xs.append(x)
        ys.append(y)
    x = np.asarray(xs) ** x_power
    if model == "log2":
        x = np.log2(x)
    return ols_fit(x, np.asarray(ys), force_zero_intercept=(model == "zero-intercept"))
