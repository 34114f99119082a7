"""Parse ntruvfk CSV output and render it to PNG.

Parsing and rendering are separated: a parse builds a frozen PlotSpec
holding exactly the arrays that will be drawn, so re-rendering the same
CSV yields an identical spec (the determinism contract is checked on the
spec, not on image bytes).  Images are 1200x800 (figsize 12x8 at dpi 100)
with fixed styling.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

BENCH_HEADER = ["instance_id", "solver", "distance", "wall_ms", "iterations"]
SOLVERS = ("babai", "mincut")

SWEEP_R_COLUMN = "R"
SWEEP_SUCCESS_COLUMN = "success"


class CsvFormatError(Exception):
    """Malformed input; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class BenchPlotSpec:
    """One series of (trial, distance) points per solver."""

    trials: dict      # solver -> tuple of instance ids
    distances: dict   # solver -> tuple of floats
    label: str

    def __eq__(self, other):
        return (
            isinstance(other, BenchPlotSpec)
            and self.trials == other.trials
            and self.distances == other.distances
            and self.label == other.label
        )


@dataclass(frozen=True)
class SweepPlotSpec:
    ranges: tuple        # sorted distinct R values
    success_rate: tuple  # fraction of successful calls per R
    r0: Optional[int]    # largest R with at least one success
    label: str


def parse_bench_csv(path: str, label: str = "") -> BenchPlotSpec:
    trials = {s: [] for s in SOLVERS}
    distances = {s: [] for s in SOLVERS}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(1, "empty file")
        if header != BENCH_HEADER:
            raise CsvFormatError(1, f"expected header {','.join(BENCH_HEADER)}")
        rows = 0
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(BENCH_HEADER):
                raise CsvFormatError(lineno, f"expected {len(BENCH_HEADER)} fields")
            inst, solver, dist, _, _ = row
            if solver not in SOLVERS:
                raise CsvFormatError(lineno, f"unknown solver {solver!r}")
            try:
                trial = int(inst)
                d = float(dist)
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from None
            if d < 0:
                raise CsvFormatError(lineno, "negative distance")
            trials[solver].append(trial)
            distances[solver].append(d)
            rows += 1
        if rows == 0:
            raise CsvFormatError(2, "no data rows")
    return BenchPlotSpec(
        trials={s: tuple(v) for s, v in trials.items()},
        distances={s: tuple(v) for s, v in distances.items()},
        label=label,
    )


def parse_sweep_csv(path: str, label: str = "") -> SweepPlotSpec:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(1, "empty file")
        try:
            r_idx = header.index(SWEEP_R_COLUMN)
            s_idx = header.index(SWEEP_SUCCESS_COLUMN)
        except ValueError:
            raise CsvFormatError(1, "header lacks R/success columns") from None
        calls: dict = {}
        wins: dict = {}
        rows = 0
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CsvFormatError(lineno, f"expected {len(header)} fields")
            try:
                R = int(row[r_idx])
                success = int(row[s_idx])
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from None
            calls[R] = calls.get(R, 0) + 1
            wins[R] = wins.get(R, 0) + (1 if success else 0)
            rows += 1
        if rows == 0:
            raise CsvFormatError(2, "no data rows")
    ranges = tuple(sorted(calls))
    rate = tuple(wins[R] / calls[R] for R in ranges)
    successful = [R for R in ranges if wins[R] > 0]
    return SweepPlotSpec(
        ranges=ranges,
        success_rate=rate,
        r0=max(successful) if successful else None,
        label=label,
    )


_STYLE = {"babai": dict(color="#d62728", marker="x"),
          "mincut": dict(color="#1f77b4", marker="o")}


def render_bench(spec: BenchPlotSpec, out: str):
    fig, ax = plt.subplots(figsize=(12, 8), dpi=100)
    for solver in SOLVERS:
        ax.scatter(spec.trials[solver], spec.distances[solver],
                   s=18, label=solver, **_STYLE[solver])
    ax.set_xlabel("trial")
    ax.set_ylabel("distance to target")
    title = "Babai vs exact min-cut CVP"
    if spec.label:
        title += f"  ({spec.label})"
    ax.set_title(title)
    ax.legend()
    fig.savefig(out)
    plt.close(fig)


def render_sweep(spec: SweepPlotSpec, out: str):
    fig, ax = plt.subplots(figsize=(12, 8), dpi=100)
    ax.bar(spec.ranges, spec.success_rate, color="#1f77b4", width=0.8)
    if spec.r0 is not None:
        ax.axvline(spec.r0, color="#d62728", linestyle="--",
                   label=f"largest successful R = {spec.r0}")
        ax.legend()
    ax.set_xlabel("oracle range R")
    ax.set_ylabel("success rate")
    title = "message-recovery success rate by range"
    if spec.label:
        title += f"  ({spec.label})"
    ax.set_title(title)
    ax.set_ylim(0, 1.05)
    fig.savefig(out)
    plt.close(fig)


def plot_babai_vs_cvp(csv_path: str, out_path: str, label: str = "") -> BenchPlotSpec:
    spec = parse_bench_csv(csv_path, label=label)
    render_bench(spec, out_path)
    return spec


def plot_sweep(csv_path: str, out_path: str, label: str = "") -> SweepPlotSpec:
    spec = parse_sweep_csv(csv_path, label=label)
    render_sweep(spec, out_path)
    return spec
