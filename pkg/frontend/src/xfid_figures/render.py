"""Render sweep CSVs into the ten figure images.

The input contract is the sweep engine's CSV schema: a header of
``<swept>,fidelity,oracle_residual,skipped`` (figure 10 adds an
``uhlmann`` column after ``fidelity``), one row per grid point, and empty
metric cells exactly on rows whose ``skipped`` cell carries a reason.
Rows with a skip reason contribute no point.  The plotted polyline is the
raw data in file order; nothing is smoothed or resampled.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# swept variable per figure; it is both the expected CSV header leader and
# the x-axis label
SWEPT_BY_FIGURE = {
    1: "purity",
    2: "concurrence",
    3: "purity",
    4: "concurrence",
    5: "e",
    6: "f",
    7: "purity",
    8: "concurrence",
    9: "purity",
    10: "e",
}
FIGURE_IDS = tuple(sorted(SWEPT_BY_FIGURE))

# 800 x 600 at the default dpi, fixed so artifacts diff cleanly
FIGSIZE = (8.0, 6.0)
DPI = 100

FIDELITY_LABEL = "teleportation fidelity"
UHLMANN_LABEL = "Uhlmann fidelity"


class SchemaError(ValueError):
    """The CSV does not match the sweep-engine schema for the figure."""


@dataclass(frozen=True)
class RenderJob:
    """One CSV in, one image out."""

    csv_path: Path
    figure_id: int
    output_path: Path
    format: str = "png"

    def __post_init__(self):
        if self.figure_id not in SWEPT_BY_FIGURE:
            raise SchemaError(f"figure_id must be 1..10, got {self.figure_id!r}")
        if self.format not in ("png", "svg"):
            raise SchemaError(f"format must be png or svg, got {self.format!r}")


def _cell_float(cell: str, line: int, name: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise SchemaError(f"row {line}: {name} cell {cell!r} is not a number") from None


def read_table(csv_path, figure_id: int) -> dict:
    """Parse and validate one sweep CSV for the given figure.

    Returns {"x": [...], "fidelity": [...], "uhlmann": [...] or None} with
    skipped rows dropped.  Raises SchemaError on any mismatch.
    """
    swept = SWEPT_BY_FIGURE.get(figure_id)
    if swept is None:
        raise SchemaError(f"figure_id must be 1..10, got {figure_id!r}")
    with_uhlmann = figure_id == 10
    expected = ([swept, "fidelity", "uhlmann", "oracle_residual", "skipped"]
                if with_uhlmann
                else [swept, "fidelity", "oracle_residual", "skipped"])

    with open(csv_path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise SchemaError(f"{csv_path}: empty file")
    header = rows[0]
    if header != expected:
        if with_uhlmann and header == [swept, "fidelity", "oracle_residual", "skipped"]:
            raise SchemaError(
                f"{csv_path}: figure 10 needs the uhlmann column, header is {header!r}")
        raise SchemaError(
            f"{csv_path}: header {header!r} does not match {expected!r} for figure {figure_id}")

    xs, fids, uhls = [], [], []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(expected):
            raise SchemaError(
                f"row {line}: expected {len(expected)} cells, got {len(row)}")
        skipped = row[-1]
        value = _cell_float(row[0], line, swept)
        if skipped:
            if row[1] != "":
                raise SchemaError(f"row {line}: skipped rows must leave fidelity empty")
            continue
        xs.append(value)
        fids.append(_cell_float(row[1], line, "fidelity"))
        if with_uhlmann:
            uhls.append(_cell_float(row[2], line, "uhlmann"))
    if len(xs) < 2:
        raise SchemaError(f"{csv_path}: fewer than two plottable rows")
    return {"x": xs, "fidelity": fids, "uhlmann": uhls if with_uhlmann else None}


def build_figure(table: dict, figure_id: int):
    """Matplotlib figure for one parsed table; raw polylines only."""
    swept = SWEPT_BY_FIGURE[figure_id]
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    if table["uhlmann"] is not None:
        ax.plot(table["x"], table["fidelity"], label=FIDELITY_LABEL)
        ax.plot(table["x"], table["uhlmann"], label=UHLMANN_LABEL)
        ax.set_ylabel("fidelity")
        ax.legend()
    else:
        ax.plot(table["x"], table["fidelity"])
        ax.set_ylabel("optimal fidelity")
    ax.set_xlabel(swept)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def render(job: RenderJob):
    """Read, validate and draw one CSV; returns the output path."""
    table = read_table(job.csv_path, job.figure_id)
    fig = build_figure(table, job.figure_id)
    try:
        fig.savefig(job.output_path, format=job.format, dpi=DPI)
    finally:
        plt.close(fig)
    return Path(job.output_path)
