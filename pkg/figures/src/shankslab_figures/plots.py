"""Pure CSV-to-PNG rendering.

Two kinds of figure:

  scatter         point cloud of (re, im) values at zero ordinates,
                  equal-aspect axes, origin marked with a crosshair
  residual-ratio  running sum divided by its predictions against log T

Input formats are exactly the computation side's exports:

  scatter CSV  index,gamma,re,im
  series CSV   T,n,empirical_re,empirical_im,leading,fujii,true_value,
               residual_leading,residual_true   (fujii blank when absent)

Rendering is a pure function of the file content and the PlotSpec; a
re-render writes a byte-identical PNG.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

IMAGE_SIZE = (1200, 900)
_DPI = 100
DEFAULT_POINT_LIMIT = 200_000

KINDS = ("scatter", "residual-ratio")

SCATTER_HEADER = ["index", "gamma", "re", "im"]
SERIES_HEADER = ["T", "n", "empirical_re", "empirical_im", "leading",
                 "fujii", "true_value", "residual_leading", "residual_true"]


class PlotDataError(ValueError):
    """Malformed or empty input CSV; message names the offending row."""


@dataclass(frozen=True)
class PlotSpec:
    """One figure request; `n` is the derivative order of the input data."""

    input_csv: str | Path
    kind: str
    n: int
    output_image: str | Path
    point_limit: int = DEFAULT_POINT_LIMIT

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotDataError(
                f"kind must be one of {KINDS}, got {self.kind!r}")
        if int(self.point_limit) < 1:
            raise PlotDataError(
                f"point_limit must be >= 1, got {self.point_limit}")
        if int(self.n) < 1:
            raise PlotDataError(f"order must be >= 1, got {self.n}")


def _read_rows(path, header: list[str]) -> list[list[str]]:
    """All data rows of a CSV after validating the header.

    Row numbers in errors are 1-based file lines (the header is row 1).
    """
    try:
        with open(path, "r", encoding="ascii", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise PlotDataError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise PlotDataError(f"{path}: not an ASCII text file") from exc
    if not rows:
        raise PlotDataError(f"{path}: empty file, no header")
    if rows[0] != header:
        raise PlotDataError(
            f"{path}: row 1: expected header {','.join(header)!r}")
    if len(rows) == 1:
        raise PlotDataError(f"{path}: no data rows")
    return rows[1:]


def _field(row: list[str], rownum: int, idx: int, name: str,
           path) -> float:
    try:
        return float(row[idx])
    except (IndexError, ValueError) as exc:
        raise PlotDataError(
            f"{path}: row {rownum}: bad {name} field: "
            f"{row[idx] if idx < len(row) else '<missing>'!r}") from exc


def read_scatter(path) -> tuple[np.ndarray, np.ndarray]:
    """(re, im) arrays from a scatter export."""
    rows = _read_rows(path, SCATTER_HEADER)
    re = np.empty(len(rows))
    im = np.empty(len(rows))
    for i, row in enumerate(rows):
        rownum = i + 2
        if len(row) != len(SCATTER_HEADER):
            raise PlotDataError(
                f"{path}: row {rownum}: expected "
                f"{len(SCATTER_HEADER)} fields, got {len(row)}")
        re[i] = _field(row, rownum, 2, "re", path)
        im[i] = _field(row, rownum, 3, "im", path)
    return re, im


def read_series(path, n: int | None = None) -> dict[str, np.ndarray]:
    """T, empirical_re, leading, fujii arrays from a series export.

    fujii is NaN where the column is blank; when `n` is given, every
    row's order column must match it.
    """
    rows = _read_rows(path, SERIES_HEADER)
    out = {k: np.empty(len(rows))
           for k in ("T", "empirical_re", "leading", "fujii")}
    for i, row in enumerate(rows):
        rownum = i + 2
        if len(row) != len(SERIES_HEADER):
            raise PlotDataError(
                f"{path}: row {rownum}: expected "
                f"{len(SERIES_HEADER)} fields, got {len(row)}")
        row_n = int(_field(row, rownum, 1, "n", path))
        if n is not None and row_n != n:
            raise PlotDataError(
                f"{path}: row {rownum}: order {row_n} does not match "
                f"the requested order {n}")
        out["T"][i] = _field(row, rownum, 0, "T", path)
        out["empirical_re"][i] = _field(row, rownum, 2, "empirical_re",
                                        path)
        out["leading"][i] = _field(row, rownum, 4, "leading", path)
        out["fujii"][i] = math.nan if row[5] == "" \
            else _field(row, rownum, 5, "fujii", path)
    return out


def scatter_centroid(path) -> complex:
    """Mean of the scatter cloud, straight from the CSV."""
    re, im = read_scatter(path)
    return complex(float(np.mean(re)), float(np.mean(im)))


def _stride(count: int, limit: int) -> int:
    return max(1, -(-count // limit))  # ceil division


def _new_axes():
    fig = Figure(figsize=(IMAGE_SIZE[0] / _DPI, IMAGE_SIZE[1] / _DPI),
                 dpi=_DPI)
    return fig, fig.add_subplot(111)


def _render_scatter(spec: PlotSpec) -> Figure:
    re, im = read_scatter(spec.input_csv)
    step = _stride(re.size, int(spec.point_limit))
    re, im = re[::step], im[::step]
    fig, ax = _new_axes()
    ax.axhline(0.0, color="0.55", linewidth=0.8, zorder=1)
    ax.axvline(0.0, color="0.55", linewidth=0.8, zorder=1)
    ax.scatter(re, im, s=2.0, linewidths=0.0, color="#1f77b4", zorder=2)
    ax.plot([0.0], [0.0], marker="+", markersize=12.0, color="#d62728",
            markeredgewidth=1.6, zorder=3)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"derivative order {spec.n} at {re.size} zeros"
                 + (f" (stride {step})" if step > 1 else ""))
    return fig


def _render_residual_ratio(spec: PlotSpec) -> Figure:
    cols = read_series(spec.input_csv, int(spec.n))
    x = np.log(cols["T"])
    fig, ax = _new_axes()
    ax.axhline(1.0, color="0.55", linewidth=0.8, zorder=1)
    ax.plot(x, cols["empirical_re"] / cols["leading"], marker="o",
            color="#1f77b4", label="sum / main term", zorder=2)
    have_fujii = np.isfinite(cols["fujii"])
    if have_fujii.any():
        ax.plot(x[have_fujii],
                cols["empirical_re"][have_fujii] /
                cols["fujii"][have_fujii],
                marker="s", color="#2ca02c",
                label="sum / refined prediction", zorder=2)
    ax.set_xlabel("log T")
    ax.set_ylabel("ratio")
    ax.set_title(f"running sum against predictions, order {spec.n}")
    ax.legend(loc="lower right")
    return fig


def render(spec: PlotSpec) -> Path:
    """Write the figure as a 1200x900 PNG and return its path."""
    if spec.kind == "scatter":
        fig = _render_scatter(spec)
    else:
        fig = _render_residual_ratio(spec)
    out = Path(spec.output_image)
    fig.savefig(out, format="png")
    return out
