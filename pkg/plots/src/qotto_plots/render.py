"""Render figure-style images from qotto CSV outputs.

Usage: render_figure <figure_id> <input.csv> <output.png>

Each figure id maps to a layout: line plots for the work / entropy /
spectrum figures, per-level heatmaps for the population and gap surfaces,
and efficiency plots that skip NA rows and draw a horizontal Carnot guide
line computed from the bath temperatures recorded in the CSV metadata.
Rendering is read-only and idempotent: the same CSV yields byte-identical
images.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import CsvFormatError, Table, read_table

_FIGSIZE = (6.4, 4.4)
_DPI = 120

# figure id -> (x column, series prefix, kind, axis labels)
_LAYOUTS: dict[int, tuple[str, str, str, str, str]] = {
    1: ("temperature", "entropy_", "line", "temperature", "entropy"),
    2: ("q", "e_", "line", "deformation q", "energy"),
    3: ("q_a", "delta_p", "heatmap", "hot-side deformation q_a", "level n"),
    4: ("q_a", "delta_e", "heatmap", "hot-side deformation q_a", "level n"),
    5: ("q_a", "work_", "work", "hot-side deformation q_a", "work"),
    6: ("q_a", "eta_", "efficiency", "hot-side deformation q_a", "efficiency"),
    7: ("omega", "work_", "work", "frequency", "work"),
    8: ("omega_a", "work_", "work", "hot-side frequency", "work"),
    9: ("q_a", "work_", "work", "hot-side deformation q_a", "work"),
    10: ("q_a", "eta_", "efficiency", "hot-side deformation q_a", "efficiency"),
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    input_csv: str
    output_image: str


def _legend_label(column: str, prefix: str) -> str:
    suffix = column[len(prefix):]
    tag = prefix.rstrip("_")
    return f"{tag} {suffix.replace('_', ' = ')}" if suffix else tag


def _line_panel(ax, table: Table, x_name: str, prefix: str) -> int:
    x = table.floats(x_name)
    drawn = 0
    for column in table.series_names(prefix):
        pairs = [(xi, yi) for xi, yi in zip(x, table.floats(column)) if yi is not None]
        if not pairs:
            continue
        xs, ys = zip(*pairs)
        ax.plot(xs, ys, label=_legend_label(column, prefix))
        drawn += 1
    return drawn


def _work_panel(ax, table: Table, x_name: str, prefix: str) -> int:
    x = table.floats(x_name)
    drawn = 0
    for column in table.series_names(prefix):
        pairs = [
            (xi, yi)
            for xi, yi in zip(x, table.floats(column))
            if yi is not None and np.isfinite(yi)
        ]
        if not pairs:
            continue
        xs, ys = map(np.asarray, zip(*pairs))
        line, = ax.plot(xs, ys, label=_legend_label(column, prefix))
        top = int(np.argmax(ys))
        ax.plot([xs[top]], [ys[top]], marker="o", color=line.get_color())
        drawn += 1
    ax.axhline(0.0, lw=0.6, color="0.6")
    return drawn


def _efficiency_panel(ax, table: Table, x_name: str, prefix: str) -> int:
    drawn = _line_panel(ax, table, x_name, prefix)
    t_hot = table.metadata.get("th")
    t_cold = table.metadata.get("tc")
    if isinstance(t_hot, (int, float)) and isinstance(t_cold, (int, float)):
        carnot = 1.0 - float(t_cold) / float(t_hot)
        ax.axhline(carnot, ls="--", color="0.3", label=f"Carnot limit {carnot:g}")
    return drawn


def _heatmap_panel(ax, table: Table, x_name: str, value_name: str) -> int:
    x = np.array(table.floats(x_name), dtype=float)
    levels = np.array(table.floats("n"), dtype=float)
    values = np.array(
        [np.nan if v is None else v for v in table.floats(value_name)], dtype=float
    )
    xs = np.unique(x)
    ns = np.unique(levels)
    grid = np.full((len(ns), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    ni = np.searchsorted(ns, levels)
    grid[ni, xi] = values
    finite = grid[np.isfinite(grid)]
    scale = float(np.max(np.abs(finite))) if finite.size else 1.0
    norm = matplotlib.colors.SymLogNorm(
        linthresh=max(scale * 1e-6, 1e-300), vmin=-scale, vmax=scale
    )
    mesh = ax.pcolormesh(xs, ns, grid, shading="nearest", cmap="RdBu_r", norm=norm)
    ax.figure.colorbar(mesh, ax=ax, label=value_name)
    return 1


def render(spec: FigureSpec) -> bool:
    """Render one figure; returns False when no series had data to draw."""
    if spec.figure_id not in _LAYOUTS:
        raise CsvFormatError(f"unknown figure id {spec.figure_id}; supported: 1..10")
    x_name, selector, kind, x_label, y_label = _LAYOUTS[spec.figure_id]
    table = read_table(spec.input_csv)
    if x_name not in table.header:
        raise CsvFormatError(f"{spec.input_csv} lacks required column {x_name!r}")
    if kind == "heatmap":
        if "n" not in table.header or selector not in table.header:
            raise CsvFormatError(
                f"{spec.input_csv} lacks columns 'n' and {selector!r}"
            )
    elif not table.series_names(selector):
        raise CsvFormatError(
            f"{spec.input_csv} has no columns starting with {selector!r}"
        )

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    try:
        if kind == "heatmap":
            drawn = _heatmap_panel(ax, table, x_name, selector)
        elif kind == "work":
            drawn = _work_panel(ax, table, x_name, selector)
        elif kind == "efficiency":
            drawn = _efficiency_panel(ax, table, x_name, selector)
        else:
            drawn = _line_panel(ax, table, x_name, selector)
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        handles, _ = ax.get_legend_handles_labels()
        if handles:
            ax.legend(loc="best", fontsize=8)
        fig.savefig(spec.output_image)
    finally:
        plt.close(fig)
    return drawn > 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 3:
        print("usage: render_figure <figure_id> <input.csv> <output.png>", file=sys.stderr)
        return 2
    try:
        figure_id = int(argv[0])
    except ValueError:
        print(f"render_figure: figure id must be an integer, got {argv[0]!r}", file=sys.stderr)
        return 2
    spec = FigureSpec(figure_id=figure_id, input_csv=argv[1], output_image=argv[2])
    try:
        drew_data = render(spec)
    except FileNotFoundError as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 2
    except CsvFormatError as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 3
    if not drew_data:
        print(
            f"render_figure: warning: no drawable rows in {spec.input_csv}, "
            "wrote empty axes",
            file=sys.stderr,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
