#!/usr/bin/env python3
"""Planar trajectory overlay: reference path, optimal path, solver paths.

Usage: plot_trajectory.py <timeseries.csv> <out-image>

Requires a two-dimensional time series (columns x0, x1 and xs0, xs1).
Rows of the pseudo-variant REF carry the reference path (drawn dashed);
the optimal trajectory comes from the xs columns; every other variant is
drawn as a solid curve. No metric is recomputed here.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from common import TIMESERIES_BASE, SchemaError, by_variant, read_rows, \
    state_columns


def build_figure(csv_path):
    header, rows = read_rows(csv_path, TIMESERIES_BASE)
    xcols = state_columns(header, "x")
    if len(xcols) != 2 or state_columns(header, "xs") != ["xs0", "xs1"]:
        raise SchemaError(f"{csv_path}: trajectory plots need a 2-D series "
                          f"(found state columns {xcols})")
    groups = by_variant(rows)

    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    ref = groups.pop("REF", None)
    if ref is not None:
        ax.plot([float(r["x0"]) for r in ref], [float(r["x1"]) for r in ref],
                "k--", linewidth=1.0, label="reference path")
    some = ref if ref is not None else next(iter(groups.values()))
    ax.plot([float(r["xs0"]) for r in some], [float(r["xs1"]) for r in some],
            color="tab:blue", linewidth=1.6, label="optimal trajectory")
    for variant, recs in groups.items():
        ax.plot([float(r["x0"]) for r in recs],
                [float(r["x1"]) for r in recs], linewidth=0.9, label=variant)
    ax.set_xlabel("horizontal position [m]")
    ax.set_ylabel("vertical position [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig, {}


if __name__ == "__main__":
    from common import run_cli

    sys.exit(run_cli(build_figure, sys.argv))
