#!/usr/bin/env python3
"""Tracking error vs time, one semilog-y curve per variant.

Usage: plot_timeseries.py <timeseries.csv> <out-image>

Bound-envelope columns, where present, are drawn dashed. Each curve is
annotated with its final error exactly as written in the CSV. Rows of
the pseudo-variant REF (reference path) are skipped.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from common import TIMESERIES_BASE, SchemaError, by_variant, read_rows


def build_figure(csv_path):
    _, rows = read_rows(csv_path, TIMESERIES_BASE)
    groups = by_variant(rows)
    groups.pop("REF", None)
    if not groups:
        raise SchemaError(f"{csv_path}: no solver rows")

    fig, ax = plt.subplots(figsize=(7.5, 5.0))
    annotations = {}
    for variant, recs in groups.items():
        t = [float(r["t"]) for r in recs]
        err = [float(r["err"]) for r in recs]
        line, = ax.semilogy(t, err, label=variant, linewidth=1.0)
        env_pairs = [(float(r["t"]), float(r["bound_env"]))
                     for r in recs if r["bound_env"] != ""]
        if env_pairs:
            ax.semilogy([p[0] for p in env_pairs], [p[1] for p in env_pairs],
                        linestyle="--", color=line.get_color(), alpha=0.5,
                        linewidth=0.9)
        final_raw = recs[-1]["err"]
        annotations[variant] = final_raw
        ax.annotate(final_raw, (t[-1], err[-1]), fontsize=6,
                    textcoords="offset points", xytext=(3, 0))
    ax.set_xlabel("time [s]")
    ax.set_ylabel("tracking error")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig, annotations


if __name__ == "__main__":
    from common import run_cli

    sys.exit(run_cli(build_figure, sys.argv))
