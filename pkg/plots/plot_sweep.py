#!/usr/bin/env python3
"""Worst-case error floor vs sampling period, log-log, per variant.

Usage: plot_sweep.py <sweep.csv> <out-image>

Draws one marker series per variant plus dashed reference lines of
slopes 1, 2 and 4, each anchored at the largest-h point of the variant
whose fitted slope is closest to it. Slope annotations quote the CSV
verbatim. Infeasible cells (empty error) are skipped.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from common import SWEEP_COLUMNS, SchemaError, by_variant, read_rows

REFERENCE_SLOPES = (1.0, 2.0, 4.0)


def build_figure(csv_path):
    _, rows = read_rows(csv_path, SWEEP_COLUMNS)
    groups = by_variant(rows)

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    annotations = {}
    anchors = {}  # variant -> (h_max, err at h_max, fitted slope)
    for variant, recs in groups.items():
        pts = [(float(r["h"]), float(r["worst_case_error"]))
               for r in recs if r["worst_case_error"] != ""]
        if not pts:
            continue
        pts.sort()
        ax.loglog([p[0] for p in pts], [p[1] for p in pts], "o-",
                  label=variant, linewidth=1.0, markersize=4)
        slope_raw = next((r["slope"] for r in recs if r["slope"] != ""), None)
        if slope_raw is not None:
            annotations[variant] = slope_raw
            ax.annotate(slope_raw, pts[-1], fontsize=6,
                        textcoords="offset points", xytext=(4, -4))
            anchors[variant] = (*pts[-1], float(slope_raw))
    if not anchors and not annotations:
        raise SchemaError(f"{csv_path}: no feasible cells with slopes")

    for s in REFERENCE_SLOPES:
        best = min(anchors.values(), key=lambda a: abs(a[2] - s),
                   default=None)
        if best is None or abs(best[2] - s) > 1.0:
            continue
        h_anchor, e_anchor, _ = best
        hs = sorted({float(r["h"]) for r in rows})
        ref = [e_anchor * (h / h_anchor) ** s for h in hs]
        ax.loglog(hs, ref, "--", color="gray", alpha=0.6, linewidth=0.8)
        ax.annotate(f"O(h^{s:g})", (hs[0], ref[0]), fontsize=6, color="gray")
    ax.set_xlabel("sampling period h [s]")
    ax.set_ylabel("worst-case error")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig, annotations


if __name__ == "__main__":
    from common import run_cli

    sys.exit(run_cli(build_figure, sys.argv))
