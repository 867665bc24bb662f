"""Shared CSV parsing for the plot scripts.

The scripts consume the harness CSV schemas and nothing else; values are
kept as raw strings alongside parsed floats so annotations can quote the
file verbatim.
"""

import csv
import sys

TIMESERIES_BASE = ["experiment", "variant", "tau", "h", "gamma", "k", "t",
                   "err", "pred_err", "grad_norm", "bound_env", "switched"]
SWEEP_COLUMNS = ["experiment", "variant", "tau", "h", "worst_case_error",
                 "slope", "envelope"]


class SchemaError(Exception):
    pass


def read_rows(path, required_columns):
    """All data rows as dicts of raw strings, validating the header."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        missing = [c for c in required_columns if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}")
        rows = [dict(zip(header, rec)) for rec in reader]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return header, rows


def state_columns(header, prefix):
    cols = []
    i = 0
    while f"{prefix}{i}" in header:
        cols.append(f"{prefix}{i}")
        i += 1
    return cols


def by_variant(rows):
    """Group rows by the variant column, preserving encounter order."""
    groups = {}
    for row in rows:
        groups.setdefault(row["variant"], []).append(row)
    return groups


def run_cli(build, argv):
    """Shared entry point: script.py <csv> <out-image>."""
    if len(argv) != 3:
        print(f"usage: {argv[0]} <csv> <out-image>", file=sys.stderr)
        return 2
    try:
        fig, _ = build(argv[1])
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig.savefig(argv[2], dpi=120)
    return 0
