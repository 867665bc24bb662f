#!/usr/bin/env python3
"""Run the full benchmark studies end to end via the CLI.

Writes configs and outputs into ./results (override with TVOPT_OUT or
--out). The scalar study takes seconds; the tracking and budget sweeps a
few minutes. Pass a subset of study names to run fewer.
"""

import sys

from tvtrack import cli

STUDIES = ("scalar-a", "scalar-b", "tracking", "budget")


def main(argv):
    wanted = argv[1:] or list(STUDIES)
    out = "results"
    rc = 0
    for study in wanted:
        if study not in STUDIES:
            print(f"unknown study {study!r}; choose from {STUDIES}",
                  file=sys.stderr)
            return 2
        print(f"== {study} ==", file=sys.stderr)
        config_path = f"{out}/{study.replace('-', '_')}.json"
        rc = cli.main(["--out", out, "init", "--example", study]) \
            or cli.main(["--out", out, "run", config_path]) \
            or cli.main(["--out", out, "sweep", config_path])
        if rc:
            return rc
    return rc


if __name__ == "__main__":
    sys.exit(main(sys.argv))
