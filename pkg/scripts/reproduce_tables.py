#!/usr/bin/env python3
"""Run every built-in simulation preset and the bundled-fixture report.

Reproduces the full set of benchmark studies (level tables, dimension
estimate distribution, direction accuracy) at a chosen replication count
plus the sequential-test report for the bundled fixture. At --reps 1000
the whole sweep takes about two minutes.

Usage: python scripts/reproduce_tables.py [--reps N] [--seed S] [--out DIR]
"""

import argparse
import sys
import time
from importlib.resources import files

from iht.cli import main as iht_main


def run(argv):
    print("+ iht " + " ".join(argv), flush=True)
    rc = iht_main(argv)
    if rc != 0:
        sys.exit(rc)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1729)
    ap.add_argument("--out", default="tables_out")
    args = ap.parse_args()

    t0 = time.time()
    for table in range(1, 8):
        run([
            "simulate", "--table", str(table),
            "--reps", str(args.reps), "--seed", str(args.seed),
            "--out", args.out,
        ])
    fixture = str(files("iht").joinpath("data/ozone330.csv"))
    run([
        "test", fixture,
        "--response", "ozone", "--log-columns", "sbtp,ibtp",
        "--out", f"{args.out}/fixture_report.json",
    ])
    print(f"done in {time.time() - t0:.0f}s -> {args.out}/")


if __name__ == "__main__":
    main()
