#!/usr/bin/env python3
"""Desk-scale version of the benchmark grid: K in {4, 8}, J in {200, 400},
independent and correlated factors. Writes bench_summary.csv and
bench_records.csv into the output directory.

Usage: python scripts/run_benchmark_grid.py [--reps 20] [--out results/]
"""

import argparse
from pathlib import Path

from svdifa.bench import parse_grid, run_grid, summarize, write_records, write_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--grid", default="k=4,8;j=200,400;rho=0,0.3")
    parser.add_argument("--out", default="results")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = run_grid(parse_grid(args.grid), args.reps)
    rows = summarize(records)
    write_summary(out / "bench_summary.csv", rows)
    write_records(out / "bench_records.csv", records)
    for row in rows:
        print(
            f"K={row['k']:>2} J={row['j']:>4} rho={row['rho']}: "
            f"loss median {row['loss_median']:.5f} "
            f"[{row['loss_q25']:.5f}, {row['loss_q75']:.5f}], "
            f"time median {row['seconds_median']:.2f}s"
        )


if __name__ == "__main__":
    main()
