"""Single-moment and full-set timings per image size.

Writes results/bench.csv and prints the growth exponent between
consecutive sizes (2 would be quadratic in the side length).
"""

import argparse
import math
from pathlib import Path

from zernike_fft.experiments import BENCH_COLUMNS, bench_rows, write_csv


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="64,128,256,512,1024")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",")]
    rows = bench_rows(sizes, args.trials, args.order, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    write_csv(args.out / "bench.csv", BENCH_COLUMNS, rows)
    prev = None
    for r in rows:
        growth = ""
        if prev:
            growth = f"  exponent {math.log(r['single_mean_ms'] / prev['single_mean_ms']) / math.log(r['size'] / prev['size']):.2f}"
        print(f"{r['size']:>5}  {r['single_mean_ms']:9.2f} +- {r['single_std_ms']:.2f} ms  full {r['full_mean_ms']:9.1f} ms{growth}")
        prev = r


if __name__ == "__main__":
    main()
