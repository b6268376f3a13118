"""Orthogonality quality factor against order for all three radial methods.

Writes results/stability.csv (one row per method and sampled order) and
prints the curves side by side.  About two minutes on one core with the
defaults.
"""

import argparse
from pathlib import Path

from zernike_fft.experiments import STABILITY_COLUMNS, stability_rows, write_csv
from zernike_fft.metrics import DEFAULT_GRID_POINTS

METHODS = ("fft", "qrecursive", "direct")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--order", type=int, default=500)
    p.add_argument("--step", type=int, default=25)
    p.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args(argv)

    rows = stability_rows(METHODS, args.order, args.step, args.grid_points)
    args.out.mkdir(parents=True, exist_ok=True)
    write_csv(args.out / "stability.csv", STABILITY_COLUMNS, rows)

    table = {}
    for r in rows:
        table.setdefault(r["order"], {})[r["method"]] = r["qf"]
    print(f"{'order':>5}" + "".join(f"{m:>12}" for m in METHODS))
    for n in sorted(table):
        print(f"{n:>5}" + "".join(f"{table[n][m]:>12.3e}" for m in METHODS))


if __name__ == "__main__":
    main()
