"""Reconstruction error against order: fft vs q-recursive, with and without Neumann.

Runs the bundled 256x256 gray image (or --input) through forward and
inverse transforms at every sampled order and writes results/roundtrip.csv.
The default range 10:350:10 takes a few minutes on one core.
"""

import argparse
from importlib import resources
from pathlib import Path

from zernike_fft.cli import main as cli

DEFAULT_IMAGE = resources.files("zernike_fft") / "data" / "astronaut256_gray.png"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--input", default=str(DEFAULT_IMAGE))
    p.add_argument("--orders", default="10:350:10")
    p.add_argument("--methods", default="fft,qrec")
    p.add_argument("--normalize", action="store_true", help="min/max-normalize before measuring")
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args(argv)

    args.out.mkdir(parents=True, exist_ok=True)
    out = args.out / ("roundtrip_normalized.csv" if args.normalize else "roundtrip.csv")
    cmd = ["roundtrip", "--input", args.input, "--orders", args.orders, "--method", args.methods, "--output", str(out)]
    cmd.append("--normalize" if args.normalize else "--no-normalize")
    code = cli(cmd)
    if code == 0:
        print(out.read_text())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
