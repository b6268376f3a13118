"""High-order colour round trip through the command line.

compute -> moment file -> reconstruct, on the bundled 256x256 RGB image,
printing per-band eps against the original.  Order 480 takes a few
minutes; pass --order for a quicker desk check.
"""

import argparse
from importlib import resources
from pathlib import Path

from zernike_fft.cli import main as cli

DEFAULT_IMAGE = resources.files("zernike_fft") / "data" / "astronaut256.png"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--input", default=str(DEFAULT_IMAGE))
    p.add_argument("--order", type=int, default=480)
    p.add_argument("--neumann", action="store_true")
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args(argv)

    args.out.mkdir(parents=True, exist_ok=True)
    moments = args.out / f"color_{args.order}.json"
    image = args.out / f"color_{args.order}.png"
    compute = ["compute", "--input", args.input, "--order", str(args.order), "--output", str(moments)]
    if args.neumann:
        compute.append("--neumann")
    code = cli(compute)
    if code:
        return code
    return cli(["reconstruct", "--input", str(moments), "--output", str(image), "--reference", args.input])


if __name__ == "__main__":
    raise SystemExit(main())
