"""Command line: ``zernike {compute,reconstruct,roundtrip,stability,bench,dedup}``.

Exit codes: 0 success, 1 parameter error, 2 I/O error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np
from PIL import Image

from . import io as zio
from .dedup import DEFAULT_DECIMALS, DEFAULT_ORDERS, find_duplicates, zm_signature
from .errors import ImageReadError, ParameterError, ZernikeError
from .experiments import (
    BENCH_COLUMNS,
    STABILITY_COLUMNS,
    ExperimentRow,
    bench_rows,
    parse_orders,
    roundtrip,
    stability_rows,
    write_csv,
)
from .metrics import DEFAULT_GRID_POINTS, epsilon
from .moments import compute_moments, embed_image, split_bands
from .reconstruct import minmax_normalize, reconstruct

log = logging.getLogger("zernike_fft")

METHOD_CHOICES = ("fft", "direct", "qrec", "qrecursive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _methods(text: str) -> list[str]:
    out = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in out if m not in METHOD_CHOICES]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"methods must be from {METHOD_CHOICES}, got {text!r}")
    return out


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    return sizes


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zernike", description="FFT-based Zernike moments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="moments of an image")
    c.add_argument("--input", required=True)
    c.add_argument("--output", required=True)
    c.add_argument("--order", type=_non_negative, required=True)
    c.add_argument("--method", choices=METHOD_CHOICES, default="fft")
    c.add_argument("--neumann", action="store_true")
    c.add_argument("--symmetry", action="store_true")

    r = sub.add_parser("reconstruct", help="image from a moment file")
    r.add_argument("--input", required=True, help="moment file")
    r.add_argument("--output", required=True, help="PNG to write")
    r.add_argument("--order", type=_non_negative, default=None, help="order cap (default: n_max)")
    r.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    r.add_argument("--reference", help="original image; prints per-band eps")

    t = sub.add_parser("roundtrip", help="reconstruction error against order")
    t.add_argument("--input", required=True)
    t.add_argument("--orders", required=True, help="start:stop:step, stop inclusive")
    t.add_argument("--method", type=_methods, default=["fft"], help="comma list")
    t.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False)
    t.add_argument("--output", required=True, help="CSV report")

    s = sub.add_parser("stability", help="orthogonality quality factor against order")
    s.add_argument("--method", type=_methods, default=["fft"], help="comma list")
    s.add_argument("--order", type=_non_negative, required=True, help="maximum order")
    s.add_argument("--step", type=int, default=50)
    s.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    s.add_argument("--output", required=True)

    b = sub.add_parser("bench", help="timing per image size")
    b.add_argument("--sizes", type=_sizes, default=[64, 128, 256, 512, 1024])
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--order", type=_non_negative, default=20)
    b.add_argument("--method", choices=METHOD_CHOICES, default="fft")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output", required=True)

    d = sub.add_parser("dedup", help="find byte-identical images in a directory")
    d.add_argument("--input", required=True, help="directory")
    d.add_argument("--orders", type=int, default=DEFAULT_ORDERS, help="signature orders L")
    d.add_argument("--quantize", type=int, default=DEFAULT_DECIMALS, help="decimal places")
    d.add_argument("--output", required=True, help="JSON report")
    return p


def _gray(pixels: np.ndarray) -> np.ndarray:
    if pixels.ndim == 3:
        return np.asarray(Image.fromarray(pixels).convert("L"), dtype=float)
    return pixels.astype(float)


def cmd_compute(args) -> int:
    pixels = zio.read_image(args.input)
    bands = split_bands(pixels)
    sets = [
        compute_moments(embed_image(b), args.order, args.method, args.neumann, args.symmetry)
        for b in bands
    ]
    zio.save_moments(args.output, zio.MomentFile.from_sets(sets))
    log.info("wrote %d band(s) of order %d to %s", len(sets), args.order, args.output)
    return 0


def cmd_reconstruct(args) -> int:
    mf = zio.load_moments(args.input)
    cap = mf.n_max if args.order is None else args.order
    if cap > mf.n_max:
        raise ParameterError(f"order cap {cap} exceeds the file's n_max {mf.n_max}")
    out = []
    for ms, band in zip(mf.to_sets(), mf.bands):
        rec = reconstruct(ms, cap)
        if args.normalize:
            full = minmax_normalize(rec.band, band.band_min, band.band_max)
            out.append(full[ms.meta.window])
        else:
            raw = rec.band[ms.meta.window]
            lo, hi = float(raw.min()), float(raw.max())
            scaled = np.zeros_like(raw) if hi == lo else 255.0 * (raw - lo) / (hi - lo)
            print(f"{band.name}: normalization disabled; raw range [{lo!r}, {hi!r}] scaled to [0, 255]")
            out.append(scaled)
    pixels = zio.to_uint8(out[0] if len(out) == 1 else np.stack(out, axis=-1))
    zio.write_image(args.output, pixels)
    if args.reference:
        ref = zio.read_image(args.reference)
        refs = split_bands(ref)
        for band, orig, got in zip(mf.bands, refs, split_bands(pixels)):
            grid = embed_image(orig)
            rec = np.zeros_like(grid.band)
            rec[grid.meta.window] = got
            print(f"{band.name}: eps={epsilon(grid.band, rec, grid.geometry.mask)!r}")
    return 0


def cmd_roundtrip(args) -> int:
    band = _gray(zio.read_image(args.input))
    orders = parse_orders(args.orders)
    rows: list[ExperimentRow] = roundtrip(band, orders, args.method, (False, True), args.normalize)
    timing = [
        f"wall_time_s order={r.order} method={r.method} neumann={int(r.neumann)}: {r.wall_time:.3f}"
        for r in rows
    ]
    header = [f"input={Path(args.input).name} normalized={int(args.normalize)}"]
    write_csv(args.output, ExperimentRow.COLUMNS, rows, header + timing)
    return 0


def cmd_stability(args) -> int:
    rows = stability_rows(args.method, args.order, args.step, args.grid_points)
    write_csv(args.output, STABILITY_COLUMNS, rows)
    return 0


def cmd_bench(args) -> int:
    rows = bench_rows(args.sizes, args.trials, args.order, args.seed, args.method)
    write_csv(args.output, BENCH_COLUMNS, rows, [f"generated {time.strftime('%Y-%m-%dT%H:%M:%S')}"])
    return 0


def cmd_dedup(args) -> int:
    root = Path(args.input)
    if not root.is_dir():
        raise ImageReadError(root, "not a directory")
    paths = sorted(p for p in root.iterdir() if p.is_file())
    images, kept, skipped = [], [], []
    for path in paths:
        try:
            images.append(zio.read_image(path))
            kept.append(path)
        except ImageReadError as exc:
            log.warning("skipping %s", exc)
            skipped.append(str(path))
    t0 = time.perf_counter()
    sigs = [zm_signature(im, args.orders, args.quantize, k) for k, im in enumerate(images)]
    sig_ms = 1e3 * (time.perf_counter() - t0)
    result = find_duplicates(sigs, lambda k: images[k])
    report = {
        "groups": [[str(kept[k]) for k in g] for g in result.groups],
        "verified": [result.verified for _ in result.groups],
        "skipped": skipped,
        "stats": {
            "images": len(images),
            "signatures_ms": sig_ms,
            "orders": args.orders,
            "quantize": args.quantize,
            "candidates_per_order": result.candidates_per_order,
            "rejected_by_verification": result.rejected,
        },
    }
    Path(args.output).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


COMMANDS = {
    "compute": cmd_compute,
    "reconstruct": cmd_reconstruct,
    "roundtrip": cmd_roundtrip,
    "stability": cmd_stability,
    "bench": cmd_bench,
    "dedup": cmd_dedup,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s"
    )
    try:
        return COMMANDS[args.command](args)
    except ZernikeError as exc:
        print(f"zernike {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"zernike {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
