"""Harnesses behind the ``roundtrip``, ``stability`` and ``bench`` commands.

Each returns plain rows; :func:`write_csv` renders them with a header and
a fixed column order.  Anything that varies between identical runs (wall
times) goes into ``#`` comment lines so CSV bodies stay reproducible.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .metrics import error_report, stability_curve
from .moments import compute_moments, embed_image, single_moment
from .radial import canonical_method
from .reconstruct import minmax_normalize, reconstruct_series


def parse_orders(text: str) -> list[int]:
    """``start:stop:step`` with an inclusive stop; a bare integer is one order."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise ParameterError(f"bad order range {text!r}; expected start:stop:step") from None
    if len(parts) == 1:
        parts = [parts[0], parts[0], 1]
    elif len(parts) == 2:
        parts.append(1)
    if len(parts) != 3:
        raise ParameterError(f"bad order range {text!r}; expected start:stop:step")
    start, stop, step = parts
    if start < 0 or stop < start or step < 1:
        raise ParameterError(f"bad order range {text!r}")
    return list(range(start, stop + 1, step))


@dataclass(frozen=True)
class ExperimentRow:
    order: int
    method: str
    neumann: bool
    eps1: float
    eps: float
    psnr_paper: float
    wall_time: float

    # wall_time is reported in comments, not in the body
    COLUMNS = ("order", "method", "neumann", "eps1", "eps", "psnr_paper")


def roundtrip(
    band,
    orders: Sequence[int],
    methods: Sequence[str] = ("fft",),
    neumann_flags: Sequence[bool] = (False, True),
    normalize: bool = False,
) -> list[ExperimentRow]:
    """Forward and inverse transform of one gray band at each order.

    Errors are measured on the disc of the embedding grid against the
    embedded original.  With ``normalize`` the reconstruction is first
    mapped onto the original's (min, max).
    """
    orders = sorted(set(orders))
    if not orders:
        raise ParameterError("no orders given")
    grid = embed_image(band)
    mask = grid.geometry.mask
    rows = []
    for method in methods:
        method = canonical_method(method)
        for neumann in neumann_flags:
            t0 = time.perf_counter()
            ms = compute_moments(grid, orders[-1], method, neumann)
            for cap, rec in reconstruct_series(ms, orders):
                if normalize:
                    rec = minmax_normalize(rec, grid.band_min, grid.band_max, mask)
                r = error_report(grid.band, rec, mask)
                rows.append(
                    ExperimentRow(cap, method, neumann, r.eps1, r.eps, r.psnr_paper, time.perf_counter() - t0)
                )
    return rows


def stability_rows(methods: Iterable[str], max_order: int, step: int, grid_points: int) -> list[dict]:
    if max_order < 0 or step < 1:
        raise ParameterError("max order must be >= 0 and step >= 1")
    orders = range(0, max_order + 1, step)
    rows = []
    for method in methods:
        rows.extend(stability_curve(method, orders, grid_points).rows())
    return rows


STABILITY_COLUMNS = ("method", "order", "qf", "mean_deviation", "grid_points")
BENCH_COLUMNS = ("size", "trials", "order", "single_mean_ms", "single_std_ms", "full_mean_ms")


def bench_rows(
    sizes: Sequence[int], trials: int, order: int = 20, seed: int = 0, method: str = "fft"
) -> list[dict]:
    """Mean/std wall time of one moment Z(order, order) per image side length,
    plus the time of the full set up to ``order``.
    """
    if trials < 1:
        raise ParameterError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    rows = []
    for size in sizes:
        grid = embed_image(rng.integers(0, 256, (size, size)).astype(float))
        grid.geometry  # built once, outside the timed region
        single = []
        for _ in range(trials):
            t0 = time.perf_counter()
            single_moment(grid, order, order, method)
            single.append(1e3 * (time.perf_counter() - t0))
        full = []
        for _ in range(min(trials, 3)):
            t0 = time.perf_counter()
            compute_moments(grid, order, method)
            full.append(1e3 * (time.perf_counter() - t0))
        rows.append(
            {
                "size": size,
                "trials": trials,
                "order": order,
                "single_mean_ms": float(np.mean(single)),
                "single_std_ms": float(np.std(single)),
                "full_mean_ms": float(np.mean(full)),
            }
        )
    return rows


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(columns: Sequence[str], rows: Iterable, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        d = row if isinstance(row, dict) else asdict(row)
        w.writerow([_fmt(d[c]) for c in columns])
    for c in comments:
        buf.write(f"# {c}\n")
    return buf.getvalue()


def write_csv(path, columns, rows, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(columns, rows, comments))


def read_csv_body(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
