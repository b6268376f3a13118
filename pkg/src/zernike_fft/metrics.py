"""Reconstruction-error measures and the orthogonality quality factor."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UndefinedDenominatorError
from .radial import canonical_method, pair_count, radial_blocks, repetitions


# eps2 of a band containing a zero pixel: a tagged "undefined" rather than
# an exception, so tables can show it.
UNDEFINED = None


def _disc_pair(f, f_rec, mask):
    f = np.asarray(f, dtype=float)
    f_rec = np.asarray(f_rec, dtype=float)
    if f.shape != f_rec.shape:
        raise ParameterError(f"shape mismatch {f.shape} vs {f_rec.shape}")
    if mask is None:
        mask = disc_mask(f.shape)
    return f[mask], f_rec[mask]


def disc_mask(shape) -> np.ndarray:
    """Pixels whose centres lie in the closed unit disc of a (rows, cols) grid.

    Uses the same centre mapping as the moment engine; for non-square
    shapes the larger side spans the unit interval.
    """
    rows, cols = shape
    M = max(rows, cols)
    y = (M - 1 - 2 * np.arange(rows)[:, None] - (M - rows)) / M
    x = (2 * np.arange(cols)[None, :] + 1 - M + (M - cols)) / M
    return x * x + y * y <= 1.0


def epsilon1(f, f_rec, mask=None) -> float:
    """Sum of squared differences over the disc, relative to the energy of f."""
    a, b = _disc_pair(f, f_rec, mask)
    den = float(np.sum(a * a))
    if den == 0:
        raise UndefinedDenominatorError("epsilon1 undefined: f has no energy in the disc")
    return float(np.sum((a - b) ** 2)) / den


def epsilon2(f, f_rec, mask=None):
    """Per-pixel relative squared error summed over the disc.

    Returns ``UNDEFINED`` (``None``) when any disc pixel of ``f`` is zero.
    """
    a, b = _disc_pair(f, f_rec, mask)
    if np.any(a == 0):
        return UNDEFINED
    return float(np.sum((a - b) ** 2 / (a * a)))


def epsilon(f, f_rec, mask=None) -> float:
    """Mean squared error over the disc divided by the squared peak of f."""
    a, b = _disc_pair(f, f_rec, mask)
    f_max = float(a.max()) if a.size else 0.0
    if f_max == 0:
        raise UndefinedDenominatorError("epsilon undefined: f_max is zero")
    return float(np.sum((a - b) ** 2)) / (f_max * f_max * a.size)


@dataclass(frozen=True)
class ErrorReport:
    eps1: float
    eps2: float | None
    eps: float
    # the square root of eps, named after the quantity it is reported as;
    # not a decibel PSNR
    psnr_paper: float

    def as_dict(self) -> dict:
        return {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "eps": self.eps,
            "psnr_paper": self.psnr_paper,
        }


def error_report(f, f_rec, mask=None) -> ErrorReport:
    e = epsilon(f, f_rec, mask)
    return ErrorReport(
        eps1=epsilon1(f, f_rec, mask),
        eps2=epsilon2(f, f_rec, mask),
        eps=e,
        psnr_paper=math.sqrt(e),
    )


# --------------------------------------------------------------------------
# orthogonality quality factor

DEFAULT_GRID_POINTS = 10_000
MIN_GRID_POINTS = 1_000
_GRAM_CHUNK_ELEMENTS = 25_000_000


@dataclass(frozen=True)
class StabilityReport:
    method: str
    grid_points: int
    orders: tuple[int, ...]
    qf: tuple[float, ...]
    # triples averaged at each order
    counts: tuple[int, ...] = field(default=())
    # mean deviation before clipping to [0, 1]
    raw: tuple[float, ...] = field(default=())

    def rows(self):
        raw = self.raw or (float("nan"),) * len(self.qf)
        for n, q, r in zip(self.orders, self.qf, raw):
            yield {"method": self.method, "order": n, "qf": q, "mean_deviation": r, "grid_points": self.grid_points}


def midpoint_grid(grid_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint nodes on [0, 1] and the weights of the integral of g(rho) rho drho."""
    if grid_points < 1:
        raise ParameterError("grid_points must be positive")
    rho = (np.arange(grid_points) + 0.5) / grid_points
    return rho, rho / grid_points


def orthogonality_deviation(method: str, n_max: int, grid_points: int = DEFAULT_GRID_POINTS):
    """Per repetition m: (orders, |2(n1+1) Q(n1, n2, m) - delta|) over the grid.

    Q is the midpoint-rule value of the integral of R_{n1 m} R_{n2 m} rho
    on [0, 1].  The Gram matrices are accumulated over chunks of radii so
    the full radial table is never held at once.
    """
    method = canonical_method(method)
    rho, w = midpoint_grid(grid_points)
    orders = {m: np.arange(m, n_max + 1, 2) for m in range(n_max + 1)}
    gram = {m: np.zeros((ns.size, ns.size)) for m, ns in orders.items()}
    chunk = max(1, _GRAM_CHUNK_ELEMENTS // pair_count(n_max))
    rows: dict[int, np.ndarray] = {}
    for n, sl, block in radial_blocks(n_max, rho, method, chunk_size=chunk):
        if n == 0:
            width = sl.stop - sl.start
            rows = {m: np.empty((ns.size, width)) for m, ns in orders.items()}
        for m in repetitions(n):
            rows[m][(n - m) // 2] = block[m]
        if n == n_max:
            ws = w[sl]
            for m, a in rows.items():
                gram[m] += (a * ws) @ a.T
    out = {}
    for m, ns in orders.items():
        dev = np.abs(2.0 * (ns[:, None] + 1) * gram[m] - np.eye(ns.size))
        out[m] = (ns, dev)
    return out


def _qf_from_deviation(dev, n: int) -> tuple[float, int, float]:
    total, count = 0.0, 0
    for m, (ns, d) in dev.items():
        if m > n:
            continue
        k = int(np.searchsorted(ns, n, side="right"))
        total += float(d[:k, :k].sum())
        count += k * k
    mean = total / count
    return min(1.0, mean), count, mean


def stability_curve(
    method: str, orders, grid_points: int = DEFAULT_GRID_POINTS
) -> StabilityReport:
    """Quality factor at each requested order from a single Gram build."""
    orders = tuple(int(n) for n in orders)
    if not orders or min(orders) < 0:
        raise ParameterError("orders must be non-negative and non-empty")
    if grid_points < MIN_GRID_POINTS:
        raise ParameterError(f"grid_points must be at least {MIN_GRID_POINTS}")
    method = canonical_method(method)
    dev = orthogonality_deviation(method, max(orders), grid_points)
    qf, counts, raw = zip(*(_qf_from_deviation(dev, n) for n in orders))
    return StabilityReport(method, grid_points, orders, tuple(qf), tuple(counts), tuple(raw))


def stability_qf(method: str, n: int, grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """Mean orthogonality deviation over all (n1, n2 <= n, shared m), clipped to 1.

    Zero means the computed polynomials are orthogonal to quadrature
    accuracy; lower is better.
    """
    if n < 0:
        raise ParameterError("order must be non-negative")
    return stability_curve(method, [n], grid_points).qf[0]
