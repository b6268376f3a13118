"""Inverse transform: images from truncated Zernike moment sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParameterError
from .moments import GridMeta, MomentSet, disc_geometry
from .radial import radial_blocks


@dataclass(frozen=True)
class ReconstructedImage:
    bands: tuple[np.ndarray, ...] = field(repr=False)
    meta: GridMeta
    normalized: bool
    order: int

    @property
    def band(self) -> np.ndarray:
        if len(self.bands) != 1:
            raise ParameterError("multi-band reconstruction; use .bands")
        return self.bands[0]

    def cropped(self) -> list[np.ndarray]:
        return [b[self.meta.window] for b in self.bands]


# Phases are advanced by multiplication and re-seeded from exp() this often
# to keep the drift at a few ulps.
_RESEED = 32


def _octant_values(B, rloc, theta, cap):
    """Pixel values of the eight images of each orbit representative.

    The image at angle theta + k pi/2 picks up (1j)**(k m); the mirrored
    images use exp(-1j m theta).  Grouping repetitions by m mod 4 gives
    four partial sums per sign from which all eight values follow.
    """
    fwd = np.zeros((4, theta.size), dtype=complex)
    rev = np.zeros((4, theta.size), dtype=complex)
    step = np.exp(1j * theta)
    for m in range(cap + 1):
        if m % _RESEED == 0:
            e = np.exp(1j * m * theta)
        b = B[m, rloc] * (1.0 if m == 0 else 2.0)
        fwd[m % 4] += b * e
        rev[m % 4] += b * e.conj()
        e = e * step
    out = []
    for part in (fwd, rev):
        p0, p1, p2, p3 = part
        out += [
            (p0 + p1 + p2 + p3).real,
            (p0 - p1 + p2 - p3).real,
            (p0 + 1j * p1 - p2 - 1j * p3).real,
            (p0 - 1j * p1 - p2 + 1j * p3).real,
        ]
    return np.stack(out)


def reconstruct_series(ms: MomentSet, caps: Iterable[int]) -> Iterator[tuple[int, np.ndarray]]:
    """Raw reconstructions at several order caps from one radial pass.

    Per radius r, B[m, r] = sum over n <= cap of Z_nm R_nm(rho_r) is built
    up order by order; each pixel then sums B[m, r] exp(1j m theta) over m,
    with the (n, -m) conjugate terms folded in as 2 Re[...] for m > 0.
    """
    caps = sorted(set(int(c) for c in caps))
    if not caps:
        return
    if caps[0] < 0 or caps[-1] > ms.n_max:
        raise ParameterError(f"order caps must lie in [0, {ms.n_max}], got {caps}")
    M = ms.meta.size
    geo = disc_geometry(M)
    top, wanted = caps[-1], set(caps)
    by_radius = np.argsort(geo.orbit_rindex, kind="stable")
    sorted_r = geo.orbit_rindex[by_radius]
    # rows of orbit_flat follow the order produced by _octant_values
    images = geo.orbit_flat
    out = {cap: np.zeros(M * M) for cap in caps}
    for n, sl, block in radial_blocks(top, geo.radii, ms.method):
        if n == 0:
            B = np.zeros((top + 1, sl.stop - sl.start), dtype=complex)
            lo, hi = np.searchsorted(sorted_r, [sl.start, sl.stop])
            reps = by_radius[lo:hi]
            rloc = geo.orbit_rindex[reps] - sl.start
            theta = geo.orbit_theta[reps]
        z = np.zeros(n + 1, dtype=complex)
        z[n % 2 :: 2] = ms.order(n)
        B[: n + 1] += z[:, None] * block
        if n in wanted:
            vals = _octant_values(B, rloc, theta, n)
            out[n][images[:, reps]] = vals
    for cap in caps:
        yield cap, out[cap].reshape(M, M)


def reconstruct(ms: MomentSet, order_cap: int | None = None) -> ReconstructedImage:
    """Real part of the truncated Zernike series; zero outside the disc."""
    if order_cap is None:
        order_cap = ms.n_max
    if order_cap > ms.n_max or order_cap < 0:
        raise ParameterError(f"order cap {order_cap} outside [0, {ms.n_max}]")
    (_, band), = reconstruct_series(ms, [order_cap])
    return ReconstructedImage((band,), ms.meta, False, order_cap)


def minmax_normalize(band, target_min: float, target_max: float, mask=None) -> np.ndarray:
    """Affinely map in-disc values onto [target_min, target_max].

    Pixels outside ``mask`` (default: the disc of the band's grid) are left
    as they are.  A constant in-disc band maps to ``target_min``.
    """
    if target_max < target_min:
        raise ParameterError(f"target_max {target_max} < target_min {target_min}")
    b = np.array(band, dtype=float)
    if mask is None:
        if b.shape[0] != b.shape[1] or b.shape[0] % 2 == 0:
            raise ParameterError("pass a mask for bands that are not odd squares")
        mask = disc_geometry(b.shape[0]).mask
    vals = b[mask]
    if vals.size == 0:
        return b
    lo, hi = vals.min(), vals.max()
    if hi == lo:
        b[mask] = target_min
    else:
        b[mask] = target_min + (vals - lo) * ((target_max - target_min) / (hi - lo))
    return b


def normalized(rec: ReconstructedImage, stats: Sequence[tuple[float, float]]) -> ReconstructedImage:
    bands = tuple(minmax_normalize(b, lo, hi) for b, (lo, hi) in zip(rec.bands, stats))
    return ReconstructedImage(bands, rec.meta, True, rec.order)


def reconstruct_color(
    moment_sets: Sequence[MomentSet], order_cap: int | None = None, normalize: bool = True
) -> ReconstructedImage:
    """Per-band reconstruction, each band mapped onto its stored (min, max)."""
    if not moment_sets:
        raise ParameterError("no moment sets given")
    meta = moment_sets[0].meta
    if any(ms.meta != meta for ms in moment_sets):
        raise ParameterError("moment sets were computed on different grids")
    if order_cap is None:
        order_cap = min(ms.n_max for ms in moment_sets)
    bands = tuple(reconstruct(ms, order_cap).band for ms in moment_sets)
    rec = ReconstructedImage(bands, meta, False, order_cap)
    if normalize:
        rec = normalized(rec, [ms.band_stats for ms in moment_sets])
    return rec
