"""Embedding images in the unit disc and computing discrete Zernike moments.

Pixel (i, j) of an M x M grid (M odd) has its centre at

    x = (2j + 1 - M) / M,    y = (M - 1 - 2i) / M

so the grid centre is a pixel centre and every x, y is an even integer
over M.  Pixels sharing x**2 + y**2 share a radius; the radial polynomials
are evaluated once per distinct radius and the angular factors are folded
into per-radius sums first:

    A[m, r] = sum over pixels at radius r of f * exp(-1j m theta)
    Z[n, m] = (n + 1) / pi * delta**2 / eps_m * sum_r R_nm(rho_r) A[m, r]
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .radial import canonical_method, pair_count, pair_index, radial_blocks, repetitions

EMBED_MARGIN = 20


@dataclass(frozen=True)
class GridMeta:
    size: int
    original_size: tuple[int, int]  # (width, height)
    offset: tuple[int, int]  # (row, col)

    @property
    def window(self) -> tuple[slice, slice]:
        w, h = self.original_size
        r, c = self.offset
        return slice(r, r + h), slice(c, c + w)


def embedded_size(rows: int, cols: int) -> int:
    n = max(rows, cols)
    M = n + math.ceil(n * (math.sqrt(2) - 1)) + EMBED_MARGIN
    return M + 1 if M % 2 == 0 else M


def pixel_to_polar(i: int, j: int, M: int) -> tuple[float, float]:
    x = (2 * j + 1 - M) / M
    y = (M - 1 - 2 * i) / M
    return math.hypot(x, y), math.atan2(y, x)


class DiscGeometry:
    """Pixel-centre polar coordinates of the disc pixels of an M x M grid.

    Cached per M (see :func:`disc_geometry`); arrays are read-only.
    """

    def __init__(self, M: int):
        if M < 1 or M % 2 == 0:
            raise ParameterError(f"grid size must be odd and positive, got {M}")
        self.M = M
        c = (M - 1) // 2
        # integer half-coordinates: x = 2u/M, y = 2v/M
        v, u = np.mgrid[c : -c - 1 : -1, -c : c + 1]
        key = u * u + v * v
        inside = 4 * key <= M * M
        self.mask = inside
        self.rows, self.cols = np.nonzero(inside)
        self.flat = self.rows * M + self.cols
        self.u = u[inside]
        self.v = v[inside]
        keys = key[inside]
        ukeys, self.rindex = np.unique(keys, return_inverse=True)
        self.radii = 2.0 * np.sqrt(ukeys) / M
        self.rho = self.radii[self.rindex]
        self.theta = np.arctan2(2.0 * self.v / M, 2.0 * self.u / M)
        self._orbits()
        for a in vars(self).values():
            if isinstance(a, np.ndarray):
                a.flags.writeable = False

    def _orbits(self) -> None:
        # representatives u >= v >= 0 of the eight reflections/rotations
        M, c = self.M, (self.M - 1) // 2
        sel = (self.u >= self.v) & (self.v >= 0)
        u, v = self.u[sel], self.v[sel]
        images = [(u, v), (-u, -v), (-v, u), (v, -u), (u, -v), (-u, v), (v, u), (-v, -u)]
        self.orbit_flat = np.stack([(c - y) * M + (x + c) for x, y in images])
        size = np.where((u == 0) & (v == 0), 1, np.where((v == 0) | (u == v), 4, 8))
        self.orbit_weight = size / 8.0
        self.orbit_theta = self.theta[sel]
        self.orbit_rindex = self.rindex[sel]

    @property
    def n_pixels(self) -> int:
        return self.rows.size


@functools.lru_cache(maxsize=8)
def disc_geometry(M: int) -> DiscGeometry:
    return DiscGeometry(M)


@dataclass(frozen=True)
class ImageGrid:
    """One band embedded, zero-padded, in an odd M x M grid."""

    band: np.ndarray = field(repr=False)
    meta: GridMeta
    band_min: float
    band_max: float

    @property
    def size(self) -> int:
        return self.meta.size

    @property
    def delta(self) -> float:
        return 2.0 / self.meta.size

    @property
    def original_size(self) -> tuple[int, int]:
        return self.meta.original_size

    @property
    def offset(self) -> tuple[int, int]:
        return self.meta.offset

    @property
    def geometry(self) -> DiscGeometry:
        return disc_geometry(self.meta.size)

    def disc_pixels(self):
        """(i, j, rho, theta) arrays for every pixel with rho <= 1."""
        g = self.geometry
        return g.rows, g.cols, g.rho, g.theta

    def original(self) -> np.ndarray:
        return self.band[self.meta.window]


def embed_image(pixels) -> ImageGrid:
    a = np.asarray(pixels, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ParameterError(f"expected a non-empty 2-D band, got shape {a.shape}")
    rows, cols = a.shape
    M = embedded_size(rows, cols)
    meta = GridMeta(M, (cols, rows), ((M - rows) // 2, (M - cols) // 2))
    band = np.zeros((M, M))
    band[meta.window] = a
    band.flags.writeable = False
    return ImageGrid(band, meta, float(a.min()), float(a.max()))


def grid_from_band(band, meta: GridMeta | None = None) -> ImageGrid:
    """Wrap an already embedded odd square band (no padding added)."""
    b = np.array(band, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] % 2 == 0:
        raise ParameterError(f"embedded band must be odd and square, got {b.shape}")
    if meta is None:
        meta = GridMeta(b.shape[0], (b.shape[1], b.shape[0]), (0, 0))
    b.flags.writeable = False
    orig = b[meta.window]
    return ImageGrid(b, meta, float(orig.min()), float(orig.max()))


def neumann_factor(m: int) -> float:
    return 2.0 if m == 0 else 1.0


@dataclass(frozen=True)
class MomentSet:
    """Zernike moments Z_nm for 0 <= m <= n <= n_max, (n - m) even.

    ``coefficients`` is packed by :func:`~zernike_fft.radial.pair_index`;
    negative repetitions are obtained by conjugation in :meth:`get`.
    """

    n_max: int
    method: str
    neumann: bool
    coefficients: np.ndarray = field(repr=False)
    meta: GridMeta
    band_stats: tuple[float, float]

    def get(self, n: int, m: int) -> complex:
        if n > self.n_max or n < 0 or abs(m) > n or (n - m) % 2:
            raise ParameterError(f"no moment (n={n}, m={m}) in a set of order {self.n_max}")
        z = complex(self.coefficients[pair_index(n, abs(m))])
        return z.conjugate() if m < 0 else z

    def items(self):
        for n in range(self.n_max + 1):
            for m in repetitions(n):
                yield (n, m), complex(self.coefficients[pair_index(n, m)])

    def order(self, n: int) -> np.ndarray:
        """Coefficients of order n for m = n % 2, n % 2 + 2, ..., n."""
        return self.coefficients[pair_index(n, n % 2) : pair_index(n, n) + 1]

    def truncated(self, n_max: int) -> "MomentSet":
        if n_max > self.n_max:
            raise ParameterError(f"cannot extend a set of order {self.n_max} to {n_max}")
        return MomentSet(
            n_max,
            self.method,
            self.neumann,
            self.coefficients[: pair_count(n_max)].copy(),
            self.meta,
            self.band_stats,
        )


def _angular_sums_naive(band: np.ndarray, geo: DiscGeometry, n_max: int) -> np.ndarray:
    f = band.ravel()[geo.flat]
    nz = f != 0
    f, theta, rindex = f[nz], geo.theta[nz], geo.rindex[nz]
    nr = geo.radii.size
    out = np.zeros((n_max + 1, nr), dtype=complex)
    for m in range(n_max + 1):
        t = f * np.exp(-1j * m * theta)
        out[m].real = np.bincount(rindex, t.real, minlength=nr)
        out[m].imag = np.bincount(rindex, t.imag, minlength=nr)
    return out


def _angular_sums_octant(band: np.ndarray, geo: DiscGeometry, n_max: int) -> np.ndarray:
    f = band.ravel()[geo.orbit_flat] * geo.orbit_weight
    f1, f2, f3, f4, f5, f6, f7, f8 = f
    # images 1-4 carry exp(-1j m theta), 5-8 exp(+1j m theta), each times
    # one of 1, (-1)**m, (-1j)**m, (1j)**m which depend on m mod 4 only
    fwd, rev = [], []
    for k in range(4):
        s, a, b = (-1) ** k, (-1j) ** k, (1j) ** k
        fwd.append(f1 + s * f2 + a * f3 + b * f4)
        rev.append(f5 + s * f6 + a * f7 + b * f8)
    theta, rindex = geo.orbit_theta, geo.orbit_rindex
    nr = geo.radii.size
    out = np.zeros((n_max + 1, nr), dtype=complex)
    for m in range(n_max + 1):
        e = np.exp(-1j * m * theta)
        t = e * fwd[m % 4] + e.conj() * rev[m % 4]
        out[m].real = np.bincount(rindex, t.real, minlength=nr)
        out[m].imag = np.bincount(rindex, t.imag, minlength=nr)
    return out


def angular_sums(grid: ImageGrid, n_max: int, symmetry: bool = False) -> np.ndarray:
    geo = grid.geometry
    if symmetry:
        return _angular_sums_octant(grid.band, geo, n_max)
    return _angular_sums_naive(grid.band, geo, n_max)


def moment_scale(n: int, M: int) -> float:
    """(n + 1) / pi * delta**2 with pixel width delta = 2 / M."""
    return (n + 1) / math.pi * (2.0 / M) ** 2


def compute_moments(
    grid: ImageGrid,
    n_max: int,
    method: str = "fft",
    neumann: bool = False,
    symmetry: bool = False,
) -> MomentSet:
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    method = canonical_method(method)
    geo = grid.geometry
    A = angular_sums(grid, n_max, symmetry)
    Z = np.zeros(pair_count(n_max), dtype=complex)
    for n, sl, block in radial_blocks(n_max, geo.radii, method):
        ms = slice(n % 2, n + 1, 2)
        lo = pair_index(n, n % 2)
        Z[lo : lo + n // 2 + 1] += np.einsum("mr,mr->m", block[ms], A[ms, sl])
    for n in range(n_max + 1):
        lo = pair_index(n, n % 2)
        Z[lo : lo + n // 2 + 1] *= moment_scale(n, grid.size)
    if neumann:
        Z[[pair_index(n, 0) for n in range(0, n_max + 1, 2)]] /= neumann_factor(0)
    Z.flags.writeable = False
    return MomentSet(n_max, method, neumann, Z, grid.meta, (grid.band_min, grid.band_max))


def single_moment(grid: ImageGrid, n: int, m: int, method: str = "fft", neumann: bool = False) -> complex:
    """One moment for any signed repetition m by a plain per-pixel sum.

    Shares only the radial evaluation with :func:`compute_moments`; the
    per-radius angular folding and octant symmetry are not used, which
    makes it a check on both.
    """
    if n < 0 or abs(m) > n or (n - m) % 2:
        raise ParameterError(f"invalid (n={n}, m={m})")
    geo = grid.geometry
    R = np.empty(geo.radii.size)
    for k, sl, block in radial_blocks(n, geo.radii, method):
        if k == n:
            R[sl] = block[abs(m)]
    f = grid.band.ravel()[geo.flat]
    z = np.sum(R[geo.rindex] * f * np.exp(-1j * m * geo.theta)) * moment_scale(n, grid.size)
    return complex(z / (neumann_factor(m) if neumann else 1.0))


def split_bands(image) -> list[np.ndarray]:
    """A gray matrix becomes one band; H x W x 3 (or a 3-sequence) becomes R, G, B."""
    if isinstance(image, (list, tuple)):
        bands = [np.asarray(b, dtype=float) for b in image]
    else:
        a = np.asarray(image, dtype=float)
        if a.ndim == 2:
            return [a]
        if a.ndim != 3 or a.shape[2] != 3:
            raise ParameterError(f"expected a gray matrix or H x W x 3 array, got {a.shape}")
        bands = [a[..., k] for k in range(3)]
    if len(bands) != 3:
        raise ParameterError(f"expected three colour bands, got {len(bands)}")
    if len({b.shape for b in bands}) != 1:
        raise ParameterError(f"band shapes differ: {[b.shape for b in bands]}")
    return bands


def compute_moments_color(
    bands, n_max: int, method: str = "fft", neumann: bool = False, symmetry: bool = False
) -> list[MomentSet]:
    return [
        compute_moments(embed_image(b), n_max, method, neumann, symmetry)
        for b in split_bands(bands)
    ]
