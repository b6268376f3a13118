"""Zernike radial polynomials R_nm(rho) by three routes.

``direct``
    The explicit factorial sum.  Cheap for low orders and hopeless beyond
    n ~ 30 in float64: the alternating coefficients grow like 4**n and the
    sum cancels almost all of them.  ``exact=True`` evaluates the same sum
    in integer arithmetic and is used as the ground-truth oracle.
``fft``
    Samples of the Chebyshev polynomial of the second kind, U_n, at the
    nodes rho*cos(2*pi*k/N) are cosine-transformed; bin m of the transform
    divided by N is R_nm(rho).  One transform gives every repetition of an
    order at once and the only arithmetic involved is bounded by n + 1.
``qrecursive``
    The repetition-descending recurrence on the radial polynomials.
    Fast, but it divides by rho**2 and starts from rho**n, so it
    degrades at high order near the centre of the disc.

Blocks are indexed by repetition: ``block[m]`` holds R_nm over the radii,
and rows with (n - m) odd are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
import scipy.fft

from .errors import AliasingError, CoefficientOverflowError, DomainError, ParameterError

METHODS = ("direct", "fft", "qrecursive")
METHOD_ALIASES = {"qrec": "qrecursive", "q-recursive": "qrecursive"}

# Beyond this the direct sum is refused outright; its coefficients overflow
# float64 well before it (see ``direct_coefficients``).
DIRECT_MAX_ORDER = 1000

# Working-set cap (float64 elements) for one chunk of Chebyshev samples.
_CHUNK_ELEMENTS = 4_000_000


def canonical_method(method: str) -> str:
    method = METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise ParameterError(f"unknown radial method {method!r}; expected one of {METHODS}")
    return method


def check_order(n: int, m: int) -> None:
    if n < 0 or abs(m) > n or (n - abs(m)) % 2:
        raise ParameterError(f"invalid order/repetition (n={n}, m={m})")


def repetitions(n: int) -> range:
    """Non-negative repetitions valid for order ``n``."""
    return range(n % 2, n + 1, 2)


def pair_count(n_max: int) -> int:
    return sum(n // 2 + 1 for n in range(n_max + 1))


def pairs(n_max: int) -> list[tuple[int, int]]:
    """All (n, m >= 0) up to ``n_max``, sorted by n then m."""
    return [(n, m) for n in range(n_max + 1) for m in repetitions(n)]


def pair_index(n: int, m: int) -> int:
    # number of pairs with order < n, plus the position of m within order n
    h = n // 2
    before = h * (h + 1) if n % 2 == 0 else (h + 1) * (h + 1)
    return before + m // 2


def _check_radii(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if rho.size and (np.any(rho < 0) or np.any(rho > 1) or not np.all(np.isfinite(rho))):
        raise ParameterError("radii must lie in [0, 1]")
    return rho


# --------------------------------------------------------------------------
# direct factorial sum


def direct_coefficients(n: int, m: int) -> np.ndarray:
    """Float coefficients c_s of rho**(n - 2s), built by cumulative products.

    No factorial is formed, so nothing overflows until the coefficients
    themselves leave the float64 range (from n = 812 for m = 0).
    """
    check_order(n, m)
    if n > DIRECT_MAX_ORDER:
        raise CoefficientOverflowError(
            f"direct sum refused for n={n} > {DIRECT_MAX_ORDER}"
        )
    m = abs(m)
    a, b = (n - m) // 2, (n + m) // 2
    c = [0.0] * (a + 1)
    # c_0 = n! / (a! b!) = binom(n, a); plain floats give inf, not warnings
    c0 = 1.0
    for i in range(1, a + 1):
        c0 = c0 * (b + i) / i
    c[0] = c0
    for s in range(a):
        c[s + 1] = -c[s] * ((a - s) / (s + 1)) * ((b - s) / (n - s))
    c = np.array(c)
    if not np.all(np.isfinite(c)):
        raise CoefficientOverflowError(f"factorial-sum coefficients overflow at n={n}, m={m}")
    return c


def exact_coefficients(n: int, m: int) -> list[int]:
    check_order(n, m)
    m = abs(m)
    a, b = (n - m) // 2, (n + m) // 2
    f = math.factorial
    return [
        (-1) ** s * (f(n - s) // (f(a - s) * f(b - s) * f(s))) for s in range(a + 1)
    ]


def _exact_value(coeffs: list[int], n: int, rho: float) -> float:
    # rho = p / q exactly (q a power of two); R * q**n is an integer
    p, q = Fraction(rho).as_integer_ratio()
    q2 = q * q
    total = 0
    for s, c in enumerate(coeffs):
        total += c * p ** (n - 2 * s) * q2**s
    return float(Fraction(total, q**n))


def zrp_direct(n: int, m: int, rho, exact: bool = False):
    """R_nm(rho) from the factorial sum; R_{n,-m} = R_{n,m}.

    With ``exact=True`` the sum is carried out in integers on the exact
    binary value of ``rho`` and rounded once, which makes it a correctly
    rounded reference at any order.
    """
    check_order(n, m)
    scalar = np.ndim(rho) == 0
    r = _check_radii(np.atleast_1d(rho))
    if exact:
        coeffs = exact_coefficients(n, m)
        out = np.array([_exact_value(coeffs, n, float(x)) for x in r.ravel()]).reshape(r.shape)
    else:
        c = direct_coefficients(n, m)
        out = np.zeros(r.shape)
        for s, cs in enumerate(c):
            out += cs * r ** (n - 2 * s)
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# Chebyshev polynomials of the second kind


def chebyshev_u(n: int, x):
    """U_n(x) = sin((n+1)v) / sin(v) with x = cos(v).

    Where sin(v) vanishes the limit (n+1) * sign(x)**n is returned.
    """
    if n < 0:
        raise ParameterError("Chebyshev degree must be non-negative")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1) or not np.all(np.isfinite(x)):
        raise DomainError("Chebyshev U_n is evaluated on [-1, 1] only")
    # work on |x| so that v stays small near both endpoints; arccos(x) for
    # x near -1 would round pi - v and lose v's leading digits
    v = np.arccos(np.abs(x))
    s = np.sin(v)
    small = np.abs(s) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sin((n + 1) * v) / s
    out[small] = n + 1
    if n % 2:
        out[x < 0] *= -1
    return float(out[0]) if scalar else out


def chebyshev_u_recurrence(n_max: int, x) -> np.ndarray:
    """Rows U_0..U_{n_max} at ``x`` via U_{k+1} = 2x U_k - U_{k-1}.

    For |x| >= 1/2 the recurrence runs in Reinsch's form on the differences
    d_k = U_k - U_{k-1}, d_{k+1} = d_k + 2(|x| - 1) U_k, where |x| - 1 is
    exact; the plain form loses about k**2 ulps near the endpoints.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    xf = x.ravel()
    flat = out.reshape(n_max + 1, -1)
    far = np.abs(xf) < 0.5
    a = xf[far]
    u_prev, u = np.ones_like(a), 2 * a
    flat[1, far] = u
    for k in range(1, n_max):
        u_prev, u = u, 2 * a * u - u_prev
        flat[k + 1, far] = u
    near = ~far
    t = 2 * (np.abs(xf[near]) - 1)
    u = np.ones_like(t)
    d = 1 + t
    for k in range(1, n_max + 1):
        u = u + d
        flat[k, near] = u
        d = d + t * u
    # U_k(-x) = (-1)**k U_k(x)
    neg = near.copy()
    neg[near] = xf[near] < 0
    flat[1::2, neg] *= -1
    return out


# --------------------------------------------------------------------------
# FFT / Chebyshev route


def transform_length(n_max: int) -> int:
    """5-smooth transform length N >= 2*n_max + 1, divisible by 4, shared by a table."""
    N = scipy.fft.next_fast_len(2 * n_max + 1)
    while N % 4:
        N = scipy.fft.next_fast_len(N + 1)
    return N


def zrp_fft(n: int, rho: float, N: int | None = None) -> np.ndarray:
    """R_nm(rho) for m = 0..n from one length-N FFT.

    Entries with (n - m) odd are set to 0.
    """
    if n < 0:
        raise ParameterError("order must be non-negative")
    if N is None:
        N = 2 * n + 1
    if N < 2 * n + 1:
        raise AliasingError(f"transform length N={N} < 2n+1={2 * n + 1} aliases repetitions")
    rho = float(_check_radii(rho))
    nodes = rho * np.cos(2 * np.pi * np.arange(N) / N)
    g = chebyshev_u_recurrence(n, nodes)[n]
    out = np.fft.fft(g).real[: n + 1] / N
    out[(n - np.arange(n + 1)) % 2 == 1] = 0.0
    return out


def _fft_blocks(n_max: int, rho: np.ndarray, N: int) -> Iterator[np.ndarray]:
    # g_k = U_n(rho cos(2 pi k / N)) is even in k, and with N = 4K also
    # (anti)symmetric about k = K with the parity of n.  The length-N
    # transform then folds onto the K + 1 nodes k = 0..K:
    #   n even:  sum_k g_k cos(2 pi (2p) k / N)   = 2 DCT-I(g_0..g_K)[p]
    #   n odd:   sum_k g_k cos(2 pi (2p+1) k / N) = 2 DCT-III(g_0..g_{K-1})[p]
    K = N // 4
    nodes = rho[:, None] * np.cos(0.5 * np.pi * np.arange(K + 1) / K)
    u_prev = np.zeros_like(nodes)
    u = np.ones_like(nodes)
    for n in range(n_max + 1):
        if n == 1:
            u_prev, u = u, 2 * nodes
        elif n > 1:
            u_prev, u = u, 2 * nodes * u - u_prev
        count = n // 2 + 1
        if n % 2 == 0:
            half = scipy.fft.dct(u, type=1, axis=1) if K > 0 else u
        else:
            half = scipy.fft.dct(u[:, :K], type=3, axis=1)
        block = np.zeros((n + 1, rho.size))
        block[n % 2 :: 2] = half[:, :count].T * (2.0 / N)
        yield block


# --------------------------------------------------------------------------
# q-recursive route


def zrp_qrecursive(n: int, rho_grid) -> np.ndarray:
    """R_nm on ``rho_grid`` for m = 0..n (rows), by descending repetition."""
    if n < 0:
        raise ParameterError("order must be non-negative")
    rho = _check_radii(np.atleast_1d(rho_grid)).astype(float)
    out = np.zeros((n + 1, rho.size))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        out[n] = rho**n
        if n >= 2:
            out[n - 2] = n * rho**n - (n - 1) * rho ** (n - 2)
        inv_r2 = 1.0 / (rho * rho)
        for m in range(n - 4, -1, -2):
            h3 = -4 * (m + 2) * (m + 1) / ((n + m + 2) * (n - m))
            h2 = h3 * (n + m + 4) * (n - m - 2) / (4 * (m + 3)) + (m + 2)
            h1 = (m + 4) * (m + 3) / 2 - (m + 4) * h2 + h3 * (n + m + 6) * (n - m - 4) / 8
            out[m] = h1 * out[m + 4] + (h2 + h3 * inv_r2) * out[m + 2]
    zero = rho == 0
    if np.any(zero):
        out[:, zero] = 0.0
        if n % 2 == 0:
            out[0, zero] = (-1.0) ** (n // 2)
    return out


def _direct_block(n: int, rho: np.ndarray, powers: np.ndarray) -> np.ndarray:
    # powers[k] = rho**k; every term of order n has the parity of n, so one
    # product against the same-parity powers evaluates all repetitions
    coeff = np.zeros((n + 1, n // 2 + 1))
    for m in repetitions(n):
        c = direct_coefficients(n, m)
        # term s multiplies rho**(n - 2s) = powers[n % 2 :: 2][(n - 2s) // 2]
        coeff[m, n // 2 - np.arange(c.size)] = c
    # einsum without BLAS sums each column in a fixed order, so values do
    # not depend on how the radii were chunked
    return np.einsum("ms,sr->mr", coeff, powers[n % 2 : n + 1 : 2], optimize=False)


# --------------------------------------------------------------------------
# streaming and tables


def radial_blocks(
    n_max: int, radii, method: str = "fft", chunk_size: int | None = None
) -> Iterator[tuple[int, slice, np.ndarray]]:
    """Yield ``(n, radius_slice, block)`` with ``block[m]`` = R_nm on the slice.

    Radii are processed in chunks; inside a chunk orders ascend from 0 to
    ``n_max``.  Consumers that reduce over radii must accumulate across
    chunks.  Only one order of one chunk is alive at a time.
    """
    method = canonical_method(method)
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    rho = _check_radii(np.ravel(radii))
    if method == "direct" and n_max > DIRECT_MAX_ORDER:
        raise CoefficientOverflowError(f"direct sum refused for n_max={n_max}")
    N = transform_length(n_max)
    if chunk_size is None:
        width = N // 2 + 1 if method == "fft" else n_max + 1
        chunk_size = max(1, _CHUNK_ELEMENTS // max(width, 1))
    for lo in range(0, rho.size, chunk_size):
        sl = slice(lo, min(lo + chunk_size, rho.size))
        r = rho[sl]
        if method == "fft":
            for n, block in enumerate(_fft_blocks(n_max, r, N)):
                yield n, sl, block
        elif method == "qrecursive":
            for n in range(n_max + 1):
                yield n, sl, zrp_qrecursive(n, r)
        else:
            powers = r[None, :] ** np.arange(n_max + 1)[:, None]
            for n in range(n_max + 1):
                yield n, sl, _direct_block(n, r, powers)


@dataclass(frozen=True)
class RadialTable:
    """R_nm over a fixed set of radii, for every valid (n, m >= 0) up to n_max.

    ``values`` is packed by :func:`pair_index`: row ``pair_index(n, m)``
    holds R_nm at each radius.  The arrays are read-only.
    """

    method: str
    n_max: int
    radii: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def get(self, n: int, m: int) -> np.ndarray:
        check_order(n, m)
        if n > self.n_max:
            raise ParameterError(f"order {n} exceeds table n_max={self.n_max}")
        return self.values[pair_index(n, abs(m))]

    def order_block(self, n: int) -> np.ndarray:
        """(n+1, R) block indexed by repetition, zero rows for odd n - m."""
        out = np.zeros((n + 1, self.radii.size))
        for m in repetitions(n):
            out[m] = self.get(n, m)
        return out


def radial_table(n_max: int, radii, method: str = "fft") -> RadialTable:
    method = canonical_method(method)
    rho = _check_radii(np.ravel(radii)).copy()
    values = np.empty((pair_count(n_max), rho.size))
    for n, sl, block in radial_blocks(n_max, rho, method):
        values[pair_index(n, n % 2) : pair_index(n, n) + 1, sl] = block[n % 2 :: 2]
    if not np.all(np.isfinite(values)):
        raise CoefficientOverflowError(f"non-finite radial values ({method}, n_max={n_max})")
    rho.flags.writeable = False
    values.flags.writeable = False
    return RadialTable(method=method, n_max=n_max, radii=rho, values=values)
