import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from zernike_fft.errors import ParameterError
from zernike_fft.metrics import epsilon
from zernike_fft.moments import MomentSet, compute_moments, disc_geometry, embed_image, grid_from_band
from zernike_fft.radial import pair_count, pair_index, radial_table, zrp_fft
from zernike_fft.reconstruct import minmax_normalize, reconstruct, reconstruct_color, reconstruct_series


def brute_force(ms, cap):
    # pixel by pixel truncated series with explicit negative repetitions
    geo = disc_geometry(ms.meta.size)
    out = np.zeros(ms.meta.size**2)
    for k in range(geo.n_pixels):
        rho, theta = geo.rho[k], geo.theta[k]
        total = 0j
        for n in range(cap + 1):
            R = zrp_fft(n, rho)
            for m in range(-n, n + 1, 2):
                total += ms.get(n, m) * R[abs(m)] * np.exp(1j * m * theta)
        out[geo.flat[k]] = total.real
    return out.reshape(ms.meta.size, ms.meta.size)


def test_matches_brute_force_series(rng):
    ms = compute_moments(embed_image(rng.random((7, 9))), 12)
    np.testing.assert_allclose(reconstruct(ms, 12).band, brute_force(ms, 12), atol=1e-12)
    np.testing.assert_allclose(reconstruct(ms, 5).band, brute_force(ms, 5), atol=1e-12)


def test_zero_and_single_coefficient():
    zero = compute_moments(embed_image(np.zeros((5, 5))), 10)
    assert not np.any(reconstruct(zero).band)
    meta = zero.meta
    coeffs = np.zeros(pair_count(4), dtype=complex)
    coeffs[0] = 1.0
    ms = MomentSet(4, "fft", False, coeffs, meta, (0.0, 1.0))
    band = reconstruct(ms).band
    mask = disc_geometry(meta.size).mask
    np.testing.assert_allclose(band[mask], 1.0, atol=1e-14)
    assert not np.any(band[~mask])


def test_order_cap_checked(rng):
    ms = compute_moments(embed_image(rng.random((5, 5))), 6)
    with pytest.raises(ParameterError):
        reconstruct(ms, 7)
    with pytest.raises(ParameterError):
        list(reconstruct_series(ms, [-1, 2]))


def test_series_equals_individual_caps(gray64):
    ms = compute_moments(embed_image(gray64), 30)
    series = dict(reconstruct_series(ms, [30, 10, 20]))
    for cap in (10, 20, 30):
        # the transform length follows the top order, so only rounding differs
        np.testing.assert_allclose(series[cap], reconstruct(ms, cap).band, rtol=0, atol=1e-11)


def test_roundtrip_improves_with_order(gray64):
    grid = embed_image(gray64)
    mask = grid.geometry.mask
    ms = compute_moments(grid, 80, "fft")
    errs = {cap: epsilon(grid.band, rec, mask) for cap, rec in reconstruct_series(ms, [10, 80])}
    assert errs[80] < errs[10]


def test_monotone_fidelity_to_200(gray256):
    grid = embed_image(gray256)
    mask = grid.geometry.mask
    ms = compute_moments(grid, 200, "fft")
    caps = list(range(0, 201, 10))
    errs = [epsilon(grid.band, rec, mask) for _, rec in reconstruct_series(ms, caps)]
    assert all(b <= a + 1e-4 for a, b in zip(errs, errs[1:]))


def test_linearity(rng):
    a, b = (compute_moments(embed_image(rng.random((9, 9))), 14) for _ in range(2))
    combo = MomentSet(14, "fft", False, 3.0 * a.coefficients - 0.5 * b.coefficients, a.meta, (0, 1))
    lhs = reconstruct(combo).band
    rhs = 3.0 * reconstruct(a).band - 0.5 * reconstruct(b).band
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


@pytest.mark.parametrize("n, m", [(0, 0), (4, 2), (7, 3), (20, 0), (33, 11), (50, 50), (50, 14)])
def test_single_basis_function_concentrates(n, m):
    # Re V_nm sampled on the grid of a 256 x 256 image
    M = 383
    geo = disc_geometry(M)
    band = np.zeros(M * M)
    band[geo.flat] = radial_table(n, geo.radii).get(n, m)[geo.rindex] * np.cos(m * geo.theta)
    ms = compute_moments(grid_from_band(band.reshape(M, M)), max(n, 4))
    mags = np.abs(ms.coefficients)
    k = pair_index(n, m)
    assert np.argmax(mags) == k
    assert np.max(np.delete(mags, k)) <= 0.05 * mags[k]


def test_minmax_examples():
    mask = np.ones((3, 3), dtype=bool)
    band = np.array([[0.0, 0.5, 1.0]] * 3)
    out = minmax_normalize(band, 10, 20, mask)
    assert out[0, 1] == 15.0
    np.testing.assert_array_equal(minmax_normalize(band, 0, 1, mask), band)
    np.testing.assert_array_equal(minmax_normalize(np.full((3, 3), 4.0), 5, 9, mask), 5.0)
    with pytest.raises(ParameterError):
        minmax_normalize(band, 2, 1, mask)


def test_minmax_leaves_outside_untouched(rng):
    band = np.zeros((21, 21))
    mask = disc_geometry(21).mask
    band[mask] = rng.normal(size=mask.sum()) * 7052
    out = minmax_normalize(band, 3, 202)
    assert not np.any(out[~mask])
    assert out[mask].min() == 3 and out[mask].max() == pytest.approx(202)


@settings(max_examples=40, deadline=None)
@given(
    arrays(np.float64, (7, 7), elements=st.floats(-1e4, 1e4)),
    st.floats(0, 255),
    st.floats(0, 255),
)
def test_minmax_idempotent(band, lo, span):
    mask = np.ones((7, 7), dtype=bool)
    hi = lo + span
    once = minmax_normalize(band, lo, hi, mask)
    twice = minmax_normalize(once, lo, hi, mask)
    np.testing.assert_allclose(twice, once, rtol=1e-12, atol=1e-9)
    assert once.min() >= lo - 1e-9 and once.max() <= hi + 1e-9


def test_color(rng):
    gray = rng.integers(0, 256, (12, 12)).astype(float)
    sets = [compute_moments(embed_image(gray), 20) for _ in range(3)]
    rec = reconstruct_color(sets, 20)
    assert rec.normalized
    assert rec.bands[0].tobytes() == rec.bands[1].tobytes() == rec.bands[2].tobytes()
    mask = disc_geometry(rec.meta.size).mask
    for b in rec.bands:
        assert b[mask].min() == gray.min() and b[mask].max() == pytest.approx(gray.max())
        assert not np.any(b[~mask])
    blue = compute_moments(embed_image(np.zeros((12, 12))), 20)
    rec = reconstruct_color(sets[:2] + [blue], 20)
    assert np.all(rec.bands[2][mask] == 0.0)
    other = compute_moments(embed_image(np.zeros((13, 12))), 20)
    with pytest.raises(ParameterError):
        reconstruct_color(sets[:2] + [other])
    assert rec.cropped()[0].shape == (12, 12)
