import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from zernike_fft.errors import ParameterError, UndefinedDenominatorError
from zernike_fft.metrics import (
    disc_mask,
    epsilon,
    epsilon1,
    epsilon2,
    error_report,
    midpoint_grid,
    stability_curve,
    stability_qf,
)
from zernike_fft.moments import disc_geometry

ALL = np.ones((6, 6), dtype=bool)


def test_disc_mask_matches_geometry():
    np.testing.assert_array_equal(disc_mask((41, 41)), disc_geometry(41).mask)
    assert disc_mask((3, 5)).shape == (3, 5)


def test_epsilon1_examples(rng):
    f = rng.random((6, 6)) + 0.1
    assert epsilon1(f, f, ALL) == 0
    assert epsilon1(f, np.zeros_like(f), ALL) == 1
    a = np.zeros((6, 6))
    b = np.zeros((6, 6))
    a[:3] = 1
    b[3:] = 1
    assert epsilon1(a, b, ALL) == 2  # disjoint supports
    with pytest.raises(UndefinedDenominatorError):
        epsilon1(np.zeros((6, 6)), f, ALL)


def test_epsilon2_examples():
    f = np.full((6, 6), 2.0)
    assert epsilon2(f, f, ALL) == 0
    assert epsilon2(f, np.ones((6, 6)), ALL) == 36 * 0.25
    g = f.copy()
    g[2, 2] = 0
    assert epsilon2(g, f, ALL) is None
    # a zero outside the disc is not counted
    g = np.full((5, 5), 2.0)
    g[0, 0] = 0
    assert epsilon2(g, g) == 0


def test_epsilon_examples():
    f = np.full((6, 6), 255.0)
    assert epsilon(f, f, ALL) == 0
    assert epsilon(f, np.zeros_like(f), ALL) == 1
    board = 255.0 * (np.indices((6, 6)).sum(axis=0) % 2)
    assert epsilon(board, 255 - board, ALL) == 1
    with pytest.raises(UndefinedDenominatorError):
        epsilon(np.zeros((6, 6)), f, ALL)
    with pytest.raises(ParameterError):
        epsilon(f, f[:5], ALL)


def test_report(rng):
    f = rng.random((9, 9)) * 200 + 1
    g = f + rng.normal(size=f.shape)
    r = error_report(f, g)
    assert r.psnr_paper == math.sqrt(r.eps)
    assert r.eps1 == epsilon1(f, g) and r.eps2 == epsilon2(f, g)
    assert set(r.as_dict()) == {"eps1", "eps2", "eps", "psnr_paper"}
    assert error_report(np.zeros((5, 5)) + np.eye(5), np.eye(5)).eps == 0


@settings(max_examples=50, deadline=None)
@given(
    arrays(np.float64, (5, 5), elements=st.floats(0, 255)),
    arrays(np.float64, (5, 5), elements=st.floats(0, 255)),
    st.floats(0.01, 100),
    st.randoms(use_true_random=False),
)
def test_metric_properties(f, g, c, random):
    if f[disc_mask((5, 5))].max() == 0:
        return
    e = epsilon(f, g)
    assert e >= 0
    # bounded whenever |f - g| <= f_max pointwise
    clipped = np.clip(g, 0, f[disc_mask((5, 5))].max())
    assert epsilon(f, clipped) <= 1 + 1e-12
    assert epsilon(c * f, c * g) == pytest.approx(e, rel=1e-9, abs=1e-15)
    perm = list(range(25))
    random.shuffle(perm)
    fp, gp = f.ravel()[perm].reshape(5, 5), g.ravel()[perm].reshape(5, 5)
    mask = disc_mask((5, 5)).ravel()[perm].reshape(5, 5)
    assert epsilon(fp, gp, mask) == pytest.approx(e, rel=1e-12, abs=1e-15)
    assert epsilon1(fp, gp, mask) == pytest.approx(epsilon1(f, g), rel=1e-12, abs=1e-15)


def test_midpoint_grid():
    rho, w = midpoint_grid(10_000)
    assert abs(np.sum(w) - 0.5) < 1e-12
    with pytest.raises(ParameterError):
        midpoint_grid(0)


def test_qf_order_zero():
    for method in ("fft", "direct", "qrecursive"):
        assert stability_qf(method, 0) < 1e-5


def test_qf_grid_points_bounded_below():
    with pytest.raises(ParameterError):
        stability_qf("fft", 3, 999)


def test_qf_fft_vs_direct():
    fft = stability_curve("fft", [0, 20, 60, 100])
    direct = stability_curve("direct", [0, 20, 60, 100])
    assert all(0 <= q <= 1 for q in fft.qf + direct.qf)
    assert max(fft.qf) <= 0.05
    assert direct.qf[-1] > fft.qf[-1]
    # the direct sum breaks down past its onset and stays broken
    assert direct.qf[2] > 0.5 and direct.qf[3] == 1.0


def test_qf_quadrature_convergence():
    coarse = stability_qf("fft", 100, 10_000)
    fine = stability_qf("fft", 100, 20_000)
    assert fine <= coarse + 1e-4


def test_qf_counts_triples():
    rep = stability_curve("fft", [0, 1, 2, 3])
    # m = 0: {0, 2}, m = 1: {1, 3}, m = 2: {2}, m = 3: {3} -> 4 + 4 + 1 + 1 pairs at n = 3
    assert rep.counts == (1, 2, 6, 10)
    assert [r["order"] for r in rep.rows()] == [0, 1, 2, 3]
