import hashlib

import numpy as np
import pytest

from zernike_fft.dedup import (
    Signature,
    candidate_groups,
    dedup_images,
    find_duplicates,
    synthetic_corpus,
    zm_signature,
)
from zernike_fft.errors import ParameterError


def test_identical_images_identical_signatures(rng):
    im = rng.integers(0, 256, (24, 24), dtype=np.uint8)
    a, b = zm_signature(im), zm_signature(im.copy(), image_index=5)
    assert a.per_order == b.per_order
    assert sorted(a.per_order) == list(range(1, 9))


def test_single_pixel_change_detected(rng):
    im = rng.integers(0, 128, (32, 32), dtype=np.uint8)
    other = im.copy()
    other[10, 20] = 255 if im[10, 20] < 128 else 0
    a, b = zm_signature(im), zm_signature(other)
    assert any(a.key(l) != b.key(l) for l in range(1, 9))
    # so does the smallest possible change, one gray level
    other = im.copy()
    other[3, 3] += 1
    assert zm_signature(other).per_order != a.per_order


def test_zero_image_signature():
    zero = np.zeros((8, 8))
    s = zm_signature(zero, orders=3)
    assert s.per_order == zm_signature(np.zeros((8, 8)), orders=3).per_order
    for l in range(1, 4):
        zeros = np.zeros(2 * (l // 2 + 1))
        assert s.key(l) == hashlib.blake2b(zeros.tobytes(), digest_size=16).hexdigest()


def test_colour_signature_depends_on_all_bands(rng):
    im = rng.integers(0, 256, (16, 16, 3), dtype=np.uint8)
    other = im.copy()
    other[5, 5, 2] ^= 0x40
    assert zm_signature(im).per_order != zm_signature(other).per_order


def test_small_dataset():
    assert find_duplicates([]).groups == []
    rng = np.random.default_rng(3)
    images = [rng.integers(0, 256, (12, 12), dtype=np.uint8) for _ in range(5)]
    images[4] = images[2].copy()
    result = dedup_images(images)
    assert result.verified and result.groups == [(2, 4)]


def test_no_duplicates(rng):
    images = [rng.integers(0, 256, (12, 12), dtype=np.uint8) for _ in range(6)]
    assert dedup_images(images).groups == []


def test_forced_collision_removed_by_verification():
    images, planted = synthetic_corpus(40, 3, seed=7, size=16, near_misses=4)
    # rounding to millions of units makes nearly every image collide
    result = dedup_images(images, orders=4, decimals=-6)
    assert result.rejected > 0
    assert sorted(result.groups) == planted
    unverified = find_duplicates([zm_signature(im, 4, -6, k) for k, im in enumerate(images)])
    assert not unverified.verified and len(unverified.groups[0]) > 2


def test_candidates_shrink_with_order():
    images, _ = synthetic_corpus(60, 4, seed=1, size=16, near_misses=6)
    sigs = [zm_signature(im, 6, 1, k) for k, im in enumerate(images)]
    prev = [set(range(60))]
    for l in range(1, 7):
        truncated = [Signature(s.image_index, {k: s.key(k) for k in range(1, l + 1)}, l, 1) for s in sigs]
        groups, trace = candidate_groups(truncated)
        assert len(trace) == l
        # every group after order l lies inside one group after order l - 1
        for g in groups:
            assert any(set(g) <= p for p in prev)
        prev = [set(g) for g in groups]


def test_mixed_configurations_rejected(rng):
    im = rng.integers(0, 256, (8, 8))
    with pytest.raises(ParameterError):
        find_duplicates([zm_signature(im, 3), zm_signature(im, 4, image_index=1)])
    with pytest.raises(ParameterError):
        zm_signature(im, 0)


def test_corpus_generator():
    images, planted = synthetic_corpus(50, 5, seed=2, size=16, near_misses=3)
    assert len(images) == 50 and len(planted) == 5
    for a, b in planted:
        assert images[a].tobytes() == images[b].tobytes()
    again, planted2 = synthetic_corpus(50, 5, seed=2, size=16, near_misses=3)
    assert planted2 == planted and all(x.tobytes() == y.tobytes() for x, y in zip(images, again))
    with pytest.raises(ParameterError):
        synthetic_corpus(5, 3)
