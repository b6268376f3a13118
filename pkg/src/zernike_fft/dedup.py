"""Exact-duplicate detection with per-order Zernike moment signatures.

Each image is hashed once per order l = 1..L from its order-l moments
(rounded to a fixed number of decimals).  Images agreeing at order 1 form
candidate groups, which are split further by every following order; what
survives is confirmed pixel by pixel, so a hash collision can only cost
time, never a false report.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ParameterError
from .moments import compute_moments, embed_image, split_bands

DEFAULT_ORDERS = 8
DEFAULT_DECIMALS = 6


@dataclass(frozen=True)
class Signature:
    image_index: int
    per_order: dict[int, str] = field(compare=False)
    orders: int
    decimals: int

    def key(self, l: int) -> str:
        return self.per_order[l]


def _bands(image) -> list[np.ndarray]:
    a = np.asarray(image) if not isinstance(image, (list, tuple)) else image
    if isinstance(a, np.ndarray) and a.ndim == 2:
        return [np.asarray(a, dtype=float)]
    return split_bands(a)


def zm_signature(
    image, orders: int = DEFAULT_ORDERS, decimals: int = DEFAULT_DECIMALS, image_index: int = 0
) -> Signature:
    """Hash of the rounded order-l moments for l = 1..orders.

    Moments use the FFT route with Neumann division on each band's own
    embedding; colour images hash the R, G, B tuples together.
    """
    if orders < 1:
        raise ParameterError("need at least one signature order")
    sets = [compute_moments(embed_image(b), orders, "fft", neumann=True) for b in _bands(image)]
    per_order = {}
    for l in range(1, orders + 1):
        z = np.concatenate([s.order(l) for s in sets])
        parts = np.round(np.concatenate([z.real, z.imag]), decimals) + 0.0  # -0.0 -> 0.0
        per_order[l] = hashlib.blake2b(parts.tobytes(), digest_size=16).hexdigest()
    return Signature(image_index, per_order, orders, decimals)


@dataclass(frozen=True)
class DuplicateGroups:
    groups: list[tuple[int, ...]]
    verified: bool
    # candidate groups (size >= 2) after each order, for inspection
    candidates_per_order: list[int] = field(default_factory=list)
    rejected: int = 0


def candidate_groups(signatures: Sequence[Signature]) -> tuple[list[list[int]], list[int]]:
    """Successive intersection of the per-order agreement sets."""
    if not signatures:
        return [], []
    config = {(s.orders, s.decimals) for s in signatures}
    if len(config) != 1:
        raise ParameterError(f"signatures mix configurations {sorted(config)}")
    (L, _), = config
    groups = [[s.image_index for s in signatures]]
    by_index = {s.image_index: s for s in signatures}
    trace = []
    for l in range(1, L + 1):
        split = []
        for g in groups:
            buckets: dict[str, list[int]] = {}
            for k in g:
                buckets.setdefault(by_index[k].key(l), []).append(k)
            split.extend(b for b in buckets.values() if len(b) > 1)
        groups = split
        trace.append(len(groups))
    return groups, trace


def _pixel_groups(indices: Sequence[int], load: Callable[[int], np.ndarray]) -> list[tuple[int, ...]]:
    out: dict[tuple, list[int]] = {}
    for k in indices:
        a = np.ascontiguousarray(load(k))
        out.setdefault((a.shape, a.dtype.str, a.tobytes()), []).append(k)
    return [tuple(v) for v in out.values() if len(v) > 1]


def find_duplicates(
    signatures: Sequence[Signature], load: Callable[[int], np.ndarray] | None = None
) -> DuplicateGroups:
    """Groups of image indices with identical content.

    ``load(k)`` returns the pixels of image k for the exact comparison; if
    omitted the candidate groups are returned unverified.
    """
    groups, trace = candidate_groups(signatures)
    if load is None:
        return DuplicateGroups([tuple(sorted(g)) for g in groups], False, trace)
    verified, rejected = [], 0
    for g in groups:
        confirmed = _pixel_groups(g, load)
        rejected += len(g) - sum(len(c) for c in confirmed)
        verified.extend(tuple(sorted(c)) for c in confirmed)
    return DuplicateGroups(sorted(verified), True, trace, rejected)


def dedup_images(
    images: Sequence[np.ndarray], orders: int = DEFAULT_ORDERS, decimals: int = DEFAULT_DECIMALS
) -> DuplicateGroups:
    sigs = [zm_signature(im, orders, decimals, k) for k, im in enumerate(images)]
    return find_duplicates(sigs, lambda k: images[k])


def synthetic_corpus(
    n_images: int, n_pairs: int, seed: int = 0, size: int = 32, near_misses: int = 0
) -> tuple[list[np.ndarray], list[tuple[int, int]]]:
    """Smooth random 8-bit images with planted byte-identical pairs.

    Every fifth image is RGB.  ``near_misses`` extra images differ from an
    existing one by a single gray level in one pixel.  Returns the images
    and the planted (original, copy) index pairs.
    """
    if 2 * n_pairs + near_misses > n_images:
        raise ParameterError("corpus too small for the requested plants")
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / size
    n_unique = n_images - n_pairs - near_misses
    images = []
    for k in range(n_unique):
        chans = 3 if k % 5 == 4 else 1
        img = np.zeros((size, size, chans))
        for c in range(chans):
            for _ in range(4):
                cx, cy, w = rng.random(3)
                img[..., c] += rng.random() * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (0.02 + 0.2 * w))
            img[..., c] += 0.05 * rng.random((size, size))
        img = (255 * img / img.max()).round().astype(np.uint8)
        images.append(img[..., 0] if chans == 1 else img)
    sources = rng.choice(n_unique, size=n_pairs + near_misses, replace=False)
    planted = []
    for src in sources[:n_pairs]:
        images.append(images[src].copy())
        planted.append((int(src), len(images) - 1))
    for src in sources[n_pairs:]:
        im = images[src].copy()
        idx = tuple(int(rng.integers(0, s)) for s in im.shape)
        im[idx] = im[idx] + 1 if im[idx] < 255 else 254
        images.append(im)
    order = rng.permutation(len(images))
    inverse = np.argsort(order)
    images = [images[i] for i in order]
    planted = sorted(tuple(sorted((int(inverse[a]), int(inverse[b])))) for a, b in planted)
    return images, planted
