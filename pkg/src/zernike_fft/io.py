"""Moment files and 8-bit raster images.

A moment file is indented JSON::

    {
      "format_version": 1,
      "method": "fft", "neumann": true, "n_max": 20,
      "grid": {"size": 383, "original_size": [256, 256], "offset": [63, 63]},
      "bands": [
        {"band": "gray", "band_min": 0.0, "band_max": 255.0,
         "coefficients": [[0, 0, re, im], [1, 1, re, im], ...]}
      ]
    }

Coefficients are listed for every (n, m >= 0) with n - m even, sorted by n
then m.  Floats are written with their shortest round-trip repr, so
``parse(serialize(x)) == x`` bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageReadError, InputError, MomentFileError, ParameterError
from .moments import GridMeta, MomentSet
from .radial import canonical_method, pair_count, pairs

FORMAT_VERSION = 1
BAND_NAMES = ("gray", "R", "G", "B")

# lossless containers only; lossy inputs would make exact-content
# comparisons meaningless
LOSSLESS_FORMATS = {"PNG", "BMP", "TIFF", "PPM", "PGM", "PBM", "GIF"}


@dataclass(eq=False)
class BandMoments:
    name: str
    band_min: float
    band_max: float
    coefficients: np.ndarray = field(repr=False)  # complex, packed order

    def __eq__(self, other):
        if not isinstance(other, BandMoments):
            return NotImplemented
        a, b = self.coefficients, other.coefficients
        return (
            self.name == other.name
            and _same_float(self.band_min, other.band_min)
            and _same_float(self.band_max, other.band_max)
            and a.shape == b.shape
            and a.tobytes() == b.tobytes()
        )


@dataclass
class MomentFile:
    method: str
    neumann: bool
    n_max: int
    grid: GridMeta
    bands: list[BandMoments]
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_sets(cls, sets: list[MomentSet], names=None) -> "MomentFile":
        if not sets:
            raise ParameterError("no moment sets")
        if names is None:
            names = ["gray"] if len(sets) == 1 else ["R", "G", "B"]
        first = sets[0]
        for s in sets[1:]:
            if (s.method, s.neumann, s.n_max, s.meta) != (first.method, first.neumann, first.n_max, first.meta):
                raise ParameterError("moment sets disagree on method, order or grid")
        bands = [
            BandMoments(name, float(s.band_stats[0]), float(s.band_stats[1]), np.array(s.coefficients))
            for name, s in zip(names, sets)
        ]
        return cls(first.method, first.neumann, first.n_max, first.meta, bands)

    def to_sets(self) -> list[MomentSet]:
        return [
            MomentSet(self.n_max, self.method, self.neumann, b.coefficients, self.grid, (b.band_min, b.band_max))
            for b in self.bands
        ]


def _same_float(a: float, b: float) -> bool:
    return np.float64(a).tobytes() == np.float64(b).tobytes()


def serialize(mf: MomentFile) -> str:
    dump = lambda v: json.dumps(v, allow_nan=False)  # noqa: E731
    grid = {
        "size": mf.grid.size,
        "original_size": list(mf.grid.original_size),
        "offset": list(mf.grid.offset),
    }
    out = [
        "{",
        f' "format_version": {dump(mf.format_version)},',
        f' "method": {dump(mf.method)},',
        f' "neumann": {dump(bool(mf.neumann))},',
        f' "n_max": {dump(int(mf.n_max))},',
        f' "grid": {dump(grid)},',
        ' "bands": [',
    ]
    try:
        for k, b in enumerate(mf.bands):
            out += [
                "  {",
                f'   "band": {dump(b.name)},',
                f'   "band_min": {dump(float(b.band_min))},',
                f'   "band_max": {dump(float(b.band_max))},',
                '   "coefficients": [',
                ",\n".join(
                    f"    {dump([n, m, float(z.real), float(z.imag)])}"
                    for (n, m), z in zip(pairs(mf.n_max), b.coefficients)
                ),
                "   ]",
                "  }" + ("," if k + 1 < len(mf.bands) else ""),
            ]
    except ValueError as exc:
        raise MomentFileError(f"cannot serialize non-finite value: {exc}") from None
    out += [" ]", "}"]
    return "\n".join(out) + "\n"


def parse(text: str) -> MomentFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MomentFileError(f"invalid JSON: {exc.msg}", offset=exc.pos) from None
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise MomentFileError(f"unsupported format_version {version!r}")
        method = canonical_method(doc["method"])
        neumann = doc["neumann"]
        n_max = doc["n_max"]
        if not isinstance(neumann, bool) or not isinstance(n_max, int) or n_max < 0:
            raise MomentFileError("neumann must be a boolean and n_max a non-negative integer")
        g = doc["grid"]
        grid = GridMeta(int(g["size"]), tuple(int(v) for v in g["original_size"]), tuple(int(v) for v in g["offset"]))
        expected = pairs(n_max)
        bands = []
        for k, b in enumerate(doc["bands"]):
            name = b["band"]
            if name not in BAND_NAMES:
                raise MomentFileError(f"band {k}: unknown band name {name!r}")
            rows = b["coefficients"]
            if len(rows) != pair_count(n_max):
                raise MomentFileError(f"band {name}: expected {pair_count(n_max)} coefficients, got {len(rows)}")
            coeffs = np.empty(len(rows), dtype=complex)
            for i, (row, nm) in enumerate(zip(rows, expected)):
                n, m, re, im = row
                if (n, m) != nm:
                    raise MomentFileError(f"band {name}: coefficient {i} is ({n}, {m}), expected {nm}")
                coeffs[i] = complex(float(re), float(im))
            bands.append(BandMoments(name, float(b["band_min"]), float(b["band_max"]), coeffs))
    except MomentFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MomentFileError(f"malformed moment file: {exc!r}") from None
    if not bands:
        raise MomentFileError("moment file has no bands")
    return MomentFile(method, neumann, n_max, grid, bands, version)


def save_moments(path, mf: MomentFile) -> None:
    Path(path).write_text(serialize(mf), encoding="utf-8")


def load_moments(path) -> MomentFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(path, exc.strerror or str(exc)) from None
    return parse(text)


# --------------------------------------------------------------------------
# images


def read_image(path) -> np.ndarray:
    """8-bit gray (H, W) or RGB (H, W, 3) pixels of a lossless raster file."""
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in LOSSLESS_FORMATS:
                raise ImageReadError(path, f"unsupported or lossy format {fmt}")
            if fmt == "TIFF" and im.info.get("compression") in {"jpeg", "tiff_jpeg"}:
                raise ImageReadError(path, "JPEG-compressed TIFF is lossy")
            mode = im.mode
            if mode in ("1", "L"):
                arr = np.asarray(im.convert("L"))
            elif mode in ("RGB", "P"):
                arr = np.asarray(im.convert("RGB"))
            else:
                raise ImageReadError(path, f"unsupported pixel mode {mode} (8-bit gray or RGB only)")
    except FileNotFoundError:
        raise ImageReadError(path, "no such file") from None
    except UnidentifiedImageError:
        raise ImageReadError(path, "not a recognised image") from None
    except OSError as exc:
        if isinstance(exc, ImageReadError):
            raise
        raise ImageReadError(path, str(exc)) from None
    if arr.size == 0:
        raise ImageReadError(path, "empty image")
    return np.array(arr, dtype=np.uint8)


def write_image(path, pixels) -> None:
    a = np.asarray(pixels)
    if a.dtype != np.uint8:
        raise ParameterError("write_image expects uint8 pixels")
    Image.fromarray(a).save(path, format="PNG")


def to_uint8(band) -> np.ndarray:
    return np.clip(np.rint(np.asarray(band, dtype=float)), 0, 255).astype(np.uint8)
