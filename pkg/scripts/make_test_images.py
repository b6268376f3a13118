"""Regenerate the bundled 256x256 test images.

The source is scikit-image's ``astronaut`` (NASA, public domain), a
license-clean portrait of the same size class as the customary test image.
Only needed when the PNGs in src/zernike_fft/data are to be rebuilt.
"""

from pathlib import Path

from PIL import Image
from skimage import data

OUT = Path(__file__).resolve().parents[1] / "src" / "zernike_fft" / "data"


def main():
    rgb = Image.fromarray(data.astronaut()).resize((256, 256), Image.Resampling.LANCZOS)
    OUT.mkdir(parents=True, exist_ok=True)
    rgb.save(OUT / "astronaut256.png", optimize=False)
    rgb.convert("L").save(OUT / "astronaut256_gray.png", optimize=False)


if __name__ == "__main__":
    main()
