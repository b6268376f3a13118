import numpy as np

from zernike_fft.io import BandMoments, MomentFile
from zernike_fft.moments import GridMeta
from zernike_fft.radial import pair_count


def random_moment_file(rng, n_max=None, bands=None) -> MomentFile:
    """Moment file with coefficients spread over the whole float64 range."""
    n_max = int(rng.integers(0, 12)) if n_max is None else n_max
    names = bands or (["gray"] if rng.random() < 0.5 else ["R", "G", "B"])
    k = pair_count(n_max)

    def value():
        # ordinary, tiny, huge and signed-zero components
        x = rng.normal(size=k) * 10.0 ** rng.integers(-300, 300, size=k)
        x[rng.random(k) < 0.1] = -0.0
        return x

    size = 2 * int(rng.integers(10, 400)) + 1
    return MomentFile(
        method=str(rng.choice(["fft", "direct", "qrecursive"])),
        neumann=bool(rng.random() < 0.5),
        n_max=n_max,
        grid=GridMeta(size, (int(rng.integers(1, size)), int(rng.integers(1, size))), (3, 4)),
        bands=[
            BandMoments(name, float(rng.integers(0, 128)), float(rng.integers(128, 256)), value() + 1j * value())
            for name in names
        ],
    )
