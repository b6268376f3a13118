"""Zernike moments of images via FFT-evaluated radial polynomials."""

from .dedup import DuplicateGroups, Signature, dedup_images, find_duplicates, zm_signature
from .errors import (
    AliasingError,
    CoefficientOverflowError,
    DomainError,
    ImageReadError,
    InputError,
    MomentFileError,
    NumericalError,
    ParameterError,
    UndefinedDenominatorError,
    ZernikeError,
)
from .io import MomentFile, load_moments, read_image, save_moments, write_image
from .metrics import ErrorReport, StabilityReport, epsilon, epsilon1, epsilon2, error_report, stability_qf
from .moments import (
    GridMeta,
    ImageGrid,
    MomentSet,
    compute_moments,
    compute_moments_color,
    embed_image,
    grid_from_band,
    single_moment,
)
from .radial import RadialTable, radial_table, zrp_direct, zrp_fft, zrp_qrecursive
from .reconstruct import ReconstructedImage, minmax_normalize, reconstruct, reconstruct_color

__version__ = "0.1.0"
