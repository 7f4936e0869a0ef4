"""Mean, Aluthge and Duggal transforms of complex matrices, with executable checks of their characterizations."""

from .numerics import (
    InputError,
    PolarParts,
    SvdParts,
    Tolerance,
    adjoint,
    conj_entrywise,
    numerical_range_selfadjoint,
    operator_norm,
    polar_decompose,
    rank_one,
    sqrt_psd,
    svd,
    trace,
)
from .transforms import aluthge_transform, duggal_transform, iterate_mean, jordan_product, mean_transform

__version__ = "0.1.0"
