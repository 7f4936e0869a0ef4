"""Dense complex matrix primitives and spectral factorizations.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "InputError",
    "Tolerance",
    "SvdParts",
    "PolarParts",
    "RANK_RTOL",
    "as_matrix",
    "as_vector",
    "require_same_shape",
    "adjoint",
    "conj_entrywise",
    "rank_one",
    "inner",
    "svd",
    "compact_svd",
    "polar_decompose",
    "sqrt_psd",
    "psd_power",
    "operator_norm",
    "trace",
    "numerical_range_selfadjoint",
]

# singular values at or below RANK_RTOL * sigma_max are treated as zero
RANK_RTOL = 1e-10


class InputError(ValueError):
    """Raised for malformed, non-finite or dimensionally inconsistent input."""


@dataclass(frozen=True)
class Tolerance:
    """Comparison policy shared by every numerical check.

    A residual ``r`` is "zero" when ``r <= abs_tol`` and "nonzero" when
    ``r >= indeterminate_factor * abs_tol``; anything between is left
    undecided by the classifiers.
    """

    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    indeterminate_factor: float = 100.0

    def __post_init__(self):
        if not (self.abs_tol >= 0 and self.rel_tol >= 0):
            raise InputError("tolerances must be nonnegative")
        if not self.indeterminate_factor >= 1:
            raise InputError("indeterminate_factor must be >= 1")

    @property
    def band(self) -> float:
        """Lower edge of the 'definitely nonzero' region."""
        return self.indeterminate_factor * self.abs_tol


class SvdParts(NamedTuple):
    U: np.ndarray
    sigma: np.ndarray
    Vh: np.ndarray


class PolarParts(NamedTuple):
    """Canonical polar factors ``T = V @ P`` with ``ker V = ker T``."""

    V: np.ndarray
    P: np.ndarray


def as_matrix(T, square: bool = True) -> np.ndarray:
    """Coerce ``T`` to a finite 2-d complex array, validating shape."""
    A = np.asarray(T, dtype=complex)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InputError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise InputError(f"expected a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector has non-finite entries")
    return v


def require_same_shape(*mats: np.ndarray) -> None:
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise InputError(f"dimension mismatch: {sorted(shapes)}")


def adjoint(T) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(T, square=False).conj().T


def conj_entrywise(T) -> np.ndarray:
    """Entrywise complex conjugate in the standard basis."""
    return as_matrix(T, square=False).conj()


def inner(u, v) -> complex:
    """``<u, v>``, linear in ``u`` and conjugate-linear in ``v``."""
    return complex(np.vdot(as_vector(v), as_vector(u)))


def rank_one(x, y) -> np.ndarray:
    """The operator ``u -> <u, y> x``, i.e. ``x @ y^*``."""
    x, y = as_vector(x), as_vector(y)
    if x.shape != y.shape:
        raise InputError(f"vector dimensions differ: {x.size} vs {y.size}")
    return np.outer(x, y.conj())


def svd(T) -> SvdParts:
    """Full SVD with ``sigma`` nonincreasing and ``T = U @ diag(sigma) @ Vh``."""
    A = as_matrix(T, square=False)
    U, s, Vh = np.linalg.svd(A)
    return SvdParts(U, s, Vh)


def compact_svd(T, rank_rtol: float = RANK_RTOL) -> SvdParts:
    """SVD truncated to the numerical rank (possibly rank 0)."""
    A = as_matrix(T, square=False)
    U, s, Vh = np.linalg.svd(A)
    r = int(np.count_nonzero(s > rank_rtol * s[0])) if s[0] > 0 else 0
    return SvdParts(U[:, :r], s[:r], Vh[:r])


def polar_decompose(T, tol: Tolerance | None = None, rank_rtol: float = RANK_RTOL) -> PolarParts:
    """Polar decomposition ``T = V |T|`` with the kernel of ``V`` equal to that of ``T``.

    Built from a compact SVD truncated at the numerical rank: singular
    values ``<= rank_rtol * sigma_max`` are dropped, so ``V = U_r Vh_r``
    vanishes on the numerical null space of ``T`` and
    ``P = Vh_r^* diag(sigma_r) Vh_r``. Any orthonormal basis choice for
    repeated singular values gives the same ``V`` and ``P``.
    """
    A = as_matrix(T)
    Ur, sr, Vhr = compact_svd(A, rank_rtol)
    V = Ur @ Vhr
    P = (Vhr.conj().T * sr) @ Vhr
    P = (P + P.conj().T) / 2
    return PolarParts(V, P)


def _hermitian_eig(P, tol: Tolerance) -> tuple[np.ndarray, np.ndarray]:
    A = as_matrix(P)
    scale = max(1.0, np.linalg.norm(A, 2))
    if np.linalg.norm(A - A.conj().T, 2) > tol.abs_tol * scale:
        raise InputError("matrix is not Hermitian")
    w, Q = np.linalg.eigh((A + A.conj().T) / 2)
    if w.size and w[0] < -tol.abs_tol * scale:
        raise InputError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), Q


def psd_power(P, power: float, tol: Tolerance | None = None) -> np.ndarray:
    """``P**power`` for Hermitian PSD ``P`` via eigendecomposition.

    Eigenvalues in ``[-abs_tol, 0)`` are clamped to zero. ``P**0`` is the
    orthogonal projection onto the range of ``P`` (eigenvalues above the
    numerical rank cutoff), not the identity.
    """
    tol = tol or Tolerance()
    w, Q = _hermitian_eig(P, tol)
    if power == 0:
        f = (w > RANK_RTOL * w[-1]).astype(float) if w[-1] > 0 else np.zeros_like(w)
    else:
        f = w**power
    R = (Q * f) @ Q.conj().T
    return (R + R.conj().T) / 2


def sqrt_psd(P, tol: Tolerance | None = None) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    return psd_power(P, 0.5, tol)


def operator_norm(T) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(T, square=False), 2))


def trace(T) -> complex:
    return complex(np.trace(as_matrix(T)))


def numerical_range_selfadjoint(A, tol: Tolerance | None = None) -> tuple[float, float]:
    """Numerical range ``[lambda_min, lambda_max]`` of a Hermitian matrix."""
    tol = tol or Tolerance()
    A = as_matrix(A)
    if np.linalg.norm(A - A.conj().T, 2) > tol.abs_tol * max(1.0, np.linalg.norm(A, 2)):
        raise InputError("numerical range interval requires a Hermitian matrix")
    w = np.linalg.eigvalsh((A + A.conj().T) / 2)
    return float(w[0]), float(w[-1])
