"""Seeded random matrix generators, each certified against its class."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import classifiers as cls
from .numerics import InputError, Tolerance, rank_one

__all__ = ["KINDS", "GeneratorSpec", "generate", "sample", "trial_rng", "ginibre", "haar_unitary", "unit_vector", "complex_vector"]

KINDS = (
    "ginibre",
    "haar_unitary",
    "hermitian",
    "psd",
    "projection",
    "rank_one",
    "rank_one_projection",
    "nilpotent2",
    "normal",
    "oblique_idempotent",
    "scaled",
)

# generated matrices must satisfy their class identity to this accuracy
CERTIFY_TOL = Tolerance(abs_tol=1e-10)


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate: ``kind`` at size ``dim`` from ``seed``.

    ``rank`` applies to ``projection`` (random rank when ``None``);
    ``base`` and ``factor`` apply to ``scaled``, which multiplies a
    ``base`` sample by the complex ``factor``.
    """

    kind: str = "ginibre"
    dim: int = 4
    seed: int = 0
    rank: Optional[int] = None
    base: Optional[str] = None
    factor: complex = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}")
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise InputError(f"dim must be an integer >= 2, got {self.dim!r}")
        if self.rank is not None and not 0 <= self.rank <= self.dim:
            raise InputError(f"projection rank must lie in [0, {self.dim}], got {self.rank}")
        if self.kind == "scaled" and (self.base is None or self.base == "scaled" or self.base not in KINDS):
            raise InputError("scaled generator needs a non-scaled base kind")

    def with_(self, **changes) -> "GeneratorSpec":
        fields = {k: getattr(self, k) for k in ("kind", "dim", "seed", "rank", "base", "factor")}
        fields.update(changes)
        return GeneratorSpec(**fields)


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for one trial, keyed by seed and indices."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), *map(int, keys)]))


def complex_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)


def unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = complex_vector(rng, n)
    return v / np.linalg.norm(v)


def ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with phases fixed."""
    Q, R = np.linalg.qr(ginibre(rng, n))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _projection(rng, n, rank):
    Q = haar_unitary(rng, n)[:, :rank]
    P = Q @ Q.conj().T
    return (P + P.conj().T) / 2


def _nilpotent2(rng, n):
    # N = Q_a C Q_b^* with orthonormal Q_a, Q_b spanning orthogonal subspaces
    k = int(rng.integers(1, n // 2 + 1))
    Q = haar_unitary(rng, n)
    C = ginibre(rng, k)
    return Q[:, :k] @ C @ Q[:, k : 2 * k].conj().T


def _oblique_idempotent(rng, n):
    # S D S^-1 with S well conditioned so that the result is far from Hermitian
    rank = int(rng.integers(1, n))
    while True:
        S = np.eye(n) + 0.5 * ginibre(rng, n)
        if np.linalg.cond(S) < 50:
            break
    D = np.diag([1.0] * rank + [0.0] * (n - rank))
    return S @ D @ np.linalg.inv(S)


def sample(kind: str, n: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Draw one matrix of the given kind (``scaled`` is handled by :func:`generate`)."""
    if kind == "ginibre":
        return ginibre(rng, n)
    if kind == "haar_unitary":
        return haar_unitary(rng, n)
    if kind == "hermitian":
        G = ginibre(rng, n)
        return (G + G.conj().T) / 2
    if kind == "psd":
        G = ginibre(rng, n)
        P = G.conj().T @ G
        return (P + P.conj().T) / 2
    if kind == "projection":
        k = int(rng.integers(0, n + 1)) if rank is None else rank
        return _projection(rng, n, k)
    if kind == "rank_one":
        return rank_one(complex_vector(rng, n), complex_vector(rng, n))
    if kind == "rank_one_projection":
        x = unit_vector(rng, n)
        return rank_one(x, x)
    if kind == "nilpotent2":
        return _nilpotent2(rng, n)
    if kind == "normal":
        U = haar_unitary(rng, n)
        return (U * complex_vector(rng, n)) @ U.conj().T
    if kind == "oblique_idempotent":
        return _oblique_idempotent(rng, n)
    raise InputError(f"cannot sample kind {kind!r} directly")


def certify(kind: str, T: np.ndarray) -> None:
    """Raise ``RuntimeError`` unless ``T`` belongs to the class ``kind`` promises."""
    checks = {
        "haar_unitary": [cls.is_unitary],
        "hermitian": [cls.is_self_adjoint],
        "psd": [cls.is_self_adjoint],
        "projection": [cls.is_orthogonal_projection],
        "rank_one_projection": [cls.is_orthogonal_projection],
        "nilpotent2": [cls.is_nilpotent2],
        "normal": [cls.is_normal],
    }
    for pred in checks.get(kind, []):
        v = pred(T, CERTIFY_TOL)
        if v.holds is not True:
            raise RuntimeError(f"{kind} generator produced a matrix failing {v.description} (residual {v.residual:.3e})")
    if kind == "psd" and np.linalg.eigvalsh(T)[0] < -CERTIFY_TOL.abs_tol * max(1.0, np.linalg.norm(T, 2)):
        raise RuntimeError("psd generator produced a negative eigenvalue")
    if kind == "oblique_idempotent":
        if np.linalg.norm(T @ T - T, 2) > CERTIFY_TOL.abs_tol * max(1.0, np.linalg.norm(T, 2) ** 2):
            raise RuntimeError("oblique idempotent is not idempotent")


def draw(kind: str, n: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """:func:`sample` followed by :func:`certify`."""
    T = sample(kind, n, rng, rank)
    certify(kind, T)
    return T


def generate(spec: GeneratorSpec) -> np.ndarray:
    """Deterministic matrix for ``spec``; same spec, same matrix."""
    rng = trial_rng(spec.seed, spec.dim)
    if spec.kind == "scaled":
        return complex(spec.factor) * draw(spec.base, spec.dim, rng, spec.rank)
    return draw(spec.kind, spec.dim, rng, spec.rank)
