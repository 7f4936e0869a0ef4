"""Concrete maps on matrices and the Jordan-product commuting condition.

A map ``phi`` commutes with the mean transform under the Jordan product when

    M(phi(A) o phi(B)) == phi(M(A o B))      for all A, B.

Unitary and anti-unitary conjugations satisfy this; scalings and the
adjoint map do not, and serve as falsifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import classifiers as cls
from .generators import draw, ginibre, haar_unitary, trial_rng, unit_vector
from .matrix_io import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json
from .numerics import InputError, Tolerance, as_matrix, as_vector, inner, operator_norm, require_same_shape
from .report import CheckReport, Outcome, combine, identity_outcome, iff_outcome, run_sides
from .transforms import jordan_product, mean_transform, rank_one_mean

__all__ = [
    "PhiMap",
    "UnitaryConjugation",
    "AntiunitaryConjugation",
    "Scale",
    "AdjointMap",
    "Compose",
    "apply_phi",
    "commuting_residual",
    "verify_forward_theorem",
    "adjoint_counterexample",
    "phi_preservation_suite",
    "phi_from_json",
]

# how accurately a supplied U must be unitary
UNITARY_TOL = Tolerance(abs_tol=1e-8)


class PhiMap:
    """Base class; subclasses are callables on square matrices."""

    dim: int | None = None

    def __call__(self, T) -> np.ndarray:
        T = as_matrix(T)
        if self.dim is not None and T.shape[0] != self.dim:
            raise InputError(f"map acts on {self.dim}x{self.dim} matrices, got {T.shape}")
        return self._apply(T)

    def _apply(self, T: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _checked_unitary(U) -> np.ndarray:
    U = as_matrix(U)
    v = cls.is_unitary(U, UNITARY_TOL)
    if v.holds is not True:
        raise InputError(f"conjugating matrix is not unitary (residual {v.residual:.3e})")
    return U


@dataclass(frozen=True, eq=False)
class UnitaryConjugation(PhiMap):
    """``T -> U T U*``."""

    U: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "U", _checked_unitary(self.U))

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def _apply(self, T):
        return self.U @ T @ self.U.conj().T

    def to_json(self):
        return {"variant": "unitary", "U": matrix_to_json(self.U)}


@dataclass(frozen=True, eq=False)
class AntiunitaryConjugation(PhiMap):
    """``T -> J T J^-1`` for the anti-unitary ``J = W K``, ``K`` entrywise conjugation.

    Concretely ``T -> W conj(T) W*``.
    """

    W: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W", _checked_unitary(self.W))

    @property
    def dim(self) -> int:
        return self.W.shape[0]

    def _apply(self, T):
        return self.W @ T.conj() @ self.W.conj().T

    def to_json(self):
        return {"variant": "antiunitary", "U": matrix_to_json(self.W)}


@dataclass(frozen=True)
class Scale(PhiMap):
    c: complex

    def _apply(self, T):
        return complex(self.c) * T

    def to_json(self):
        return {"variant": "scale", "c": complex_to_json(self.c)}


@dataclass(frozen=True)
class AdjointMap(PhiMap):
    def _apply(self, T):
        return T.conj().T

    def to_json(self):
        return {"variant": "adjoint"}


@dataclass(frozen=True)
class Compose(PhiMap):
    """Apply ``maps`` left to right."""

    maps: tuple[PhiMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        dims = {m.dim for m in self.maps if m.dim is not None}
        if len(dims) > 1:
            raise InputError(f"composed maps act on different dimensions: {sorted(dims)}")

    @property
    def dim(self) -> int | None:
        return next((m.dim for m in self.maps if m.dim is not None), None)

    def _apply(self, T):
        for m in self.maps:
            T = m(T)
        return T

    def to_json(self):
        return {"variant": "compose", "maps": [m.to_json() for m in self.maps]}


def phi_from_json(obj) -> PhiMap:
    if not isinstance(obj, dict) or "variant" not in obj:
        raise InputError("map JSON must be an object with a 'variant' field")
    variant = obj["variant"]
    try:
        if variant == "unitary":
            return UnitaryConjugation(matrix_from_json(obj["U"]))
        if variant == "antiunitary":
            return AntiunitaryConjugation(matrix_from_json(obj["U"]))
        if variant == "scale":
            return Scale(complex_from_json(obj["c"]))
        if variant == "adjoint":
            return AdjointMap()
        if variant == "compose":
            if not isinstance(obj["maps"], list):
                raise InputError("'maps' must be a list")
            return Compose(tuple(phi_from_json(m) for m in obj["maps"]))
    except KeyError as exc:
        raise InputError(f"map variant {variant!r} needs field {exc}") from None
    raise InputError(f"unknown map variant {variant!r}")


def apply_phi(phi: PhiMap, T) -> np.ndarray:
    return phi(T)


def commuting_residual(phi: PhiMap, A, B, tol: Tolerance | None = None) -> float:
    """``||M(phi(A) o phi(B)) - phi(M(A o B))||`` in operator norm."""
    A, B = as_matrix(A), as_matrix(B)
    require_same_shape(A, B)
    lhs = mean_transform(jordan_product(phi(A), phi(B)), tol)
    rhs = phi(mean_transform(jordan_product(A, B), tol))
    return operator_norm(lhs - rhs)


def _forward_trial(variant: str):
    make = UnitaryConjugation if variant == "unitary" else AntiunitaryConjugation

    def trial(rng, dim, tol):
        A, B = ginibre(rng, dim), ginibre(rng, dim)
        U = haar_unitary(rng, dim)
        r = commuting_residual(make(U), A, B, tol) / max(1.0, operator_norm(A) * operator_norm(B))
        return identity_outcome(r, tol, {"A": A, "B": B, "U": U})

    return trial


def verify_forward_theorem(
    dim: int,
    trials: int,
    seed: int = 0,
    tol: Tolerance | None = None,
    variants: Sequence[str] = ("unitary", "antiunitary"),
) -> CheckReport:
    """Check the commuting condition for random conjugations and random A, B.

    Residuals are divided by ``max(1, ||A|| ||B||)`` before comparison
    with ``tol.abs_tol``.
    """
    tol = tol or Tolerance()
    if dim < 3:
        raise InputError(f"the characterization needs dimension >= 3, got {dim}")
    unknown = set(variants) - {"unitary", "antiunitary"}
    if unknown:
        raise InputError(f"unknown conjugation variants {sorted(unknown)}")
    sides = [(name, _forward_trial(name)) for name in variants]
    return run_sides("forward_theorem", sides, dim, trials, seed, tol)


def adjoint_counterexample(x, xp, tol: Tolerance | None = None) -> float:
    """Gap between ``M(A*)`` and ``M(A)*`` for ``A = x (x) xp``, from the closed form.

    ``x`` and ``xp`` must be unit vectors that are neither parallel nor
    orthogonal; otherwise the two sides coincide and no gap is produced.
    """
    tol = tol or Tolerance()
    x, xp = as_vector(x), as_vector(xp)
    if x.shape != xp.shape:
        raise InputError("vectors have different dimensions")
    for name, v in (("x", x), ("xp", xp)):
        if abs(np.linalg.norm(v) - 1.0) > tol.abs_tol:
            raise InputError(f"{name} must be a unit vector")
    overlap = abs(inner(x, xp))
    if overlap <= tol.band:
        raise InputError("x and xp are orthogonal; both sides reduce to half the adjoint")
    if overlap >= 1.0 - tol.band:
        raise InputError("x and xp are linearly dependent")
    lhs = rank_one_mean(xp, x)              # M(A*), A* = xp (x) x
    rhs = rank_one_mean(x, xp).conj().T     # (M(A))*
    return operator_norm(lhs - rhs)


def _random_pair_in(rng, dim):
    # random ordered pair Q <= P and orthogonal pair (P1, P2), all projections
    H = haar_unitary(rng, dim)
    k = int(rng.integers(1, dim + 1))
    m = int(rng.integers(0, k + 1))
    basis = H[:, :k] @ haar_unitary(rng, k)[:, :m]
    P = H[:, :k] @ H[:, :k].conj().T
    Q = basis @ basis.conj().T
    a = int(rng.integers(1, dim))
    b = int(rng.integers(1, dim - a + 1))
    P1 = H[:, :a] @ H[:, :a].conj().T
    P2 = H[:, a : a + b] @ H[:, a : a + b].conj().T
    herm = lambda X: (X + X.conj().T) / 2
    return herm(P), herm(Q), herm(P1), herm(P2)


def _preservation_details(phi: PhiMap, rng, dim: int, tol: Tolerance) -> dict[str, Outcome]:
    out: dict[str, Outcome] = {}
    P, Q, P1, P2 = _random_pair_in(rng, dim)
    R1 = draw("projection", dim, rng)
    R2 = draw("projection", dim, rng)
    fP, fQ, fP1, fP2, fR1, fR2 = (phi(X) for X in (P, Q, P1, P2, R1, R2))
    is_proj = cls.is_orthogonal_projection

    out["projection"] = combine(iff_outcome(is_proj(fP, tol), is_proj(P, tol)), iff_outcome(is_proj(fQ, tol), is_proj(Q, tol)))
    oblique = draw("oblique_idempotent", dim, rng)
    out["non_projection"] = iff_outcome(is_proj(phi(oblique), tol), is_proj(oblique, tol))
    out["order"] = combine(
        iff_outcome(cls.projection_leq(fQ, fP, tol), cls.projection_leq(Q, P, tol)),
        iff_outcome(cls.projection_leq(fR1, fR2, tol), cls.projection_leq(R1, R2, tol)),
    )
    out["orthogonality"] = combine(
        iff_outcome(cls.projections_orthogonal(fP1, fP2, tol), cls.projections_orthogonal(P1, P2, tol)),
        iff_outcome(cls.projections_orthogonal(fR1, fR2, tol), cls.projections_orthogonal(R1, R2, tol)),
    )
    out["orthogonal_sum"] = identity_outcome(operator_norm(phi(P1 + P2) - fP1 - fP2), tol)
    x = unit_vector(rng, dim)
    fx = phi(np.outer(x, x.conj()))
    out["rank_one"] = identity_outcome(max(is_proj(fx, tol).residual, abs(np.trace(fx) - 1)), tol)

    N = draw("normal", dim, rng)
    G = ginibre(rng, dim)
    out["normal"] = combine(
        iff_outcome(cls.is_normal(phi(N), tol), cls.is_normal(N, tol)),
        iff_outcome(cls.is_normal(phi(G), tol), cls.is_normal(G, tol)),
    )
    out["square_of_normal"] = identity_outcome(
        operator_norm(phi(N @ N) - phi(N) @ phi(N)) / max(1.0, operator_norm(N) ** 2), tol
    )
    B = ginibre(rng, dim)
    out["mean_covariance"] = identity_outcome(
        operator_norm(mean_transform(phi(B), tol) - phi(mean_transform(B, tol))) / max(1.0, operator_norm(B)), tol
    )
    out["zero_and_identity"] = identity_outcome(
        max(operator_norm(phi(np.zeros((dim, dim)))), operator_norm(phi(np.eye(dim)) - np.eye(dim))), tol
    )
    witness = {"P": P, "Q": Q, "P1": P1, "P2": P2, "N": N, "B": B}
    for o in out.values():
        o.witness = witness
    return out


def phi_preservation_suite(phi: PhiMap, trials: int, seed: int = 0, tol: Tolerance | None = None) -> CheckReport:
    """Structural properties every commuting conjugation must have.

    Per trial: projections map to projections (and a non-orthogonal
    idempotent to a non-projection), order and orthogonality of
    projections are preserved both ways, orthogonal sums are additive,
    rank-one projections stay rank one, normality is preserved both ways,
    squares of normal matrices are preserved, the map commutes with the
    mean transform, and 0 and I are fixed.
    """
    tol = tol or Tolerance()
    if not isinstance(phi, (UnitaryConjugation, AntiunitaryConjugation)):
        raise InputError("preservation suite applies to unitary or anti-unitary conjugations only")
    dim = phi.dim
    conjugator = phi.U if isinstance(phi, UnitaryConjugation) else phi.W
    report = CheckReport("phi_preservation", seed)
    report.dims.append(dim)
    worst: dict[str, float] = {}
    for i in range(trials):
        parts = _preservation_details(phi, trial_rng(seed, dim, 0, i), dim, tol)
        outcome = combine(*parts.values())
        outcome.witness["conjugator"] = conjugator
        report.record(outcome, dim, i)
        for name, o in parts.items():
            if o.expect_zero:
                worst[name] = max(worst.get(name, 0.0), o.residual)
    report.details = {f"{k}.worst_residual": v for k, v in sorted(worst.items())}
    return report
