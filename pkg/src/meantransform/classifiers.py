"""Tolerance-aware membership tests for operator classes.

Every predicate returns a :class:`ClassVerdict` carrying an operator-norm
residual of the defining identity. Homogeneous identities (``T = T*``,
``T*T = TT*``, ...) are normalised by ``max(1, ||T||**k)`` with ``k`` the
degree of the identity; identities mixing degrees (``T^2 = T``,
``TT*T = T``, ``T*T = I``) use the raw residual, since rescaling ``T``
changes whether they hold at all.

``holds`` is ``True`` when the residual is at most ``tol.abs_tol``,
``False`` when it is at least ``tol.band`` and ``None`` (indeterminate)
in between.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import InputError, Tolerance, as_matrix, require_same_shape

__all__ = [
    "ClassVerdict",
    "verdict",
    "is_self_adjoint",
    "is_orthogonal_projection",
    "is_partial_isometry",
    "is_isometry",
    "is_unitary",
    "is_normal",
    "is_quasinormal",
    "is_nilpotent2",
    "projection_leq",
    "projections_orthogonal",
    "classify",
]


@dataclass(frozen=True)
class ClassVerdict:
    holds: Optional[bool]
    residual: float
    description: str = ""

    @property
    def indeterminate(self) -> bool:
        return self.holds is None

    def __bool__(self) -> bool:
        return self.holds is True


def verdict(residual: float, tol: Tolerance | None = None, description: str = "") -> ClassVerdict:
    """Turn a residual into a tri-state verdict."""
    tol = tol or Tolerance()
    residual = float(residual)
    if residual <= tol.abs_tol:
        holds = True
    elif residual >= tol.band:
        holds = False
    else:
        holds = None
    return ClassVerdict(holds, residual, description)


def _norm(A) -> float:
    return float(np.linalg.norm(A, 2))


def _scale(T, degree: int) -> float:
    return max(1.0, _norm(T) ** degree)


def is_self_adjoint(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    return verdict(_norm(T - T.conj().T) / _scale(T, 1), tol, "self-adjoint")


def is_orthogonal_projection(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    r = max(_norm(T @ T - T), _norm(T - T.conj().T))
    return verdict(r, tol, "orthogonal projection")


def is_partial_isometry(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    return verdict(_norm(T @ T.conj().T @ T - T), tol, "partial isometry")


def is_isometry(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    eye = np.eye(T.shape[0])
    return verdict(_norm(T.conj().T @ T - eye), tol, "isometry")


def is_unitary(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    eye = np.eye(T.shape[0])
    r = max(_norm(T.conj().T @ T - eye), _norm(T @ T.conj().T - eye))
    return verdict(r, tol, "unitary")


def is_normal(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    Th = T.conj().T
    return verdict(_norm(Th @ T - T @ Th) / _scale(T, 2), tol, "normal")


def is_quasinormal(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    G = T.conj().T @ T
    return verdict(_norm(T @ G - G @ T) / _scale(T, 3), tol, "quasi-normal")


def is_nilpotent2(T, tol: Tolerance | None = None) -> ClassVerdict:
    T = as_matrix(T)
    return verdict(_norm(T @ T) / _scale(T, 2), tol, "square-zero")


def _require_projections(tol: Tolerance | None, *mats) -> None:
    for M in mats:
        v = is_orthogonal_projection(M, tol)
        if v.holds is not True:
            raise InputError(f"expected an orthogonal projection (residual {v.residual:.3e})")


def projection_leq(Q, P, tol: Tolerance | None = None) -> ClassVerdict:
    """Order ``Q <= P`` of orthogonal projections, i.e. ``PQ = QP = Q``."""
    Q, P = as_matrix(Q), as_matrix(P)
    require_same_shape(Q, P)
    _require_projections(tol, Q, P)
    r = max(_norm(P @ Q - Q), _norm(Q @ P - Q))
    return verdict(r, tol, "projection order Q <= P")


def projections_orthogonal(P, Q, tol: Tolerance | None = None) -> ClassVerdict:
    P, Q = as_matrix(P), as_matrix(Q)
    require_same_shape(P, Q)
    _require_projections(tol, P, Q)
    return verdict(_norm(P @ Q), tol, "orthogonal projections PQ = 0")


CLASS_PREDICATES = {
    "self_adjoint": is_self_adjoint,
    "projection": is_orthogonal_projection,
    "partial_isometry": is_partial_isometry,
    "isometry": is_isometry,
    "unitary": is_unitary,
    "normal": is_normal,
    "quasinormal": is_quasinormal,
    "nilpotent2": is_nilpotent2,
}


def classify(T, tol: Tolerance | None = None) -> dict[str, ClassVerdict]:
    """Run every single-matrix predicate on ``T``."""
    T = as_matrix(T)
    return {name: pred(T, tol) for name, pred in CLASS_PREDICATES.items()}
