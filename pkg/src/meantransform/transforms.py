"""Operator transforms built on the polar decomposition ``T = V|T|``.

    mean          M(T)  = (V|T| + |T|V) / 2
    Aluthge       D_l(T) = |T|^l V |T|^(1-l)
    Duggal        |T| V
    Jordan        A o B = (AB + BA) / 2
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    InputError,
    Tolerance,
    as_matrix,
    compact_svd,
    as_vector,
    inner,
    operator_norm,
    polar_decompose,
    rank_one,
    require_same_shape,
)

__all__ = [
    "MeanIterationTrace",
    "mean_transform",
    "aluthge_transform",
    "duggal_transform",
    "jordan_product",
    "iterate_mean",
    "rank_one_mean",
]


def mean_transform(T, tol: Tolerance | None = None) -> np.ndarray:
    """Arithmetic mean of ``T`` and its Duggal transform.

    Examples
    --------
    >>> mean_transform([[0, 1], [0, 0]]).real
    array([[0. , 0.5],
           [0. , 0. ]])
    """
    V, P = polar_decompose(T, tol)
    return (V @ P + P @ V) / 2


def rank_one_mean(x, y) -> np.ndarray:
    """Closed form of the mean transform of ``x (x) y`` for nonzero ``x``, ``y``.

    ``M(x (x) y) = 1/2 (x + <x, y>/||y||^2 y) (x) y``; no factorization involved.
    """
    x, y = as_vector(x), as_vector(y)
    ny2 = float(np.vdot(y, y).real)
    if ny2 == 0 or not np.any(x):
        raise InputError("rank-one mean formula needs nonzero vectors")
    return rank_one(0.5 * (x + inner(x, y) / ny2 * y), y)


def duggal_transform(T, tol: Tolerance | None = None) -> np.ndarray:
    V, P = polar_decompose(T, tol)
    return P @ V


def aluthge_transform(T, lam: float = 0.5, tol: Tolerance | None = None) -> np.ndarray:
    """Generalized Aluthge transform ``|T|^lam V |T|^(1-lam)``.

    Fractional powers of ``|T|`` come straight from the truncated SVD, so
    the null space of ``T`` is exactly annihilated. ``|T|^0`` means the
    projection ``V*V`` onto the range of ``|T|``, so ``lam = 0`` gives
    ``V*V T`` (which is ``T`` when ``T`` is invertible) and ``lam = 1``
    gives the Duggal transform.
    """
    if not (0.0 <= lam <= 1.0):
        raise InputError(f"lambda must lie in [0, 1], got {lam}")
    A = as_matrix(T)
    _, s, Vh = compact_svd(A)
    V, _ = polar_decompose(A, tol)
    W = Vh.conj().T
    left = (W * s**lam) @ Vh
    right = (W * s ** (1.0 - lam)) @ Vh
    return left @ V @ right


def jordan_product(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    require_same_shape(A, B)
    return (A @ B + B @ A) / 2


@dataclass
class MeanIterationTrace:
    iterates: list[np.ndarray] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def steps(self) -> int:
        return len(self.deltas)


def iterate_mean(T, max_steps: int = 100, stop_tol: float = 1e-12, tol: Tolerance | None = None) -> MeanIterationTrace:
    """Repeatedly apply the mean transform, recording step sizes.

    Stops as soon as the operator-norm distance between consecutive
    iterates drops to ``stop_tol`` or after ``max_steps`` applications.
    """
    if max_steps < 1:
        raise InputError("max_steps must be >= 1")
    if not stop_tol > 0:
        raise InputError("stop_tol must be positive")
    current = as_matrix(T)
    trace = MeanIterationTrace(iterates=[current])
    for _ in range(max_steps):
        nxt = mean_transform(current, tol)
        delta = operator_norm(nxt - current)
        trace.iterates.append(nxt)
        trace.deltas.append(delta)
        current = nxt
        if delta <= stop_tol:
            trace.converged = True
            break
    return trace
