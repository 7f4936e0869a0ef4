"""Executable characterizations of the mean transform.

Each property runs a number of *sides*: one generator per side, so that an
equivalence "X holds iff T is in class C" is exercised both with members
of C (the identity must hold) and with generic matrices (it must fail).
A trial passes only when both halves of the equivalence reach the same
definite verdict; undecided residuals are counted as indeterminate.

Properties are registered by id in :data:`PROPERTIES` and run through
:func:`falsify` (one dimension) or :func:`verify` (a dimension sweep).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import classifiers as cls
from .classifiers import ClassVerdict, verdict
from .generators import GeneratorSpec, complex_vector, draw, ginibre, haar_unitary, trial_rng, unit_vector
from .numerics import InputError, Tolerance, as_matrix, inner, operator_norm, polar_decompose, rank_one
from .phi import (
    AdjointMap,
    AntiunitaryConjugation,
    Scale,
    UnitaryConjugation,
    adjoint_counterexample,
    commuting_residual,
    phi_preservation_suite,
    verify_forward_theorem,
)
from .report import FAIL, INDETERMINATE, PASS, CheckReport, Outcome, combine, identity_outcome, iff_outcome, run_sides
from .transforms import jordan_product, mean_transform, rank_one_mean

__all__ = [
    "Property",
    "PROPERTIES",
    "check_zero_iff",
    "check_nilpotent_iff",
    "check_projection_square",
    "check_mean_projection_iff",
    "check_selfadjoint_iff",
    "check_identity_characterization",
    "check_rank_one_formula",
    "falsify",
    "verify",
    "property_ids",
]

DEFAULT_DIMS = tuple(range(3, 9))


def _norm(A) -> float:
    return operator_norm(A)


def _rel(r: float, *norms: float) -> float:
    return r / max(1.0, float(np.prod(norms)))


def gap_outcome(residual: float, tol: Tolerance, witness=None) -> Outcome:
    """Outcome for a quantity that must stay away from zero."""
    residual = float(residual)
    if residual >= tol.band:
        status = PASS
    elif residual <= tol.abs_tol:
        status = FAIL
    else:
        status = INDETERMINATE
    return Outcome(status, residual, False, witness or {})


def _draw(spec: GeneratorSpec, rng, dim: int) -> np.ndarray:
    if spec.kind == "scaled":
        return complex(spec.factor) * draw(spec.base, dim, rng, spec.rank)
    return draw(spec.kind, dim, rng, spec.rank)


def _from(kind: str, rank: Optional[int] = None):
    return lambda rng, dim: draw(kind, dim, rng, rank)


def _generic(spec: GeneratorSpec):
    return lambda rng, dim: _draw(spec, rng, dim)


def _sides(trial: Callable, sources: Iterable[tuple[str, Callable]]):
    """Pair one trial body with several input sources."""
    return [(name, (lambda src: lambda rng, dim, tol: trial(src(rng, dim), tol))(src)) for name, src in sources]


# -- Prop.: M(T) = 0 iff T = 0 ---------------------------------------------


def _zero_trial(T, tol):
    lhs = verdict(_norm(mean_transform(T, tol)), tol, "M(T) = 0")
    rhs = verdict(_norm(T), tol, "T = 0")
    return iff_outcome(lhs, rhs, {"T": T})


def check_zero_iff(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """``M(T) = 0`` exactly for ``T = 0`` and for no generic ``T``."""
    tol = tol or Tolerance()
    sources = [("zero", lambda rng, dim: np.zeros((dim, dim), dtype=complex)), ("generic", _generic(spec))]
    return run_sides("zero_iff", _sides(_zero_trial, sources), spec.dim, trials, spec.seed, tol)


# -- M(T) = T/2 iff T^2 = 0 -----------------------------------------------


def _orthogonal_rank_one(rng, dim):
    x = complex_vector(rng, dim)
    y = complex_vector(rng, dim)
    y = y - inner(y, x) / inner(x, x) * x
    return rank_one(x, y)


def _nilpotent_trial(T, tol):
    lhs = verdict(_norm(mean_transform(T, tol) - T / 2), tol, "M(T) = T/2")
    return iff_outcome(lhs, cls.is_nilpotent2(T, tol), {"T": T})


def check_nilpotent_iff(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """Halving ``M(T) = T/2`` exactly on square-zero matrices."""
    tol = tol or Tolerance()
    sources = [
        ("nilpotent2", _from("nilpotent2")),
        ("orthogonal_rank_one", _orthogonal_rank_one),
        ("generic", _generic(spec)),
        ("normal", _from("normal")),
    ]
    return run_sides("nilpotent_iff", _sides(_nilpotent_trial, sources), spec.dim, trials, spec.seed, tol)


# -- M(T^2) = T iff projection iff M(T)^2 = T; M(T) projection iff T is ---


def _projection_sources(spec: GeneratorSpec):
    return [
        ("projection", _from("projection", spec.rank)),
        ("generic", _generic(spec)),
        ("hermitian", _from("hermitian")),
        ("oblique_idempotent", _from("oblique_idempotent")),
    ]


def _projection_square_trial(T, tol):
    is_proj = cls.is_orthogonal_projection(T, tol)
    M = mean_transform(T, tol)
    square_first = verdict(_norm(mean_transform(T @ T, tol) - T), tol, "M(T^2) = T")
    square_after = verdict(_norm(M @ M - T), tol, "M(T)^2 = T")
    return combine(iff_outcome(square_first, is_proj, {"T": T}), iff_outcome(square_after, is_proj, {"T": T}))


def check_projection_square(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """``M(T^2) = T`` and ``M(T)^2 = T`` hold exactly for orthogonal projections.

    ``spec.rank`` pins the rank of the generated projections.
    """
    tol = tol or Tolerance()
    sides = _sides(_projection_square_trial, _projection_sources(spec))
    return run_sides("projection_square", sides, spec.dim, trials, spec.seed, tol)


def _mean_projection_trial(T, tol):
    M = mean_transform(T, tol)
    is_proj = cls.is_orthogonal_projection(T, tol)
    out = iff_outcome(cls.is_orthogonal_projection(M, tol), is_proj, {"T": T})
    if is_proj.holds:
        return combine(out, identity_outcome(_norm(M - T), tol, {"T": T}))
    return out


def check_mean_projection_iff(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """``M(T)`` is a projection iff ``T`` is, and then ``M(T) = T``."""
    tol = tol or Tolerance()
    sides = _sides(_mean_projection_trial, _projection_sources(spec))
    return run_sides("mean_projection_iff", sides, spec.dim, trials, spec.seed, tol)


# -- M(T) self-adjoint iff V self-adjoint ---------------------------------


def _hermitian_polar_factor(rng, dim):
    # T = V P with V a Hermitian unitary and P positive definite: T itself is
    # not Hermitian but its polar factor is
    Q = haar_unitary(rng, dim)
    signs = np.where(rng.random(dim) < 0.5, -1.0, 1.0)
    signs[0], signs[-1] = 1.0, -1.0
    V = (Q * signs) @ Q.conj().T
    G = ginibre(rng, dim)
    P = G.conj().T @ G + 0.5 * np.eye(dim)
    return V @ P


def _selfadjoint_trial(T, tol):
    V, _ = polar_decompose(T, tol)
    lhs = cls.is_self_adjoint(mean_transform(T, tol), tol)
    return iff_outcome(lhs, cls.is_self_adjoint(V, tol), {"T": T, "V": V})


def check_selfadjoint_iff(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """Self-adjointness of ``M(T)`` and of the polar factor agree."""
    tol = tol or Tolerance()
    sources = [
        ("hermitian", _from("hermitian")),
        ("hermitian_polar_factor", _hermitian_polar_factor),
        ("normal", _from("normal")),
        ("generic", _generic(spec)),
    ]
    return run_sides("selfadjoint_iff", _sides(_selfadjoint_trial, sources), spec.dim, trials, spec.seed, tol)


# -- M(T o P) = P for all rank-one projections P iff T = I ------------------


def identity_residual(T, P, tol: Tolerance | None = None) -> float:
    """``||M(T o P) - P||``."""
    return _norm(mean_transform(jordan_product(T, P), tol) - as_matrix(P))


def _identity_outcome(T, sample_count: int, rng, tol: Tolerance) -> Outcome:
    dim = T.shape[0]
    distance = verdict(_norm(T - np.eye(dim)), tol, "T = I")
    if distance.holds is None:
        return Outcome(INDETERMINATE, distance.residual, None, {"T": T})
    worst = 0.0
    for _ in range(sample_count):
        x = unit_vector(rng, dim)
        P = rank_one(x, x)
        r = identity_residual(T, P, tol)
        worst = max(worst, r)
        if distance.holds and r > tol.abs_tol:
            status = FAIL if r >= tol.band else INDETERMINATE
            return Outcome(status, r, True, {"T": T, "P": P})
        if not distance.holds and r >= tol.band:
            return Outcome(PASS, r, False, {"T": T, "P": P})
    if distance.holds:
        return Outcome(PASS, worst, True, {"T": T})
    # no violating projection among the samples
    return Outcome(FAIL, worst, False, {"T": T})


def check_identity_characterization(
    T, sample_count: int = 50, tol: Tolerance | None = None, seed: int = 0
) -> CheckReport:
    """Probe ``M(T o P) = P`` with random rank-one projections ``P``.

    For ``T = I`` every sample must satisfy the identity; for ``T`` away
    from ``I`` some sample must violate it. The report holds one trial;
    its witness is the first violating projection (or the offending one
    when ``T = I``). ``min_gap`` is the violation found for ``T != I``.
    """
    tol = tol or Tolerance()
    T = as_matrix(T)
    if sample_count < 1:
        raise InputError("sample_count must be >= 1")
    report = CheckReport("identity_characterization", seed)
    report.record(_identity_outcome(T, sample_count, trial_rng(seed, T.shape[0]), tol), T.shape[0], 0)
    return report


def _identity_property(spec: GeneratorSpec, trials: int, tol: Tolerance, sample_count: int = 50) -> CheckReport:
    sources = [
        ("identity", lambda rng, dim: np.eye(dim, dtype=complex)),
        ("generic", _generic(spec)),
        ("near_identity", lambda rng, dim: np.eye(dim) + 0.05 * ginibre(rng, dim)),
    ]
    sides = [
        (name, (lambda src: lambda rng, dim, tol: _identity_outcome(src(rng, dim), sample_count, rng, tol))(src))
        for name, src in sources
    ]
    return run_sides("identity_characterization", sides, spec.dim, trials, spec.seed, tol)


# -- M(x (x) y) closed form -----------------------------------------------


def _rank_one_trial(x, y, tol):
    T = rank_one(x, y)
    r = _norm(mean_transform(T, tol) - rank_one_mean(x, y))
    return identity_outcome(_rel(r, np.linalg.norm(x), np.linalg.norm(y)), tol, {"T": T})


def check_rank_one_formula(spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """Mean transform of ``x (x) y`` via SVD against the closed form."""
    tol = tol or Tolerance()

    def random_pair(rng, dim, tol):
        return _rank_one_trial(complex_vector(rng, dim), complex_vector(rng, dim), tol)

    def orthogonal_pair(rng, dim, tol):
        x, y = complex_vector(rng, dim), complex_vector(rng, dim)
        return _rank_one_trial(x, y - inner(y, x) / inner(x, x) * x, tol)

    def scaled_pair(rng, dim, tol):
        # widely different magnitudes
        a, b = 10.0 ** rng.uniform(-3, 3, size=2)
        return _rank_one_trial(a * complex_vector(rng, dim), b * complex_vector(rng, dim), tol)

    sides = [("random", random_pair), ("orthogonal", orthogonal_pair), ("scaled", scaled_pair)]
    return run_sides("rank_one_formula", sides, spec.dim, trials, spec.seed, tol)


def rank_one_formula_residual(x, y, tol: Tolerance | None = None) -> float:
    """``||M(x (x) y) - closed form|| / max(1, ||x|| ||y||)``."""
    return _rank_one_trial(np.asarray(x, complex), np.asarray(y, complex), tol or Tolerance()).residual


# -- structural invariants of M -------------------------------------------


def _invariant_sources(spec: GeneratorSpec):
    return [
        ("generic", _generic(spec)),
        ("rank_one", _from("rank_one")),
        ("nilpotent2", _from("nilpotent2")),
        ("projection", _from("projection")),
    ]


def _invariant(property_id: str, body: Callable):
    def run(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
        sides = [
            (name, (lambda src: lambda rng, dim, tol: body(src(rng, dim), rng, tol))(src))
            for name, src in _invariant_sources(spec)
        ]
        return run_sides(property_id, sides, spec.dim, trials, spec.seed, tol)

    return run


def _trace_preservation(T, rng, tol):
    r = abs(np.trace(mean_transform(T, tol)) - np.trace(T))
    return identity_outcome(_rel(r, _norm(T)), tol, {"T": T})


def _unitary_covariance(T, rng, tol):
    U = haar_unitary(rng, T.shape[0])
    r = _norm(mean_transform(U @ T @ U.conj().T, tol) - U @ mean_transform(T, tol) @ U.conj().T)
    return identity_outcome(_rel(r, _norm(T)), tol, {"T": T, "U": U})


def _conjugation_covariance(T, rng, tol):
    r = _norm(mean_transform(T.conj(), tol) - mean_transform(T, tol).conj())
    return identity_outcome(_rel(r, _norm(T)), tol, {"T": T})


def _complex_homogeneity(T, rng, tol):
    c = complex(*rng.standard_normal(2)) * 10.0 ** rng.uniform(-2, 2)
    r = _norm(mean_transform(c * T, tol) - c * mean_transform(T, tol))
    return identity_outcome(_rel(r, abs(c), _norm(T)), tol, {"T": T, "c": np.array([[c]])})


def _norm_contraction(T, rng, tol):
    r = max(0.0, _norm(mean_transform(T, tol)) - _norm(T))
    return identity_outcome(_rel(r, _norm(T)), tol, {"T": T})


def _fixed_points(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    def body(T, tol):
        lhs = verdict(_norm(mean_transform(T, tol) - T), tol, "M(T) = T")
        return combine(
            iff_outcome(lhs, cls.is_quasinormal(T, tol), {"T": T}),
            iff_outcome(cls.is_normal(T, tol), cls.is_quasinormal(T, tol), {"T": T}),
        )

    sources = [("normal", _from("normal")), ("hermitian", _from("hermitian")), ("projection", _from("projection")),
               ("generic", _generic(spec)), ("nilpotent2", _from("nilpotent2"))]
    return run_sides("quasinormal_fixed_points", _sides(body, sources), spec.dim, trials, spec.seed, tol)


def _mean_is_linear(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    def trial(rng, dim, tol):
        A, B = _draw(spec, rng, dim), _draw(spec, rng, dim)
        r = _norm(mean_transform(A + B, tol) - mean_transform(A, tol) - mean_transform(B, tol))
        return identity_outcome(_rel(r, max(_norm(A), _norm(B))), tol, {"A": A, "B": B})

    return run_sides("mean_is_linear", [("pairs", trial)], spec.dim, trials, spec.seed, tol)


# -- maps -------------------------------------------------------------------


def _forward_theorem(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    return verify_forward_theorem(spec.dim, trials, spec.seed, tol)


def _phi_preservation(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    rng = trial_rng(spec.seed, spec.dim, 1 << 20)
    U, W = haar_unitary(rng, spec.dim), haar_unitary(rng, spec.dim)
    a = phi_preservation_suite(UnitaryConjugation(U), trials, spec.seed, tol)
    b = phi_preservation_suite(AntiunitaryConjugation(W), trials, spec.seed + 1, tol)
    out = a.merge(b)
    out.seed = spec.seed
    return out


def _random_scalar(rng) -> complex:
    while True:
        c = complex(*rng.standard_normal(2)) * 2
        if abs(c) > 0.05 and abs(c - 1) > 0.05:
            return c


def _gap_with_oracle(gap: Outcome, agreement: Outcome) -> Outcome:
    # status from both checks, residual is the gap so the report's min_gap shows it
    status = combine(gap, agreement).status
    return Outcome(status, gap.residual, False, gap.witness, f"oracle disagreement {agreement.residual:.3e}")


def _scale_falsifier(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    def trial(rng, dim, tol):
        c = _random_scalar(rng)
        eye = np.eye(dim, dtype=complex)
        r = commuting_residual(Scale(c), eye, eye, tol)
        expected = abs(c * c - c)
        w = {"c": np.array([[c]])}
        return _gap_with_oracle(gap_outcome(r, tol, w), identity_outcome(abs(r - expected) / max(1.0, expected), tol, w))

    return run_sides("scale_falsifier", [("identity_pair", trial)], spec.dim, trials, spec.seed, tol)


def _adjoint_falsifier(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
    def trial(rng, dim, tol):
        x = unit_vector(rng, dim)
        while True:
            xp = unit_vector(rng, dim)
            if 0.1 < abs(inner(x, xp)) < 0.9:
                break
        gap = adjoint_counterexample(x, xp, tol)
        eye = np.eye(dim, dtype=complex)
        numeric = commuting_residual(AdjointMap(), rank_one(x, xp), eye, tol)
        w = {"A": rank_one(x, xp)}
        return _gap_with_oracle(gap_outcome(gap, tol, w), identity_outcome(abs(gap - numeric), tol, w))

    return run_sides("adjoint_falsifier", [("unit_pairs", trial)], spec.dim, trials, spec.seed, tol)


def _map_commutes(property_id: str, make_map: Callable):
    def run(spec: GeneratorSpec, trials: int, tol: Tolerance) -> CheckReport:
        def trial(rng, dim, tol):
            A, B = _draw(spec, rng, dim), _draw(spec, rng, dim)
            phi = make_map(rng)
            r = commuting_residual(phi, A, B, tol) / max(1.0, _norm(A) * _norm(B))
            return identity_outcome(r, tol, {"A": A, "B": B})

        return run_sides(property_id, [("pairs", trial)], spec.dim, trials, spec.seed, tol)

    return run


# -- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    id: str
    run: Callable[[GeneratorSpec, int, Tolerance], CheckReport]
    description: str
    min_dim: int = 2
    # False for claims that are expected to be refuted
    in_all: bool = True


def _wrap(check):
    return lambda spec, trials, tol: check(spec, trials, tol)


_PROPERTY_LIST = [
    Property("rank_one_formula", _wrap(check_rank_one_formula), "M(x (x) y) = 1/2 (x + <x,y>/|y|^2 y) (x) y"),
    Property("zero_iff", _wrap(check_zero_iff), "M(T) = 0 iff T = 0"),
    Property("nilpotent_iff", _wrap(check_nilpotent_iff), "M(T) = T/2 iff T^2 = 0"),
    Property("projection_square", _wrap(check_projection_square), "M(T^2) = T iff M(T)^2 = T iff T is an orthogonal projection"),
    Property("mean_projection_iff", _wrap(check_mean_projection_iff), "M(T) is a projection iff T is; then M(T) = T"),
    Property("selfadjoint_iff", _wrap(check_selfadjoint_iff), "M(T) self-adjoint iff polar factor self-adjoint"),
    Property("identity_characterization", _identity_property, "M(T o P) = P for all rank-one projections P iff T = I"),
    Property("trace_preservation", _invariant("trace_preservation", _trace_preservation), "tr M(T) = tr T"),
    Property("unitary_covariance", _invariant("unitary_covariance", _unitary_covariance), "M(UTU*) = U M(T) U*"),
    Property("conjugation_covariance", _invariant("conjugation_covariance", _conjugation_covariance), "M(conj T) = conj M(T)"),
    Property("complex_homogeneity", _invariant("complex_homogeneity", _complex_homogeneity), "M(cT) = c M(T)"),
    Property("norm_contraction", _invariant("norm_contraction", _norm_contraction), "||M(T)|| <= ||T||"),
    Property("quasinormal_fixed_points", _fixed_points, "M(T) = T iff T quasi-normal iff T normal"),
    Property("forward_theorem", _forward_theorem, "unitary and anti-unitary conjugations satisfy the commuting condition", min_dim=3),
    Property("phi_preservation", _phi_preservation, "conjugations preserve projections, order, orthogonality, normality"),
    Property("scale_falsifier", _scale_falsifier, "scale(c), c not in {0,1}, breaks the commuting condition at A = B = I"),
    Property("adjoint_falsifier", _adjoint_falsifier, "the adjoint map breaks the commuting condition on rank-one A"),
    Property("mean_is_linear", _mean_is_linear, "claim: M(A + B) = M(A) + M(B) (false)", in_all=False),
    Property("scale_commutes", _map_commutes("scale_commutes", lambda rng: Scale(_random_scalar(rng))),
             "claim: scalings satisfy the commuting condition (false)", in_all=False),
    Property("adjoint_commutes", _map_commutes("adjoint_commutes", lambda rng: AdjointMap()),
             "claim: the adjoint map satisfies the commuting condition (false)", in_all=False),
]

PROPERTIES: dict[str, Property] = {p.id: p for p in _PROPERTY_LIST}


def property_ids(include_claims: bool = True) -> list[str]:
    return [p.id for p in _PROPERTY_LIST if include_claims or p.in_all]


def _lookup(property_id: str) -> Property:
    try:
        return PROPERTIES[property_id]
    except KeyError:
        raise InputError(f"unknown property {property_id!r}; known: {', '.join(PROPERTIES)}") from None


def falsify(property_id: str, spec: GeneratorSpec, trials: int, tol: Tolerance | None = None) -> CheckReport:
    """Run one registered property at ``spec.dim`` with ``spec.seed``.

    ``spec.kind`` is the generic distribution used on the reverse side of
    equivalences. With ``trials == 0`` an empty report is returned.
    """
    prop = _lookup(property_id)
    if trials < 0:
        raise InputError("trials must be >= 0")
    if spec.dim < prop.min_dim:
        raise InputError(f"{property_id} needs dimension >= {prop.min_dim}, got {spec.dim}")
    return prop.run(spec, trials, tol or Tolerance())


def verify(
    properties: str | Sequence[str] = "all",
    dims: Sequence[int] = DEFAULT_DIMS,
    trials: int = 200,
    seed: int = 0,
    tol: Tolerance | None = None,
    kind: str = "ginibre",
) -> list[CheckReport]:
    """Sweep properties over dimensions; one merged report per property.

    ``"all"`` selects every registered property except the refutable
    claims and silently skips dimensions below a property's minimum.
    Naming a property explicitly with such a dimension is an error.
    """
    tol = tol or Tolerance()
    dims = list(dims)
    if not dims:
        raise InputError("no dimensions given")
    if properties == "all":
        selected, explicit = property_ids(include_claims=False), False
    else:
        selected = [properties] if isinstance(properties, str) else list(properties)
        explicit = True
    reports = []
    for pid in selected:
        prop = _lookup(pid)
        usable = [d for d in dims if d >= prop.min_dim]
        if explicit and len(usable) < len(dims):
            raise InputError(f"{pid} needs dimension >= {prop.min_dim}, got {sorted(set(dims) - set(usable))}")
        merged: Optional[CheckReport] = None
        for d in usable:
            r = falsify(pid, GeneratorSpec(kind=kind, dim=d, seed=seed), trials, tol)
            merged = r if merged is None else merged.merge(r)
        if merged is not None:
            reports.append(merged)
    return reports
