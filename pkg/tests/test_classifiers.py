import numpy as np
import pytest

from conftest import random_matrix, random_unitary
from meantransform import classifiers as cls
from meantransform.generators import draw
from meantransform.numerics import InputError, Tolerance, polar_decompose, rank_one

N = np.array([[0, 1], [0, 0]], dtype=complex)


def test_self_adjoint():
    v = cls.is_self_adjoint(np.diag([1.0, 2.0]))
    assert v.holds is True and v.residual == 0
    v = cls.is_self_adjoint(N)
    assert v.holds is False and v.residual == pytest.approx(1)
    A = random_matrix(1, 5)
    assert cls.is_self_adjoint(A + A.conj().T).holds is True


def test_orthogonal_projection():
    x = np.array([1, 1j, -1]) / np.sqrt(3)
    assert cls.is_orthogonal_projection(rank_one(x, x)).holds is True
    assert cls.is_orthogonal_projection(rank_one(2 * x, 2 * x)).holds is False
    oblique = np.array([[1.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(oblique @ oblique, oblique)
    assert cls.is_orthogonal_projection(oblique).holds is False


def test_partial_isometry():
    assert cls.is_partial_isometry(random_unitary(2, 4)).holds is True
    assert cls.is_partial_isometry(N).holds is True
    v = cls.is_partial_isometry(np.diag([2.0, 0.0]))
    assert v.holds is False and v.residual == pytest.approx(6)


def test_isometry_and_unitary(rng):
    for T in (np.eye(3), np.diag([1, np.exp(1j * rng.uniform(0, 2 * np.pi))])):
        assert cls.is_isometry(T).holds is True and cls.is_unitary(T).holds is True
    assert cls.is_isometry(np.diag([1.0, 0.0])).holds is False
    assert cls.is_unitary(np.diag([1.0, 0.0])).holds is False


def test_normal():
    G = random_matrix(3, 4)
    assert cls.is_normal(G + G.conj().T).holds is True
    v = cls.is_normal(N)
    assert v.holds is False and v.residual == pytest.approx(1)
    shift = np.roll(np.eye(3), 1, axis=0)
    assert cls.is_normal(shift).holds is True


def test_quasinormal_examples():
    assert cls.is_quasinormal(draw("normal", 5, np.random.default_rng(4))).holds is True
    v = cls.is_quasinormal(N)
    assert v.holds is False and v.residual == pytest.approx(1)


@pytest.mark.parametrize("source", ["normal", "generic"])
def test_quasinormal_matches_commutator_oracle(source):
    # T' = V (P + I) is quasi-normal exactly when V commutes with P + I
    rng = np.random.default_rng(5)
    T = draw("normal", 4, rng) if source == "normal" else random_matrix(6, 4)
    V, P = polar_decompose(T)
    Pp = P + np.eye(4)
    commutator = np.linalg.norm(V @ Pp - Pp @ V, 2)
    expected = bool(commutator < 1e-10)
    assert cls.is_quasinormal(V @ Pp).holds is expected
    assert expected == (source == "normal")


def test_quasinormal_implies_normal_in_finite_dimension():
    rng = np.random.default_rng(7)
    for _ in range(50):
        for T in (draw("normal", 5, rng), random_matrix(int(rng.integers(1 << 30)), 5)):
            q, n = cls.is_quasinormal(T), cls.is_normal(T)
            if q.holds is True:
                assert n.holds is not False


def test_nilpotent2():
    assert cls.is_nilpotent2(N).holds is True
    x = np.array([1.0, 1j, 0])
    y = np.array([1j, 1.0, 2.0])
    assert abs(np.vdot(y, x)) < 1e-15
    assert cls.is_nilpotent2(rank_one(x, y)).holds is True
    assert cls.is_nilpotent2(np.diag([1.0, 0.0])).holds is False


def test_projection_order():
    assert cls.projection_leq(np.diag([1, 0, 0]), np.diag([1, 1, 0])).holds is True
    assert cls.projection_leq(np.diag([0, 0, 1]), np.diag([1, 1, 0])).holds is False
    P = np.diag([1, 1, 0])
    assert cls.projection_leq(P, P).holds is True
    with pytest.raises(InputError):
        cls.projection_leq(N, P[:2, :2])


def test_projections_orthogonal():
    assert cls.projections_orthogonal(np.diag([1, 0]), np.diag([0, 1])).holds is True
    assert cls.projections_orthogonal(np.diag([1, 0]), np.diag([1, 0])).holds is False
    x = np.array([1, 1j]) / np.sqrt(2)
    y = np.array([1, -1j]) / np.sqrt(2)
    assert cls.projections_orthogonal(rank_one(x, x), rank_one(y, y)).holds is True
    with pytest.raises(InputError):
        cls.projections_orthogonal(np.diag([2, 0]), np.diag([0, 1]))


def test_tri_state_band():
    tol = Tolerance()
    T = np.eye(2) + 1e-7 * N
    v = cls.is_self_adjoint(T, tol)
    assert tol.abs_tol < v.residual < tol.band
    assert v.holds is None and v.indeterminate and not v


@pytest.mark.parametrize("r,expected", [(0.0, True), (1e-8, True), (2e-8, None), (9.9e-7, None), (1e-6, False)])
def test_verdict_thresholds(r, expected):
    assert cls.verdict(r, Tolerance()).holds is expected


def test_homogeneous_residuals_are_scale_normalised():
    G = random_matrix(8, 4)
    assert np.linalg.norm(G, 2) > 1
    for pred in (cls.is_self_adjoint, cls.is_normal, cls.is_quasinormal, cls.is_nilpotent2):
        assert pred(1e3 * G).residual == pytest.approx(pred(G).residual, rel=1e-9)


def test_classify_table():
    table = cls.classify(np.diag([1.0, 0.0]))
    assert table["projection"].holds is True
    assert set(table) == {"self_adjoint", "projection", "partial_isometry", "isometry", "unitary", "normal", "quasinormal", "nilpotent2"}
