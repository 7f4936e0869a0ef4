"""Exit criteria of the package, one printed PASS/FAIL line each.

Run with ``pytest -m acceptance -s`` (lines are printed even without ``-s``).
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from meantransform import classifiers as cls
from meantransform.generators import GeneratorSpec, draw, ginibre, trial_rng, unit_vector
from meantransform.numerics import Tolerance, polar_decompose, rank_one
from meantransform.phi import AdjointMap, Scale, adjoint_counterexample, commuting_residual, verify_forward_theorem
from meantransform.theorems import check_identity_characterization, falsify
from meantransform.transforms import mean_transform

pytestmark = pytest.mark.acceptance

TOL9 = Tolerance(abs_tol=1e-9)


def opnorm(A):
    return np.linalg.norm(A, 2)


@pytest.fixture
def announce(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {text}")
        assert ok, text

    return emit


def test_rank_one_formula(announce):
    worst, t0 = 0.0, time.perf_counter()
    for dim in range(2, 9):
        rng = np.random.default_rng(1000 + dim)
        for _ in range(500):
            x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            y = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            # closed form written out independently of the package helper
            ny2 = np.vdot(y, y).real
            formula = 0.5 * np.outer(x + np.vdot(y, x) / ny2 * y, y.conj())
            r = opnorm(mean_transform(np.outer(x, y.conj())) - formula)
            worst = max(worst, r / max(1.0, np.linalg.norm(x) * np.linalg.norm(y)))
    elapsed = time.perf_counter() - t0
    announce(1, worst <= 1e-9 and elapsed < 5.0, f"rank-one formula, 3500 pairs, worst {worst:.2e}, {elapsed:.2f} s")


def test_nilpotent_iff(announce):
    rng = np.random.default_rng(2)
    worst, min_violation, generic = 0.0, np.inf, 0
    for i in range(200):
        dim = 2 + i % 7
        N = draw("nilpotent2", dim, rng)
        worst = max(worst, opnorm(mean_transform(N) - N / 2) / max(1.0, opnorm(N)))
    while generic < 200:
        T = ginibre(rng, 2 + generic % 7)
        if opnorm(T @ T) <= 1e-4:
            continue
        generic += 1
        min_violation = min(min_violation, opnorm(mean_transform(T) - T / 2))
    ok = worst <= 1e-9 and min_violation > 1e-6
    announce(2, ok, f"nilpotent iff, 200 nilpotent worst {worst:.2e}, 200 generic min violation {min_violation:.2e}")


def _projection_residuals(T):
    M = mean_transform(T)
    return opnorm(mean_transform(T @ T) - T), opnorm(M @ M - T), opnorm(M - T)


def test_projection_characterizations(announce):
    dim, rng = 5, np.random.default_rng(3)
    worst = 0.0
    for rank in range(dim + 1):
        for _ in range(200):
            P = draw("projection", dim, rng, rank=rank)
            worst = max(worst, *_projection_residuals(P))
    false_verdicts = indeterminate = 0
    min_violation = np.inf
    samples = [ginibre(rng, dim) for _ in range(200)] + [draw("oblique_idempotent", dim, rng) for _ in range(50)]
    for T in samples:
        r_square, r_mean_square, _ = _projection_residuals(T)
        M = mean_transform(T)
        verdicts = [
            cls.verdict(r_square, TOL9, "M(T^2) = T"),
            cls.verdict(r_mean_square, TOL9, "M(T)^2 = T"),
            cls.is_orthogonal_projection(M, TOL9),
        ]
        min_violation = min(min_violation, r_square, r_mean_square, verdicts[2].residual)
        for v in verdicts:
            if v.holds is None:
                indeterminate += 1
            elif v.holds:
                false_verdicts += 1
    ok = worst <= 1e-9 and false_verdicts == 0 and min_violation > 1e-6
    announce(
        3,
        ok,
        f"projections, ranks 0..{dim} x 200 worst {worst:.2e}; 250 non-projections: "
        f"{false_verdicts} false verdicts, {indeterminate} indeterminate, min violation {min_violation:.2e}",
    )


def test_selfadjoint_equivalence(announce):
    rng = np.random.default_rng(4)
    kinds = ["ginibre", "hermitian", "normal", "psd", "nilpotent2", "projection"]
    agree = decided = indeterminate = 0
    for i in range(300):
        dim = 2 + i % 7
        T = draw(kinds[i % len(kinds)], dim, rng)
        if i % 5 == 0:
            # random matrix whose polar factor is a symmetry
            U = draw("haar_unitary", dim, rng)
            signs = np.where(rng.random(dim) < 0.5, -1.0, 1.0)
            V = U @ np.diag(signs) @ U.conj().T
            T = V @ draw("psd", dim, rng)
        V, _ = polar_decompose(T)
        a, b = cls.is_self_adjoint(mean_transform(T)), cls.is_self_adjoint(V)
        if a.holds is None or b.holds is None:
            indeterminate += 1
            continue
        decided += 1
        agree += a.holds == b.holds
    rate = agree / decided
    announce(4, rate == 1.0, f"self-adjoint equivalence, agreement {agree}/{decided}, {indeterminate} indeterminate")


def test_identity_characterization(announce):
    eye = check_identity_characterization(np.eye(4), 50, TOL9, seed=5)
    found = 0
    for k in range(50):
        T = ginibre(np.random.default_rng(500 + k), 2 + k % 7)
        r = check_identity_characterization(T, 50, TOL9, seed=k)
        found += r.passes
    ok = eye.passes == 1 and eye.worst_residual <= 1e-9 and found == 50
    announce(5, ok, f"identity characterization, T = I worst {eye.worst_residual:.2e}; violations found for {found}/50 T != I")


def test_forward_theorem(announce):
    t0 = time.perf_counter()
    trials = failures = 0
    worst = 0.0
    for dim in range(3, 9):
        r = verify_forward_theorem(dim, 100, seed=6, tol=TOL9)
        trials += r.trials
        failures += r.failures + r.indeterminate
        worst = max(worst, r.worst_residual)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and worst <= 1e-9 and elapsed < 30.0
    announce(6, ok, f"forward theorem, {trials} trials, worst normalized {worst:.2e}, {elapsed:.2f} s")


def test_falsifiers(announce):
    eye = np.eye(3)
    scale_r = commuting_residual(Scale(2), eye, eye)
    e1 = np.array([1.0, 0.0, 0.0])
    xp = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    gap = adjoint_counterexample(e1, xp)
    oracle = commuting_residual(AdjointMap(), rank_one(e1, xp), eye)
    ok = abs(scale_r - 2.0) <= 1e-12 and gap > 1e-6 and abs(gap - oracle) <= 1e-9
    announce(7, ok, f"falsifiers, scale(2) residual {scale_r!r}, adjoint gap {gap:.6f} vs oracle {oracle:.6f}")


INVARIANTS = ["trace_preservation", "unitary_covariance", "conjugation_covariance", "complex_homogeneity", "norm_contraction"]


def test_structural_invariants(announce):
    lines, ok = [], True
    for pid in INVARIANTS:
        # four matrix families, 75 matrices each
        r = falsify(pid, GeneratorSpec(dim=5, seed=8), 75, TOL9)
        good = r.trials == 300 and r.failures == 0 and r.indeterminate == 0 and r.worst_residual <= 1e-9
        ok &= good
        lines.append(f"{pid} {r.worst_residual:.1e}")
    # independent spot check on a second family of dimensions
    rng = trial_rng(8, 99)
    for _ in range(300):
        dim = int(rng.integers(2, 9))
        T = ginibre(rng, dim)
        M = mean_transform(T)
        ok &= abs(np.trace(M) - np.trace(T)) <= 1e-9 * max(1.0, opnorm(T))
        ok &= opnorm(M) <= opnorm(T) * (1 + 1e-9)
    announce(8, ok, "invariants on 300 matrices each: " + ", ".join(lines))


def test_determinism(announce):
    cmd = [sys.executable, "-m", "meantransform.cli", "verify", "all", "--output", "json", "--seed", "11", "--trials", "20"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    n = len(json.loads(runs[0].stdout)["reports"]) if same else 0
    announce(9, same and codes == [0, 0], f"determinism, two runs of verify all: identical={same}, {n} reports, exit codes {codes}")
