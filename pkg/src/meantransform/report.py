"""Trial outcomes, aggregated check reports and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .classifiers import ClassVerdict
from .matrix_io import matrix_to_json
from .numerics import Tolerance

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


@dataclass
class Outcome:
    """Result of one trial.

    ``expect_zero`` says whether the trial's residual is one that should
    vanish (``True``), one that should stay away from zero (``False``),
    or neither (``None``); it decides whether the residual feeds
    ``worst_residual`` or ``min_gap`` of the report.
    """

    status: str
    residual: float
    expect_zero: Optional[bool] = True
    witness: dict[str, np.ndarray] = field(default_factory=dict)
    note: str = ""


def identity_outcome(residual: float, tol: Tolerance, witness=None) -> Outcome:
    """Outcome for an identity that should hold: residual must vanish."""
    residual = float(residual)
    if residual <= tol.abs_tol:
        status = PASS
    elif residual >= tol.band:
        status = FAIL
    else:
        status = INDETERMINATE
    return Outcome(status, residual, True, witness or {})


def iff_outcome(lhs: ClassVerdict, rhs: ClassVerdict, witness=None) -> Outcome:
    """Both sides of an equivalence must reach the same definite verdict."""
    if lhs.holds is None or rhs.holds is None:
        status = INDETERMINATE
    elif lhs.holds == rhs.holds:
        status = PASS
    else:
        status = FAIL
    return Outcome(status, lhs.residual, rhs.holds, witness or {}, f"{lhs.description} vs {rhs.description}")


def combine(*outcomes: Outcome) -> Outcome:
    """Conjunction of several outcomes on the same input.

    Fails if any part fails, else indeterminate if any part is, else
    passes. Residual bookkeeping keeps the worst vanishing residual and
    the smallest non-vanishing one.
    """
    statuses = {o.status for o in outcomes}
    status = FAIL if FAIL in statuses else INDETERMINATE if INDETERMINATE in statuses else PASS
    zeros = [o.residual for o in outcomes if o.expect_zero]
    gaps = [o.residual for o in outcomes if o.expect_zero is False]
    witness = {}
    for o in outcomes:
        witness.update(o.witness)
    if zeros:
        return Outcome(status, max(zeros), True, witness)
    if gaps:
        return Outcome(status, min(gaps), False, witness)
    return Outcome(status, max(o.residual for o in outcomes), None, witness)


@dataclass
class CheckReport:
    property_id: str
    seed: int = 0
    trials: int = 0
    passes: int = 0
    failures: int = 0
    indeterminate: int = 0
    worst_residual: float = 0.0
    min_gap: Optional[float] = None
    witness: Optional[dict[str, np.ndarray]] = None
    witness_dim: Optional[int] = None
    witness_trial: Optional[int] = None
    witness_residual: Optional[float] = None
    dims: list[int] = field(default_factory=list)
    details: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, outcome: Outcome, dim: int, trial: int) -> None:
        self.trials += 1
        if outcome.status == PASS:
            self.passes += 1
        elif outcome.status == FAIL:
            self.failures += 1
            if self.witness is None:
                self.witness = dict(outcome.witness)
                self.witness_dim = dim
                self.witness_trial = trial
                self.witness_residual = outcome.residual
        else:
            self.indeterminate += 1
        if outcome.expect_zero:
            self.worst_residual = max(self.worst_residual, outcome.residual)
        elif outcome.expect_zero is False:
            self.min_gap = outcome.residual if self.min_gap is None else min(self.min_gap, outcome.residual)
        if dim not in self.dims:
            self.dims.append(dim)

    def merge(self, other: "CheckReport") -> "CheckReport":
        """Combine two reports of the same property (order of dims kept)."""
        out = CheckReport(self.property_id, self.seed)
        out.trials = self.trials + other.trials
        out.passes = self.passes + other.passes
        out.failures = self.failures + other.failures
        out.indeterminate = self.indeterminate + other.indeterminate
        out.worst_residual = max(self.worst_residual, other.worst_residual)
        gaps = [g for g in (self.min_gap, other.min_gap) if g is not None]
        out.min_gap = min(gaps) if gaps else None
        first = min(
            (r for r in (self, other) if r.witness is not None),
            key=lambda r: (r.witness_dim, r.witness_trial),
            default=None,
        )
        if first is not None:
            out.witness = first.witness
            out.witness_dim, out.witness_trial, out.witness_residual = first.witness_dim, first.witness_trial, first.witness_residual
        out.dims = sorted(set(self.dims) | set(other.dims))
        out.details = dict(self.details)
        for k, v in other.details.items():
            out.details[k] = max(out.details.get(k, v), v)
        return out

    def to_json(self) -> dict:
        return {
            "property_id": self.property_id,
            "seed": self.seed,
            "dims": list(self.dims),
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "indeterminate": self.indeterminate,
            "worst_residual": self.worst_residual,
            "min_gap": self.min_gap,
            "witness": None if self.witness is None else {k: matrix_to_json(v) for k, v in sorted(self.witness.items())},
            "witness_dim": self.witness_dim,
            "witness_trial": self.witness_trial,
            "witness_residual": self.witness_residual,
            "details": dict(sorted(self.details.items())),
        }

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        gap = "-" if self.min_gap is None else f"{self.min_gap:.3e}"
        return (
            f"{verdict} {self.property_id}: {self.passes}/{self.trials} passed, {self.failures} failed, "
            f"{self.indeterminate} indeterminate; worst residual {self.worst_residual:.3e}, min gap {gap}"
        )


TrialFn = Callable[[np.random.Generator, int, Tolerance], Outcome]


def run_sides(
    property_id: str,
    sides: Iterable[tuple[str, TrialFn]],
    dim: int,
    trials: int,
    seed: int,
    tol: Tolerance,
) -> CheckReport:
    """Run ``trials`` trials of every side at one dimension.

    Trial ``i`` of side ``j`` draws from ``trial_rng(seed, dim, j, i)``,
    so results do not depend on execution order; its index in the report
    is ``j * trials + i``.
    """
    from .generators import trial_rng

    report = CheckReport(property_id, seed)
    report.dims.append(dim)
    for j, (name, fn) in enumerate(sides):
        worst = 0.0
        for i in range(trials):
            outcome = fn(trial_rng(seed, dim, j, i), dim, tol)
            report.record(outcome, dim, j * trials + i)
            if outcome.expect_zero:
                worst = max(worst, outcome.residual)
        if trials:
            report.details[f"{name}.worst_residual"] = worst
    return report
