"""Command-line interface.

Exit codes: 0 success, 1 counterexample found, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .classifiers import classify
from .matrix_io import complex_to_json, load_matrix, matrix_to_json
from .numerics import InputError, Tolerance
from .phi import commuting_residual, phi_from_json
from .theorems import PROPERTIES, verify
from .transforms import aluthge_transform, duggal_transform, iterate_mean, jordan_product, mean_transform

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2


@dataclass
class CliConfig:
    """Single source of numeric defaults for the command line."""

    tol: float = 1e-8
    seed: int = 0
    trials: int = 200
    dims: list[int] = field(default_factory=lambda: list(range(3, 9)))
    lam: float = 0.5
    output: str = "human"

    def tolerance(self) -> Tolerance:
        return Tolerance(abs_tol=self.tol, rel_tol=self.tol)


DEFAULTS = CliConfig()


def parse_dims(text: str) -> list[int]:
    """``"3..8"``, ``"2,4,6"`` or a mix such as ``"2,5..7"``."""
    dims: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                dims.extend(range(int(lo), int(hi) + 1))
            else:
                dims.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if not dims or min(dims) < 2:
        raise argparse.ArgumentTypeError("dimensions must be integers >= 2")
    return sorted(set(dims))


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonnegative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _emit(obj, out, indent=2) -> None:
    out.write(json.dumps(obj, indent=indent) + "\n")


def cmd_transform(args, out) -> int:
    T = load_matrix(args.input)
    tol = args.config.tolerance()
    if args.which == "jordan":
        if args.second is None:
            raise InputError("jordan needs two matrix files")
        result = jordan_product(T, load_matrix(args.second))
    elif args.second is not None:
        raise InputError(f"{args.which} takes a single matrix file")
    elif args.which == "mean":
        result = mean_transform(T, tol)
    elif args.which == "aluthge":
        result = aluthge_transform(T, args.config.lam, tol)
    else:
        result = duggal_transform(T, tol)
    _emit(matrix_to_json(result), out, indent=None)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    verdicts = classify(load_matrix(args.input), args.config.tolerance())
    if args.config.output == "json":
        _emit({k: {"holds": v.holds, "residual": v.residual} for k, v in verdicts.items()}, out)
        return EXIT_OK
    width = max(map(len, verdicts))
    for name, v in verdicts.items():
        label = {True: "true", False: "false", None: "indeterminate"}[v.holds]
        out.write(f"{name.replace('_', ' '):<{width}}  {label:<13}  residual {v.residual:.3e}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = args.config
    reports = verify(args.property, cfg.dims, cfg.trials, cfg.seed, cfg.tolerance())
    failed = any(r.failures for r in reports)
    if cfg.output == "json":
        _emit(
            {
                "config": {"tol": cfg.tol, "seed": cfg.seed, "trials": cfg.trials, "dims": cfg.dims},
                "reports": [r.to_json() for r in reports],
                "failed": failed,
            },
            out,
        )
    else:
        for r in reports:
            out.write(r.summary() + "\n")
            if r.failures:
                out.write(f"  counterexample: dim {r.witness_dim}, trial {r.witness_trial}, seed {r.seed}, residual {r.witness_residual:.3e}\n")
                for name, M in sorted(r.witness.items()):
                    out.write(f"  {name} = {json.dumps(matrix_to_json(M))}\n")
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_iterate(args, out) -> int:
    T = load_matrix(args.input)
    trace = iterate_mean(T, args.max_steps, args.stop_tol, args.config.tolerance())
    traces = [complex(np.trace(M)) for M in trace.iterates]
    if args.config.output == "json":
        _emit(
            {
                "steps": trace.steps,
                "converged": trace.converged,
                "deltas": trace.deltas,
                "traces": [complex_to_json(t) for t in traces],
                "final": matrix_to_json(trace.iterates[-1]),
            },
            out,
        )
    else:
        out.write(f"{'step':>4}  {'delta':>12}  trace\n")
        for k, delta in enumerate(trace.deltas, start=1):
            t = traces[k]
            out.write(f"{k:>4}  {delta:12.6e}  {t.real:.12g}{t.imag:+.12g}j\n")
        out.write(("converged" if trace.converged else "not converged") + f" after {trace.steps} steps\n")
    return EXIT_OK


def cmd_commute(args, out) -> int:
    path = args.map
    try:
        with open(path) as fh:
            phi = phi_from_json(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
    r = commuting_residual(phi, load_matrix(args.a), load_matrix(args.b), args.config.tolerance())
    if args.config.output == "json":
        _emit({"map": phi.to_json()["variant"], "residual": r}, out)
    else:
        out.write(f"commuting residual {r:.6e}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=DEFAULTS.tol, help="absolute tolerance (default %(default)g)")
    common.add_argument("--seed", type=int, default=DEFAULTS.seed)
    common.add_argument("--trials", type=_nonnegative_int, default=DEFAULTS.trials)
    common.add_argument("--dims", type=parse_dims, default=DEFAULTS.dims, help="e.g. 3..8 or 2,4,6")
    common.add_argument("--lambda", dest="lam", type=float, default=DEFAULTS.lam, help="Aluthge exponent in [0, 1]")
    common.add_argument("--output", choices=("human", "json"), default=DEFAULTS.output)

    parser = argparse.ArgumentParser(prog="meantransform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="apply a transform to matrix file(s)")
    p.add_argument("which", choices=("mean", "aluthge", "duggal", "jordan"))
    p.add_argument("input")
    p.add_argument("second", nargs="?", help="second matrix (jordan only)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("classify", parents=[common], help="operator-class verdicts for a matrix")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="run property checks")
    p.add_argument("property", help="'all' or one of: " + ", ".join(PROPERTIES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iterate", parents=[common], help="iterate the mean transform")
    p.add_argument("input")
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--stop-tol", type=_positive_float, default=1e-12)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("commute", parents=[common], help="commuting residual of a map on matrices A, B")
    p.add_argument("map", help="map JSON file")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_commute)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.config = CliConfig(args.tol, args.seed, args.trials, args.dims, args.lam, args.output)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
