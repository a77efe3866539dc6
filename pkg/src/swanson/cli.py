"""Command-line front end.

Subcommands: spectrum, numrange, pseudospectrum, compress, evolve, verify.
All configuration comes from flags; outputs are written atomically.
JSON payloads carry {"schema": "swanson/1", "config": ..., "data": ...};
CSV column orders are frozen (pseudospectrum: re,im,sigma_min; numrange:
theta,support,x,y).  Exit codes: 0 success, 1 validation error,
2 numerical failure, 3 verify found a failing derived check.
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import _sigma, physics, spectral
from .errors import (ContractViolation, ConvergenceFailure, DegenerateState,
                     DivergentIntegral, NotPositiveDefinite, SwansonError,
                     TruncationTailError)
from .oscillator import ModelConfig, analytic_spectrum
from .serialize import complex_pair, matrix_pairs, write_csv, write_json
from .svg import emit_plot
from .verify import run_verification

__all__ = ["run", "main"]


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Accept values like "-2:14" or "-1,0,1" after --re/--im/--coeffs:
        # anything starting with a minus and a digit is a value, not a flag.
        self._negative_number_matcher = re.compile(r"^-\d+.*$|^-\.\d+.*$")

    def error(self, message):  # exit code 1, not argparse's default 2
        raise ContractViolation(message)


def _range_flag(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise ContractViolation(f"expected a:b, got {text!r}") from exc
    return lo, hi


def _coeffs_flag(text: str) -> list[complex]:
    try:
        return [complex(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ContractViolation(f"cannot parse coefficient list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swanson",
                     description="Spectral laboratory for a Swanson-type "
                                 "non-self-adjoint oscillator")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, dim_default=None):
        p.add_argument("--gamma", type=float, required=True,
                       help="non-Hermiticity parameter, |gamma| < 1")
        if dim_default is not None:
            p.add_argument("--dim", type=int, default=dim_default,
                           help="truncation size")
        p.add_argument("--out", required=True, help="output path (.json or .csv)")

    p = sub.add_parser("spectrum", help="converged truncation eigenvalues")
    common(p, dim_default=200)
    p.add_argument("--count", type=int, default=10)

    p = sub.add_parser("numrange", help="numerical-range boundary")
    common(p, dim_default=400)
    p.add_argument("--theta-samples", type=int, default=81)
    p.add_argument("--count", type=int, default=10,
                   help="eigenvalues overlaid as dots")
    p.add_argument("--svg", default=None)

    p = sub.add_parser("pseudospectrum", help="sigma_min grid")
    common(p, dim_default=300)
    p.add_argument("--re", type=_range_flag, default=(-2.0, 14.0))
    p.add_argument("--im", type=_range_flag, default=(-7.0, 7.0))
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("compress", help="compressed pseudo-Hermitian model")
    common(p)
    p.add_argument("--modes", type=int, default=8)

    p = sub.add_parser("evolve", help="spectral time evolution")
    common(p)
    p.add_argument("--modes", type=int, default=8)
    p.add_argument("--coeffs", type=_coeffs_flag, default=None,
                   help="initial eigenmode coefficients c0,c1,...")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=0.01)

    p = sub.add_parser("verify", help="cross-check report")
    common(p)

    return parser


def _is_csv(path: str) -> bool:
    return path.lower().endswith(".csv")


def _floats(arr) -> list[float]:
    return [float(v) for v in np.asarray(arr).ravel()]


def _cmd_spectrum(args) -> int:
    cfg = ModelConfig(args.gamma, args.dim)
    if args.count < 1:
        raise ContractViolation("--count must be >= 1")
    if _is_csv(args.out):
        raise ContractViolation("--out: spectrum output is JSON only")
    pairs = spectral.converged_spectrum(cfg, args.count)
    config = {"subcommand": "spectrum", "gamma": float(args.gamma),
              "dim": int(args.dim), "count": int(args.count)}
    data = {
        "eigenvalues": [{"re": float(v.real), "im": float(v.imag),
                         "estimate": e} for v, e in pairs],
        "analytic": _floats(analytic_spectrum(cfg, args.count - 1)),
    }
    write_json(args.out, config, data)
    return 0


def _cmd_numrange(args) -> int:
    cfg = ModelConfig(args.gamma, args.dim)
    boundary = spectral.numerical_range_boundary(cfg, args.theta_samples)
    eigs = [v for v, _ in spectral.converged_spectrum(cfg, args.count)]
    config = {"subcommand": "numrange", "gamma": float(args.gamma),
              "dim": int(args.dim), "theta_samples": int(args.theta_samples),
              "count": int(args.count)}
    if _is_csv(args.out):
        rows = [(float(boundary.thetas[k]), float(boundary.support_values[k]),
                 float(boundary.boundary_points[k].real),
                 float(boundary.boundary_points[k].imag))
                for k in range(len(boundary.boundary_points))]
        write_csv(args.out, ["theta", "support", "x", "y"], rows)
    else:
        data = {
            "thetas": _floats(boundary.thetas),
            "support": _floats(boundary.support_values),
            "estimates": _floats(boundary.support_estimates),
            "boundary": [complex_pair(p) for p in boundary.boundary_points],
            "eigenvalues": [complex_pair(v) for v in eigs],
        }
        write_json(args.out, config, data)
    if args.svg:
        emit_plot({"boundary": boundary.boundary_points,
                   "eigenvalues": np.asarray(eigs)}, "curve", args.svg)
    return 0


def _cmd_pseudospectrum(args) -> int:
    cfg = ModelConfig(args.gamma, args.dim)
    region = (args.re[0], args.re[1], args.im[0], args.im[1])
    grid = spectral.pseudospectrum(cfg, region, args.resolution)
    config = {"subcommand": "pseudospectrum", "gamma": float(args.gamma),
              "dim": int(args.dim), "re": [region[0], region[1]],
              "im": [region[2], region[3]],
              "resolution": int(args.resolution),
              "backend": _sigma.active_backend()}
    if _is_csv(args.out):
        rows = ((float(grid.re_nodes[c]), float(grid.im_nodes[r]),
                 float(grid.sigma_min[r, c]))
                for r in range(len(grid.im_nodes))
                for c in range(len(grid.re_nodes)))
        write_csv(args.out, ["re", "im", "sigma_min"], rows)
    else:
        data = {
            "re_nodes": _floats(grid.re_nodes),
            "im_nodes": _floats(grid.im_nodes),
            "sigma_min": [[float(v) for v in row] for row in grid.sigma_min],
        }
        write_json(args.out, config, data)
    if args.svg:
        emit_plot(grid, "contour", args.svg)
    return 0


def _cmd_compress(args) -> int:
    if _is_csv(args.out):
        raise ContractViolation("--out: compress output is JSON only")
    model = physics.compress(args.gamma, args.modes)
    q = model.gram.Q.entries
    hh = model.H_hat.entries
    config = {"subcommand": "compress", "gamma": float(args.gamma),
              "modes": int(args.modes)}
    data = {
        "lambdas": _floats(model.lambdas),
        "q_inv": matrix_pairs(model.gram.Q_inv.entries),
        "q": matrix_pairs(q),
        "q_sqrt": matrix_pairs(model.gram.Q_sqrt.entries),
        "q_inv_sqrt": matrix_pairs(model.gram.Q_inv_sqrt.entries),
        "h_hat": matrix_pairs(hh),
        "diagnostics": {
            "pseudo_hermiticity_residual":
                float(np.max(np.abs(q @ hh - hh.conj().T @ q))),
            "biorthogonality_residual":
                float(np.max(np.abs(model.Psi_tilde_hat.conj().T @ model.Psi_hat
                                    - np.eye(model.n_modes)))),
        },
    }
    write_json(args.out, config, data)
    return 0


def _cmd_evolve(args) -> int:
    if _is_csv(args.out):
        raise ContractViolation("--out: evolve output is JSON only")
    if args.t_max <= 0.0 or args.dt <= 0.0:
        raise ContractViolation("--t-max and --dt must be positive")
    model = physics.compress(args.gamma, args.modes)
    coeffs = args.coeffs
    if coeffs is None:
        coeffs = [1.0, 0.0, 1.0]
    if len(coeffs) > args.modes:
        raise ContractViolation("--coeffs: more coefficients than --modes")
    c0 = np.zeros(args.modes, dtype=complex)
    c0[: len(coeffs)] = coeffs
    t_grid = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    trace = physics.evolve(model, c0, t_grid)
    config = {"subcommand": "evolve", "gamma": float(args.gamma),
              "modes": int(args.modes), "t_max": float(args.t_max),
              "dt": float(args.dt),
              "coeffs": [complex_pair(v) for v in c0]}
    data = {
        "times": _floats(trace.times),
        "phys_norms": _floats(trace.phys_norms),
        "std_norms": _floats(trace.std_norms),
        "coeffs": [[complex_pair(v) for v in row] for row in trace.coeffs],
        "summary": {
            "phys_norm_drift": float((trace.phys_norms.max()
                                      - trace.phys_norms.min())
                                     / trace.phys_norms[0]),
            "std_norm_oscillation": float(trace.std_norms.max()
                                          - trace.std_norms.min()),
        },
    }
    write_json(args.out, config, data)
    return 0


def _cmd_verify(args) -> int:
    if _is_csv(args.out):
        raise ContractViolation("--out: verify output is JSON only")
    report = run_verification(args.gamma)
    config = {"subcommand": "verify", "gamma": float(args.gamma)}
    data = {
        "checks": [{"name": c.name, "computed": c.computed,
                    "expected": c.expected, "source": c.source,
                    "residual": c.residual, "tolerance": c.tolerance,
                    "status": c.status} for c in report.checks],
        "summary": report.counts,
    }
    write_json(args.out, config, data)
    return 3 if report.has_failures else 0


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "numrange": _cmd_numrange,
    "pseudospectrum": _cmd_pseudospectrum,
    "compress": _cmd_compress,
    "evolve": _cmd_evolve,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    """Parse argv, run one subcommand, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.subcommand](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ContractViolation as exc:
        print(f"swanson: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceFailure, NotPositiveDefinite, DivergentIntegral,
            DegenerateState, TruncationTailError) as exc:
        print(f"swanson: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"swanson: --out/--svg: {exc}", file=sys.stderr)
        return 1
    except SwansonError as exc:
        print(f"swanson: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
