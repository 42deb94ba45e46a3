"""Command-line front end: build families, run diagnostics, emit data.

Subcommands: rates | capacity | divisibility | blp | semimarkov | solve.
Output is CSV (with a ``# config:`` echo line) or JSON (with a ``config``
block); identical configurations produce byte-identical output.  Exit
codes: 0 success, 2 invalid arguments, 3 non-Markovian verdict under
--fail-on-nonmarkovian, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from ._kernels import BACKEND
from .channels import projector_dephase, projector_depolarize, projector_replacer
from .diagnostics import (
    blp_scan,
    capacity_trajectory,
    cp_divisibility_scan,
    semimarkov_check,
)
from .errors import DomainError, NumericalError, UnsupportedChannelError
from .families import (
    MemoryKernel,
    pauli_mixture,
    projector_semigroup,
    projector_weight,
    propagate_ode,
    solve_memory_kernel,
)
from .linalg import frob
from .mixtures import decompose, decomposition_families, g_sin2

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONMARKOVIAN = 3
EXIT_NUMERICAL = 4


def _fmt(x) -> str:
    return format(float(x), ".15g")


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args: argparse.Namespace) -> dict:
    # the echo describes the computation; the destination path is not part of it
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_table(args, columns, rows) -> dict:
    """Emit a table as CSV or JSON; return the JSON payload for reuse."""
    config = _config_dict(args)
    payload = {
        "config": config,
        "columns": list(columns),
        "rows": [[float(v) for v in row] for row in rows],
    }
    if args.output == "json":
        _write(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = ["# config: " + json.dumps(config, sort_keys=True)]
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        _write("\n".join(lines) + "\n", args.out)
    return payload


def _emit_report(args, report: dict) -> None:
    config = _config_dict(args)
    payload = dict(report)
    payload["config"] = config
    if args.output == "json":
        _write(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        columns = payload.pop("series_columns")
        rows = payload.pop("series_rows")
        lines = ["# config: " + json.dumps(config, sort_keys=True)]
        summary = {
            k: v for k, v in sorted(payload.items()) if k not in ("config",)
        }
        lines.append("# report: " + json.dumps(summary, sort_keys=True))
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        _write("\n".join(lines) + "\n", args.out)


def _grid(args) -> np.ndarray:
    if args.tmax <= 0:
        raise DomainError(f"tmax must be positive, got {args.tmax}")
    if args.steps < 2:
        raise DomainError(f"steps must be at least 2, got {args.steps}")
    return np.linspace(0.0, args.tmax, args.steps + 1)


def _projector(channel: str, d: int):
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    if channel == "depolarizing":
        return projector_depolarize(d)
    if channel == "dephasing":
        return projector_dephase(d)
    if channel == "replacer":
        omega = np.zeros((d, d), dtype=complex)
        omega[0, 0] = 1.0
        return projector_replacer(omega)
    raise UnsupportedChannelError(f"unknown channel {channel!r}")


def _mixture_parts(args):
    prof = g_sin2(args.gamma, args.p, args.epsilon)
    return prof, decompose(prof)


def _build_family(args, e):
    if args.family == "semigroup":
        return projector_semigroup(args.gamma, e)
    if args.family in ("lambda1", "lambda2"):
        _, dec = _mixture_parts(args)
        fam1, fam2 = decomposition_families(dec, e)
        return fam1 if args.family == "lambda1" else fam2
    if args.family == "pauli-mixture":
        if getattr(args, "d", 2) != 2:
            raise DomainError("the Pauli mixture family is qubit-only (d=2)")
        return pauli_mixture(args.c)
    raise DomainError(f"unknown family {args.family!r}")


def cmd_rates(args) -> int:
    tgrid = _grid(args)
    _, dec = _mixture_parts(args)
    rows = [
        (t, args.gamma, dec.gamma1(t), dec.gamma2(t)) for t in tgrid
    ]
    _emit_table(args, ("t", "gamma_semigroup", "gamma1", "gamma2"), rows)
    return EXIT_OK


def cmd_capacity(args) -> int:
    if args.channel != "depolarizing":
        raise UnsupportedChannelError(
            "capacity is defined here only for the depolarizing channel"
        )
    tgrid = _grid(args)
    _, dec = _mixture_parts(args)
    semi = capacity_trajectory(lambda t: math.exp(-args.gamma * t), tgrid, args.d)
    c1 = capacity_trajectory(dec.mu1, tgrid, args.d)
    c2 = capacity_trajectory(dec.mu2, tgrid, args.d)
    rows = [
        (t, semi.capacity[i], c1.capacity[i], c2.capacity[i])
        for i, t in enumerate(tgrid)
    ]
    _emit_table(args, ("t", "C_semigroup", "C_lambda1", "C_lambda2"), rows)
    return EXIT_OK


def cmd_divisibility(args) -> int:
    tgrid = _grid(args)
    e = _projector(args.channel, args.d)
    family = _build_family(args, e)
    report = cp_divisibility_scan(family, tgrid)
    payload = {
        "verdict": report.verdict,
        "violation_intervals": [[lo, hi] for lo, hi in report.violation_intervals],
        "min_choi_eig": float(report.min_choi_eig.min()),
        "series_columns": ["t", "min_choi_eig"],
        "series_rows": [
            [float(t), float(v)]
            for t, v in zip(report.tgrid, report.min_choi_eig)
        ],
    }
    _emit_report(args, payload)
    if args.fail_on_nonmarkovian and report.verdict == "nondivisible":
        return EXIT_NONMARKOVIAN
    return EXIT_OK


def cmd_blp(args) -> int:
    if args.d != 2:
        raise DomainError("the trace-distance scan uses qubit pairs; set --d 2")
    tgrid = _grid(args)
    e = _projector(args.channel, args.d)
    family = _build_family(args, e)
    report = blp_scan(family, tgrid, seed=args.seed)
    payload = {
        "positive_intervals": [[lo, hi] for lo, hi in report.positive_intervals],
        "max_sigma": float(report.sigma.max()),
        "series_columns": ["t", "sigma"],
        "series_rows": [
            [float(t), float(v)] for t, v in zip(report.tgrid, report.sigma)
        ],
    }
    _emit_report(args, payload)
    if args.fail_on_nonmarkovian and report.positive_intervals:
        return EXIT_NONMARKOVIAN
    return EXIT_OK


def cmd_semimarkov(args) -> int:
    tgrid = _grid(args)
    if args.family == "semigroup":
        f = lambda t: args.gamma * math.exp(-args.gamma * t)
        breakpoints = ()
    elif args.family in ("lambda1", "lambda2"):
        prof, dec = _mixture_parts(args)
        f = dec.f1 if args.family == "lambda1" else dec.f2
        breakpoints = prof.breakpoints_upto(args.tmax)
    else:
        raise DomainError(
            "no scalar waiting-time density is defined for this family"
        )
    report = semimarkov_check(f, args.tmax, tgrid, breakpoints)
    payload = {
        "passed": report.passed,
        "nonneg_ok": report.nonneg_ok,
        "integral_ok": report.integral_ok,
        "integral": report.integral,
        "first_negative_t": report.first_negative_t,
        "series_columns": ["t", "f", "survival"],
        "series_rows": [
            [float(t), float(fv), float(sv)]
            for t, fv, sv in zip(report.tgrid, report.fvals, report.survival)
        ],
    }
    _emit_report(args, payload)
    if args.fail_on_nonmarkovian and not report.passed:
        return EXIT_NONMARKOVIAN
    return EXIT_OK


def cmd_solve(args) -> int:
    tgrid = _grid(args)
    e = _projector(args.channel, args.d)
    if args.backend == "volterra":
        if args.kernel != "const":
            raise DomainError(
                "only the constant kernel is wired to the command line; "
                "custom kernels go through the library solver"
            )
        kernel = MemoryKernel(args.d, lambda t: args.gamma**2, e)
        numeric = solve_memory_kernel(kernel, tgrid)
        rows = []
        residuals = []
        eye = np.eye(args.d * args.d, dtype=complex)
        for i, t in enumerate(tgrid):
            a_ref = math.cos(args.gamma * t)
            ref = eye + (1.0 - a_ref) * (e - eye)
            res = frob(numeric.maps[i] - ref)
            a_num = projector_weight(numeric.maps[i], e)
            rows.append((t, a_num, a_ref, res))
            residuals.append(res)
        payload = {
            "backend": "volterra",
            "max_residual": max(residuals),
            "series_columns": ["t", "a_numeric", "a_analytic", "residual"],
            "series_rows": [[float(v) for v in row] for row in rows],
        }
        _emit_report(args, payload)
        return EXIT_OK

    family = _build_family(args, e)
    if args.backend == "closed":
        rows = [(t, 0.0) for t in tgrid]
        payload = {
            "backend": "closed",
            "max_residual": 0.0,
            "series_columns": ["t", "residual"],
            "series_rows": [[float(v) for v in row] for row in rows],
        }
        _emit_report(args, payload)
        return EXIT_OK

    # RK4 of the family's analytic generator against its closed form
    substep = min(1e-3, float(tgrid[1] - tgrid[0]))
    numeric = propagate_ode(
        family.generator_at,
        tgrid,
        substep=substep,
        breakpoints=family.breakpoints_upto(args.tmax),
    )
    rows = []
    residuals = []
    for i, t in enumerate(tgrid):
        res = frob(numeric.maps[i] - family.map_at(t))
        rows.append((t, res))
        residuals.append(res)
    payload = {
        "backend": "ode",
        "max_residual": max(residuals),
        "series_columns": ["t", "residual"],
        "series_rows": [[float(v) for v in row] for row in rows],
    }
    _emit_report(args, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynamap",
        description="construct dynamical-map families and diagnose Markovianity",
    )
    parser.add_argument(
        "--version", action="version", version=f"dynamap (backend: {BACKEND})"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, default=1.0,
                        help="semigroup rate (default 1)")
    common.add_argument("--p", type=float, default=0.75,
                        help="mixture weight in (0,1) (default 3/4)")
    common.add_argument("--epsilon", type=float, default=0.75,
                        help="profile depth in (0,1) (default 3/4)")
    common.add_argument("--tmax", type=float, default=10.0,
                        help="grid end time (default 10)")
    common.add_argument("--steps", type=int, default=1000,
                        help="number of uniform grid steps (default 1000)")
    common.add_argument("--profile", choices=["sin2"], default="sin2",
                        help="mixture profile shape")
    common.add_argument("--output", choices=["csv", "json"], default=None,
                        help="output format (default: csv for tables, json for reports)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized state pairs (default 0)")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_rates = sub.add_parser("rates", parents=[common],
                             help="local decoherence rates of the mixture components")
    p_rates.set_defaults(func=cmd_rates, default_output="csv")

    p_cap = sub.add_parser("capacity", parents=[common],
                           help="channel capacity along the families")
    p_cap.add_argument("--d", type=int, default=2, help="system dimension")
    p_cap.add_argument("--channel",
                       choices=["depolarizing", "dephasing", "replacer"],
                       default="depolarizing")
    p_cap.set_defaults(func=cmd_capacity, default_output="csv")

    def family_parser(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("--family",
                        choices=["semigroup", "lambda1", "lambda2", "pauli-mixture"],
                        default="semigroup")
        sp.add_argument("--channel",
                        choices=["depolarizing", "dephasing", "replacer"],
                        default="depolarizing")
        sp.add_argument("--c", type=float, default=1.0,
                        help="rate of the Pauli mixture (default 1)")
        sp.add_argument("--d", type=int, default=2, help="system dimension")
        sp.add_argument("--fail-on-nonmarkovian", action="store_true",
                        help="exit 3 when a non-Markovian verdict is rendered")
        return sp

    p_div = family_parser("divisibility", "scan intermediate maps for CP violations")
    p_div.set_defaults(func=cmd_divisibility, default_output="json")

    p_blp = family_parser("blp", "trace-distance derivative scan over state pairs")
    p_blp.set_defaults(func=cmd_blp, default_output="json")

    p_semi = sub.add_parser("semimarkov", parents=[common],
                            help="waiting-time density checks")
    p_semi.add_argument("--family",
                        choices=["semigroup", "lambda1", "lambda2", "pauli-mixture"],
                        default="semigroup")
    p_semi.add_argument("--fail-on-nonmarkovian", action="store_true",
                        help="exit 3 when the density check fails")
    p_semi.set_defaults(func=cmd_semimarkov, default_output="json")

    p_solve = family_parser("solve", "numerical solvers against closed forms")
    p_solve.add_argument("--backend", choices=["closed", "ode", "volterra"],
                         default="ode")
    p_solve.add_argument("--kernel", choices=["const", "custom"], default="const")
    p_solve.set_defaults(func=cmd_solve, default_output="csv")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.output is None:
        args.output = args.default_output
    del args.default_output
    try:
        _validate_common(args)
        return args.func(args)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroDivisionError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _validate_common(args) -> None:
    if not 0.0 < args.p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {args.p}")
    if not 0.0 < args.epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {args.epsilon}")
    if args.gamma <= 0:
        raise DomainError(f"gamma must be positive, got {args.gamma}")
    c = getattr(args, "c", None)
    if c is not None and c <= 0:
        raise DomainError(f"c must be positive, got {c}")


if __name__ == "__main__":
    sys.exit(main())
