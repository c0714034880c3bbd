"""Command line front end.

Subcommands: ``compute``, ``minimize``, ``sweep``, ``ppt``, ``check``.

Exit codes: 0 ok, 1 usage, 2 validation, 3 dimension, 4 I/O,
5 proposition violated.
"""
from __future__ import annotations

import argparse
import io
import sys
from typing import NamedTuple

import numpy as np

from . import linalg
from .discord import (
    DISCORD_TOL,
    PROP1_TOL,
    PROP3_BACKWARD_TOL,
    PROP3_FORWARD_TOL,
    VARIANTS,
    discord,
    minimize_discord,
    proposition_residuals,
)
from .errors import DimensionMismatch, DiscordError, UnsupportedDimension
from .measurement import dephase, qubit_basis
from .separability import ppt_test
from .states import decohered_cnot, load_state, random_state, werner

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_DIMENSION = 3
EXIT_IO = 4
EXIT_VIOLATION = 5

CSV_HEADER = "z,theta,phi,discord,mutual_i,mutual_j"
FAMILIES = {"cnot": decohered_cnot, "werner": werner}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    s = f"{x:.12f}"
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


class SweepRow(NamedTuple):
    z: float
    theta: float
    phi: float
    discord: float
    mutual_i: float
    mutual_j: float

    def to_csv(self) -> str:
        return ",".join(fmt(v) for v in self)


def sweep_rows(family: str, z_steps: int, theta_steps: int, phi: float = 1.0) -> list[SweepRow]:
    """Discord over ``z in [0, 1]`` (inclusive) and ``theta in [0, pi/2)``; z outer, theta inner.

    The theta grid is half-open because ``theta = pi/2`` gives the same
    projector pair as ``theta = 0``.
    """
    make = FAMILIES[family]
    zs = np.linspace(0.0, 1.0, z_steps)
    thetas = np.linspace(0.0, np.pi / 2, theta_steps, endpoint=False)
    bases = [qubit_basis(th, phi) for th in thetas]
    rows = []
    for z in zs:
        state = make(z)
        for th, meas in zip(thetas, bases):
            r = discord(state, meas, "rank1")
            rows.append(SweepRow(float(z), float(th), float(phi), r.discord, r.mutual_i, r.mutual_j))
    return rows


def render_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in rows:
        buf.write(row.to_csv() + "\n")
    return buf.getvalue()


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        grid = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x32, got {text!r}")
    if min(grid) < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return grid


def _print_report(report, out=None):
    out = out or sys.stdout
    for key, value in report.as_dict().items():
        if key == "variant":
            print(f"variant: {value}", file=out)
        elif key == "outcome_probs":
            print("outcome_probs: " + " ".join(fmt(p) for p in value), file=out)
        else:
            print(f"{key}: {fmt(value)}", file=out)


def cmd_compute(args) -> int:
    state = load_state(args.state)
    if state.dim_a != 2:
        raise UnsupportedDimension(f"--theta/--phi parametrise a qubit basis; state has dim_a = {state.dim_a}")
    report = discord(state, qubit_basis(args.theta, args.phi), args.mode)
    _print_report(report)
    return EXIT_OK


def cmd_minimize(args) -> int:
    state = load_state(args.state)
    res = minimize_discord(state, grid=args.grid, refine=args.refine, mode=args.mode)
    print(f"min_discord: {fmt(res.min_delta)}")
    print(f"theta: {fmt(res.theta)}")
    print(f"phi: {fmt(res.phi)}")
    _print_report(res.report)
    return EXIT_OK


def cmd_ppt(args) -> int:
    state = load_state(args.state)
    verdict = ppt_test(state)
    print(f"min_eigenvalue: {fmt(verdict.min_eigenvalue)}")
    print(f"is_ppt: {str(verdict.is_ppt).lower()}")
    print(f"conclusive: {str(verdict.conclusive).lower()}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.z_steps < 2 or args.theta_steps < 2:
        raise UsageError("--z-steps and --theta-steps must be >= 2")
    text = render_csv(sweep_rows(args.family, args.z_steps, args.theta_steps, args.phi))
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


class CheckSummary(NamedTuple):
    prop1: float
    prop2_violation: float
    prop3_forward: float
    prop3_backward: float
    traced_violation: float
    first_violation: tuple | None


def run_checks(trials: int, seed: int) -> CheckSummary:
    """Proposition residuals over random two-qubit states and random qubit bases.

    Trial ``t`` uses ``random_state(2, 2, seed + t)`` and a basis drawn from
    ``default_rng([seed, t])``; the dephased copy of the state is checked in the
    same basis so the zero-discord direction is always exercised.
    """
    worst = dict(prop1=0.0, prop2=0.0, fwd=0.0, bwd=0.0, traced=0.0)
    first = None
    for t in range(trials):
        state = random_state(2, 2, seed + t)
        rng = np.random.default_rng([seed, t])
        theta, phi = rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi)
        meas = qubit_basis(theta, phi)
        for candidate in (state, dephase(state, meas)):
            r = proposition_residuals(candidate, meas)
            traced = max(0.0, -discord(candidate, meas, "traced").discord)
            worst["prop1"] = max(worst["prop1"], r.prop1)
            worst["prop2"] = max(worst["prop2"], r.prop2_violation)
            worst["traced"] = max(worst["traced"], traced)
            if r.prop3_forward is not None:
                worst["fwd"] = max(worst["fwd"], r.prop3_forward)
            if r.prop3_backward is not None:
                worst["bwd"] = max(worst["bwd"], r.prop3_backward)
            bad = (
                r.prop1 >= PROP1_TOL
                or r.prop2_violation > DISCORD_TOL
                or traced > DISCORD_TOL
                or (r.prop3_forward is not None and r.prop3_forward >= PROP3_FORWARD_TOL)
                or (r.prop3_backward is not None and r.prop3_backward >= PROP3_BACKWARD_TOL)
            )
            if bad and first is None:
                first = (seed + t, theta, phi)
    return CheckSummary(worst["prop1"], worst["prop2"], worst["fwd"], worst["bwd"], worst["traced"], first)


def cmd_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    s = run_checks(args.trials, args.seed)
    print(f"trials: {args.trials}  seed: {args.seed}  backend: {linalg.BACKEND}")
    print(f"prop1_max_residual: {s.prop1:.3e}  (tol {PROP1_TOL:.0e})")
    print(f"prop2_max_violation: {s.prop2_violation:.3e}  (tol {DISCORD_TOL:.0e})")
    print(f"prop2_traced_max_violation: {s.traced_violation:.3e}  (tol {DISCORD_TOL:.0e})")
    print(f"prop3_forward_max: {s.prop3_forward:.3e}  (tol {PROP3_FORWARD_TOL:.0e})")
    print(f"prop3_backward_max: {s.prop3_backward:.3e}  (tol {PROP3_BACKWARD_TOL:.0e})")
    if s.first_violation is not None:
        st_seed, theta, phi = s.first_violation
        print(f"violation: state seed {st_seed}, basis theta={theta:.12f} phi={phi:.12f}", file=sys.stderr)
        return EXIT_VIOLATION
    print("all propositions hold")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdiscord", description="Quantum discord of bipartite density matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="discord report for one state and qubit basis")
    p.add_argument("--state", required=True, metavar="PATH")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=1.0)
    p.add_argument("--mode", choices=VARIANTS, default="rank1")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("minimize", help="minimise discord over qubit bases")
    p.add_argument("--state", required=True, metavar="PATH")
    p.add_argument("--grid", type=_parse_grid, default=(64, 32), metavar="NxM")
    p.add_argument("--refine", action="store_true")
    p.add_argument("--mode", choices=("rank1", "traced"), default="rank1")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("sweep", help="CSV of discord across a state family and theta")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--z-steps", type=int, default=11)
    p.add_argument("--theta-steps", type=int, default=64)
    p.add_argument("--phi", type=float, default=1.0)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ppt", help="partial-transpose separability test")
    p.add_argument("--state", required=True, metavar="PATH")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("check", help="randomised proposition checks")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionMismatch, UnsupportedDimension) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except DiscordError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
