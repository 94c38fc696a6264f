"""Command-line interface.

Exit codes: 0 report written, 2 usage or configuration error, 3 internal
invariant violation. Reports go to ``-o`` (or stdout); diagnostics go to
stderr only.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .conjecture import conjecture_sweep
from .equilibrium import (
    certify_nash,
    payoff_gradient_analytic,
    payoff_gradient_fd,
    sweep_table1,
)
from .game import (
    PayoffSchedule,
    expected_payoffs_exact,
    expected_payoffs_mc,
    outcome_distribution,
)
from .protocol import StrategyProfile, run_protocol
from .reports import dump_json, format_number, meta_block, parse_angles, sweep_to_csv, sweep_to_json
from .sim import format_ket

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVARIANT = 3

NORM_TOL = 1e-10
# display-only cutoff for floating-point residue in text reports
CHOP = 1e-14


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


def _load_schedule(args) -> PayoffSchedule:
    if args.schedule is None:
        return PayoffSchedule.default()
    try:
        return PayoffSchedule.load(args.schedule)
    except OSError as exc:
        raise UsageError(f"cannot read schedule {args.schedule}: {exc.strerror}") from exc
    except ValueError as exc:
        raise UsageError(f"bad schedule {args.schedule}: {exc}") from exc


def _profile_from_args(args, schedule: PayoffSchedule) -> StrategyProfile:
    if not args.angles:
        raise UsageError("--angles is required")
    try:
        thetas = parse_angles(args.angles)
        profile = StrategyProfile(tuple(thetas))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if profile.n_rounds != schedule.n_rounds:
        raise UsageError(f"got {profile.n_rounds} angles for a {schedule.n_rounds}-round schedule")
    return profile


def _parse_n_range(text: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"--n expects N or MIN:MAX, got {text!r}") from None


def _write(report: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(report)
        sys.stdout.flush()
        return
    try:
        Path(output).write_text(report)
    except OSError as exc:
        raise UsageError(f"cannot write {output}: {exc.strerror or exc}") from exc


def _check_probabilities(total: float, what: str) -> None:
    if abs(total - 1.0) > NORM_TOL:
        raise InvariantViolation(f"{what}: probabilities sum to {total!r}")


def cmd_table1(args) -> None:
    schedule = _load_schedule(args)
    if schedule.n_rounds != 3:
        raise UsageError(f"table1 needs a 3-round schedule, got {schedule.n_rounds} rounds")
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    rows = sweep_table1(args.shots, args.seed, schedule)
    for row in rows:
        _check_probabilities(
            outcome_distribution(run_protocol(StrategyProfile(row.thetas))).total(), f"profile {row.thetas}"
        )
    fmt = args.format or "csv"
    if fmt == "csv":
        report = sweep_to_csv(rows, schedule, args.shots, args.seed)
    else:
        report = sweep_to_json(rows, schedule, args.shots, args.seed)
    _write(report, args.output)


def cmd_simulate(args) -> None:
    schedule = _load_schedule(args)
    profile = _profile_from_args(args, schedule)
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    state = run_protocol(profile)
    dist = outcome_distribution(state)
    _check_probabilities(dist.total(), "final state")
    exact = expected_payoffs_exact(profile, schedule)
    mc = expected_payoffs_mc(profile, schedule, args.shots, args.seed)
    n = state.n_qubits
    outcomes = {"FullCooperation": dist.p_full_cooperation}
    outcomes.update({f"DefectAt({r})": p for r, p in enumerate(dist.p_defect_round, start=1)})

    if args.format == "json":
        doc = {
            "meta": meta_block(schedule, seed=args.seed, shots=args.shots),
            "angles": list(profile.thetas),
            "state": format_ket(state),
            "amplitudes": {
                format(k, f"0{n}b"): [float(a.real), float(a.imag)] for k, a in enumerate(state.amplitudes)
            },
            "outcome_probabilities": outcomes,
            "exact_payoffs": list(exact),
            "mc_payoffs": list(mc),
        }
        _write(dump_json(doc), args.output)
        return

    lines = [f"# {k}: {v}" for k, v in meta_block(schedule, seed=args.seed, shots=args.shots).items()]
    lines.append("angles: " + ", ".join(format_number(t) for t in profile.thetas))
    lines.append(f"state: {format_ket(state)}")
    lines.append("amplitudes:")
    for k, a in enumerate(state.amplitudes):
        re, im = format_number(a.real, CHOP), format_number(abs(a.imag), CHOP)
        lines.append(f"  {k:0{n}b}  {re} {'-' if a.imag < -CHOP else '+'} {im}i")
    lines.append("outcome probabilities:")
    for name, p in outcomes.items():
        lines.append(f"  {name}: {format_number(p, CHOP)}")
    lines.append(f"exact payoffs: ({format_number(exact.player1, CHOP)}, {format_number(exact.player2, CHOP)})")
    lines.append(f"mc payoffs: ({format_number(mc.player1)}, {format_number(mc.player2)})")
    _write("\n".join(lines) + "\n", args.output)


def cmd_nash(args) -> None:
    schedule = _load_schedule(args)
    profile = _profile_from_args(args, schedule)
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    rep = certify_nash(profile, args.grid, args.tol, schedule)
    doc = {
        "meta": meta_block(schedule),
        "profile": list(profile.thetas),
        "payoffs": list(expected_payoffs_exact(profile, schedule)),
        "is_nash": rep.is_nash,
        "best_deviation_gain": list(rep.best_deviation_gain),
        "best_deviation": [list(d) for d in rep.best_deviation],
        "deviation_grid_size": rep.deviation_grid_size,
        "tolerance": args.tol,
    }
    _write(dump_json(doc), args.output)


def cmd_grad_check(args) -> None:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rng = np.random.default_rng(args.seed)
    thetas = rng.uniform(0.0, np.pi, size=(args.samples, 3))
    worst, worst_at = 0.0, None
    for t in thetas:
        diff = np.max(np.abs(payoff_gradient_analytic(t).as_array() - payoff_gradient_fd(t, args.h).as_array()))
        if diff > worst:
            worst, worst_at = float(diff), [float(x) for x in t]
    at_equilibria = {
        label: float(np.max(np.abs(payoff_gradient_analytic(t).as_array())))
        for label, t in (("0,0,0", (0.0, 0.0, 0.0)), ("pi,pi,pi", (np.pi, np.pi, np.pi)))
    }
    doc = {
        "meta": meta_block(PayoffSchedule.default(), seed=args.seed),
        "samples": args.samples,
        "h": args.h,
        "max_abs_discrepancy": worst,
        "worst_profile": worst_at,
        "within_1e-6": worst < 1e-6,
        "max_abs_partial_at_equilibria": at_equilibria,
    }
    _write(dump_json(doc), args.output)


def cmd_conjecture(args) -> None:
    n_min, n_max = _parse_n_range(args.n)
    try:
        reports = conjecture_sweep(n_min, n_max, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {
        "meta": {"tool": f"qcentipede {__version__}", "seed": args.seed, "samples": args.samples},
        "reports": [
            {**r.to_dict(), "corner_phase": [r.corner_phase.real, r.corner_phase.imag]} for r in reports
        ],
    }
    _write(dump_json(doc), args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcentipede", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--schedule", help="payoff schedule JSON (default: 3-round schedule)")
    common.add_argument("-o", "--output", help="report path (default: stdout)")

    p = sub.add_parser("table1", parents=[common], help="18-profile payoff sweep")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("simulate", parents=[common], help="run one strategy profile")
    p.add_argument("--angles", help="comma-separated angles, e.g. pi,pi/2,0")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("nash", parents=[common], help="certify a profile as a Nash equilibrium")
    p.add_argument("--angles", help="comma-separated angles")
    p.add_argument("--grid", type=int, default=25, help="deviation points per angle")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("grad-check", parents=[common], help="analytic vs finite-difference gradient")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("conjecture", parents=[common], help="last-round collapse and corner degeneracy by n")
    p.add_argument("--n", default="2:8", help="round count N or range MIN:MAX")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"qcentipede {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"qcentipede {args.command}: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
