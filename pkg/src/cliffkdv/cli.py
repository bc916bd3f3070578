"""Command-line entry point: simulate, verify, charges, soliton.

Exit codes: 0 success, 1 failed verification, 2 configuration or parse
error, 3 blow-up, 4 I/O failure.  Outputs are deterministic: identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .charges import charge_report, csv_columns, report_row, save_reports
from .config import DEFAULT_SEED, build_initial_state, load_run_config
from .dynamics import evolve
from .errors import BlowUpError, CliffKdvError, ConfigError
from .fields import dumps_state, load_state, save_state
from .grid import Grid
from .solitons import SolitonSpec, one_soliton, residual_check, velocity_arbitration
from .verify import SUITES, run_suite


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Shared flags, accepted both before and after the subcommand.

    The subcommand copies use SUPPRESS defaults so they only override the
    top-level values when actually given (parent actions are shared
    objects, so each parser needs its own instance).
    """
    missing = argparse.SUPPRESS
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", default=missing if suppress else None,
                        help="path to a JSON run configuration")
    parent.add_argument("--seed", type=int, default=missing if suppress else None,
                        help="seed for randomized suites and output headers")
    parent.add_argument("--quiet", action="store_true",
                        default=missing if suppress else False,
                        help="suppress informational output")
    return parent


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffkdv",
        description="Numerical laboratory for the coupled KdV system "
                    "with Clifford-algebra-valued fields.",
        parents=[_global_flags(suppress=False)],
    )
    parser.set_defaults(func=None)
    sub = parser.add_subparsers(dest="command")

    p_sim = sub.add_parser("simulate", parents=[_global_flags(True)],
                           help="integrate a configured run and write its outputs")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", parents=[_global_flags(True)],
                           help="run a randomized verification suite")
    p_ver.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p_ver.add_argument("--report", default=None,
                       help="write a JSON report of the suite to this path")
    p_ver.set_defaults(func=cmd_verify)

    p_chg = sub.add_parser("charges", parents=[_global_flags(True)],
                           help="print the charge row of a serialized state")
    p_chg.add_argument("state_path")
    p_chg.set_defaults(func=cmd_charges)

    p_sol = sub.add_parser("soliton", parents=[_global_flags(True)],
                           help="emit a sampled soliton state and its residual report")
    p_sol.add_argument("--c", type=float, default=1.0, help="amplitude parameter")
    p_sol.add_argument("--a", type=float, default=None,
                       help="phase offset (default centres the profile)")
    p_sol.add_argument("--t", type=float, default=0.0, help="sample time")
    p_sol.add_argument("--velocity", default="oracle",
                       help="'paper', 'oracle' or an explicit number")
    p_sol.add_argument("--grid-length", type=float, default=80.0)
    p_sol.add_argument("--grid-points", type=int, default=512)
    p_sol.add_argument("--out", default=None,
                       help="write the state here instead of standard output")
    p_sol.set_defaults(func=cmd_soliton)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.func is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    except (CliffKdvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_simulate(args) -> int:
    if not args.config:
        raise ConfigError("simulate requires --config PATH")
    try:
        run = load_run_config(args.config)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {exc.filename}") from exc
    seed = args.seed if args.seed is not None else run.seed
    state = build_initial_state(run)
    final, reports = evolve(state, run.solver)
    if run.charges_path:
        save_reports(reports, run.charges_path, seed)
    if run.state_path:
        save_state(final, run.state_path, run.solver.lam, seed)
    if not args.quiet:
        print(f"integrated {run.solver.n_steps()} steps to t={final.t:.17g}")
        first, last = reports[0], reports[-1]
        for name in ("h1", "h3", "h5"):
            v0, v1 = getattr(first, name), getattr(last, name)
            rel = abs(v1 - v0) / max(1e-300, abs(v0))
            print(f"{name} drift: {rel:.3e}")
        _report_soliton_error(run, final)
        if run.charges_path:
            print(f"charges written to {run.charges_path}")
        if run.state_path:
            print(f"final state written to {run.state_path}")
    return 0


def _report_soliton_error(run, final) -> None:
    ic = run.initial_condition
    if ic.get("type") != "soliton" or ic.get("gaussians"):
        return
    spec = SolitonSpec(
        c=float(ic.get("c", 1.0)),
        a=float(ic.get("a", -run.grid.length / 2.0)),
        velocity=ic.get("velocity", "oracle"),
    )
    exact = one_soliton(spec, run.grid, final.t)
    err = float(np.max(np.abs(final.u - exact.u)))
    print(f"soliton Linf error vs exact translate: {err:.3e}")


def cmd_charges(args) -> int:
    try:
        state, lam = load_state(args.state_path)
    except FileNotFoundError as exc:
        raise ConfigError(f"state file not found: {exc.filename}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{args.state_path}: bad state header at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from exc
    report = charge_report(state, lam)
    print(",".join(csv_columns(state.n_components)))
    print(",".join(report_row(report)))
    return 0


def cmd_soliton(args) -> int:
    grid = Grid(args.grid_length, args.grid_points)
    offset = args.a if args.a is not None else -grid.length / 2.0
    velocity = args.velocity
    if velocity not in ("paper", "oracle"):
        velocity = float(velocity)
    spec = SolitonSpec(c=args.c, a=offset, velocity=velocity)
    state = one_soliton(spec, grid, args.t)
    seed = args.seed if args.seed is not None else DEFAULT_SEED

    report = velocity_arbitration(args.c, grid, offset, args.t)
    report["selected"] = args.velocity
    report["selected_residual"] = residual_check(spec, grid, args.t)

    if args.out:
        save_state(state, args.out, 1.0, seed)
        if not args.quiet:
            print(f"state written to {args.out}")
            print(json.dumps(report, sort_keys=True, indent=2))
    else:
        sys.stdout.write(dumps_state(state, 1.0, seed))
        if not args.quiet:
            print(json.dumps(report, sort_keys=True, indent=2), file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    results, extras = run_suite(args.suite, seed)
    all_passed = all(r.passed for r in results)
    if not args.quiet:
        width = max(len(r.name) for r in results)
        print(f"suite: {args.suite}  (seed {seed})")
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"  {r.name:<{width}}  {r.value:12.4e} {r.direction} "
                  f"{r.threshold:9.1e}  {status}")
        print("result:", "PASS" if all_passed else "FAIL")
    if args.report:
        payload = {
            "suite": args.suite,
            "seed": seed,
            "results": [
                {
                    "name": r.name,
                    "value": r.value,
                    "threshold": r.threshold,
                    "direction": r.direction,
                    "passed": r.passed,
                }
                for r in results
            ],
            "extras": extras,
            "all_passed": all_passed,
        }
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
