"""
Command-line front end.

    chanuncert validate    --channel CH
    chanuncert uncertainty --channel CH --state ST
    chanuncert bound       --theorem {1,2,3,4,combined} --channel CH ... --state ST [--variant V --M M --L L]
    chanuncert sweep       --preset fig1a --out fig1a.csv
    chanuncert properties  --seed 0 --trials 200

A channel argument is a JSON file or a shorthand ``AD:q`` / ``BF:q`` / ``PD:q``
/ ``identity[:n]``. A state argument is a JSON file or ``bloch:rx,ry,rz``.

Exit codes: 0 success, 1 check failed or computation error, 2 bad input,
3 a bound exceeded its left-hand side.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import properties as props
from .bounds import (
    EXAMPLE_PARAMS, VALIDITY_TOL, BoundParams, combined_bound,
    product_bound_thm1, sum_bound_thm2, sum_bound_thm3, sum_bound_thm4,
)
from .channels import (
    COMPLETENESS_TOL, density_from_bloch, identity_channel, load_channel, load_state,
    standard_channel, validate_channel,
)
from .sweeps import PRESETS, SWEEP_VARS, THEOREMS, SweepSpec, preset, run_sweep, write_csv
from .variance import channel_uncertainty

log = logging.getLogger("chanuncert")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3


class InputError(Exception):
    pass


def parse_channel(arg: str):
    kind, sep, rest = arg.partition(":")
    try:
        if kind.upper() in ("AD", "BF", "PD") and sep:
            return standard_channel(kind, float(rest))
        if kind == "identity":
            return identity_channel(int(rest) if sep else 2)
        return load_channel(arg)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"cannot read channel {arg!r}: {exc}") from exc


def parse_state(arg: str):
    try:
        if arg.startswith("bloch:"):
            return density_from_bloch([float(c) for c in arg[6:].split(",")])
        return load_state(arg)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"cannot read state {arg!r}: {exc}") from exc


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _params(args, variant: str | None) -> BoundParams:
    if variant is None:
        raise InputError("theorems 3 and 4 need --variant")
    default = next(p for p in EXAMPLE_PARAMS if p.variant == variant)
    M = default.M if args.M is None else args.M
    L = default.L if args.L is None else args.L
    try:
        return BoundParams(M, L, variant)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_validate(args) -> int:
    verdict = validate_channel(parse_channel(args.channel), COMPLETENESS_TOL)
    print(f"residual {verdict.residual:.1e} {'PASS' if verdict.passed else 'FAIL'}")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_uncertainty(args) -> int:
    ch, rho = parse_channel(args.channel), parse_state(args.state)
    try:
        _emit(channel_uncertainty(ch, rho).to_dict())
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    return EXIT_OK


def cmd_bound(args) -> int:
    chans = [parse_channel(c) for c in args.channel]
    rho = parse_state(args.state)
    thm = args.theorem
    if thm in ("1", "2") and len(chans) != 2:
        raise InputError(f"theorem {thm} takes exactly 2 channels, got {len(chans)}")
    if thm not in ("1", "2") and len(chans) < 3:
        raise InputError(f"theorem {thm} takes at least 3 channels, got {len(chans)}")
    if thm in ("1", "2", "combined") and (args.variant or args.M is not None or args.L is not None):
        raise InputError(f"theorem {thm} takes no --variant/--M/--L")
    try:
        if thm == "1":
            rep = product_bound_thm1(*chans, rho)
        elif thm == "2":
            rep = sum_bound_thm2(*chans, rho)
        elif thm == "combined":
            rep = combined_bound(chans, rho)
        else:
            fn = sum_bound_thm3 if thm == "3" else sum_bound_thm4
            rep = fn(chans, rho, _params(args, args.variant))
    except ValueError as exc:  # dimension mismatch or SearchSpaceError
        log.error("%s", exc)
        return EXIT_FAIL
    _emit(rep.to_dict())
    return EXIT_OK if rep.holds(VALIDITY_TOL) else EXIT_VIOLATION


def _sweep_spec(args) -> SweepSpec:
    try:
        if args.preset:
            if args.theorem or args.sweep_var or args.fixed is not None:
                raise InputError("--preset cannot be combined with --theorem/--sweep-var/--fixed")
            return preset(args.preset, args.grid)
        if not (args.theorem and args.sweep_var and args.channels):
            raise InputError("give --preset, or all of --theorem, --sweep-var and --channels")
        params = _params(args, args.variant) if args.theorem in ("3", "4") else None
        kw = {} if args.grid is None else {"grid_points": args.grid}
        return SweepSpec(args.theorem, tuple(args.channels.split(",")), args.sweep_var, args.fixed,
                         params=params, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    rows = run_sweep(spec)
    try:
        write_csv(args.out, spec.header(), rows)
    except OSError as exc:
        log.error("cannot write %s: %s", args.out, exc)
        return EXIT_FAIL
    bad = sum(1 for r in rows if r[-1] > r[-2] + VALIDITY_TOL)
    log.info("wrote %d rows to %s", len(rows), args.out)
    if bad:
        log.error("%d grid points have bound > lhs", bad)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_properties(args) -> int:
    if args.replay:
        try:
            with open(args.replay) as fh:
                failure = json.load(fh)
            res = props.replay(failure)
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot replay {args.replay!r}: {exc}") from exc
        _emit({"property": failure["property"], "seed": failure["seed"], "trial": failure["trial"],
               "passed": res.passed, "lhs": res.lhs, "rhs": res.rhs})
        return EXIT_OK if res.passed else EXIT_FAIL
    if args.trials < 0:
        raise InputError("--trials must be non-negative")
    if args.trials == 0:
        log.warning("0 trials requested: every property passes vacuously")
    report = props.check_properties(args.seed, args.trials)
    _emit(report.to_dict())
    if report.passed:
        return EXIT_OK
    first = next(s.first_failure for s in report.summaries.values() if s.first_failure)
    with open(args.failure_out, "w") as fh:
        json.dump(first, fh)
    log.error("property %s failed; instance written to %s", first["property"], args.failure_out)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanuncert",
        description="Channel uncertainty from the rho-absolute variance and its lower bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check Kraus completeness")
    p.add_argument("--channel", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("uncertainty", help="channel uncertainty in a state")
    p.add_argument("--channel", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_uncertainty)

    def bound_opts(p):
        p.add_argument("--variant", choices=("LB1", "LB2", "LB3"))
        p.add_argument("--M", type=float)
        p.add_argument("--L", type=float)

    p = sub.add_parser("bound", help="evaluate one lower bound")
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--channel", action="append", required=True, help="repeat once per channel")
    p.add_argument("--state", required=True)
    bound_opts(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="write a parameter sweep as CSV")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--sweep-var", choices=SWEEP_VARS)
    p.add_argument("--fixed", type=float, help="value of the variable not swept")
    p.add_argument("--channels", help="comma-separated kinds, e.g. AD,BF,PD")
    p.add_argument("--grid", type=int, help="points per swept axis")
    p.add_argument("--out", required=True)
    bound_opts(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("properties", help="run the seeded property and bound-validity suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--failure-out", default="properties_failure.json")
    p.add_argument("--replay", help="re-run a serialized failure instance")
    p.set_defaults(func=cmd_properties)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
