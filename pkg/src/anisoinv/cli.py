"""Command-line front end.

Exit status: 0 success, 2 usage error, 3 parse error, 4 incomplete count data,
5 verification failure, 6 I/O error.
"""
import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import ContractViolation, IncompleteDataError, ParseError, UsageError
from .experiment import DEFAULT_SHOTS, format_counts_csv, read_counts_csv, simulate_counts, write_counts_csv
from .reports import EXACT, FORMATS, SIMULATED, analyze_state, build_table, estimate_report, render
from .states import (
    custom_state,
    ghz_class_state,
    jittered_angles,
    load_state,
    save_state,
    state_to_config,
    w_class_state,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCOMPLETE, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4, 5, 6


def _parse_amplitude(text):
    try:
        if "," in text:
            re_, im = text.split(",")
            return complex(float(re_), float(im))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"--amplitudes: cannot parse {text!r} (use 're,im' or '0.5+0.1j')") from None


def _state_from_flags(args, jitter_rng=None):
    """(state, config) from family flags; angles are optionally jittered."""
    fam = args.family
    if fam is None:
        raise UsageError("give a state file or --family")
    if fam == "w":
        if args.phi is None or args.theta is None:
            raise UsageError("--family w needs --phi and --theta")
        phi, theta = args.phi, args.theta
        if jitter_rng is not None:
            phi, theta = jittered_angles((phi, theta), jitter_rng)
        return w_class_state(phi, theta), state_to_config(None, "w", phi=args.phi, theta=args.theta)
    if fam == "ghz":
        if args.phi_prime is None:
            raise UsageError("--family ghz needs --phi-prime")
        pp = args.phi_prime
        if jitter_rng is not None:
            (pp,) = jittered_angles((pp,), jitter_rng)
        return ghz_class_state(pp), state_to_config(None, "ghz", phi_prime=args.phi_prime)
    if not args.amplitudes or len(args.amplitudes) != 8:
        raise UsageError("--family custom needs --amplitudes with exactly 8 values")
    try:
        state = custom_state([_parse_amplitude(a) for a in args.amplitudes])
    except ContractViolation as exc:
        raise UsageError(f"--amplitudes: {exc}") from None
    return state, state_to_config(state, "custom")


def _resolve_state(args, jitter_rng=None):
    path = getattr(args, "state", None)
    if path:
        if args.family is not None:
            raise UsageError("give either a state file or --family, not both")
        return load_state(path)
    return _state_from_flags(args, jitter_rng)[0]


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _add_family_flags(p):
    p.add_argument("--family", choices=("w", "ghz", "custom"))
    p.add_argument("--phi", type=float, help="W family angle phi, degrees")
    p.add_argument("--theta", type=float, help="W family angle theta, degrees")
    p.add_argument("--phi-prime", dest="phi_prime", type=float, help="GHZ family angle phi', degrees")
    p.add_argument("--amplitudes", nargs="+", metavar="AMP", help="8 complex amplitudes as re,im")


def cmd_prepare(args):
    state, config = _state_from_flags(args)
    out = args.out or "state.json"
    save_state(out, config)
    print(f"family={config['family']} norm={np.linalg.norm(state.amplitudes):.12f} -> {out}")
    return EXIT_OK


def cmd_analyze(args):
    report = analyze_state(_resolve_state(args))
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args):
    rng = np.random.default_rng([args.seed, 7]) if args.jitter else None
    state = _resolve_state(args, rng)
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    records = simulate_counts(state, args.shots, args.seed)
    if args.out in (None, "-"):
        sys.stdout.write(format_counts_csv(records))
    else:
        write_counts_csv(args.out, records)
        print(f"wrote {len(records) * 8} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args):
    records = read_counts_csv(args.counts)
    target = load_state(args.state) if args.state else None
    if args.resamples < 100:
        raise UsageError("--resamples must be >= 100")
    report = estimate_report(records, resamples=args.resamples, seed=args.seed, target=target)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_report(args):
    report = build_table(args.table, mode=args.mode, shots=args.shots, seed=args.seed,
                         resamples=args.resamples)
    _emit(render(report, args.format), args.out)
    return EXIT_OK


def cmd_verify(args):
    result = run_suite(args.suite, trials=args.trials, seed=args.seed)
    status = "PASS" if result.passed else "FAIL"
    metrics = " ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}"
                       for k, v in result.metrics.items())
    print(f"{status} suite={result.suite} trials={result.trials} {metrics}")
    if not result.passed:
        path = args.out or "counterexample.json"
        save_state(path, state_to_config(result.counterexample))
        print(f"{result.failure}; counterexample written to {path}")
        return EXIT_VERIFY
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="anisoinv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="write a state file")
    _add_family_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("analyze", help="exact invariant report for a state")
    p.add_argument("state", nargs="?")
    _add_family_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="simulate Poissonian counts for all 27 settings")
    p.add_argument("state", nargs="?")
    _add_family_flags(p)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jitter", action="store_true",
                   help="experimental: +-0.5 deg uniform wave-plate misalignment")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate invariants with bootstrap errors from a counts CSV")
    p.add_argument("counts")
    p.add_argument("--state", help="target state file, enables fidelity")
    p.add_argument("--resamples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("report", help="regenerate a published table")
    p.add_argument("--table", required=True)
    p.add_argument("--mode", choices=(EXACT, SIMULATED), default=EXACT)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=200)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="run a property suite over Haar-random states")
    p.add_argument("--suite", required=True, choices=tuple(SUITES))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="counterexample path on failure")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ContractViolation) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompleteDataError as exc:
        print(f"incomplete data: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
