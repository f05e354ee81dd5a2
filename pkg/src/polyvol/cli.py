"""Command-line front end.

Subcommands
-----------
estimate     volume of one instance (file or generated family)
generate     emit an instance file for a family spec
trials       repeated estimation with aggregate statistics
check-split  random-hyperplane additivity check
bench-walk   wall-clock comparison of the two walkers
step-size    points-per-phase bound for a target confidence width

All randomness is controlled by --seed (default 42, never entropy).
Deterministic results go to stdout; timings and diagnostics go to
stderr, so identical argv yields byte-identical stdout.

Family specs: ``cube:N``, ``cross:N``, ``rh:N:M``, ``ran:N:M``,
``cuboid:N``, each optionally followed by ``:seed=S`` and/or
``:shear=K`` (cube and rh only), e.g. ``rh:10:30:seed=7`` or
``cube:10:shear=10``.
"""

import argparse
import json
import sys

from .errors import (
    EstimationError,
    GenerationError,
    ParseError,
    PolyvolError,
    RoundingError,
    ValidationError,
)
from .estimator import (
    DEFAULT_SEED,
    EstimationConfig,
    estimate_volume,
    required_step_size,
)
from .generators import (
    apply_shear,
    gen_cross,
    gen_cube,
    gen_cuboid_sheared,
    gen_ran,
    gen_rh,
)
from .polytope import emit_polytope, load_polytope
from .verification import oracle_volume, run_trials, split_check, walk_benchmark

SCHEMA_VERSION = 1


class CliError(Exception):
    """Carries a machine-parsable error code."""

    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: bad-arguments: {exc}", file=sys.stderr)
        return 1
    except PolyvolError as exc:
        print(f"error: {_error_code(exc)}: {exc}", file=sys.stderr)
        return 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="polyvol",
        description="Monte-Carlo volume estimation for convex polytopes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="estimate the volume of one instance")
    _add_instance_args(p_est)
    _add_config_args(p_est)
    _add_format_args(p_est)
    p_est.add_argument(
        "--samples",
        type=int,
        default=None,
        metavar="N",
        help="also run the rejection oracle with N samples (n <= 8 only)",
    )
    p_est.set_defaults(handler=_cmd_estimate)

    p_gen = sub.add_parser("generate", help="emit an instance file")
    p_gen.add_argument("spec", help="family spec, e.g. cube:10 or rh:10:30:seed=7")
    p_gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_gen.add_argument("--output", default=None, help="path (default stdout)")
    p_gen.set_defaults(handler=_cmd_generate)

    p_tri = sub.add_parser("trials", help="repeated estimation statistics")
    _add_instance_args(p_tri)
    _add_config_args(p_tri)
    _add_format_args(p_tri)
    p_tri.add_argument("--trials", type=int, default=100)
    p_tri.add_argument(
        "--jobs", type=int, default=1, help="worker processes (default 1)"
    )
    p_tri.set_defaults(handler=_cmd_trials)

    p_spl = sub.add_parser("check-split", help="volume additivity under a random cut")
    _add_instance_args(p_spl)
    _add_config_args(p_spl)
    _add_format_args(p_spl)
    p_spl.add_argument("--trials", type=int, default=50, help="whole-volume trials")
    p_spl.add_argument("--part-trials", type=int, default=5)
    p_spl.set_defaults(handler=_cmd_check_split)

    p_bch = sub.add_parser("bench-walk", help="time both walkers")
    _add_instance_args(p_bch)
    _add_format_args(p_bch)
    p_bch.add_argument("--steps", type=int, default=10_000_000)
    p_bch.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_bch.set_defaults(handler=_cmd_bench_walk)

    p_stp = sub.add_parser("step-size", help="points per phase for a target CI")
    p_stp.add_argument("--epsilon", type=float, default=0.2)
    p_stp.add_argument("--sigma", type=float, default=1.96)
    p_stp.add_argument("--l", type=int, required=True, dest="phases")
    _add_format_args(p_stp)
    p_stp.set_defaults(handler=_cmd_step_size)

    return parser


def _add_instance_args(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", default=None, help="instance file path")
    group.add_argument("--generate", default=None, metavar="SPEC", help="family spec")


def _add_config_args(sub):
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--step-size", type=int, default=None, dest="step_size")
    sub.add_argument("--r", type=float, default=None)
    sub.add_argument("--epsilon", type=float, default=0.2)
    sub.add_argument("--sigma", type=float, default=1.96)
    sub.add_argument(
        "--walk", choices=("coordinate", "hypersphere"), default="coordinate"
    )
    sub.add_argument("--no-reuse", action="store_true")
    sub.add_argument("--verbose", action="store_true")


def _add_format_args(sub):
    sub.add_argument("--format", choices=("text", "json-lines"), default="text")


def _config_from(args):
    try:
        return EstimationConfig(
            step_size=args.step_size,
            r=args.r,
            epsilon=args.epsilon,
            sigma=args.sigma,
            seed=args.seed,
            walk=args.walk,
            reuse=not args.no_reuse,
        )
    except ValueError as exc:
        raise CliError("bad-arguments", str(exc))


def _load_instance(args):
    if args.input is not None:
        try:
            return load_polytope(args.input)
        except FileNotFoundError:
            raise CliError("file-not-found", f"no such file: {args.input}")
        except IsADirectoryError:
            raise CliError("file-not-found", f"not a file: {args.input}")
    return _generate_family(args.generate, getattr(args, "seed", DEFAULT_SEED))


def _generate_family(spec, default_seed):
    """Parse a family spec string and build the instance."""
    parts = spec.split(":")
    name = parts[0]
    positional = []
    options = {}
    for token in parts[1:]:
        if "=" in token:
            key, _, value = token.partition("=")
            options[key] = value
        else:
            positional.append(token)
    try:
        positional = [int(t) for t in positional]
        seed = int(options.pop("seed", default_seed))
        shear_times = int(options.pop("shear", 0))
    except ValueError:
        raise CliError("bad-arguments", f"malformed family spec {spec!r}")
    if options:
        raise CliError(
            "bad-arguments", f"unknown spec option(s) {sorted(options)} in {spec!r}"
        )

    try:
        if name == "cube" and len(positional) == 1:
            instance = gen_cube(positional[0])
        elif name == "cross" and len(positional) == 1 and shear_times == 0:
            instance = gen_cross(positional[0])
        elif name == "rh" and len(positional) == 2:
            instance = gen_rh(positional[0], positional[1], seed)
        elif name == "ran" and len(positional) == 2 and shear_times == 0:
            instance = gen_ran(positional[0], positional[1], seed)
        elif name == "cuboid" and len(positional) == 1 and shear_times == 0:
            instance = gen_cuboid_sheared(positional[0], seed)
        else:
            raise CliError("bad-arguments", f"unrecognized family spec {spec!r}")
        if shear_times > 0:
            instance = apply_shear(instance, shear_times, seed + 1)
        return instance
    except ValueError as exc:
        raise CliError("bad-arguments", str(exc))


def _emit(record, args, text_lines):
    """Deterministic output on stdout: JSON record or the text lines."""
    if args.format == "json-lines":
        print(json.dumps(record, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _cmd_estimate(args):
    instance = _load_instance(args)
    config = _config_from(args)
    report = estimate_volume(instance, config)

    record = report.to_dict()
    elapsed_ms = record.pop("elapsed_ms")
    record["schema"] = SCHEMA_VERSION
    if not args.verbose:
        record.pop("alphas")
    lines = [
        f"volume {report.volume:.17g}",
        f"gamma {report.gamma:.17g}",
        f"n {report.n}",
        f"l {report.l}",
        f"step_size {report.step_size}",
        f"fresh_points {report.fresh_points}",
        f"reused_fraction {report.reused_fraction:.6f}",
        f"walk {report.walk}",
        f"seed {report.seed}",
    ]
    if args.verbose:
        lines.append("alphas " + " ".join(f"{a:.9g}" for a in report.alphas))
        lines.append("phase_counts " + " ".join(str(int(t)) for t in report.ledger.t))
    _emit(record, args, lines)
    print(f"elapsed_ms {elapsed_ms:.3f}", file=sys.stderr)

    if args.samples is not None:
        try:
            oracle = oracle_volume(instance, args.samples, seed=args.seed)
        except ValueError as exc:
            raise CliError("bad-arguments", str(exc))
        _emit(
            {**oracle.to_dict(), "schema": SCHEMA_VERSION, "kind": "oracle"},
            args,
            [
                f"oracle_volume {oracle.volume:.17g}",
                f"oracle_standard_error {oracle.standard_error:.17g}",
            ],
        )
    return 0


def _cmd_generate(args):
    instance = _generate_family(args.spec, args.seed)
    text = emit_polytope(instance, comment=f"family {args.spec}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_trials(args):
    instance = _load_instance(args)
    config = _config_from(args)
    stats = run_trials(instance, config, trials=args.trials, jobs=args.jobs)
    record = {**stats.to_dict(), "schema": SCHEMA_VERSION}
    lines = [
        f"trials {stats.trials}",
        f"mean {stats.mean:.17g}",
        f"std_dev {stats.std_dev:.17g}",
        f"ci [{stats.ci_low:.17g}, {stats.ci_high:.17g}]",
        f"coverage {stats.coverage_count}/{stats.trials}",
        f"epsilon_observed {stats.epsilon_observed:.6f}",
    ]
    _emit(record, args, lines)
    return 0


def _cmd_check_split(args):
    instance = _load_instance(args)
    config = _config_from(args)
    result = split_check(
        instance,
        config,
        seed=args.seed,
        part_trials=args.part_trials,
        whole_trials=args.trials,
    )
    record = {**result.to_dict(), "schema": SCHEMA_VERSION}
    lines = [
        f"whole {result.whole:.17g}",
        f"part1 {result.part1:.17g}",
        f"part2 {result.part2:.17g}",
        f"sum {result.sum:.17g}",
        f"error {result.error:.6f}",
        f"in_interval {str(result.in_interval).lower()}",
    ]
    _emit(record, args, lines)
    return 0


def _cmd_bench_walk(args):
    instance = _load_instance(args)
    bench = walk_benchmark(instance, steps=args.steps, seed=args.seed)
    record = {**bench.to_dict(), "schema": SCHEMA_VERSION}
    # Timings are inherently non-deterministic; the full record goes to
    # stderr and stdout only carries the reproducible part.
    if args.format == "json-lines":
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        print(json.dumps({"steps": bench.steps, "schema": SCHEMA_VERSION}))
    else:
        for line in (
            f"coordinate_time {bench.coordinate_time:.6f}",
            f"hypersphere_time {bench.hypersphere_time:.6f}",
            "ratio " + (f"{bench.ratio:.3f}" if bench.ratio is not None else "absent"),
        ):
            print(line, file=sys.stderr)
        print(f"steps {bench.steps}")
    return 0


def _cmd_step_size(args):
    try:
        value = required_step_size(args.epsilon, args.sigma, args.phases)
    except ValueError as exc:
        raise CliError("bad-arguments", str(exc))
    record = {
        "epsilon": args.epsilon,
        "sigma": args.sigma,
        "l": args.phases,
        "step_size": value,
        "per_phase": value / args.phases,
        "schema": SCHEMA_VERSION,
    }
    _emit(
        record,
        args,
        [f"step_size {value}", f"per_phase {value / args.phases:.4f}"],
    )
    return 0


def _error_code(exc):
    if isinstance(exc, ParseError):
        return "parse-error"
    if isinstance(exc, ValidationError):
        return "invalid-instance"
    if isinstance(exc, RoundingError):
        return "rounding-failed"
    if isinstance(exc, EstimationError):
        return "estimation-failed"
    if isinstance(exc, GenerationError):
        return "generation-failed"
    return "internal-error"


if __name__ == "__main__":
    sys.exit(main())
