"""
Command-line surface.

    python src/cli.py feasible channel.json dist.json --kind bc
    python src/cli.py decompose channel.json dist.json --kind bc --s 0.2 0.5 0.9 --plan-out plan.json
    python src/cli.py bounds channel.json --kind ec --sigma-min 1e-4 --sigma-max 10 --points 40
    python src/cli.py maxent channel.json --kind ec
    python src/cli.py verify channel.json --kind ec --points 5

Exit codes: 0 ok, 1 input error, 2 infeasible distribution, 3 bound sandwich violated.
"""
import argparse
import io
import json
import sys

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import ValidationError

from exception.domain_exception import DomainException
from exception.file_not_found_exception import FileNotFoundException
from exception.infeasible_distribution_exception import InfeasibleDistributionException
from exception.invalid_channel_exception import InvalidChannelException
from exception.invalid_distribution_exception import InvalidDistributionException
from exception.solver_not_converged_exception import SolverNotConvergedException
from infra.env import SWEEP_N_JOBS
from model.bounds import bounds_model
from model.channel.channel_model import canonicalize
from model.decomposition import decomposition_model
from model.feasibility import feasibility_model
from model.file.channel_file_model import load_channel
from model.file.distribution_file_model import load_distribution
from model.maxent import maxent_model
from model.oracle import sandwich_model
from scheme.bounds.bounds_scheme import SweepConfig
from scheme.channel.channel_scheme import ChannelKind
from scheme.decomposition.decomposition_scheme import DecompositionMethod

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_SANDWICH_VIOLATED = 3

FLOAT_FORMAT = "%.12g"

_stderr_handler: int | None = 0


def _configure_logging(verbose: bool):
    global _stderr_handler
    if _stderr_handler is not None:
        try:
            logger.remove(_stderr_handler)
        except ValueError:
            pass
    _stderr_handler = logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def _write(text: str, output: str | None):
    if output:
        with open(output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, float_format=FLOAT_FORMAT, index=False, lineterminator="\n")
    return buffer.getvalue()


def cmd_feasible(args) -> int:
    spec, _ = load_channel(args.channel)
    S = load_distribution(args.distribution, spec, args.kind)
    canonical, reduction = canonicalize(spec, args.kind, clamp=False)
    report = feasibility_model.check(S.reflect() if reduction.flipped else S, canonical, args.kind)
    _write(report.json(indent=2) + "\n", args.output)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def _realizations(args, S) -> np.ndarray:
    if args.s:
        return np.asarray(args.s, dtype=float)
    if args.samples:
        rng = np.random.default_rng(args.seed)
        return np.sort(np.atleast_1d(S.sample(rng, args.samples)))
    return np.linspace(0.0, 1.0, args.grid)


def cmd_decompose(args) -> int:
    spec, peaks = load_channel(args.channel)
    S = load_distribution(args.distribution, spec, args.kind)
    plan = decomposition_model.plan_signaling(S, spec, args.kind, peaks)
    if args.plan_out:
        with open(args.plan_out, "w") as f:
            json.dump(decomposition_model.plan_to_json(plan), f, indent=2)

    s = _realizations(args, S)
    x = decomposition_model.signal(plan, s, args.method)
    columns = {"s": s}
    for k in range(spec.size):
        columns[f"x_{k + 1}"] = x[:, k]
    if peaks is not None:
        x_raw = decomposition_model.raw_signal(plan, s, args.method)
        for k in range(spec.size):
            columns[f"x_raw_{k + 1}"] = x_raw[:, k]
    _write(_to_csv(pd.DataFrame(columns)), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    spec, _ = load_channel(args.channel)
    config = SweepConfig(sigma_min=args.sigma_min, sigma_max=args.sigma_max, points=args.points, kind=args.kind)
    result = bounds_model.sweep(spec, config, n_jobs=args.jobs)
    frame = pd.DataFrame([report.dict() for report in result.reports])
    text = _to_csv(frame)
    text += f"# low_snr_slope,{FLOAT_FORMAT % result.low_snr_slope}\n"
    text += f"# high_snr_offset,{FLOAT_FORMAT % result.high_snr_offset}\n"
    _write(text, args.output)
    return EXIT_OK


def cmd_maxent(args) -> int:
    spec, _ = load_channel(args.channel)
    canonical, reduction = canonicalize(spec, args.kind)
    solution = maxent_model.solve_gamma(canonical, args.kind)
    payload = {**solution.to_json_dict(), "flipped": reduction.flipped, "h": canonical.h, "alpha": canonical.alpha}
    _write(json.dumps(payload, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, _ = load_channel(args.channel)
    config = SweepConfig(sigma_min=args.sigma_min, sigma_max=args.sigma_max, points=args.points, kind=args.kind)
    sigmas = np.geomspace(config.sigma_min, config.sigma_max, config.points)
    checks = sandwich_model.verify_sandwich(spec, sigmas, args.kind)
    _write(_to_csv(pd.DataFrame([check.dict() for check in checks])), args.output)
    return EXIT_OK if all(check.holds for check in checks) else EXIT_SANDWICH_VIOLATED


def _add_kind(parser: argparse.ArgumentParser):
    parser.add_argument("--kind", choices=ChannelKind.ALL, default=ChannelKind.EC, help="equal-cost or bounded-cost channel")
    parser.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")


def _add_sweep(parser: argparse.ArgumentParser, points: int):
    parser.add_argument("--sigma-min", type=float, default=1e-4)
    parser.add_argument("--sigma-max", type=float, default=10.0)
    parser.add_argument("--points", type=int, default=points, help="log-spaced noise levels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oic-bounds",
        description="Capacity bounds and signaling for MISO optical intensity channels.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="log solver progress")
    commands = parser.add_subparsers(dest="command", required=True)

    feasible = commands.add_parser("feasible", help="check that a distribution of S is decomposable")
    feasible.add_argument("channel", help="channel JSON file")
    feasible.add_argument("distribution", help="distribution JSON file")
    _add_kind(feasible)
    feasible.set_defaults(handler=cmd_feasible)

    decompose = commands.add_parser("decompose", help="per-antenna signals for realizations of S")
    decompose.add_argument("channel", help="channel JSON file")
    decompose.add_argument("distribution", help="distribution JSON file")
    _add_kind(decompose)
    decompose.add_argument("--s", type=float, nargs="+", default=None, help="realizations of S")
    decompose.add_argument("--grid", type=int, default=11, help="uniform grid of S values on [0, 1]")
    decompose.add_argument("--samples", type=int, default=None, help="draw this many realizations of S")
    decompose.add_argument("--seed", type=int, default=0, help="seed for --samples")
    decompose.add_argument(
        "--method",
        choices=(DecompositionMethod.PARTITION, DecompositionMethod.ITERATIVE),
        default=DecompositionMethod.PARTITION,
    )
    decompose.add_argument("--plan-out", default=None, help="write the partition plan JSON here")
    decompose.set_defaults(handler=cmd_decompose)

    bounds = commands.add_parser("bounds", help="capacity bounds over a noise sweep (CSV)")
    bounds.add_argument("channel", help="channel JSON file")
    _add_kind(bounds)
    _add_sweep(bounds, points=40)
    bounds.add_argument("--jobs", type=int, default=SWEEP_N_JOBS, help="parallel workers")
    bounds.set_defaults(handler=cmd_bounds)

    maxent = commands.add_parser("maxent", help="maximum-entropy input law (JSON)")
    maxent.add_argument("channel", help="channel JSON file")
    _add_kind(maxent)
    maxent.set_defaults(handler=cmd_maxent)

    verify = commands.add_parser("verify", help="check bounds against mutual information of feasible inputs")
    verify.add_argument("channel", help="channel JSON file")
    _add_kind(verify)
    _add_sweep(verify, points=5)
    verify.set_defaults(handler=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except InfeasibleDistributionException as e:
        logger.error(f"Infeasible: {e}")
        return EXIT_INFEASIBLE
    except (
        ValidationError,
        InvalidChannelException,
        InvalidDistributionException,
        DomainException,
        FileNotFoundException,
        SolverNotConvergedException,
    ) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
