#!/usr/bin/env python3

from argparse import ArgumentParser, Namespace, ArgumentDefaultsHelpFormatter
import sys
from typing import List, Optional

from dotenv import load_dotenv

from fraccomp.util.config import FCConfig
from fraccomp.util.constants import EXIT_INVALID, EXIT_NUMERICAL
from fraccomp.util.enums import OutputFormat, RunMode
from fraccomp.util.logging_config import setup_logging

COMMAND_HELP = {
    RunMode.EvalML: "Evaluates the Mittag-Leffler function on a grid.",
    RunMode.EvalWright: "Evaluates the Wright function on a grid.",
    RunMode.Density: "Computes the (pseudo-)subordinator kernel u(t, x).",
    RunMode.InverseDensity: "Computes the inverse subordinator kernel l(t, x).",
    RunMode.Solve: "Solves a space-time fractional problem by the direct and/or the composed route.",
    RunMode.ComposeCheck: "Checks the semigroup in order of subordinator kernels by composition.",
    RunMode.McLimit: "Estimates the compound Poisson MGF and its limit by Monte Carlo.",
    RunMode.LimitCheck: "Compares a small-order solution with its order-zero limit.",
}


def main(argv: Optional[List[str]] = None) -> None:
    """
    Runs one job spec with the given command.

    """
    # Setup logging first
    logger = setup_logging()
    load_dotenv()

    parser = ArgumentParser(description="fraccomp: space-time fractional problems by stochastic composition.",
                            formatter_class=ArgumentDefaultsHelpFormatter)
    subparsers = parser.add_subparsers(title="Commands to run", dest="command")

    command_parsers = {}
    for mode, text in COMMAND_HELP.items():
        p = subparsers.add_parser(mode.value, help=text, formatter_class=ArgumentDefaultsHelpFormatter)
        p.add_argument("--spec", type=str, action="store", required=True,
                       help="Path to the YAML job spec.")
        p.add_argument("--out", type=str, action="store",
                       help="Output path, overrides the spec's output path. Format suffix is added if missing.")
        p.add_argument("--format", type=str, action="store", choices=[f.value for f in OutputFormat],
                       help="Output format, overrides the spec's output format.")
        p.add_argument("--seed", type=int, action="store",
                       help="Seed of stochastic commands, overrides the spec's seed.")
        p.add_argument("--threads", type=int, action="store",
                       help="Number of threads. Falls back to env FRACCOMP_THREADS, then 1.")
        command_parsers[mode.value] = p

    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return

    check_args(command_parsers[args.command], args)
    logger.info(f"Starting {args.command}...")
    logger.debug(f"Args: {args}")

    from fraccomp.runner import runner
    try:
        FCConfig().set_args(args)
        runner.run(args.command, args.spec, args.out, args.format)
    except KeyboardInterrupt:
        logger.info(f"Received CTRL+C command. Exiting {args.command}.")
    except ValueError as e:
        logger.error(f"Invalid job: {e}")
        sys.exit(EXIT_INVALID)
    except ArithmeticError as e:
        logger.error(f"Numerical failure ({type(e).__name__}): {e}")
        sys.exit(EXIT_NUMERICAL)


def check_args(parser: ArgumentParser, args: Namespace) -> None:
    """
    Checks args common to all commands.

    :param parser: Argument parser.
    :param args: Given arguments.
    """
    if args.threads is not None and args.threads < 1:
        parser.error("Number of threads must be >= 1.")
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        parser.error("Rng must be seeded with number in [0, 2^64).")


if __name__ == "__main__":
    main()
