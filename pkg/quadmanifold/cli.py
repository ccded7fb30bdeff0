"""
Command-line entry point: quadmanifold {gen,fit,score,eval,sweep}

Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
"""

import argparse
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from . import commands  # noqa: F401  registers the subcommands
from .command_registry import global_command_registry
from .errors import QuadManifoldError, UsageError
from .logging import logger, set_verbose_logging

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmanifold",
        description="Fit intersections of quadrics to point clouds and score outliers",
    )
    parser.add_argument("--verbose", action="store_true", help="Log every training epoch")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in global_command_registry.command_names():
        command = global_command_registry.get_command(name)
        command.configure(subparsers.add_parser(name, help=command.description, description=command.description))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    # .env may set QUADMANIFOLD_VERBOSE after the module logger was built
    if args.verbose or os.getenv("QUADMANIFOLD_VERBOSE", "false").lower() in ("true", "1", "yes"):
        set_verbose_logging(True)

    command = global_command_registry.get_command(args.command)
    try:
        result = command.execute(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"quadmanifold {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QuadManifoldError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    logger.log_command(args.command, vars(args), str(result))
    return EXIT_OK
