"""Command-line front end: JSON (or CSV) on stdout, diagnostics on stderr."""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from . import __version__, config
from .commands import (
    capacity,
    cone_sample,
    gnk,
    hyperbolic,
    mixed_disc,
    permanent,
    signature,
)
from .errors import InvalidInputError, LorentzError, NumericalError

logger = logging.getLogger(__name__)

COMMANDS = (permanent, capacity, signature, hyperbolic, mixed_disc, gnk, cone_sample)
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentz",
        description="Lorentzian polynomials, hyperbolicity cones and permanents.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--exact", action="store_true", help="rational arithmetic throughout"
    )
    parser.add_argument(
        "--seed", type=int, help=f"RNG seed (default {config.DEFAULT_SEED})"
    )
    parser.add_argument(
        "--input", default="-", help="JSON input file, '-' for stdin (default)"
    )
    parser.add_argument(
        "--log-level", type=str.upper, choices=LOG_LEVELS, default=None
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = args.log_level or config.LOG_LEVEL
    logging.basicConfig(
        stream=sys.stderr,
        level=level if level in LOG_LEVELS else "WARNING",
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    if args.seed is None:
        args.seed = config.DEFAULT_SEED
    try:
        code: int = args.handler(args)
        return code
    except LorentzError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except (ValidationError, json.JSONDecodeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return InvalidInputError.exit_code
    except Exception as exc:
        logger.exception("unexpected failure in %s", args.command)
        print(f"error: internal failure: {exc}", file=sys.stderr)
        return NumericalError.exit_code


def main() -> None:
    sys.exit(run())
