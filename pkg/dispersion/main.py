"""
Dispersion Solvers - Command Line Entry Point

Obnoxious facility placement on a segment or a circle:

- ``decide``   number of centers that fit for a given lambda
- ``solve``    optimal lambda with a witness placement (min covered weight for mofl)
- ``generate`` seeded random instance
- ``bench``    CSV timings on a grid of generated instances
- ``plot``     SVG of a solution

Standard output carries the command result (JSON, CSV or SVG); logs go to
standard error and, when enabled, to ``logs/``.
"""

import argparse
import os
import platform
import sys
import time
from typing import Sequence

from .commands import bench, decide, generate, plot, solve
from .config import get_settings
from .exceptions import EXIT_INTERNAL, EXIT_OK, handle_cli_error
from .logging_config import generate_run_id, get_logger, set_run_id, setup_logging


logger = get_logger("dispersion.main")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="dispersion",
        description="Obnoxious facility dispersion solvers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for module in (decide, solve, generate, bench, plot):
        module.register(subparsers)
    return parser


def _log_banner(command: str) -> None:
    settings = get_settings()
    logger.info("=" * 70)
    logger.info(f"Starting {settings.app_name} v{settings.app_version}")
    logger.info(f"Python : {platform.python_version()}  |  PID: {os.getpid()}")
    logger.info(f"OS     : {platform.system()} {platform.release()}")
    logger.info(f"Command        : {command}")
    logger.info(f"Tolerance (eps): {settings.eps:g}")
    logger.info(f"Log level      : {settings.log_level}")
    logger.info("=" * 70)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Parse arguments, run one command and return the process exit code.

    Every failure is turned into a JSON error body on stdout by
    ``handle_cli_error``; argparse usage errors exit with status 2 on their own.
    """
    args = build_parser().parse_args(argv)
    setup_logging()
    rid = generate_run_id()
    set_run_id(rid)
    _log_banner(args.command)

    start_time = time.perf_counter()
    try:
        exit_code = args.handler(args)
    except Exception as exc:
        exit_code = handle_cli_error(exc, args.command)
    duration_ms = (time.perf_counter() - start_time) * 1000

    # Adaptive log level
    if exit_code >= EXIT_INTERNAL:
        log_fn = logger.error
    elif exit_code != EXIT_OK:
        log_fn = logger.warning
    else:
        log_fn = logger.info
    log_fn("<<< %s  exit=%d  duration=%.2fms  rid=%s", args.command, exit_code, duration_ms, rid)
    return exit_code


def run_cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run_cli()
