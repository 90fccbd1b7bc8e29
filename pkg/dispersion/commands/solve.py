"""
``dispersion solve``: optimal lambda (or minimum covered weight for mofl) with centers.
"""

import argparse
from dataclasses import replace

from ..runner import run
from .common import add_instance_args, flags_from, load_instance, write_solution


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="Optimize and report centers")
    add_instance_args(parser)
    parser.add_argument(
        "--baseline",
        action="store_true",
        help="mofl only: use the layered dynamic program instead of the Lagrangian engine",
    )
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    flags = replace(flags_from(args), baseline=args.baseline)
    solution = run("solve", load_instance(args.instance), flags)
    write_solution(solution, args.out)
    return 0
