"""
``dispersion decide``: the number of centers that fit for a given lambda.
"""

import argparse

from ..runner import run
from .common import add_instance_args, flags_from, load_instance, write_solution


def register(subparsers) -> None:
    parser = subparsers.add_parser("decide", help="Count centers that fit for a fixed lambda")
    add_instance_args(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    solution = run("decide", load_instance(args.instance), flags_from(args))
    write_solution(solution, args.out)
    return 0
