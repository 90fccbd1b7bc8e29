"""
``dispersion plot``: SVG of a solution; solves first when none is given.
"""

import argparse

from ..instance_io import parse_solution
from ..render import render_svg
from ..runner import apply_flags, run
from .common import add_instance_args, flags_from, load_instance, read_bytes, write_output


def register(subparsers) -> None:
    parser = subparsers.add_parser("plot", help="Render a solution as SVG")
    add_instance_args(parser)
    parser.add_argument("--solution", default=None, help="Solution JSON file (default: solve now)")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    flags = flags_from(args)
    instance = apply_flags(load_instance(args.instance), flags)
    if args.solution is not None:
        solution = parse_solution(read_bytes(args.solution, "solution"))
    else:
        solution = run("solve", instance)
    write_output(render_svg(instance, solution), args.out)
    return 0
