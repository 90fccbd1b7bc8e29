"""
``dispersion generate``: seeded random instance as canonical JSON.
"""

import argparse

from ..instance_io import generate, serialize_instance
from .common import problem_arg, write_output


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="Write a seeded random instance")
    parser.add_argument("--problem", type=problem_arg, required=True, help="Problem family")
    parser.add_argument("--n", type=int, required=True, help="Number of demand points")
    parser.add_argument("--k", type=int, required=True, help="Number of facilities")
    parser.add_argument("--seed", type=int, required=True, help="PCG64 seed")
    parser.add_argument("--alpha", type=float, default=1.0, help="Separation coefficient")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="Radius (mofl, decide)")
    parser.add_argument("--out", default="-", help="Output file ('-' for stdout)")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    instance = generate(args.problem, args.n, args.k, args.seed, alpha=args.alpha, lam=args.lam)
    write_output(serialize_instance(instance) + b"\n", args.out)
    return 0
