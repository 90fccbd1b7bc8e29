"""
Shared argument and file helpers for the command modules.
"""

import argparse
import sys
from pathlib import Path

from ..exceptions import SchemaError
from ..instance_io import canonical_json, parse_instance
from ..logging_config import get_logger
from ..models import InstanceFile, Problem, SolutionFile
from ..runner import RunFlags


logger = get_logger("dispersion.commands")


def add_instance_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", required=True, help="Instance JSON file")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="Radius / size override")
    parser.add_argument("--k", type=int, default=None, help="Number of facilities override")
    parser.add_argument("--alpha", type=float, default=None, help="Separation coefficient override")
    parser.add_argument("--out", default="-", help="Output file ('-' for stdout)")


def problem_arg(value: str) -> Problem:
    try:
        return Problem(value)
    except ValueError:
        choices = ", ".join(p.value for p in Problem)
        raise argparse.ArgumentTypeError(f"unknown problem {value!r} (choose from {choices})")


def read_bytes(path: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise SchemaError([f"{what}: cannot read {path} ({e.strerror})"]) from e


def load_instance(path: str) -> InstanceFile:
    return parse_instance(read_bytes(path, "instance"))


def flags_from(args: argparse.Namespace) -> RunFlags:
    return RunFlags(lam=args.lam, k=args.k, alpha=args.alpha)


def write_output(data: bytes, out: str) -> None:
    if out == "-":
        sys.stdout.write(data.decode("utf-8"))
        if not data.endswith(b"\n"):
            sys.stdout.write("\n")
        sys.stdout.flush()
        return
    Path(out).write_bytes(data)
    logger.info("Output written  path=%s  bytes=%d", out, len(data))


def write_solution(solution: SolutionFile, out: str) -> None:
    write_output(canonical_json(solution) + b"\n", out)
