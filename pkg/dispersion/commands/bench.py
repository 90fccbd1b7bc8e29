"""
``dispersion bench``: time ``solve`` on a grid of generated instances and emit CSV.

Rows are ``n,k,solver,wallTimeMs,result``; ``result`` is lambda* (or the
covered weight for mofl) and ``nan`` when the instance is infeasible. For mofl
both the Lagrangian engine and the layered DP are timed. Instances fan out
over a process pool when ``bench_workers > 1``.
"""

import argparse
import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor

from ..config import get_settings
from ..exceptions import InfeasibleError
from ..instance_io import generate
from ..logging_config import get_logger
from ..models import BenchRow, Problem
from ..runner import RunFlags, run
from .common import problem_arg, write_output


logger = get_logger("dispersion.bench")

FIELDS = ["n", "k", "solver", "wallTimeMs", "result"]


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="Benchmark solve on generated instances (CSV)")
    parser.add_argument("--problem", type=problem_arg, required=True, help="Problem family")
    parser.add_argument("--n", type=int, nargs="+", required=True, help="Point counts")
    parser.add_argument("--k", type=int, nargs="+", required=True, help="Facility counts")
    parser.add_argument("--seed", type=int, default=0, help="Base seed; cell i uses seed + i")
    parser.add_argument("--alpha", type=float, default=1.0, help="Separation coefficient")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="Radius (mofl)")
    parser.add_argument("--out", default="-", help="Output file ('-' for stdout)")
    parser.set_defaults(handler=handle)


def bench_cell(problem: Problem, n: int, k: int, seed: int, alpha: float, lam: float | None) -> list[BenchRow]:
    """Rows for one generated instance."""
    instance = generate(problem, n, k, seed, alpha=alpha, lam=lam)
    variants = [RunFlags()]
    if problem is Problem.MOFL:
        variants.append(RunFlags(baseline=True))

    rows = []
    for flags in variants:
        try:
            solution = run("solve", instance, flags)
        except InfeasibleError as e:
            logger.warning("Bench cell infeasible  n=%d  k=%d  seed=%d  error=%s", n, k, seed, e.message)
            rows.append(BenchRow(n=n, k=k, solver="infeasible", wall_time_ms=0.0, result=float("nan")))
            break
        result = solution.covered_weight if problem is Problem.MOFL else solution.lambda_star
        rows.append(
            BenchRow(n=n, k=k, solver=solution.solver, wall_time_ms=solution.wall_time_ms, result=float(result))
        )
    return rows


def bench_csv(rows: list[BenchRow]) -> bytes:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump(by_alias=True))
    return buf.getvalue().encode("utf-8")


def handle(args: argparse.Namespace) -> int:
    grid = list(itertools.product(args.n, args.k))
    cells = [(args.problem, n, k, args.seed + i, args.alpha, args.lam) for i, (n, k) in enumerate(grid)]
    workers = get_settings().bench_workers
    logger.info("Bench started  problem=%s  cells=%d  workers=%d", args.problem.value, len(cells), workers)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(pool.map(bench_cell, *zip(*cells)))
    else:
        per_cell = [bench_cell(*cell) for cell in cells]

    rows = [row for cell_rows in per_cell for row in cell_rows]
    write_output(bench_csv(rows), args.out)
    return 0
