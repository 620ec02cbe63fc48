"""Command-line front end.

Subcommands: ``embed`` (vectors CSV -> embedding CSV), ``dist`` (row-paired
orbit distances), ``lipschitz`` (bound report as JSON), ``project``
(embedding CSV -> reduced CSV), ``inject-check`` (separation report as JSON)
and ``selftest`` (randomized invariant suite).  Exit codes: 0 success,
1 validation error, 2 runtime error.  Identical configs and seeds produce
byte-identical outputs.  Set COORBIT_LOG=debug|info|warning|error for
verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import RunConfig, load_run_config, read_vectors_csv
from .coorbit import embed_batch
from .diagnostics import run_invariant_suite
from .exceptions import (
    ConfigError,
    CoorbitError,
    DegenerateDimension,
    DimensionMismatch,
    NonOrthogonalGenerator,
    UsageError,
)
from .lipschitz import SamplingPlan, estimate_lower_bound
from .metric import quotient_distance_batch
from .projection import check_injectivity, random_projection

logger = logging.getLogger("coorbits")

_VALIDATION_ERRORS = (
    UsageError,
    ConfigError,
    DimensionMismatch,
    DegenerateDimension,
    NonOrthogonalGenerator,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_cell(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path, rows, names, header: bool):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_float_cell(v) for v in row) + "\n")


def _write_json(path, payload: dict):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _chunked_rows(transform, X: np.ndarray, threads: int) -> np.ndarray:
    """Apply a row-batch transform with an optional worker pool, order preserved."""
    if threads <= 1 or X.shape[0] < 2 * threads:
        return transform(X)
    chunks = np.array_split(X, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(transform, chunks))
    return np.concatenate(parts, axis=0)


def _load(args) -> RunConfig:
    if not args.config:
        raise UsageError("--config is required")
    return load_run_config(args.config)


def _cmd_embed(args) -> int:
    run = _load(args)
    X = read_vectors_csv(args.input, header=args.header)
    if X.shape[1] != run.group.dim:
        raise DimensionMismatch(
            f"input rows have {X.shape[1]} entries, group acts on R^{run.group.dim}"
        )
    logger.info("embedding %d rows into R^%d", X.shape[0], run.coorbit.m)
    out = _chunked_rows(lambda B: embed_batch(run.coorbit, B), X, args.threads)
    names = [f"r{j}w{i}" for j, i in run.coorbit.selector]
    _write_csv(args.output, out, names, args.header)
    return 0


def _cmd_dist(args) -> int:
    run = _load(args)
    X = read_vectors_csv(args.x, header=args.header)
    Y = read_vectors_csv(args.y, header=args.header)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"--x has shape {X.shape} but --y has {Y.shape}")
    if X.shape[1] != run.group.dim:
        raise DimensionMismatch(
            f"input rows have {X.shape[1]} entries, group acts on R^{run.group.dim}"
        )

    def compute(idx):
        dists, aligners = quotient_distance_batch(run.group, X[idx], Y[idx])
        return np.column_stack([dists, aligners.astype(float)])

    index_chunks = [
        c for c in np.array_split(np.arange(X.shape[0]), max(1, args.threads)) if c.size
    ]
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            parts = list(pool.map(compute, index_chunks))
    else:
        parts = [compute(idx) for idx in index_chunks]
    out = np.concatenate(parts, axis=0)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        if args.header:
            fh.write("distance,aligner\n")
        for dist_value, aligner in out:
            fh.write(f"{_float_cell(dist_value)},{int(aligner)}\n")
    return 0


def _cmd_lipschitz(args) -> int:
    run = _load(args)
    plan = run.sampling
    if args.trials is not None:
        plan = SamplingPlan(count=args.trials, seed=plan.seed, refine_steps=plan.refine_steps)
    if args.seed is not None:
        plan = SamplingPlan(count=plan.count, seed=args.seed, refine_steps=plan.refine_steps)
    sep_floor = run.tolerances.get("sep_floor", 1e-6)
    logger.info("estimating bounds over %d pairs (seed %d)", plan.count, plan.seed)
    report = estimate_lower_bound(run.coorbit, plan, sep_floor=sep_floor)
    payload = report.to_dict()
    payload["config_digest"] = run.digest()
    _write_json(args.output, payload)
    return 0


def _cmd_project(args) -> int:
    run = _load(args)
    E = read_vectors_csv(args.input, header=args.header)
    m = run.coorbit.m
    if E.shape[1] != m:
        raise DimensionMismatch(
            f"embedding rows have {E.shape[1]} entries, config produces {m}"
        )
    q = args.q or run.projection_rows or 2 * run.group.dim
    seed = args.seed if args.seed is not None else run.projection_seed
    proj = random_projection(m, q, seed)
    out = _chunked_rows(lambda B: B @ proj.matrix.T, E, args.threads)
    _write_csv(args.output, out, [f"p{k}" for k in range(q)], args.header)
    return 0


def _cmd_inject_check(args) -> int:
    run = _load(args)
    q = args.q or run.projection_rows or 2 * run.group.dim
    seed = args.seed if args.seed is not None else run.projection_seed
    trials = args.trials if args.trials is not None else run.sampling.count
    proj = random_projection(run.coorbit.m, q, seed)
    report = check_injectivity(
        run.coorbit,
        proj,
        trials=trials,
        seed=run.sampling.seed,
        tol=args.tol,
        sep_floor=run.tolerances.get("sep_floor", 1e-6),
    )
    payload = report.to_dict()
    payload["config_digest"] = run.digest()
    _write_json(args.output, payload)
    return 0


def _cmd_selftest(args) -> int:
    run = _load(args)
    results = run_invariant_suite(
        run.coorbit, trials=args.trials or 1000, seed=args.seed if args.seed is not None else 0
    )
    all_ok = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.violations} violations in {res.trials} trials")
        all_ok = all_ok and res.passed
    if not all_ok:
        return 2
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="coorbit", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p, output_required=True):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--threads", type=int, default=1, help="worker pool size for batch rows")
        p.add_argument("--header", action="store_true", help="read and write CSV header rows")
        p.add_argument("--seed", type=int, default=None, help="override the relevant seed")
        p.add_argument("--trials", type=int, default=None, help="override sample count")
        if output_required is not None:
            p.add_argument(
                "--output", required=output_required, default=None, help="output file path"
            )

    p_embed = sub.add_parser("embed", help="embed input vectors")
    common(p_embed)
    p_embed.add_argument("--input", required=True, help="CSV of input vectors, one per row")

    p_dist = sub.add_parser("dist", help="row-paired orbit distances")
    common(p_dist)
    p_dist.add_argument("--x", required=True, help="CSV of left vectors")
    p_dist.add_argument("--y", required=True, help="CSV of right vectors")

    p_lip = sub.add_parser("lipschitz", help="bi-Lipschitz bound report (JSON)")
    common(p_lip, output_required=False)

    p_proj = sub.add_parser("project", help="apply a seeded random reduction to embeddings")
    common(p_proj)
    p_proj.add_argument("--input", required=True, help="CSV of embedding vectors")
    p_proj.add_argument("--q", type=int, default=None, help="reduction rows (default 2d)")

    p_check = sub.add_parser("inject-check", help="empirical separation report (JSON)")
    common(p_check, output_required=False)
    p_check.add_argument("--q", type=int, default=None, help="reduction rows (default 2d)")
    p_check.add_argument("--tol", type=float, default=1e-8, help="collision tolerance")

    p_self = sub.add_parser("selftest", help="run the invariant suite on the config")
    common(p_self, output_required=None)

    return parser


_HANDLERS = {
    "embed": _cmd_embed,
    "dist": _cmd_dist,
    "lipschitz": _cmd_lipschitz,
    "project": _cmd_project,
    "inject-check": _cmd_inject_check,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    level = os.environ.get("COORBIT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CoorbitError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - unexpected
        logger.exception("unexpected failure")
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
