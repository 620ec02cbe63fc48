"""Randomized invariant suite for a coorbit configuration.

Each check samples vectors and verifies one structural property of the
sorted measurements: order-statistic counting, tie-block structure, level-set
stability under small perturbations, stability along perturbation rays, and
scale equivariance of level sets and gaps.  The suite backs the CLI
``selftest`` subcommand and mirrors the properties the test suite pins down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coorbit import CoorbitConfig, _sorted_column, gap_table, level_set

_CHECKS = ("rank-counts", "tie-blocks", "perturbation-nesting", "ray-stability", "scaling")


@dataclass(frozen=True)
class InvariantResult:
    name: str
    trials: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _strict_sets(values_sorted: np.ndarray, products: np.ndarray, j0: int):
    phi = values_sorted[j0]
    return set(np.nonzero(products > phi)[0]), set(np.nonzero(products < phi)[0])


def _check_rank_counts(cfg: CoorbitConfig, X: np.ndarray) -> int:
    n = cfg.group.order
    bad = 0
    for x in X:
        for i0 in range(cfg.p):
            products = cfg.orbit_windows[i0] @ x
            values = np.sort(products)[::-1]
            for j0 in range(n):
                greater = int(np.count_nonzero(products > values[j0]))
                less = int(np.count_nonzero(products < values[j0]))
                if greater > j0 or less > n - 1 - j0:
                    bad += 1
    return bad


def _check_tie_blocks(cfg: CoorbitConfig, X: np.ndarray) -> int:
    """Adjacent ranks either tie with equal level sets or split the group cleanly.

    The tie decision reuses the configuration's comparator so the check stays
    consistent with how level sets themselves are extracted.
    """
    n = cfg.group.order
    bad = 0
    for x in X:
        x_norm = float(np.linalg.norm(x))
        for i0 in range(cfg.p):
            values, _ = _sorted_column(cfg, i0, x)
            tol_abs = cfg.tie_tol * cfg.window_norms[i0] * x_norm
            sets = [level_set(cfg, i0 + 1, j, x) for j in range(1, n + 1)]
            for j0 in range(n - 1):
                if values[j0] - values[j0 + 1] <= tol_abs:
                    if sets[j0] != sets[j0 + 1]:
                        bad += 1
                else:
                    if sets[j0] & sets[j0 + 1]:
                        bad += 1
                    union = set().union(*sets[: j0 + 1])
                    if len(union) != j0 + 1:
                        bad += 1
    return bad


def _nesting_violations(cfg: CoorbitConfig, x: np.ndarray, y: np.ndarray, i: int, j: int) -> int:
    i0, j0 = i - 1, j - 1
    products_x = cfg.orbit_windows[i0] @ x
    products_xy = cfg.orbit_windows[i0] @ (x + y)
    vx = np.sort(products_x)[::-1]
    vxy = np.sort(products_xy)[::-1]
    greater_x, less_x = _strict_sets(vx, products_x, j0)
    greater_xy, less_xy = _strict_sets(vxy, products_xy, j0)
    geq_xy = set(np.nonzero(products_xy >= vxy[j0])[0])
    leq_xy = set(np.nonzero(products_xy <= vxy[j0])[0])
    geq_x = set(np.nonzero(products_x >= vx[j0])[0])
    leq_x = set(np.nonzero(products_x <= vx[j0])[0])
    bad = 0
    if not level_set(cfg, i, j, x + y) <= level_set(cfg, i, j, x):
        bad += 1
    if not greater_x <= greater_xy:
        bad += 1
    if not less_x <= less_xy:
        bad += 1
    if not geq_xy <= geq_x:
        bad += 1
    if not leq_xy <= leq_x:
        bad += 1
    return bad


def _check_nesting(cfg: CoorbitConfig, X: np.ndarray, rng: np.random.Generator) -> int:
    bad = 0
    n = cfg.group.order
    for x in X:
        gaps = gap_table(cfg, x)
        i = int(rng.integers(1, cfg.p + 1))
        j = int(rng.integers(1, n + 1))
        delta = gaps[i - 1, j - 1]
        if delta <= 0:
            bad += 1
            continue
        y = rng.standard_normal(cfg.group.dim)
        y *= 0.45 * delta / np.linalg.norm(y)
        bad += _nesting_violations(cfg, x, y, i, j)
    return bad


def _check_ray_stability(cfg: CoorbitConfig, X: np.ndarray, rng: np.random.Generator) -> int:
    bad = 0
    n = cfg.group.order
    for x in X:
        gaps = gap_table(cfg, x)
        i = int(rng.integers(1, cfg.p + 1))
        j = int(rng.integers(1, n + 1))
        delta = gaps[i - 1, j - 1]
        if delta <= 0:
            bad += 1
            continue
        c1, c2 = np.exp(rng.uniform(np.log(0.1), np.log(2.0), size=2))
        y = rng.standard_normal(cfg.group.dim)
        y *= 0.2 * delta / (max(c1, c2) * np.linalg.norm(y))
        if level_set(cfg, i, j, x + c1 * y) != level_set(cfg, i, j, x + c2 * y):
            bad += 1
    return bad


def _check_scaling(cfg: CoorbitConfig, X: np.ndarray, rng: np.random.Generator) -> int:
    bad = 0
    n = cfg.group.order
    for x in X:
        t = float(np.exp(rng.uniform(np.log(0.05), np.log(20.0))))
        gaps = gap_table(cfg, x)
        gaps_t = gap_table(cfg, t * x)
        if np.any(gaps <= 0):
            bad += 1
        if np.any(np.abs(gaps_t - t * gaps) > 1e-10 * t * np.maximum(gaps, 1e-300)):
            bad += 1
        i = int(rng.integers(1, cfg.p + 1))
        j = int(rng.integers(1, n + 1))
        if level_set(cfg, i, j, t * x) != level_set(cfg, i, j, x):
            bad += 1
    return bad


def run_invariant_suite(
    cfg: CoorbitConfig, trials: int = 1000, seed: int = 0
) -> list[InvariantResult]:
    """Run every invariant check on ``trials`` random unit vectors each."""
    root = np.random.SeedSequence(seed)
    streams = [np.random.default_rng(s) for s in root.spawn(len(_CHECKS))]
    results = []
    for name, rng in zip(_CHECKS, streams):
        X = rng.standard_normal((trials, cfg.group.dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        if name == "rank-counts":
            bad = _check_rank_counts(cfg, X)
        elif name == "tie-blocks":
            bad = _check_tie_blocks(cfg, X)
        elif name == "perturbation-nesting":
            bad = _check_nesting(cfg, X, rng)
        elif name == "ray-stability":
            bad = _check_ray_stability(cfg, X, rng)
        else:
            bad = _check_scaling(cfg, X, rng)
        results.append(InvariantResult(name=name, trials=trials, violations=bad))
    return results
