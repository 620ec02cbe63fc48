"""Brute-force reference implementations, for tests only.

Everything here is written as the most literal translation of the defining
formulas: explicit loops, full sorts, no precomputation, no code shared with
the production paths.  Production modules must never import this one; the
test suite checks that they do not.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .coorbit import CoorbitConfig
from .exceptions import DimensionTooLarge, EnumerationTooLarge
from .groups import check_vector

NAIVE_ENUM_CAP = 10**4


def naive_embed(cfg: CoorbitConfig, x) -> np.ndarray:
    """Reference embedding: N explicit inner products per window, full sort, index."""
    x = check_vector(x, cfg.group.dim)
    group = cfg.group
    out = []
    for rank, win in cfg.selector:
        w = cfg.windows[win - 1]
        products = []
        for g in range(group.order):
            moved_window = group.matrices[g] @ w
            products.append(float(np.dot(moved_window, x)))
        products.sort(reverse=True)
        out.append(products[rank - 1])
    return np.array(out)


def naive_upper_bound(cfg: CoorbitConfig, *, enum_cap: int = NAIVE_ENUM_CAP) -> float:
    """Reference exact Lipschitz bound: no pruning, no vectorized batching."""
    group = cfg.group
    n, d = group.order, group.dim
    counts = [len(cfg.ranks_for_window(i)) for i in range(1, cfg.p + 1)]
    total = 1
    for m_i in counts:
        total *= math.comb(n, m_i)
    if total > enum_cap:
        raise EnumerationTooLarge(f"{total} combinations exceed the oracle cap {enum_cap}")
    per_window_choices = [
        list(itertools.combinations(range(n), m_i)) for m_i in counts
    ]
    best = -np.inf
    for choice in itertools.product(*per_window_choices):
        total_matrix = np.zeros((d, d))
        for i0, subset in enumerate(choice):
            w = cfg.windows[i0]
            for g in subset:
                moved = group.matrices[g] @ w
                total_matrix += np.outer(moved, moved)
        top = float(np.linalg.eigvalsh(total_matrix)[-1])
        best = max(best, top)
    return float(math.sqrt(best))


def _sphere_grid(d: int, resolution: int) -> np.ndarray:
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        angles = 2.0 * np.pi * np.arange(resolution) / resolution
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if d == 3:
        points = []
        for a in range(resolution):
            theta = np.pi * (a + 0.5) / resolution
            for b in range(resolution):
                phi = 2.0 * np.pi * b / resolution
                points.append(
                    [
                        np.sin(theta) * np.cos(phi),
                        np.sin(theta) * np.sin(phi),
                        np.cos(theta),
                    ]
                )
        return np.array(points)
    raise DimensionTooLarge(f"sphere grids are only available for d <= 3, got d = {d}")


def sphere_min_ratio(
    cfg: CoorbitConfig, grid_resolution: int, *, sep_floor: float = 1e-6
) -> float:
    """Worst embedding-to-orbit distance ratio over a deterministic sphere grid.

    Serves as a grid proxy for the infimum defining the lower Lipschitz
    constant; refining the grid can only lower the value.
    """
    group = cfg.group
    points = _sphere_grid(group.dim, grid_resolution)
    embeddings = [naive_embed(cfg, point) for point in points]
    best = np.inf
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            dist = min(
                float(np.linalg.norm(points[a] - group.matrices[g] @ points[b]))
                for g in range(group.order)
            )
            if dist <= sep_floor:
                continue
            ratio = float(np.linalg.norm(embeddings[a] - embeddings[b])) / dist
            best = min(best, ratio)
    return float(best)
