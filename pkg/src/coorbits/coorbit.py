"""Sorted-coorbit embeddings and their level-set / gap diagnostics.

For a window vector w and a group element g, the measurement <U_g w, x> is
linear in x; sorting the N measurements of one window in decreasing order
makes the result invariant under the group action on x.  An embedding keeps a
fixed subset of ranks per window, concatenated in (window, rank) order.

Rank and window indices are 1-based throughout the public API: rank 1 is the
largest value of a column (the "max filter" coordinate) and windows are
numbered 1..p.  Selector pairs are written (rank, window).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionMismatch, WindowIndexOutOfRange
from .groups import FiniteGroupAction, check_vector

DEFAULT_TIE_TOL = 1e-9

SelectorPair = tuple[int, int]  # (rank, window), both 1-based


def max_selector(p: int) -> tuple[SelectorPair, ...]:
    """Selector keeping only the maximum of each window column (the max filter)."""
    return tuple((1, i) for i in range(1, p + 1))


def top_k_selector(p: int, k: int) -> tuple[SelectorPair, ...]:
    """Selector keeping ranks 1..k of every window; k = 1 is the max filter."""
    return tuple((j, i) for i in range(1, p + 1) for j in range(1, k + 1))


def full_selector(p: int, n: int) -> tuple[SelectorPair, ...]:
    """Selector keeping all N ranks of every window."""
    return top_k_selector(p, n)


@dataclass(frozen=True)
class CoorbitConfig:
    """Windows plus a selector of (rank, window) pairs, defining one embedding.

    The orbit of every window under the group is precomputed once, so each
    evaluation costs one (N x d) @ d product and a sort per window.  The tie
    tolerance is the single comparator shared by level-set extraction and gap
    computation; it is relative to |w_i| * |x|.
    """

    group: FiniteGroupAction
    windows: np.ndarray  # (p, d)
    selector: tuple[SelectorPair, ...]
    tie_tol: float = DEFAULT_TIE_TOL

    # derived, set in __post_init__
    orbit_windows: np.ndarray = field(init=False, repr=False, compare=False)
    window_norms: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        windows = np.array(self.windows, dtype=float, ndmin=2)
        if windows.shape[1] != self.group.dim:
            raise DimensionMismatch(
                f"windows have dimension {windows.shape[1]}, group acts on R^{self.group.dim}"
            )
        norms = np.linalg.norm(windows, axis=1)
        if np.any(norms == 0):
            raise ValueError("every window must be nonzero")
        p, n = windows.shape[0], self.group.order
        selector = tuple((int(j), int(i)) for j, i in self.selector)
        if len(selector) == 0:
            raise ValueError("selector must contain at least one (rank, window) pair")
        if len(set(selector)) != len(selector):
            raise ValueError("selector contains duplicate (rank, window) pairs")
        for j, i in selector:
            if not 1 <= j <= n:
                raise ValueError(f"selector rank {j} outside 1..{n}")
            if not 1 <= i <= p:
                raise ValueError(f"selector window {i} outside 1..{p}")
        selector = tuple(sorted(selector, key=lambda ji: (ji[1], ji[0])))
        object.__setattr__(self, "windows", windows)
        object.__setattr__(self, "selector", selector)
        # orbit_windows[i, g] = U_g w_{i+1}
        orbit = np.einsum("gde,pe->pgd", self.group.matrices, windows)
        object.__setattr__(self, "orbit_windows", orbit)
        object.__setattr__(self, "window_norms", norms)
        for arr in (windows, orbit, norms):
            arr.flags.writeable = False
        object.__setattr__(
            self,
            "_win_idx",
            np.array([i - 1 for _, i in selector], dtype=np.intp),
        )
        object.__setattr__(
            self,
            "_rank_idx",
            np.array([j - 1 for j, _ in selector], dtype=np.intp),
        )

    @property
    def p(self) -> int:
        return self.windows.shape[0]

    @property
    def m(self) -> int:
        return len(self.selector)

    def ranks_for_window(self, i: int) -> tuple[int, ...]:
        """Selected ranks of window i (1-based), ascending."""
        return tuple(j for j, w in self.selector if w == i)


@dataclass(frozen=True)
class CoorbitValue:
    """One coorbit coordinate with its ties and perturbation margin.

    ``level_set`` holds the element indices whose measurement ties with the
    rank-``rank`` value of window ``window``; ``gap`` is the distance (after
    dividing by the window norm) from that value to the nearest distinct
    measurement, or |x|/|w| when every element ties.
    """

    window: int
    rank: int
    value: float
    level_set: frozenset[int]
    gap: float


def sort_desc(values) -> np.ndarray:
    """The input values rearranged in nonincreasing order."""
    return np.sort(np.asarray(values, dtype=float).ravel())[::-1].copy()


def _window_index(cfg: CoorbitConfig, i: int) -> int:
    if not 1 <= i <= cfg.p:
        raise WindowIndexOutOfRange(f"window index {i} outside 1..{cfg.p}")
    return i - 1


def _rank_index(cfg: CoorbitConfig, j: int) -> int:
    n = cfg.group.order
    if not 1 <= j <= n:
        raise ValueError(f"rank {j} outside 1..{n}")
    return j - 1


def _sorted_column(cfg: CoorbitConfig, i0: int, x: np.ndarray):
    """Descending measurements of one window with the achieving element order.

    Ties are broken by element index, so the bookkeeping is deterministic.
    """
    products = cfg.orbit_windows[i0] @ x
    order = np.argsort(-products, kind="stable")
    return products[order], order


def coorbit_column(cfg: CoorbitConfig, i: int, x) -> np.ndarray:
    """All N sorted measurements of window i against x, largest first."""
    x = check_vector(x, cfg.group.dim)
    i0 = _window_index(cfg, i)
    values, _ = _sorted_column(cfg, i0, x)
    return values


def embed(cfg: CoorbitConfig, x) -> np.ndarray:
    """The embedding of a single vector, one coordinate per selector pair.

    Coordinates are ordered by window then rank, matching the selector's
    canonical order.
    """
    x = check_vector(x, cfg.group.dim)
    return embed_batch(cfg, x[None, :])[0]


def embed_batch(cfg: CoorbitConfig, X) -> np.ndarray:
    """Embed each row of X; returns an (n_rows, m) array."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != cfg.group.dim:
        raise DimensionMismatch(
            f"rows have dimension {X.shape[1]}, group acts on R^{cfg.group.dim}"
        )
    products = np.einsum("pgd,nd->npg", cfg.orbit_windows, X)
    products.sort(axis=2)
    sorted_desc = products[:, :, ::-1]
    return np.ascontiguousarray(sorted_desc[:, cfg._win_idx, cfg._rank_idx])


def _tie_block(cfg: CoorbitConfig, i0: int, values: np.ndarray, j0: int, x_norm: float):
    """Contiguous run [lo, hi] of descending-sorted positions tying with rank j0."""
    tol_abs = cfg.tie_tol * cfg.window_norms[i0] * x_norm
    target = values[j0]
    asc = values[::-1]
    n = values.size
    lo_asc = np.searchsorted(asc, target - tol_abs, side="left")
    hi_asc = np.searchsorted(asc, target + tol_abs, side="right") - 1
    return n - 1 - hi_asc, n - 1 - lo_asc


def level_set(cfg: CoorbitConfig, i: int, j: int, x) -> set[int]:
    """Group elements whose measurement ties with the rank-j value of window i."""
    x = check_vector(x, cfg.group.dim)
    i0, j0 = _window_index(cfg, i), _rank_index(cfg, j)
    values, order = _sorted_column(cfg, i0, x)
    lo, hi = _tie_block(cfg, i0, values, j0, float(np.linalg.norm(x)))
    return {int(g) for g in order[lo : hi + 1]}


def gap(cfg: CoorbitConfig, i: int, j: int, x) -> float:
    """Distance from the rank-j value of window i to the nearest distinct measurement.

    Normalized by the window norm.  When every element ties (in particular at
    x = 0) the value is |x| / |w_i| instead.
    """
    x = check_vector(x, cfg.group.dim)
    i0, j0 = _window_index(cfg, i), _rank_index(cfg, j)
    values, _ = _sorted_column(cfg, i0, x)
    x_norm = float(np.linalg.norm(x))
    lo, hi = _tie_block(cfg, i0, values, j0, x_norm)
    w_norm = cfg.window_norms[i0]
    candidates = []
    if lo > 0:
        candidates.append(values[lo - 1] - values[j0])
    if hi < values.size - 1:
        candidates.append(values[j0] - values[hi + 1])
    if not candidates:
        return x_norm / w_norm
    return float(min(candidates)) / w_norm


def gap_table(cfg: CoorbitConfig, x) -> np.ndarray:
    """Gaps of every (window, rank) pair as a (p, N) array."""
    x = check_vector(x, cfg.group.dim)
    x_norm = float(np.linalg.norm(x))
    n = cfg.group.order
    table = np.empty((cfg.p, n))
    for i0 in range(cfg.p):
        values, _ = _sorted_column(cfg, i0, x)
        w_norm = cfg.window_norms[i0]
        tol_abs = cfg.tie_tol * w_norm * x_norm
        asc = values[::-1]
        lo = n - 1 - (np.searchsorted(asc, values + tol_abs, side="right") - 1)
        hi = n - 1 - np.searchsorted(asc, values - tol_abs, side="left")
        for j0 in range(n):
            candidates = []
            if lo[j0] > 0:
                candidates.append(values[lo[j0] - 1] - values[j0])
            if hi[j0] < n - 1:
                candidates.append(values[j0] - values[hi[j0] + 1])
            table[i0, j0] = min(candidates) / w_norm if candidates else x_norm / w_norm
    return table


def global_gap(cfg: CoorbitConfig, x) -> float:
    """Minimum gap over every (window, rank) pair, selected or not."""
    return float(gap_table(cfg, x).min())


def coorbit_value(cfg: CoorbitConfig, i: int, j: int, x) -> CoorbitValue:
    """Bundle the rank-j value of window i with its level set and gap."""
    x = check_vector(x, cfg.group.dim)
    i0, j0 = _window_index(cfg, i), _rank_index(cfg, j)
    values, order = _sorted_column(cfg, i0, x)
    x_norm = float(np.linalg.norm(x))
    lo, hi = _tie_block(cfg, i0, values, j0, x_norm)
    w_norm = cfg.window_norms[i0]
    candidates = []
    if lo > 0:
        candidates.append(values[lo - 1] - values[j0])
    if hi < values.size - 1:
        candidates.append(values[j0] - values[hi + 1])
    gap_value = float(min(candidates)) / w_norm if candidates else x_norm / w_norm
    return CoorbitValue(
        window=i,
        rank=j,
        value=float(values[j0]),
        level_set=frozenset(int(g) for g in order[lo : hi + 1]),
        gap=gap_value,
    )
