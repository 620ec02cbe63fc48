"""Upper Lipschitz bounds and empirical lower-bound estimation.

The embedding is piecewise linear, so its Lipschitz constant against the
orbit metric is controlled by the largest eigenvalue of sums of rank-one
measurement outer products: taking, for every window, the worst subset of
group elements of the selected size gives an exact bound, and letting every
subset be the whole group gives a cheaper relaxation that is always valid.
No closed form exists for the lower constant; it is estimated by sampling
pairs and locally refining the worst one found.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .coorbit import CoorbitConfig, embed_batch
from .exceptions import AllPairsEquivalent, EnumerationTooLarge
from .metric import quotient_distance_batch

DEFAULT_ENUM_CAP = 10**6
DEFAULT_SEP_FLOOR = 1e-6
_EIG_CHUNK = 4096


def _rank_one_terms(cfg: CoorbitConfig) -> np.ndarray:
    """terms[i, g] = (U_g w_i)(U_g w_i)^T, shape (p, N, d, d)."""
    ow = cfg.orbit_windows
    return np.einsum("pgd,pge->pgde", ow, ow)


def _selected_counts(cfg: CoorbitConfig) -> list[int]:
    return [len(cfg.ranks_for_window(i)) for i in range(1, cfg.p + 1)]


def enumeration_size(cfg: CoorbitConfig) -> int:
    """Number of subset combinations the exact bound has to visit."""
    n = cfg.group.order
    size = 1
    for m_i in _selected_counts(cfg):
        size *= math.comb(n, m_i)
    return size


def upper_bound_relaxed(cfg: CoorbitConfig) -> float:
    """Always-valid Lipschitz bound from the full-group frame operator.

    Enlarging each subset to the whole group only adds positive semidefinite
    terms, so this dominates the exact bound.
    """
    frame = np.einsum("pgd,pge->de", cfg.orbit_windows, cfg.orbit_windows)
    return float(np.sqrt(np.linalg.eigvalsh(frame)[-1]))


def upper_bound_exact(cfg: CoorbitConfig, *, enum_cap: int = DEFAULT_ENUM_CAP) -> float:
    """Exact Lipschitz bound by enumerating every per-window subset choice.

    For each choice of one subset of group elements per window (with the
    subset size fixed to that window's selected-rank count), the candidate is
    the largest eigenvalue of the summed outer products; the bound is the
    square root of the maximum candidate.

    Raises EnumerationTooLarge when the product of binomial counts exceeds
    ``enum_cap``; callers should fall back to the relaxed bound.
    """
    total = enumeration_size(cfg)
    if total > enum_cap:
        raise EnumerationTooLarge(
            f"{total} subset combinations exceed enum_cap = {enum_cap}"
        )
    n, d = cfg.group.order, cfg.group.dim
    terms = _rank_one_terms(cfg)
    # per-window stacks of all subset sums
    window_sums = []
    for i0, m_i in enumerate(_selected_counts(cfg)):
        combos = list(itertools.combinations(range(n), m_i))
        sums = np.zeros((len(combos), d, d))
        for k, combo in enumerate(combos):
            if combo:
                sums[k] = terms[i0][list(combo)].sum(axis=0)
        window_sums.append(sums)

    best = -np.inf
    buffer = np.empty((_EIG_CHUNK, d, d))
    filled = 0
    for choice in itertools.product(*window_sums):
        acc = choice[0].copy()
        for extra in choice[1:]:
            acc += extra
        buffer[filled] = acc
        filled += 1
        if filled == _EIG_CHUNK:
            best = max(best, float(np.linalg.eigvalsh(buffer)[:, -1].max()))
            filled = 0
    if filled:
        best = max(best, float(np.linalg.eigvalsh(buffer[:filled])[:, -1].max()))
    return float(np.sqrt(best))


@dataclass(frozen=True)
class SamplingPlan:
    """How to sample pairs for the empirical lower bound.

    ``count`` unit-sphere pairs are drawn from a generator seeded with
    ``seed``; the worst pair is then refined by ``refine_steps`` random
    perturbation proposals, accepting only improvements.
    """

    count: int = 10_000
    seed: int = 0
    refine_steps: int = 200


@dataclass(frozen=True)
class LipschitzReport:
    """Bi-Lipschitz estimate for one embedding configuration.

    ``upper_bound_exact`` is None when subset enumeration was infeasible.
    The empirical lower bound is the smallest embedding-distance to
    orbit-distance ratio seen over all retained pairs (pairs closer than
    ``sep_floor`` in the orbit metric are discarded as numerically
    meaningless), after local refinement of the worst pair.
    """

    upper_bound_exact: float | None
    upper_bound_relaxed: float
    lower_bound_empirical: float
    ratio_mean: float
    ratio_max: float
    witness_x: np.ndarray
    witness_y: np.ndarray
    n_samples: int
    n_retained: int
    seed: int
    refine_steps: int

    def to_dict(self) -> dict:
        return {
            "upper_bound_exact": self.upper_bound_exact,
            "upper_bound_relaxed": self.upper_bound_relaxed,
            "lower_bound_empirical": self.lower_bound_empirical,
            "ratio_mean": self.ratio_mean,
            "ratio_max": self.ratio_max,
            "witness_x": self.witness_x.tolist(),
            "witness_y": self.witness_y.tolist(),
            "n_samples": self.n_samples,
            "n_retained": self.n_retained,
            "seed": self.seed,
            "refine_steps": self.refine_steps,
        }


def _pair_ratio(cfg: CoorbitConfig, x: np.ndarray, y: np.ndarray, sep_floor: float):
    diff = embed_batch(cfg, np.stack([x, y]))
    num = float(np.linalg.norm(diff[0] - diff[1]))
    den, _ = quotient_distance_batch(cfg.group, x[None, :], y[None, :])
    den = float(den[0])
    if den <= sep_floor:
        return None
    return num / den


def estimate_lower_bound(
    cfg: CoorbitConfig,
    plan: SamplingPlan,
    *,
    sep_floor: float = DEFAULT_SEP_FLOOR,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> LipschitzReport:
    """Sample unit-sphere pairs and report the observed bi-Lipschitz envelope.

    Raises AllPairsEquivalent if no sampled pair separates beyond
    ``sep_floor`` in the orbit metric.
    """
    rng = np.random.default_rng(plan.seed)
    d = cfg.group.dim
    X = rng.standard_normal((plan.count, d))
    Y = rng.standard_normal((plan.count, d))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)

    num = np.linalg.norm(embed_batch(cfg, X) - embed_batch(cfg, Y), axis=1)
    den, _ = quotient_distance_batch(cfg.group, X, Y)
    retained = den > sep_floor
    if not np.any(retained):
        raise AllPairsEquivalent(
            "every sampled pair is orbit-equivalent below sep_floor; "
            "nothing to estimate"
        )
    ratios = num[retained] / den[retained]
    worst = int(np.argmin(ratios))
    witness_x = X[retained][worst].copy()
    witness_y = Y[retained][worst].copy()
    best_ratio = float(ratios[worst])

    # local descent around the witness: alternate which side moves, shrink on stalls
    step = 0.05
    stale = 0
    for k in range(plan.refine_steps):
        noise_x = step * rng.standard_normal(d)
        noise_y = step * rng.standard_normal(d)
        if k % 3 == 0:
            noise_y[:] = 0.0
        elif k % 3 == 1:
            noise_x[:] = 0.0
        cand_x = witness_x + noise_x
        cand_y = witness_y + noise_y
        cand_x /= np.linalg.norm(cand_x)
        cand_y /= np.linalg.norm(cand_y)
        ratio = _pair_ratio(cfg, cand_x, cand_y, sep_floor)
        if ratio is not None and ratio < best_ratio:
            best_ratio = ratio
            witness_x, witness_y = cand_x, cand_y
            stale = 0
        else:
            stale += 1
            if stale >= 10:
                step *= 0.5
                stale = 0

    try:
        exact = upper_bound_exact(cfg, enum_cap=enum_cap)
    except EnumerationTooLarge:
        exact = None
    return LipschitzReport(
        upper_bound_exact=exact,
        upper_bound_relaxed=upper_bound_relaxed(cfg),
        lower_bound_empirical=best_ratio,
        ratio_mean=float(np.mean(ratios)),
        ratio_max=float(np.max(ratios)),
        witness_x=witness_x,
        witness_y=witness_y,
        n_samples=plan.count,
        n_retained=int(np.count_nonzero(retained)),
        seed=plan.seed,
        refine_steps=plan.refine_steps,
    )
