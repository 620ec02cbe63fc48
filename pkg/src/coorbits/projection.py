"""Generic linear dimension reduction of coorbit embeddings.

A full-rank Gaussian map from the embedding space down to twice the data
dimension almost surely misses any fixed finite union of proper subspaces,
so composing it with an injective embedding keeps orbits separated.  This
module draws such maps, applies them, empirically checks separation, and
computes a singular-value lower bound on how much the map can shrink vectors
lying in an explicitly supplied family of subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coorbit import CoorbitConfig, _sorted_column, _tie_block, embed_batch
from .exceptions import (
    CoorbitError,
    DimensionMismatch,
    GenericityFailure,
    KernelIntersectsFamily,
)
from .groups import check_vector
from .lipschitz import DEFAULT_SEP_FLOOR
from .metric import quotient_distance_batch

DEFAULT_SVD_TOL = 1e-10
_MAX_DRAWS = 16

# an assignment fixes, for every selector pair, the group elements realizing
# that coordinate on the left and right argument of a difference
Assignment = Mapping[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class ProjectionMap:
    """A dense linear map R^cols -> R^rows with its singular values and seed."""

    rows: int
    cols: int
    matrix: np.ndarray
    singular_values: np.ndarray
    seed: int

    def __post_init__(self):
        self.matrix.flags.writeable = False
        self.singular_values.flags.writeable = False

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class SubspaceFamily:
    """A finite list of subspaces of R^ambient, each as an orthonormal basis matrix."""

    ambient: int
    members: tuple[np.ndarray, ...]

    def __post_init__(self):
        for k, basis in enumerate(self.members):
            if basis.ndim != 2 or basis.shape[0] != self.ambient:
                raise DimensionMismatch(
                    f"member {k}: expected shape ({self.ambient}, r), got {basis.shape}"
                )
            gram = basis.T @ basis
            if np.max(np.abs(gram - np.eye(basis.shape[1]))) > 1e-8:
                raise CoorbitError(f"member {k}: basis columns are not orthonormal")


def random_projection(m: int, q: int, seed: int) -> ProjectionMap:
    """Draw a seeded Gaussian q x m map, regenerating until full rank.

    Gaussian matrices are almost surely full rank, so the retry loop exists
    only to absorb astronomically unlikely draws; after 16 failures a
    GenericityFailure is raised rather than looping forever.
    """
    if m < 1 or q < 1:
        raise ValueError("projection dimensions must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(_MAX_DRAWS):
        matrix = rng.standard_normal((q, m))
        svals = np.linalg.svd(matrix, compute_uv=False)
        if svals[-1] > DEFAULT_SVD_TOL * svals[0]:
            return ProjectionMap(
                rows=q, cols=m, matrix=matrix, singular_values=svals, seed=seed
            )
    raise GenericityFailure(f"no full-rank {q}x{m} draw in {_MAX_DRAWS} attempts")


def project_embed(cfg: CoorbitConfig, proj: ProjectionMap, x) -> np.ndarray:
    """The reduced embedding of a single vector: project after embedding."""
    x = check_vector(x, cfg.group.dim)
    return project_embed_batch(cfg, proj, x[None, :])[0]


def project_embed_batch(cfg: CoorbitConfig, proj: ProjectionMap, X) -> np.ndarray:
    if proj.cols != cfg.m:
        raise DimensionMismatch(
            f"projection expects {proj.cols} coordinates, embedding has {cfg.m}"
        )
    return embed_batch(cfg, X) @ proj.matrix.T


@dataclass(frozen=True)
class SeparationReport:
    """Result of an empirical injectivity check on sampled pairs.

    A violation is a pair whose reduced embeddings collide within tolerance
    although the pair is genuinely separated in the orbit metric.
    """

    trials: int
    violations: int
    witnesses: tuple[tuple[np.ndarray, np.ndarray], ...]
    tol: float
    seed: int
    rows: int | None

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "witnesses": [[x.tolist(), y.tolist()] for x, y in self.witnesses],
            "tol": self.tol,
            "seed": self.seed,
            "rows": self.rows,
        }


def check_injectivity(
    cfg: CoorbitConfig,
    proj: ProjectionMap | None = None,
    *,
    trials: int = 10_000,
    seed: int = 0,
    tol: float = 1e-8,
    sep_floor: float = DEFAULT_SEP_FLOOR,
    max_witnesses: int = 16,
) -> SeparationReport:
    """Sample unit-sphere pairs and count embedding collisions across orbits.

    With ``proj`` None the unreduced embedding itself is checked.  Collision
    scale follows the unreduced embedding norm, so the same tolerance is
    meaningful before and after reduction.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if proj is not None and proj.cols != cfg.m:
        raise DimensionMismatch(
            f"projection expects {proj.cols} coordinates, embedding has {cfg.m}"
        )
    rng = np.random.default_rng(seed)
    d = cfg.group.dim
    X = rng.standard_normal((trials, d))
    Y = rng.standard_normal((trials, d))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)

    phi_x = embed_batch(cfg, X)
    phi_y = embed_batch(cfg, Y)
    if proj is None:
        psi_x, psi_y = phi_x, phi_y
    else:
        psi_x = phi_x @ proj.matrix.T
        psi_y = phi_y @ proj.matrix.T
    collide = np.linalg.norm(psi_x - psi_y, axis=1) <= tol * (
        1.0 + np.linalg.norm(phi_x, axis=1)
    )
    dist, _ = quotient_distance_batch(cfg.group, X, Y)
    flags = collide & (dist > sep_floor)
    idx = np.nonzero(flags)[0]
    witnesses = tuple((X[k].copy(), Y[k].copy()) for k in idx[:max_witnesses])
    return SeparationReport(
        trials=trials,
        violations=int(idx.size),
        witnesses=witnesses,
        tol=tol,
        seed=seed,
        rows=None if proj is None else proj.rows,
    )


def build_difference_ranges(
    cfg: CoorbitConfig, assignments: Iterable[Assignment], *, svd_tol: float = DEFAULT_SVD_TOL
) -> SubspaceFamily:
    """Ranges of the linear difference maps fixed by element assignments.

    Each assignment pins, for every selector pair (rank, window), the group
    elements realizing that coordinate on the two sides of a difference of
    embeddings.  The induced map (x, y) -> differences is linear from R^{2d}
    into the embedding space; its range (dimension at most 2d) is returned
    as an orthonormal basis.
    """
    d = cfg.group.dim
    n = cfg.group.order
    members = []
    for a_idx, assignment in enumerate(assignments):
        rows = np.zeros((cfg.m, 2 * d))
        for r, (j, i) in enumerate(cfg.selector):
            try:
                gx, gy = assignment[(j, i)]
            except KeyError:
                raise CoorbitError(
                    f"assignment {a_idx} misses selector pair (rank={j}, window={i})"
                ) from None
            if not (0 <= gx < n and 0 <= gy < n):
                raise CoorbitError(
                    f"assignment {a_idx}: element indices {(gx, gy)} outside 0..{n - 1}"
                )
            rows[r, :d] = cfg.orbit_windows[i - 1, gx]
            rows[r, d:] = -cfg.orbit_windows[i - 1, gy]
        u, s, _ = np.linalg.svd(rows, full_matrices=False)
        rank = int(np.count_nonzero(s > svd_tol * max(s[0], 1e-300)))
        members.append(np.ascontiguousarray(u[:, :rank]))
    return SubspaceFamily(ambient=cfg.m, members=tuple(members))


def harvest_assignments(cfg: CoorbitConfig, X, Y) -> list[dict]:
    """Collect the element assignments realized by sampled pairs.

    For every pair of rows, the representative achieving each selected
    coordinate is read off the level sets of the two sides (smallest element
    index on ties, so the harvest is deterministic).  Duplicates across pairs
    are removed while preserving first-seen order.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    seen = set()
    out: list[dict] = []
    for x, y in zip(X, Y):
        assignment = {}
        for side, vec in enumerate((x, y)):
            vec = check_vector(vec, cfg.group.dim)
            v_norm = float(np.linalg.norm(vec))
            for i in range(1, cfg.p + 1):
                values, order = _sorted_column(cfg, i - 1, vec)
                for j in cfg.ranks_for_window(i):
                    lo, hi = _tie_block(cfg, i - 1, values, j - 1, v_norm)
                    rep = int(order[lo : hi + 1].min())
                    if side == 0:
                        assignment[(j, i)] = (rep, -1)
                    else:
                        gx, _ = assignment[(j, i)]
                        assignment[(j, i)] = (gx, rep)
        key = tuple(sorted(assignment.items()))
        if key not in seen:
            seen.add(key)
            out.append(assignment)
    return out


def subspace_lower_bound(
    proj: ProjectionMap, fam: SubspaceFamily, *, svd_tol: float = DEFAULT_SVD_TOL
) -> float:
    """How much the map can shrink a unit vector lying in the family.

    The bound is the smallest positive singular value of the map scaled by
    the worst alignment between a family member and the map's kernel (one
    minus the squared largest principal-angle cosine, square-rooted).  Exact
    kernel/member intersection voids the bound and raises
    KernelIntersectsFamily.
    """
    if fam.ambient != proj.cols:
        raise DimensionMismatch(
            f"family lives in R^{fam.ambient}, map expects R^{proj.cols}"
        )
    m, q = proj.cols, proj.rows
    sigma_min = float(proj.singular_values[-1])
    if m <= q:
        # trivial kernel: nothing to intersect
        return sigma_min
    _, _, vt = np.linalg.svd(proj.matrix, full_matrices=True)
    kernel = vt[q:].T  # (m, m - q), orthonormal columns
    c = 1.0
    for a, basis in enumerate(fam.members):
        overlap = np.linalg.svd(basis.T @ kernel, compute_uv=False)
        largest = float(overlap[0]) if overlap.size else 0.0
        c_a = float(np.sqrt(max(0.0, 1.0 - largest**2)))
        if c_a <= svd_tol:
            raise KernelIntersectsFamily(
                f"member {a} meets the kernel; no positive bound exists"
            )
        c = min(c, c_a)
    return c * sigma_min
