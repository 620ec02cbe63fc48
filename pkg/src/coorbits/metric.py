"""The natural metric between group orbits.

The distance between the orbits of x and y is the smallest Euclidean distance
from x to any image of y; because the action is orthogonal this is symmetric
and satisfies the triangle inequality on orbit representatives.  The search
is exhaustive over all N elements, which is exact and cheap at the group
sizes this package supports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroupAction, check_vector

DEFAULT_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class AlignmentResult:
    """Outcome of an orbit alignment: the distance, who achieved it, and ties.

    ``aligner`` is the index of an element g* minimizing |x - U_g y| (the
    smallest index on ties); ``ties`` lists every index within the alignment
    tolerance of the minimum.
    """

    distance: float
    aligner: int
    ties: tuple[int, ...]


def quotient_distance(
    group: FiniteGroupAction, x, y, *, align_tol: float = DEFAULT_ALIGN_TOL
) -> AlignmentResult:
    """Distance between the orbits of x and y with the optimal aligning element."""
    x = check_vector(x, group.dim)
    y = check_vector(y, group.dim)
    dists = np.linalg.norm(x - group.apply_all(y), axis=1)
    best = int(np.argmin(dists))
    scale = max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(y)))
    ties = np.nonzero(dists <= dists[best] + align_tol * scale)[0]
    return AlignmentResult(
        distance=float(dists[best]),
        aligner=best,
        ties=tuple(int(t) for t in ties),
    )


def quotient_distance_batch(group: FiniteGroupAction, X, Y):
    """Row-wise orbit distances between X and Y.

    Returns (distances, aligners) as arrays of shape (n_rows,).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape != Y.shape or X.shape[1] != group.dim:
        raise ValueError(
            f"X and Y must both be (n, {group.dim}) arrays, got {X.shape} and {Y.shape}"
        )
    n = X.shape[0]
    out_d = np.empty(n)
    out_g = np.empty(n, dtype=np.int64)
    chunk = max(1, int(2e7 / (group.order * group.dim)))
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        # images[k, g, :] = U_g y_k
        images = np.einsum("gde,ne->ngd", group.matrices, Y[sl])
        dists = np.linalg.norm(X[sl, None, :] - images, axis=2)
        aligners = np.argmin(dists, axis=1)
        out_d[sl] = dists[np.arange(dists.shape[0]), aligners]
        out_g[sl] = aligners
    return out_d, out_g


def is_equivalent(group: FiniteGroupAction, x, y, tol: float = DEFAULT_ALIGN_TOL) -> bool:
    """Whether x and y lie on the same orbit, up to a norm-scaled tolerance."""
    x = check_vector(x, group.dim)
    y = check_vector(y, group.dim)
    result = quotient_distance(group, x, y)
    return result.distance <= tol * max(1.0, float(np.linalg.norm(x)))
