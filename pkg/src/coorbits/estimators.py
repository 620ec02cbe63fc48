"""Scikit-learn style transformers wrapping the functional core.

These exist so the embedding composes with pipelines, grid search, and the
rest of the estimator ecosystem; all computation is delegated to the
functional API.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .coorbit import CoorbitConfig, embed_batch, full_selector, max_selector, top_k_selector
from .groups import DEFAULT_MAX_ORDER, FiniteGroupAction, GroupSpec, build_group
from .projection import ProjectionMap, project_embed_batch, random_projection


def _resolve_group(group, group_size, n_features) -> FiniteGroupAction:
    if isinstance(group, FiniteGroupAction):
        return group
    if isinstance(group, GroupSpec):
        return build_group(group)
    if isinstance(group, str):
        size = n_features if group_size is None else int(group_size)
        if group in ("cyclic", "dihedral", "sign_flips"):
            return build_group(GroupSpec(group, n=size))
        raise ValueError(
            f"group kind {group!r} needs explicit generators; pass a GroupSpec "
            "or a FiniteGroupAction instead"
        )
    raise TypeError(f"cannot interpret group = {group!r}")


def _resolve_selector(selector, p, n):
    if isinstance(selector, str):
        if selector == "max":
            return max_selector(p)
        if selector == "full":
            return full_selector(p, n)
        raise ValueError(f"selector {selector!r} not recognized; use 'max', 'full', an int k, or pairs")
    if isinstance(selector, numbers.Integral):
        return top_k_selector(p, int(selector))
    return tuple((int(j), int(i)) for j, i in selector)


class CoorbitEmbedding(TransformerMixin, BaseEstimator):
    """Group-invariant feature map from sorted window measurements.

    Each output coordinate is one rank of the descending-sorted inner
    products of the input against the group orbit of one window, so two
    inputs on the same orbit map to identical features.

    Parameters
    ----------
    group : str, GroupSpec or FiniteGroupAction
        Which finite orthogonal action to use.  String kinds "cyclic",
        "dihedral" and "sign_flips" are sized by ``group_size`` (defaulting
        to the number of input features).
    group_size : int, optional
        Size parameter for string group kinds.
    windows : int or array of shape (p, d)
        Window vectors, or how many random unit windows to draw at fit time.
    selector : "max", "full", int, or sequence of (rank, window) pairs
        Which ranks to keep per window; "max" keeps only rank 1, an integer k
        keeps ranks 1..k.  Pairs are 1-based.
    tie_tol : float
        Relative tolerance of the tie comparator used by diagnostics.
    random_state : int, optional
        Seed for drawing random windows.
    """

    def __init__(
        self,
        group="cyclic",
        group_size=None,
        windows=8,
        selector="max",
        tie_tol=1e-9,
        random_state=None,
    ):
        self.group = group
        self.group_size = group_size
        self.windows = windows
        self.selector = selector
        self.tie_tol = tie_tol
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        d = X.shape[1]
        group = _resolve_group(self.group, self.group_size, d)
        if group.dim != d:
            raise ValueError(
                f"group acts on R^{group.dim} but the data has {d} features"
            )
        if isinstance(self.windows, numbers.Integral):
            rng = np.random.default_rng(self.random_state)
            windows = rng.standard_normal((int(self.windows), d))
            windows /= np.linalg.norm(windows, axis=1, keepdims=True)
        else:
            windows = np.asarray(self.windows, dtype=float)
        selector = _resolve_selector(self.selector, windows.shape[0], group.order)
        self.group_ = group
        self.config_ = CoorbitConfig(
            group=group, windows=windows, selector=selector, tie_tol=self.tie_tol
        )
        self.n_features_in_ = d
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return embed_batch(self.config_, X)


class ProjectedCoorbitEmbedding(CoorbitEmbedding):
    """Coorbit embedding followed by a seeded generic linear reduction.

    The reduction target defaults to twice the input dimension, which is
    enough for a generic full-rank map to keep distinct orbits distinct.

    Parameters
    ----------
    n_components : int, optional
        Output dimension of the reduction; defaults to ``2 * n_features``.
    projection_seed : int
        Seed of the Gaussian reduction matrix.
    """

    def __init__(
        self,
        group="cyclic",
        group_size=None,
        windows=8,
        selector="max",
        tie_tol=1e-9,
        random_state=None,
        n_components=None,
        projection_seed=0,
    ):
        super().__init__(
            group=group,
            group_size=group_size,
            windows=windows,
            selector=selector,
            tie_tol=tie_tol,
            random_state=random_state,
        )
        self.n_components = n_components
        self.projection_seed = projection_seed

    def fit(self, X, y=None):
        super().fit(X, y)
        q = 2 * self.n_features_in_ if self.n_components is None else int(self.n_components)
        self.projection_: ProjectionMap = random_projection(
            self.config_.m, q, self.projection_seed
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "projection_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return project_embed_batch(self.config_, self.projection_, X)
