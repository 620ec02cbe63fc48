"""Finite orthogonal group actions on R^d.

A group is stored concretely: the list of its orthogonal matrices (identity
first), a Cayley table over element indices, and the inverse of each element.
Built-in families cover cyclic coordinate shifts, dihedral shift+reversal,
sign flips, permutation groups from generators, and explicit matrix lists;
everything else is obtained by breadth-first closure of generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import (
    ClosureExceedsCap,
    CoorbitError,
    DegenerateDimension,
    DimensionMismatch,
    NonOrthogonalGenerator,
)

DEFAULT_ORTH_TOL = 1e-10
DEFAULT_DEDUP_TOL = 1e-9
DEFAULT_STAB_TOL = 1e-9
DEFAULT_NORM_TOL = 1e-10
DEFAULT_MAX_ORDER = 10080

_KINDS = ("cyclic", "dihedral", "sign_flips", "permutations", "explicit")


@dataclass(frozen=True)
class GroupSpec:
    """Recipe for one of the supported group constructions.

    kind is one of "cyclic", "dihedral", "sign_flips", "permutations",
    "explicit".  ``n`` is the size parameter (number of points for
    cyclic/dihedral, ambient dimension for sign flips).  ``generators``
    holds permutations in one-line 0-based notation for kind
    "permutations", or row-major matrix entry lists for kind "explicit".
    """

    kind: str
    n: int | None = None
    generators: tuple = ()

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls("cyclic", n=n)

    @classmethod
    def dihedral(cls, n: int) -> "GroupSpec":
        return cls("dihedral", n=n)

    @classmethod
    def sign_flips(cls, d: int) -> "GroupSpec":
        return cls("sign_flips", n=d)

    @classmethod
    def permutations(cls, generators: Iterable[Sequence[int]]) -> "GroupSpec":
        gens = tuple(tuple(int(v) for v in g) for g in generators)
        return cls("permutations", generators=gens)

    @classmethod
    def explicit(cls, matrices: Iterable) -> "GroupSpec":
        mats = tuple(tuple(np.asarray(m, dtype=float).ravel().tolist()) for m in matrices)
        return cls("explicit", generators=mats)

    @classmethod
    def from_mapping(cls, section: Mapping) -> "GroupSpec":
        """Parse the [group] section of a run config (kind + n/d + generators)."""
        kind = section.get("kind")
        if kind not in _KINDS:
            raise CoorbitError(f"group.kind must be one of {_KINDS}, got {kind!r}")
        n = section.get("n", section.get("d"))
        if kind in ("cyclic", "dihedral", "sign_flips"):
            if n is None:
                raise CoorbitError(f"group.kind = {kind!r} requires an 'n' (or 'd') parameter")
            return cls(kind, n=int(n))
        gens = section.get("generators", section.get("matrices"))
        if not gens:
            raise CoorbitError(f"group.kind = {kind!r} requires a 'generators' / 'matrices' list")
        if kind == "permutations":
            return cls.permutations(gens)
        return cls.explicit([_reshape_square(g) for g in gens])


def _reshape_square(flat) -> np.ndarray:
    entries = np.asarray(flat, dtype=float).ravel()
    d = int(round(np.sqrt(entries.size)))
    if d * d != entries.size:
        raise CoorbitError(f"explicit matrix has {entries.size} entries, not a square count")
    return entries.reshape(d, d)


def _perm_matrix(perm: Sequence[int]) -> np.ndarray:
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise CoorbitError(f"not a permutation of 0..{n - 1}: {perm}")
    mat = np.zeros((n, n))
    for src, dst in enumerate(perm):
        mat[dst, src] = 1.0
    return mat


@dataclass(frozen=True)
class FiniteGroupAction:
    """A finite group of orthogonal d x d matrices with its multiplication table.

    Index 0 is always the identity.  ``cayley[g, h]`` is the index of the
    product matrix ``matrices[g] @ matrices[h]`` and ``inverses[g]`` the index
    of the inverse of g.  Instances are immutable and safe to share between
    threads.
    """

    dim: int
    order: int
    matrices: np.ndarray  # (N, d, d)
    cayley: np.ndarray  # (N, N) int
    inverses: np.ndarray  # (N,) int
    label: str
    orth_tol: float = DEFAULT_ORTH_TOL
    signed_permutation: bool = field(default=False, compare=False)

    def __post_init__(self):
        for arr in (self.matrices, self.cayley, self.inverses):
            arr.flags.writeable = False

    def apply(self, g: int, x: np.ndarray) -> np.ndarray:
        """Image of x under element g."""
        return self.matrices[g] @ np.asarray(x, dtype=float)

    def apply_all(self, x: np.ndarray) -> np.ndarray:
        """All N images of x, shape (N, d), in element order."""
        x = check_vector(x, self.dim)
        return self.matrices @ x

    def validate(self, norm_tol: float = DEFAULT_NORM_TOL) -> None:
        """Exhaustively re-check the group axioms; raise CoorbitError on failure.

        Checks orthogonality of every matrix, that index 0 is the identity,
        that the Cayley table is a Latin square consistent with matrix
        products, and that ``inverses`` really inverts.
        """
        n, d = self.order, self.dim
        mats = self.matrices
        eye = np.eye(d)
        for g in range(n):
            if np.max(np.abs(mats[g].T @ mats[g] - eye)) > self.orth_tol:
                raise CoorbitError(f"{self.label}: element {g} is not orthogonal")
        if np.max(np.abs(mats[0] - eye)) > self.orth_tol:
            raise CoorbitError(f"{self.label}: index 0 is not the identity")
        full_row = np.arange(n)
        if not (
            np.array_equal(np.sort(self.cayley, axis=1), np.tile(full_row, (n, 1)))
            and np.array_equal(np.sort(self.cayley, axis=0), np.tile(full_row[:, None], (1, n)))
        ):
            raise CoorbitError(f"{self.label}: Cayley table is not a Latin square")
        for g in range(n):
            prods = np.einsum("ij,hjk->hik", mats[g], mats)
            if np.max(np.abs(prods - mats[self.cayley[g]])) > self.orth_tol:
                raise CoorbitError(f"{self.label}: Cayley row {g} disagrees with matrix products")
        ginv = self.inverses
        if np.any(self.cayley[full_row, ginv] != 0) or np.any(self.cayley[ginv, full_row] != 0):
            raise CoorbitError(f"{self.label}: inverses do not compose to identity")
        # unitarity on a probe vector
        probe = np.linspace(1.0, 2.0, d)
        norms = np.linalg.norm(mats @ probe, axis=1)
        if np.max(np.abs(norms - np.linalg.norm(probe))) > norm_tol * np.linalg.norm(probe):
            raise CoorbitError(f"{self.label}: action does not preserve norms")


@dataclass(frozen=True)
class OrbitSet:
    """Deduplicated orbit of a base vector.

    ``achieving_elements[k]`` lists the element indices mapping the base onto
    ``points[k]``; the lists partition 0..N-1.
    """

    base: np.ndarray
    points: np.ndarray  # (k, d)
    achieving_elements: tuple[tuple[int, ...], ...]


def check_vector(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != dim:
        raise DimensionMismatch(f"expected a vector of length {dim}, got {x.size}")
    return x


def _closure(generators: list[np.ndarray], dedup_tol: float, max_order: int) -> list[np.ndarray]:
    d = generators[0].shape[0]
    elements = [np.eye(d)]
    frontier = [np.eye(d)]

    def find(mat) -> int:
        for idx, known in enumerate(elements):
            if np.max(np.abs(known - mat)) <= dedup_tol:
                return idx
        return -1

    while frontier:
        nxt = []
        for mat in frontier:
            for gen in generators:
                prod = mat @ gen
                if find(prod) < 0:
                    elements.append(prod)
                    nxt.append(prod)
                    if len(elements) > max_order:
                        raise ClosureExceedsCap(
                            f"closure exceeded max_order = {max_order}"
                        )
        frontier = nxt
    return elements


def _tables(elements: list[np.ndarray], dedup_tol: float) -> tuple[np.ndarray, np.ndarray]:
    n = len(elements)
    stack = np.stack(elements)
    flat = stack.reshape(n, -1)
    cayley = np.empty((n, n), dtype=np.int64)
    for g in range(n):
        prods = np.einsum("ij,hjk->hik", elements[g], stack).reshape(n, -1)
        # nearest-match lookup; exact for the built-in +-1/0 families
        dists = np.max(np.abs(prods[:, None, :] - flat[None, :, :]), axis=2)
        idx = np.argmin(dists, axis=1)
        if np.max(dists[np.arange(n), idx]) > dedup_tol:
            raise CoorbitError("generated set is not closed under composition")
        cayley[g] = idx
    inverses = np.empty(n, dtype=np.int64)
    for g in range(n):
        hits = np.nonzero(cayley[g] == 0)[0]
        if hits.size != 1:
            raise CoorbitError("element has no unique inverse; table is inconsistent")
        inverses[g] = hits[0]
    return cayley, inverses


def _is_signed_permutation(matrices: np.ndarray) -> bool:
    absm = np.abs(matrices)
    ok_entries = np.all((absm < 1e-12) | (np.abs(absm - 1.0) < 1e-12))
    return bool(ok_entries and np.all(np.sum(absm > 0.5, axis=1) == 1))


def build_group(
    spec: GroupSpec,
    *,
    orth_tol: float = DEFAULT_ORTH_TOL,
    dedup_tol: float = DEFAULT_DEDUP_TOL,
    max_order: int = DEFAULT_MAX_ORDER,
) -> FiniteGroupAction:
    """Construct and validate a finite orthogonal group action from a spec.

    Generators are checked for orthogonality, the closure is computed by
    breadth-first multiplication with tolerance-based deduplication, and the
    Cayley/inverse tables are derived from the matrices themselves.

    Raises
    ------
    DegenerateDimension
        If the ambient dimension would be < 1.
    NonOrthogonalGenerator
        If any generator fails the orthogonality tolerance.
    ClosureExceedsCap
        If the closure grows past ``max_order`` elements.
    """
    if spec.kind == "cyclic":
        n = int(spec.n)
        if n < 1:
            raise DegenerateDimension(f"cyclic({n}): need n >= 1")
        gens = [_perm_matrix([(i + 1) % n for i in range(n)])]
        label = f"cyclic-{n}"
    elif spec.kind == "dihedral":
        n = int(spec.n)
        if n < 1:
            raise DegenerateDimension(f"dihedral({n}): need n >= 1")
        shift = _perm_matrix([(i + 1) % n for i in range(n)])
        reverse = _perm_matrix([n - 1 - i for i in range(n)])
        gens = [shift, reverse]
        label = f"dihedral-{n}"
    elif spec.kind == "sign_flips":
        d = int(spec.n)
        if d < 1:
            raise DegenerateDimension(f"sign_flips({d}): need d >= 1")
        gens = []
        for i in range(d):
            g = np.eye(d)
            g[i, i] = -1.0
            gens.append(g)
        label = f"sign-flips-{d}"
    elif spec.kind == "permutations":
        if not spec.generators:
            raise CoorbitError("permutations spec needs at least one generator")
        gens = [_perm_matrix(p) for p in spec.generators]
        label = f"permutations-{gens[0].shape[0]}"
    elif spec.kind == "explicit":
        if not spec.generators:
            raise CoorbitError("explicit spec needs at least one matrix")
        gens = [_reshape_square(m) for m in spec.generators]
        label = f"explicit-d{gens[0].shape[0]}"
    else:
        raise CoorbitError(f"unknown group kind {spec.kind!r}")

    d = gens[0].shape[0]
    if d < 1:
        raise DegenerateDimension("ambient dimension must be at least 1")
    eye = np.eye(d)
    for k, g in enumerate(gens):
        if g.shape != (d, d):
            raise DimensionMismatch("all generators must share one square shape")
        if np.max(np.abs(g.T @ g - eye)) > orth_tol:
            raise NonOrthogonalGenerator(f"generator {k} is not orthogonal within {orth_tol}")

    elements = _closure(gens, dedup_tol, max_order)
    matrices = np.stack(elements)
    cayley, inverses = _tables(elements, dedup_tol)
    action = FiniteGroupAction(
        dim=d,
        order=len(elements),
        matrices=matrices,
        cayley=cayley,
        inverses=inverses,
        label=label,
        orth_tol=orth_tol,
        signed_permutation=_is_signed_permutation(matrices),
    )
    action.validate()
    return action


def orbit(group: FiniteGroupAction, x, *, dedup_tol: float = DEFAULT_DEDUP_TOL) -> OrbitSet:
    """Orbit of x: deduplicated images together with the elements achieving each."""
    x = check_vector(x, group.dim)
    images = group.apply_all(x)
    scale = max(1.0, float(np.linalg.norm(x)))
    points: list[np.ndarray] = []
    achieving: list[list[int]] = []
    for g in range(group.order):
        img = images[g]
        for k, pt in enumerate(points):
            if np.max(np.abs(pt - img)) <= dedup_tol * scale:
                achieving[k].append(g)
                break
        else:
            points.append(img)
            achieving.append([g])
    return OrbitSet(
        base=x,
        points=np.array(points),
        achieving_elements=tuple(tuple(a) for a in achieving),
    )


def stabilizer(group: FiniteGroupAction, z, *, stab_tol: float = DEFAULT_STAB_TOL) -> list[int]:
    """Element indices fixing z.

    Membership is decided relative to ``|z|``; at z = 0 the tolerance is
    absolute because a relative one is undefined there.
    """
    z = check_vector(z, group.dim)
    nz = float(np.linalg.norm(z))
    threshold = stab_tol * nz if nz > 0 else stab_tol
    moved = np.linalg.norm(group.apply_all(z) - z, axis=1)
    return [int(g) for g in np.nonzero(moved <= threshold)[0]]


def separation_radius(group: FiniteGroupAction, z, *, stab_tol: float = DEFAULT_STAB_TOL) -> float:
    """Smallest displacement of z by a non-stabilizing element.

    Returns ``|z|`` when every element fixes z (in particular 0 for z = 0);
    strictly positive for any nonzero z.
    """
    z = check_vector(z, group.dim)
    fixed = stabilizer(group, z, stab_tol=stab_tol)
    if len(fixed) == group.order:
        return float(np.linalg.norm(z))
    moved = np.linalg.norm(group.apply_all(z) - z, axis=1)
    mask = np.ones(group.order, dtype=bool)
    mask[fixed] = False
    return float(np.min(moved[mask]))
