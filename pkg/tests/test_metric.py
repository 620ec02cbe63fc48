"""Orbit distance, aligners, and local alignment structure."""

import numpy as np
import pytest

from coorbits import (
    DimensionMismatch,
    is_equivalent,
    quotient_distance,
    quotient_distance_batch,
    separation_radius,
    stabilizer,
)


class TestQuotientDistance:
    def test_same_vector(self, cyclic4):
        res = quotient_distance(cyclic4, [1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
        assert res.distance == 0.0
        assert res.aligner == 0

    def test_swap_maps_between_basis_vectors(self, swap2):
        res = quotient_distance(swap2, [1.0, 0.0], [0.0, 1.0])
        assert res.distance == pytest.approx(0.0, abs=1e-15)
        assert res.aligner == 1

    def test_two_candidate_line(self, signs1):
        res = quotient_distance(signs1, [2.0], [-3.0])
        assert res.distance == pytest.approx(1.0)
        assert res.aligner == 1

    def test_aligner_achieves_distance(self, any_config):
        g = any_config.group
        rng = np.random.default_rng(71)
        for _ in range(30):
            x = rng.standard_normal(g.dim)
            y = rng.standard_normal(g.dim)
            res = quotient_distance(g, x, y)
            assert res.distance == pytest.approx(
                float(np.linalg.norm(x - g.apply(res.aligner, y)))
            )
            for h in range(g.order):
                assert res.distance <= np.linalg.norm(x - g.apply(h, y)) + 1e-12
            assert res.aligner in res.ties

    def test_symmetry_and_triangle(self, any_config):
        g = any_config.group
        rng = np.random.default_rng(72)
        for _ in range(30):
            x, y, z = rng.standard_normal((3, g.dim))
            dxy = quotient_distance(g, x, y).distance
            dyx = quotient_distance(g, y, x).distance
            dxz = quotient_distance(g, x, z).distance
            dzy = quotient_distance(g, z, y).distance
            assert dxy == pytest.approx(dyx, rel=1e-12, abs=1e-12)
            assert dxy <= dxz + dzy + 1e-12

    def test_invariance_under_action(self, any_config):
        g = any_config.group
        rng = np.random.default_rng(73)
        x, y = rng.standard_normal((2, g.dim))
        base = quotient_distance(g, x, y).distance
        for h in range(g.order):
            assert quotient_distance(g, g.apply(h, x), y).distance == pytest.approx(base)
            assert quotient_distance(g, x, g.apply(h, y)).distance == pytest.approx(base)

    def test_batch_matches_single(self, s3):
        rng = np.random.default_rng(74)
        X = rng.standard_normal((25, 3))
        Y = rng.standard_normal((25, 3))
        dists, aligners = quotient_distance_batch(s3, X, Y)
        for k in range(25):
            res = quotient_distance(s3, X[k], Y[k])
            assert dists[k] == pytest.approx(res.distance)
            assert res.distance == pytest.approx(
                float(np.linalg.norm(X[k] - s3.apply(int(aligners[k]), Y[k])))
            )

    def test_dimension_mismatch(self, cyclic4):
        with pytest.raises(DimensionMismatch):
            quotient_distance(cyclic4, [1.0], [1.0, 0.0, 0.0, 0.0])


class TestIsEquivalent:
    def test_orbit_members(self, cyclic4):
        rng = np.random.default_rng(75)
        x = rng.standard_normal(4)
        for g in range(cyclic4.order):
            assert is_equivalent(cyclic4, x, cyclic4.apply(g, x))

    def test_swap_pair(self, swap2):
        assert is_equivalent(swap2, [1.0, 0.0], [0.0, 1.0])

    def test_different_radii(self, signs1):
        assert not is_equivalent(signs1, [2.0], [3.0])

    def test_zero_distance_iff_equivalent(self, s3):
        rng = np.random.default_rng(76)
        for _ in range(20):
            x = rng.standard_normal(3)
            y = rng.standard_normal(3)
            res = quotient_distance(s3, x, y)
            assert is_equivalent(s3, x, y) == (res.distance <= 1e-9 * max(1, np.linalg.norm(x)))


class TestLocalAlignment:
    """Distances near a point are governed by its stabilizer.

    Within a quarter of the separation radius of z, the orbit distance to z
    is the plain Euclidean offset norm, and the distance between two offsets
    reduces to a minimum over the stabilizer only.
    """

    @pytest.fixture(params=["partial", "full", "trivial"])
    def anchored(self, request, cyclic4):
        rng = np.random.default_rng(77)
        if request.param == "partial":
            z = np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2.0)
        elif request.param == "full":
            z = np.ones(4) / 2.0
        else:
            z = rng.standard_normal(4)
            z /= np.linalg.norm(z)
        return cyclic4, z

    def test_distance_to_anchor_is_offset_norm(self, anchored):
        g, z = anchored
        rng = np.random.default_rng(78)
        rho = separation_radius(g, z)
        for _ in range(25):
            u = rng.standard_normal(g.dim)
            u *= rng.uniform(0, 0.24) * rho / np.linalg.norm(u)
            res = quotient_distance(g, z + u, z)
            assert res.distance == pytest.approx(float(np.linalg.norm(u)), abs=1e-12)

    def test_pairs_align_through_stabilizer(self, anchored):
        g, z = anchored
        rng = np.random.default_rng(79)
        rho = separation_radius(g, z)
        fixed = stabilizer(g, z)
        for _ in range(25):
            u, v = rng.standard_normal((2, g.dim))
            u *= rng.uniform(0, 0.24) * rho / np.linalg.norm(u)
            v *= rng.uniform(0, 0.24) * rho / np.linalg.norm(v)
            got = quotient_distance(g, z + u, z + v).distance
            expected = min(float(np.linalg.norm(u - g.apply(h, v))) for h in fixed)
            assert got == pytest.approx(expected, abs=1e-12)
