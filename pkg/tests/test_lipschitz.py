"""Upper bound computation and empirical lower-bound estimation."""

import numpy as np
import pytest

from coorbits import (
    AllPairsEquivalent,
    CoorbitConfig,
    EnumerationTooLarge,
    GroupSpec,
    SamplingPlan,
    build_group,
    embed,
    estimate_lower_bound,
    full_selector,
    max_selector,
    quotient_distance,
    top_k_selector,
    upper_bound_exact,
    upper_bound_relaxed,
)
from coorbits.lipschitz import enumeration_size

from conftest import unit_windows


class TestUpperBoundExact:
    def test_single_max_is_window_norm(self, signs2):
        rng = np.random.default_rng(81)
        w = rng.standard_normal(2) * 3.0
        cfg = CoorbitConfig(group=signs2, windows=[w], selector=max_selector(1))
        assert upper_bound_exact(cfg) == pytest.approx(float(np.linalg.norm(w)))

    def test_full_selection_equals_relaxed(self, signs2):
        cfg = CoorbitConfig(
            group=signs2, windows=unit_windows(1, 2, 82), selector=full_selector(1, 4)
        )
        assert upper_bound_exact(cfg) == pytest.approx(upper_bound_relaxed(cfg))

    def test_sign_flip_line(self, sf1_full):
        cfg = CoorbitConfig(group=sf1_full.group, windows=[[1.0]], selector=max_selector(1))
        assert upper_bound_exact(cfg) == pytest.approx(1.0)

    def test_never_exceeds_relaxed(self, any_config):
        if enumeration_size(any_config) > 10**5:
            pytest.skip("enumeration too large for this config")
        assert upper_bound_exact(any_config) <= upper_bound_relaxed(any_config) + 1e-12

    def test_invariant_under_window_reindexing(self, signs2):
        rng = np.random.default_rng(83)
        w = rng.standard_normal(2)
        base = CoorbitConfig(group=signs2, windows=[w], selector=top_k_selector(1, 2))
        value = upper_bound_exact(base)
        for g in range(signs2.order):
            moved = CoorbitConfig(
                group=signs2, windows=[signs2.apply(g, w)], selector=top_k_selector(1, 2)
            )
            assert upper_bound_exact(moved) == pytest.approx(value, rel=1e-12)

    def test_enumeration_cap(self, cyclic4):
        cfg = CoorbitConfig(
            group=cyclic4, windows=unit_windows(4, 4, 84), selector=top_k_selector(4, 2)
        )
        with pytest.raises(EnumerationTooLarge):
            upper_bound_exact(cfg, enum_cap=10)


class TestUpperBoundRelaxed:
    def test_sign_flip_line(self, sf1_full):
        assert upper_bound_relaxed(sf1_full) == pytest.approx(np.sqrt(2.0))

    def test_orthonormal_identity_frame(self, trivial3):
        cfg = CoorbitConfig(group=trivial3, windows=np.eye(3), selector=max_selector(3))
        assert upper_bound_relaxed(cfg) == pytest.approx(1.0)

    def test_bounds_every_sampled_pair(self, any_config):
        cfg = any_config
        bound = upper_bound_relaxed(cfg)
        rng = np.random.default_rng(85)
        for _ in range(50):
            x, y = rng.standard_normal((2, cfg.group.dim))
            num = float(np.linalg.norm(embed(cfg, x) - embed(cfg, y)))
            den = quotient_distance(cfg.group, x, y).distance
            assert num <= bound * den * (1 + 1e-8) + 1e-12


class TestEstimateLowerBound:
    def test_isometry_config_has_unit_ratios(self, trivial3):
        cfg = CoorbitConfig(group=trivial3, windows=np.eye(3), selector=max_selector(3))
        report = estimate_lower_bound(cfg, SamplingPlan(count=500, seed=5, refine_steps=50))
        assert report.lower_bound_empirical == pytest.approx(1.0, rel=1e-9)
        assert report.ratio_max == pytest.approx(1.0, rel=1e-9)

    def test_non_injective_config_collapses(self, signs2):
        # one window along the first axis: the embedding ignores the second coordinate
        cfg = CoorbitConfig(group=signs2, windows=[[1.0, 0.0]], selector=max_selector(1))
        report = estimate_lower_bound(cfg, SamplingPlan(count=4000, seed=6, refine_steps=100))
        assert report.lower_bound_empirical < 1e-3

    def test_ratio_scale_invariance(self, any_config):
        cfg = any_config
        rng = np.random.default_rng(86)
        x, y = rng.standard_normal((2, cfg.group.dim))
        num = float(np.linalg.norm(embed(cfg, x) - embed(cfg, y)))
        den = quotient_distance(cfg.group, x, y).distance
        num2 = float(np.linalg.norm(embed(cfg, 2 * x) - embed(cfg, 2 * y)))
        den2 = quotient_distance(cfg.group, 2 * x, 2 * y).distance
        assert num2 / den2 == pytest.approx(num / den, rel=1e-12)

    def test_report_consistency(self, any_config):
        report = estimate_lower_bound(
            any_config, SamplingPlan(count=300, seed=7, refine_steps=25)
        )
        assert report.lower_bound_empirical <= report.ratio_mean <= report.ratio_max
        assert report.ratio_max <= report.upper_bound_relaxed * (1 + 1e-8)
        if report.upper_bound_exact is not None:
            assert report.upper_bound_exact <= report.upper_bound_relaxed + 1e-12
        assert report.n_retained <= report.n_samples

    def test_seeded_reports_are_identical(self, any_config):
        plan = SamplingPlan(count=200, seed=99, refine_steps=20)
        a = estimate_lower_bound(any_config, plan)
        b = estimate_lower_bound(any_config, plan)
        assert a.lower_bound_empirical == b.lower_bound_empirical
        assert a.ratio_mean == b.ratio_mean
        assert np.array_equal(a.witness_x, b.witness_x)
        assert np.array_equal(a.witness_y, b.witness_y)
        assert a.to_dict() == b.to_dict()

    def test_all_pairs_equivalent(self, signs1):
        # on the unit sphere of a line every draw is +-1, a single orbit
        cfg = CoorbitConfig(group=signs1, windows=[[1.0]], selector=max_selector(1))
        with pytest.raises(AllPairsEquivalent):
            estimate_lower_bound(cfg, SamplingPlan(count=50, seed=8, refine_steps=0))

    def test_refinement_never_worsens(self, any_config):
        lazy = estimate_lower_bound(any_config, SamplingPlan(count=300, seed=9, refine_steps=0))
        eager = estimate_lower_bound(any_config, SamplingPlan(count=300, seed=9, refine_steps=150))
        assert eager.lower_bound_empirical <= lazy.lower_bound_empirical + 1e-15
