"""Discrete weighted Hoelder estimator and the inequality checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obliquecone.errors import DomainError, HypothesisError
from obliquecone.exponent import SeparableSolution, critical_exponent
from obliquecone.geometry import ConeGeometry, ObliqueBC
from obliquecone.holder import (
    HolderSamples,
    HolderSpec,
    holder_interpolation_check,
    holder_product_check,
    holder_seminorm,
    samples_from_function,
    sector_sample_points,
    weighted_norm,
)

THETA0 = 2 * math.pi / 3


def power_samples(alpha, r_min, theta0=THETA0):
    pts = sector_sample_points(theta0, r_min, 1.0)
    geom = ConeGeometry(theta0=theta0)
    sol = SeparableSolution(alpha=alpha, m=0)
    return samples_from_function(
        lambda y1, y2: math.hypot(y1, y2) ** alpha
        * sol.profile(math.atan2(y2, y1)),
        pts,
    )


class TestSeminorm:
    def test_constant_field_is_zero(self):
        pts = sector_sample_points(1.0, 1e-2)
        samples = HolderSamples(points=pts, values=np.ones(len(pts)))
        for alpha, beta in ((0.3, 0.0), (1.0, -1.0), (0.5, 2.0)):
            assert holder_seminorm(samples, HolderSpec(0, alpha, beta)) == 0.0

    def test_plain_seminorm_of_power_is_scale_stable(self):
        # unweighted seminorm at the field's own exponent stays bounded as
        # the sample set is refined toward the vertex
        alpha = 0.8511274674741052
        prev = None
        for r_min in (1e-2, 5e-3, 2.5e-3):
            samples = power_samples(alpha, r_min)
            val = holder_seminorm(samples, HolderSpec(0, alpha, beta=-alpha))
            if prev is not None:
                assert val / prev <= 1.05
            prev = val

    def test_plain_seminorm_above_own_exponent_diverges(self):
        alpha = 0.8511274674741052
        prev = None
        for r_min in (1e-2, 5e-3, 2.5e-3):
            samples = power_samples(alpha, r_min)
            val = holder_seminorm(
                samples, HolderSpec(0, alpha + 0.1, beta=-(alpha + 0.1))
            )
            if prev is not None:
                assert val / prev >= 2 ** 0.05
            prev = val

    def test_weighted_seminorm_at_own_exponent_bounded(self):
        # with weight exponent alpha (beta = 0) the estimator stays bounded
        alpha = 0.5012394347722653
        prev = None
        for r_min in (1e-2, 5e-3):
            samples = power_samples(alpha, r_min, theta0=math.pi / 3)
            val = holder_seminorm(samples, HolderSpec(0, alpha, beta=0.0))
            if prev is not None:
                assert val / prev <= 1.05
            prev = val

    def test_gradient_seminorm_requires_gradients(self):
        pts = sector_sample_points(1.0, 1e-1)
        samples = HolderSamples(points=pts, values=np.zeros(len(pts)))
        with pytest.raises(DomainError):
            holder_seminorm(samples, HolderSpec(1, 0.5, 0.0))

    def test_gradient_seminorm_of_linear_field(self):
        pts = sector_sample_points(1.0, 1e-1)
        samples = samples_from_function(lambda a, b: 2.0 * a - b, pts, derivatives=1)
        # constant gradient: order-1 seminorm vanishes up to FD noise
        assert holder_seminorm(samples, HolderSpec(1, 0.5, -1.5)) <= 1e-6

    def test_monotone_under_inclusion(self):
        samples = power_samples(0.4, 1e-2)
        spec = HolderSpec(0, 0.4, beta=-0.4)
        sub = HolderSamples(points=samples.points[::3], values=samples.values[::3])
        assert holder_seminorm(sub, spec) <= holder_seminorm(samples, spec) + 1e-15

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_relabeling_invariance(self, seed):
        samples = power_samples(0.6, 5e-2)
        rng = np.random.default_rng(seed)
        perm = rng.permutation(len(samples))
        shuffled = HolderSamples(
            points=samples.points[perm], values=samples.values[perm]
        )
        spec = HolderSpec(0, 0.7, beta=0.0)
        assert holder_seminorm(shuffled, spec) == pytest.approx(
            holder_seminorm(samples, spec), rel=1e-12
        )

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            HolderSpec(2, 0.5, 0.0)
        with pytest.raises(DomainError):
            HolderSpec(0, 0.0, 0.0)
        with pytest.raises(DomainError):
            HolderSpec(0, 1.5, 0.0)


class TestProductInequality:
    def test_constant_fields(self):
        pts = sector_sample_points(1.5, 1e-2)
        ones = HolderSamples(points=pts, values=np.ones(len(pts)))
        report = holder_product_check(
            ones, ones, alpha=0.5, beta1=-0.5, beta2=0.0, beta1p=0.0, beta2p=-0.5
        )
        assert report.holds
        assert report.lhs == 0.0
        assert report.rhs == 0.0

    def test_powers_on_vertex_clustered_samples(self):
        pts = sector_sample_points(1.5, 1e-3)
        u = samples_from_function(lambda a, b: math.hypot(a, b) ** 0.3, pts)
        v = samples_from_function(lambda a, b: math.hypot(a, b) ** 0.4, pts)
        report = holder_product_check(
            u, v, alpha=0.25, beta1=-0.25, beta2=0.0, beta1p=0.0, beta2p=-0.25
        )
        assert report.holds
        assert report.lhs <= report.rhs * (1 + 1e-12)

    def test_several_admissible_splits(self):
        pts = sector_sample_points(2.0, 1e-2)
        u = samples_from_function(lambda a, b: math.hypot(a, b) ** 0.5, pts)
        v = samples_from_function(
            lambda a, b: 1.0 / (1.0 + math.hypot(a, b)), pts
        )
        for beta1, beta2, beta1p, beta2p in (
            (-0.2, 0.4, 0.0, 0.2),
            (0.0, 0.2, 0.2, 0.0),
            (-0.3, 0.3, 0.0, 0.0),
        ):
            report = holder_product_check(
                u, v, alpha=0.3, beta1=beta1, beta2=beta2, beta1p=beta1p, beta2p=beta2p
            )
            assert report.holds

    def test_hypothesis_violations(self):
        pts = sector_sample_points(1.0, 1e-1)
        u = HolderSamples(points=pts, values=np.ones(len(pts)))
        with pytest.raises(HypothesisError):
            holder_product_check(u, u, 0.5, -0.2, 0.1, 0.0, 0.0)  # splits differ
        with pytest.raises(HypothesisError):
            holder_product_check(u, u, 0.5, -0.6, 0.0, 0.0, -0.6)  # beta1 < -alpha
        with pytest.raises(HypothesisError):
            holder_product_check(u, u, 0.5, 0.0, -0.1, -0.1, 0.0)  # beta2 < 0
        other = HolderSamples(points=pts * 2.0, values=np.ones(len(pts)))
        with pytest.raises(HypothesisError):
            holder_product_check(u, other, 0.5, 0.0, 0.0, 0.0, 0.0)


class TestInterpolation:
    def test_reports_finite_constant(self):
        pts = sector_sample_points(THETA0, 1e-2)
        samples = samples_from_function(
            lambda a, b: math.hypot(a, b) ** 0.7, pts, derivatives=2
        )
        report = holder_interpolation_check(
            samples, (2, 0.5, -1.5), (0, 1.0, 0.0), theta=2.0 / 3.0
        )
        assert math.isfinite(report.empirical_constant)
        assert report.beta == pytest.approx(-1.0)
        assert report.k == 1
        assert report.lhs <= report.empirical_constant * (
            report.rhs_first ** report.theta
            * report.rhs_second ** (1 - report.theta)
        ) * (1 + 1e-12)

    def test_weighted_norm_requires_hessians_for_order_two(self):
        pts = sector_sample_points(1.0, 1e-1)
        samples = samples_from_function(lambda a, b: a * b, pts, derivatives=1)
        with pytest.raises(DomainError):
            weighted_norm(samples, 2, 0.5, -1.5)

    def test_hypothesis_violations(self):
        pts = sector_sample_points(1.0, 1e-1)
        samples = samples_from_function(lambda a, b: a, pts, derivatives=2)
        with pytest.raises(HypothesisError):
            holder_interpolation_check(samples, (2, 0.5, -1.5), (0, 1.0, 0.0), theta=1.5)
        with pytest.raises(HypothesisError):
            holder_interpolation_check(samples, (2, 0.5, -4.0), (0, 1.0, 0.0), theta=0.5)
        with pytest.raises(HypothesisError):
            holder_interpolation_check(samples, (0, 0.5, -0.5), (0, 1.0, -1.0), theta=0.5)


class TestAgainstCertifiedSolution:
    def test_root_field_dichotomy(self):
        theta0, s = math.pi / 3, -1.3
        geom = ConeGeometry(theta0=theta0)
        root = critical_exponent(geom, ObliqueBC.for_cone(geom, s))
        prev_at, prev_above = None, None
        for r_min in (1e-2, 5e-3):
            samples = power_samples(root, r_min, theta0=theta0)
            at = holder_seminorm(samples, HolderSpec(0, root, beta=-root))
            above = holder_seminorm(
                samples, HolderSpec(0, root + 0.1, beta=-(root + 0.1))
            )
            if prev_at is not None:
                assert at / prev_at <= 1.05
                assert above / prev_above >= 2 ** 0.05
            prev_at, prev_above = at, above
