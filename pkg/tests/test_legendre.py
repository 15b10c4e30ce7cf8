"""Tests of the real-degree Legendre kernel.

Derived expectations follow the quadrature oracle and Richardson finite
differences, both independent of the series evaluation path.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obliquecone.errors import DomainError, NonConvergence
from obliquecone.legendre import (
    legendre_dp_dalpha,
    legendre_dp_dz,
    legendre_p,
    legendre_p1,
    legendre_p_many,
    legendre_p_quadrature,
)

# frozen from the quadrature oracle
P_HALF_AT_ZERO = 0.5393526011883792
P_QUARTER_AT_MINUS09 = 0.20586649239981056


def richardson_dz(alpha, z, h=1e-6):
    coarse = (legendre_p(alpha, z + h) - legendre_p(alpha, z - h)) / (2 * h)
    fine = (legendre_p(alpha, z + h / 2) - legendre_p(alpha, z - h / 2)) / h
    return (4 * fine - coarse) / 3


class TestLegendreP:
    def test_degree_one_is_identity(self):
        assert legendre_p(1.0, 0.3) == pytest.approx(0.3, abs=1e-15)

    def test_value_one_at_argument_one(self):
        assert legendre_p(0.7, 1.0) == 1.0

    def test_half_degree_at_zero_matches_quadrature_oracle(self):
        assert legendre_p(0.5, 0.0) == pytest.approx(P_HALF_AT_ZERO, abs=1e-12)
        # the oracle itself reproduces its frozen value
        assert legendre_p_quadrature(0.5, 0.0) == pytest.approx(
            P_HALF_AT_ZERO, abs=1e-12
        )

    def test_negative_argument_matches_oracle(self):
        assert legendre_p(0.25, -0.9) == pytest.approx(
            P_QUARTER_AT_MINUS09, abs=1e-11
        )

    @pytest.mark.parametrize("alpha", np.linspace(0.0, 3.0, 50))
    def test_value_at_one_is_one(self, alpha):
        assert abs(legendre_p(float(alpha), 1.0) - 1.0) <= 1e-12

    @pytest.mark.parametrize(
        "alpha,poly",
        [
            (0.0, lambda z: 1.0),
            (1.0, lambda z: z),
            (2.0, lambda z: 0.5 * (3 * z * z - 1)),
            (3.0, lambda z: 0.5 * (5 * z ** 3 - 3 * z)),
        ],
    )
    def test_integer_degrees_match_polynomials(self, alpha, poly):
        for z in np.linspace(-0.9, 1.0, 39):
            assert abs(legendre_p(alpha, float(z)) - poly(float(z))) <= 1e-12

    def test_series_vs_quadrature_cross_validation(self):
        worst = 0.0
        for alpha in (0.25, 0.5, 0.75):
            for z in np.linspace(-0.9, 1.0, 25):
                gap = abs(legendre_p(alpha, float(z)) - legendre_p_quadrature(alpha, float(z)))
                worst = max(worst, gap)
        assert worst <= 1e-9

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            legendre_p(0.5, -0.9999)
        with pytest.raises(DomainError):
            legendre_p(0.5, 1.0 + 1e-12)
        with pytest.raises(DomainError):
            legendre_p(-1.5, 0.2)
        with pytest.raises(DomainError):
            legendre_p(math.inf, 0.2)

    def test_non_convergence_near_cutoff(self):
        # just inside the domain, but the term cap is exceeded
        with pytest.raises(NonConvergence):
            legendre_p(0.5, -0.9985)

    def test_vectorized_matches_scalar(self):
        alphas = np.array([0.0, 0.3, 1.0, 1.7, 2.4])
        got = legendre_p_many(alphas, -0.4)
        want = [legendre_p(float(a), -0.4) for a in alphas]
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(
    alpha=st.floats(min_value=0.1, max_value=2.0),
    z=st.floats(min_value=-0.9, max_value=1.0),
)
def test_three_term_recurrence(alpha, z):
    residual = (
        (alpha + 1.0) * legendre_p(alpha + 1.0, z)
        - (2.0 * alpha + 1.0) * z * legendre_p(alpha, z)
        + alpha * legendre_p(alpha - 1.0, z)
    )
    assert abs(residual) <= 1e-10


class TestDerivatives:
    def test_dz_of_degree_one(self):
        assert legendre_dp_dz(1.0, 0.4) == pytest.approx(1.0, abs=1e-13)

    def test_dz_of_degree_two(self):
        assert legendre_dp_dz(2.0, 0.5) == pytest.approx(1.5, abs=1e-13)

    def test_dz_matches_richardson(self):
        assert legendre_dp_dz(0.5, 0.2) == pytest.approx(
            richardson_dz(0.5, 0.2), rel=1e-8
        )
        for alpha, z in ((0.3, -0.7), (1.4, 0.1), (1.9, 0.85)):
            assert legendre_dp_dz(alpha, z) == pytest.approx(
                richardson_dz(alpha, z), rel=1e-8
            )

    def test_dz_rejects_argument_one(self):
        with pytest.raises(DomainError):
            legendre_dp_dz(0.5, 1.0)

    def test_p1_explicit_low_degrees(self):
        for z in np.linspace(-0.9, 0.99, 15):
            z = float(z)
            assert legendre_p1(0.0, z) == pytest.approx(0.0, abs=1e-14)
            assert legendre_p1(1.0, z) == pytest.approx(
                -math.sqrt(1 - z * z), abs=1e-13
            )
        assert legendre_p1(2.0, 0.5) == pytest.approx(
            -3 * 0.5 * math.sqrt(0.75), abs=1e-13
        )

    def test_p1_vanishes_at_one_by_continuity(self):
        assert legendre_p1(0.7, 1.0) == 0.0
        assert legendre_p1(0.0, 1.0) == 0.0


class TestDegreeDerivative:
    def test_zero_at_argument_one(self):
        assert legendre_dp_dalpha(1.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_identity_at_degree_zero(self):
        # d/da P_{a+1} - z d/da P_a at a = 0 equals -P_1 + 2 z P_0 - P_{-1} = z - 1
        for z in np.linspace(-0.9, 0.9, 9):
            z = float(z)
            combo = legendre_dp_dalpha(1.0, z) - z * legendre_dp_dalpha(0.0, z)
            assert abs(combo - (z - 1.0)) <= 1e-5

    def test_step_halving_consistency(self):
        coarse = legendre_dp_dalpha(0.5, 0.5, h=1e-4)
        fine = legendre_dp_dalpha(0.5, 0.5, h=1e-5)
        # both are O(h^2) approximations of the same limit
        assert coarse == pytest.approx(fine, abs=1e-7)

    def test_degree_step_domain(self):
        with pytest.raises(DomainError):
            legendre_dp_dalpha(-1.0, 0.3, h=1e-5)
        with pytest.raises(DomainError):
            legendre_dp_dalpha(0.5, 0.3, h=0.0)
