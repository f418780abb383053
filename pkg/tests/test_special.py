"""Gamma-ratio constants and coefficient sequences."""

import math

import numpy as np
import pytest

from dunkl.special import (
    CoeffCache,
    OrderParam,
    a_const,
    a_sonine,
    b_coeff,
    bessel_mod,
    c_const,
    d_const,
    inverse_intertwiner_const,
    log_b_coeff,
    log_gamma,
)
from dunkl.quadrature import jacobi_rule

ALPHAS = (-0.4, 0.0, 0.5, 1.0, 2.7)


class TestOrderParam:
    def test_boundary_rejected(self):
        with pytest.raises(ValueError):
            OrderParam(-0.5)
        with pytest.raises(ValueError):
            OrderParam(-1.0)

    def test_valid(self):
        assert OrderParam(-0.49).alpha == -0.49


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-15)

    def test_factorial(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            log_gamma(0.0)
        with pytest.raises(ValueError):
            log_gamma(-2.0)

    def test_reference_accuracy(self):
        # spot values against mpmath at 30 digits
        import mpmath

        mpmath.mp.dps = 30
        for x in (1e-3, 0.37, 12.5, 1e3):
            want = float(mpmath.loggamma(x))
            assert log_gamma(x) == pytest.approx(want, rel=1e-14, abs=1e-14)


class TestBCoeff:
    def test_first_values(self):
        assert b_coeff(0, 0.7) == pytest.approx(1.0, rel=1e-15)
        for a in ALPHAS:
            assert b_coeff(1, a) == pytest.approx(2.0 * (a + 1.0), rel=1e-14)
        assert b_coeff(2, 0.5) == pytest.approx(6.0, rel=1e-14)
        assert b_coeff(1, 0.0) == pytest.approx(2.0, rel=1e-15)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_both_recurrences(self, alpha):
        # the odd recurrence b_{2n+1}(a) = 2(a+1) b_{2n}(a+1) against the
        # explicit Gamma-ratio evaluation, simultaneously for n <= 50
        for n in range(51):
            explicit = b_coeff(2 * n + 1, alpha)
            recurred = 2.0 * (alpha + 1.0) * b_coeff(2 * n, alpha + 1.0)
            assert explicit == pytest.approx(recurred, rel=1e-12)
            gamma_ratio = (
                2.0 ** (2 * n)
                * math.exp(math.lgamma(n + 1) + math.lgamma(n + alpha + 1) - math.lgamma(alpha + 1))
            )
            assert b_coeff(2 * n, alpha) == pytest.approx(gamma_ratio, rel=1e-12)

    def test_log_space_no_overflow(self):
        assert np.isfinite(log_b_coeff(200, 0.5))

    def test_negative_index(self):
        with pytest.raises(ValueError):
            b_coeff(-1, 0.5)


class TestCoeffCache:
    def test_invariants(self):
        cache = CoeffCache.build(0.7, 60)
        assert cache.b[0] == 1.0
        assert all(v > 0 and math.isfinite(v) for v in cache.b)
        assert len(cache.b) == 61


class TestAConst:
    def test_half(self):
        assert a_const(0.5) == pytest.approx(0.5, rel=1e-14)

    def test_zero(self):
        assert a_const(0.0) == pytest.approx(1.0 / math.pi, rel=1e-14)

    def test_large_alpha_growth(self):
        # Stirling ratio: Gamma(a+1)/Gamma(a+1/2) = sqrt(a + 1/4) (1 + O(1/a^2))
        for a in (50.0, 200.0):
            assert a_const(a) == pytest.approx(math.sqrt((a + 0.25) / math.pi), rel=1e-4)
        assert a_const(200.0) > a_const(50.0) > a_const(2.0)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_normalization(self, alpha):
        # a_const * int_-1^1 (1-t^2)^(a-1/2) (1+t) dt = 1, forced by the
        # kernel normalization at the origin; quadrature via s = t^2
        rule = jacobi_rule(alpha - 0.5, -0.5, 64)
        total = a_const(alpha) * np.sum(rule.weights)  # even part of (1+t) is 1
        assert total == pytest.approx(1.0, abs=1e-10)


class TestASonine:
    def test_adjacent(self):
        for a in (0.0, 0.3, 1.7):
            assert a_sonine(a, a + 1.0) == pytest.approx(a + 1.0, rel=1e-14)

    def test_zero_one(self):
        assert a_sonine(0.0, 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half_pair(self):
        assert a_sonine(0.5, 2.5) == pytest.approx(3.75, rel=1e-14)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            a_sonine(1.0, 1.0)
        with pytest.raises(ValueError):
            a_sonine(1.0, 0.5)

    def test_zeroth_moment_inverse(self):
        # a_sonine(a,b) * I_0(a,b) = 1 with I_0 = Gamma(b-a)Gamma(a+1)/Gamma(b+1)
        for (a, b) in ((0.0, 0.5), (0.5, 1.5), (0.0, 2.0)):
            i0 = math.exp(math.lgamma(b - a) + math.lgamma(a + 1) - math.lgamma(b + 1))
            assert a_sonine(a, b) * i0 == pytest.approx(1.0, rel=1e-14)


class TestCConst:
    def test_values(self):
        assert c_const(0.0) == pytest.approx(0.25, rel=1e-15)
        assert c_const(1.0) == pytest.approx(1.0 / 16.0, rel=1e-15)

    def test_classical_limit_value(self):
        # documentation-level check: the formula at a -> -1/2 tends to 1/(2 pi)
        assert c_const(-0.499999) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-4)


class TestDConst:
    def test_alpha_zero(self):
        r, d = d_const(0.0)
        assert r == 0
        assert d == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_alpha_1_2(self):
        r, d = d_const(1.2)
        assert r == 1
        want = math.pi / (2.0 * math.gamma(2.2) * math.gamma(0.3))
        assert d == pytest.approx(want, rel=1e-13)

    def test_alpha_049(self):
        # r = 0 and the remaining Gamma argument is r - alpha + 1/2 = 0.01
        r, d = d_const(0.49)
        assert r == 0
        want = math.pi / (math.gamma(1.49) * math.gamma(0.01))
        assert d == pytest.approx(want, rel=1e-13)

    def test_half_integer_rejected(self):
        for a in (0.5, 1.5, 2.5):
            with pytest.raises(ValueError):
                d_const(a)

    def test_working_constant_ratio(self):
        r, d = d_const(0.0)
        r2, w = inverse_intertwiner_const(0.0)
        assert r2 == r
        assert w == pytest.approx(d / math.sqrt(math.pi), rel=1e-14)


class TestBesselMod:
    def test_at_zero(self):
        for a in ALPHAS:
            assert bessel_mod(a, 0.0) == pytest.approx(1.0)

    def test_classical_i0(self):
        # order 0 at z=2 equals I_0(2)
        from scipy.special import iv

        assert complex(bessel_mod(0.0, 2.0)).real == pytest.approx(float(iv(0, 2.0)), rel=1e-13)

    def test_half_order_closed_form(self):
        # order 1/2 reduces to sinh(z)/z
        for z in (0.3, 1.7, 4.0, 2j):
            got = bessel_mod(0.5, z)
            want = np.sinh(z) / z
            assert abs(got - want) <= 1e-13 * abs(want)

    def test_radius_guard(self):
        with pytest.raises(ValueError):
            bessel_mod(0.5, 61.0)
