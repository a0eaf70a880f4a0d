"""Special functions checked against oracles that share no code with them."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import betaln, gammaln

from lindley.errors import DomainError, NumericalError
from lindley.special import (
    _beta_cf,
    inc_beta_pair,
    log_gamma,
    normal_cdf,
    normal_cdf_general,
    normal_sf,
    reg_inc_beta,
)

shapes = st.floats(min_value=1e-3, max_value=1e3)
unit = st.floats(min_value=0.0, max_value=1.0)


def quad_inc_beta(x, a, b):
    """I_x(a, b) by adaptive quadrature of the beta density."""
    logb = betaln(a, b)
    f = lambda t: math.exp((a - 1) * math.log(t) + (b - 1) * math.log1p(-t) - logb)
    # split at the mode so quad sees the peak
    pts = [p for p in ((a - 1) / (a + b - 2),) if 0 < p < x] if a + b > 2 else []
    val, _ = integrate.quad(f, 0.0, x, points=pts or None, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


def mp_inc_beta(x, a, b, dps=45):
    """Reference I_x(a, b) from the same continued fraction at high precision."""
    with mpmath.workdps(dps):
        x, a, b = mpmath.mpf(x), mpmath.mpf(a), mpmath.mpf(b)
        if x > (a + 1) / (a + b + 2):
            return 1 - mp_inc_beta(1 - x, b, a, dps)
        front = mpmath.exp(a * mpmath.log(x) + b * mpmath.log1p(-x) - mpmath.log(mpmath.beta(a, b))) / a
        f, c, d = mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(0)
        for i in range(0, 100000):
            m = i // 2
            if i == 0:
                num = 1
            elif i % 2 == 0:
                num = m * (b - m) * x / ((a + 2 * m - 1) * (a + 2 * m))
            else:
                num = -(a + m) * (a + b + m) * x / ((a + 2 * m) * (a + 2 * m + 1))
            d = 1 + num * d
            d = 1 / d
            c = 1 + num / c
            delta = c * d
            f *= delta
            if abs(delta - 1) < mpmath.mpf(10) ** (-dps + 5):
                break
        return front * (f - 1)


class TestLogGamma:
    def test_one(self):
        assert log_gamma(1.0) == 0.0

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-15)
        assert log_gamma(0.5) == pytest.approx(0.5723649429, abs=1e-10)

    def test_twenty_matches_integer_factorial(self):
        assert log_gamma(20.0) == pytest.approx(math.log(math.factorial(19)), rel=1e-15)

    @pytest.mark.parametrize("z", [1e-6, 1e-3, 0.7, 3.3, 17.25, 1234.5, 1e5, 1e7])
    def test_twelve_digits_over_range(self, z):
        ref = float(mpmath.loggamma(mpmath.mpf(z)))
        assert log_gamma(z) == pytest.approx(ref, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("z", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            log_gamma(z)


class TestIncompleteBeta:
    def test_boundaries(self):
        assert reg_inc_beta(0.0, 2.0, 3.0) == 0.0
        assert reg_inc_beta(1.0, 2.0, 3.0) == 1.0

    def test_coin_tail(self):
        assert reg_inc_beta(0.5, 9, 3) == pytest.approx(0.03271484, abs=5e-9)
        # I_0.5(9, 3) = sum_{k>=9} C(11, k) / 2^11
        exact = Fraction(sum(math.comb(11, k) for k in range(9, 12)), 2**11)
        assert reg_inc_beta(0.5, 9, 3) == pytest.approx(float(exact), abs=1e-15)

    def test_quadrature_anchor(self):
        assert reg_inc_beta(0.3, 2.5, 4.2) == pytest.approx(quad_inc_beta(0.3, 2.5, 4.2), abs=1e-12)

    def test_uniform(self):
        for x in np.linspace(0, 1, 11):
            assert reg_inc_beta(x, 1.0, 1.0) == pytest.approx(x, abs=1e-15)

    def test_quadrature_oracle_random(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(100):
            x = rng.uniform(0.01, 0.99)
            a, b = np.exp(rng.uniform(np.log(0.5), np.log(50.0), size=2))
            worst = max(worst, abs(reg_inc_beta(x, a, b) - quad_inc_beta(x, a, b)))
        assert worst <= 1e-10

    @pytest.mark.parametrize(
        "x,a,b",
        [
            (0.5, 28299.000001, 27801.000001),
            (0.5, 1e6, 1e6),
            (0.5001, 1e6, 1e6),
            (0.3, 3e5, 7e5 + 0.5),
            (1e-4, 0.5, 1e6),
            (0.999, 1e6, 2.5),
            (0.02, 1e-6, 5.0),
        ],
    )
    def test_large_shapes_against_high_precision(self, x, a, b):
        ref = float(mp_inc_beta(x, a, b))
        assert reg_inc_beta(x, a, b) == pytest.approx(ref, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(unit, shapes, shapes)
    def test_reflection(self, x, a, b):
        assume(1.0 - (1.0 - x) == x)  # otherwise 1 - x is a different point
        assert reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(unit, unit, shapes, shapes)
    def test_monotone_in_x(self, x1, x2, a, b):
        lo, hi = sorted((x1, x2))
        assert reg_inc_beta(lo, a, b) <= reg_inc_beta(hi, a, b) + 1e-15

    @settings(max_examples=200, deadline=None)
    @given(unit, shapes, shapes)
    def test_pair_sums_to_one(self, x, a, b):
        lo, hi = inc_beta_pair(x, a, b)
        assert 0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0
        assert lo + hi == pytest.approx(1.0, abs=1e-15)

    def test_binomial_tail_identity(self):
        """Pr(Y >= y) for Y ~ Bin(n, p) equals I_p(y, n - y + 1), all n <= 500."""
        worst = 0.0
        for p in (0.1, 0.5, 0.9):
            for n in range(1, 501):
                k = np.arange(n + 1)
                logpmf = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + k * math.log(p) + (n - k) * math.log1p(-p)
                pmf = np.exp(logpmf)
                upper = np.cumsum(pmf[::-1])[::-1]  # upper[y] = sum_{k >= y}
                for y in range(1, n + 1):
                    worst = max(worst, abs(reg_inc_beta(p, y, n - y + 1) - upper[y]))
        assert worst <= 1e-12

    @pytest.mark.parametrize("x,a,b", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2), (math.nan, 1, 1)])
    def test_domain(self, x, a, b):
        with pytest.raises(DomainError):
            reg_inc_beta(x, a, b)

    def test_iteration_cap_reports_count(self):
        with pytest.raises(NumericalError) as info:
            _beta_cf(0.5, 1e6, 1e6, max_iter=5)
        assert info.value.iterations == 5


class TestNormalCdf:
    def test_zero(self):
        assert normal_cdf(0.0) == 0.5

    @settings(max_examples=300)
    @given(st.floats(min_value=-40, max_value=40))
    def test_symmetry(self, z):
        assert normal_cdf(z) + normal_cdf(-z) == pytest.approx(1.0, abs=1e-15)
        assert normal_sf(z) == normal_cdf(-z)

    def test_birth_lower_tail(self):
        y, n = 28298, 56099
        ybar = y / n
        sd = math.sqrt(ybar * (1 - ybar) / n)
        assert normal_cdf((ybar - 0.5) / sd) == pytest.approx(0.9820667, abs=1e-7)

    def test_against_high_precision(self):
        for z in np.linspace(-8, 8, 161):
            ref = float(mpmath.ncdf(mpmath.mpf(z)))
            assert normal_cdf(z) == pytest.approx(ref, abs=1e-14)

    def test_against_quadrature(self):
        phi = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
        for z in (-3.1, -0.4, 0.0, 1.7, 2.9):
            val, _ = integrate.quad(phi, -math.inf, z, epsabs=1e-15)
            assert normal_cdf(z) == pytest.approx(val, abs=1e-14)

    def test_monotone_and_range(self):
        zs = np.linspace(-8, 8, 2001)
        vals = [normal_cdf(z) for z in zs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[0] < 1e-15 and vals[-1] > 1 - 1e-15

    def test_general(self):
        assert normal_cdf_general(1.0, 1.0, 4.0) == 0.5
        assert normal_cdf_general(3.0, 1.0, 4.0) == pytest.approx(normal_cdf(1.0), abs=1e-16)
        with pytest.raises(DomainError):
            normal_cdf_general(0.0, 0.0, 0.0)

    @pytest.mark.parametrize("z", [math.inf, -math.inf, math.nan])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            normal_cdf(z)
