import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate, stats

from scaleorder import DomainError, GeneralizedGamma, condition_functions, make_special
from scaleorder.baseline import (
    gg_cdf,
    gg_log_density_slope,
    gg_pdf,
    gg_reverse_hazard,
    gg_reverse_hazard_derivative,
)
from scaleorder.orders import STANDARD_GRID

E = math.e
GRID = STANDARD_GRID.nodes

shapes = st.floats(0.05, 2.0)


def fd(fn, t):
    """Central difference with the validation step ``h = max(t, 1e-4) * 1e-5``."""
    h = np.maximum(t, 1e-4) * 1e-5
    return (fn(t + h) - fn(t - h)) / (2 * h)


class TestConstruction:
    @pytest.mark.parametrize("beta, alpha", [(0, 1), (1, 0), (-1, 2), (1, -0.5), (np.inf, 1), (1, np.nan)])
    def test_rejects_bad_shapes(self, beta, alpha):
        with pytest.raises(DomainError):
            GeneralizedGamma(beta, alpha)

    def test_frozen_and_hashable(self):
        b = GeneralizedGamma(0.8, 0.5)
        assert b == GeneralizedGamma(0.8, 0.5)
        assert len({b, GeneralizedGamma(0.8, 0.5)}) == 1
        with pytest.raises(AttributeError):
            b.beta = 2.0

    @pytest.mark.parametrize(
        "kind, shape, expected",
        [("exponential", None, (1.0, 1.0)), ("weibull", 0.5, (0.5, 0.5)), ("gamma", 2.0, (1.0, 2.0))],
    )
    def test_make_special(self, kind, shape, expected):
        b = make_special(kind, shape)
        assert (b.beta, b.alpha) == expected

    @pytest.mark.parametrize("kind", ["weibull", "gamma"])
    @pytest.mark.parametrize("shape", [0.0, -1.0])
    def test_make_special_rejects_nonpositive(self, kind, shape):
        with pytest.raises(DomainError):
            make_special(kind, shape)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_pdf_domain(self, t):
        with pytest.raises(DomainError):
            gg_pdf(GeneralizedGamma(1, 1), t)

    def test_cdf_domain(self):
        b = GeneralizedGamma(1, 1)
        assert gg_cdf(b, 0.0) == 0.0
        with pytest.raises(DomainError):
            gg_cdf(b, -0.1)
        with pytest.raises(DomainError):
            gg_reverse_hazard(b, 0.0)


class TestPointValues:
    @pytest.mark.parametrize(
        "beta, alpha, t, expected",
        [(1, 2, 1.0, 1 / E), (2, 2, 1.0, 2 / E)],
    )
    def test_pdf(self, beta, alpha, t, expected):
        assert gg_pdf(GeneralizedGamma(beta, alpha), t) == pytest.approx(expected, rel=1e-14)

    def test_pdf_matches_quadrature_derivative_of_cdf(self):
        b = GeneralizedGamma(0.8, 0.5)
        # quadrature of the density reproduces a CDF increment, and the
        # density matches a central difference of the CDF
        area, _ = integrate.quad(lambda s: gg_pdf(b, s), 0.6, 0.8, epsabs=0, epsrel=1e-13)
        assert area == pytest.approx(gg_cdf(b, 0.8) - gg_cdf(b, 0.6), rel=1e-10)
        deriv = fd(lambda s: gg_cdf(b, s), 0.7)
        assert gg_pdf(b, 0.7) == pytest.approx(deriv, rel=1e-8)

    @pytest.mark.parametrize(
        "beta, alpha, t, expected",
        [(1, 1, 1.0, 1 - 1 / E), (1, 2, 1.0, 1 - 2 / E), (0.3, 0.7, 0.0, 0.0)],
    )
    def test_cdf(self, beta, alpha, t, expected):
        assert gg_cdf(GeneralizedGamma(beta, alpha), t) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize(
        "beta, alpha, expected",
        [(1, 1, 1 / (E - 1)), (2, 2, 2 / (E - 1))],
    )
    def test_reverse_hazard(self, beta, alpha, expected):
        assert gg_reverse_hazard(GeneralizedGamma(beta, alpha), 1.0) == pytest.approx(expected, rel=1e-14)

    def test_reverse_hazard_near_zero(self):
        r = gg_reverse_hazard(GeneralizedGamma(0.8, 0.5), 1e-7)
        assert r == pytest.approx(0.5 / 1e-7, rel=1e-3)

    @pytest.mark.parametrize(
        "beta, alpha, t, expected",
        [(1, 1, 2.0, -1.0), (1, 2, 1.0, 0.0), (2, 2, 0.5, 1.0)],
    )
    def test_log_density_slope(self, beta, alpha, t, expected):
        assert gg_log_density_slope(GeneralizedGamma(beta, alpha), t) == pytest.approx(expected, abs=1e-15)

    def test_reverse_hazard_derivative_exponential(self):
        r1 = 1 / (E - 1)
        value = gg_reverse_hazard_derivative(GeneralizedGamma(1, 1), 1.0)
        assert value == pytest.approx(r1 * (-1 - r1), rel=1e-14)
        assert value == pytest.approx(-0.920675, abs=2e-6)

    def test_condition_functions_exponential(self):
        cf = condition_functions(make_special("exp"))
        assert cf.eta(1.0) == pytest.approx(1 + 1 / (E - 1), rel=1e-14)
        assert cf.chi(1.0) == pytest.approx(-0.920675, abs=2e-6)
        assert cf.psi(1.0) == pytest.approx(1 / (E - 1), rel=1e-14)


class TestAgainstScipy:
    """``scipy.stats.gengamma(a=alpha/beta, c=beta)`` is the same family."""

    @pytest.mark.parametrize("beta, alpha", [(0.8, 0.5), (0.3, 1.7), (2.5, 0.4), (1.0, 3.0)])
    def test_pdf_cdf(self, beta, alpha):
        b = GeneralizedGamma(beta, alpha)
        ref = stats.gengamma(a=alpha / beta, c=beta)
        np.testing.assert_allclose(b.pdf(GRID), ref.pdf(GRID), rtol=1e-11, atol=1e-300)
        cdf = ref.cdf(GRID)
        keep = cdf > 1e-300
        np.testing.assert_allclose(b.cdf(GRID)[keep], cdf[keep], rtol=1e-11)
        sf = ref.sf(GRID)
        keep = sf > 1e-300
        np.testing.assert_allclose(b.sf(GRID)[keep], sf[keep], rtol=1e-10)


class TestSpecialCases:
    @pytest.mark.parametrize("a", [0.3, 0.5, 1.0, 2.0])
    def test_gamma(self, a):
        b = make_special("gamma", a)
        np.testing.assert_allclose(b.pdf(GRID), stats.gamma(a).pdf(GRID), rtol=1e-12)

    @pytest.mark.parametrize("a", [0.3, 0.5, 1.0, 2.0])
    def test_weibull(self, a):
        b = make_special("weibull", a)
        ref = a * GRID ** (a - 1) * np.exp(-(GRID**a))
        keep = ref > 1e-300
        np.testing.assert_allclose(b.pdf(GRID)[keep], ref[keep], rtol=1e-12)
        np.testing.assert_allclose(b.cdf(GRID), -np.expm1(-(GRID**a)), rtol=1e-12)

    def test_exponential(self):
        b = make_special("exp")
        np.testing.assert_allclose(b.pdf(GRID), np.exp(-GRID), rtol=1e-12)
        np.testing.assert_allclose(b.cdf(GRID), -np.expm1(-GRID), rtol=1e-12)


class TestConsistency:
    @pytest.mark.parametrize("beta, alpha", [(0.8, 0.5), (1.0, 2.0), (0.3, 0.2), (2.0, 2.0), (1.5, 0.7)])
    def test_pdf_is_cdf_derivative(self, beta, alpha):
        b = GeneralizedGamma(beta, alpha)
        t = GRID
        diff = np.abs(fd(b.cdf, t) - b.pdf(t))
        assert np.all(diff <= 1e-6 * np.maximum(1.0, b.pdf(t)))

    @pytest.mark.parametrize("beta, alpha", [(0.8, 0.5), (1.0, 2.0), (0.5, 0.9), (2.0, 2.0)])
    def test_reverse_hazard_derivative_matches_fd(self, beta, alpha):
        b = GeneralizedGamma(beta, alpha)
        t = GRID[(GRID > 1e-2) & (GRID < 20)]
        analytic = b.reverse_hazard_derivative(t)
        numeric = fd(b.reverse_hazard, t)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-6, atol=1e-12)

    def test_reverse_hazard_derivative_at_gamma2(self):
        b = GeneralizedGamma(1.0, 2.0)
        for t in (0.3, 1.0, 4.0):
            assert gg_reverse_hazard_derivative(b, t) == pytest.approx(
                fd(lambda s: gg_reverse_hazard(b, s), t), rel=1e-6
            )

    @given(beta=st.floats(0.05, 1.0), alpha=shapes)
    def test_reverse_hazard_nonincreasing_for_small_beta(self, beta, alpha):
        b = GeneralizedGamma(beta, alpha)
        assert np.all(b.reverse_hazard_derivative(GRID) <= 0)

    def test_reverse_hazard_equals_pdf_over_cdf(self, gg_example):
        t = GRID[(GRID > 1e-2) & (GRID < 30)]
        np.testing.assert_allclose(
            gg_example.reverse_hazard(t), gg_example.pdf(t) / gg_example.cdf(t), rtol=1e-12
        )

    def test_eta_two_paths(self, gg_example):
        cf = condition_functions(gg_example)
        np.testing.assert_allclose(cf.eta(GRID), gg_example.eta_identity(GRID), rtol=1e-8, atol=1e-12)

    def test_eta_against_finite_differences(self, gg_example):
        t = GRID[(GRID > 1e-2) & (GRID < 20)]
        r = gg_example.reverse_hazard(t)
        eta_fd = -t * fd(gg_example.reverse_hazard, t) / r
        np.testing.assert_allclose(condition_functions(gg_example).eta(t), eta_fd, rtol=1e-6)

    @given(beta=shapes, alpha=shapes)
    def test_cdf_monotone_and_bounded(self, beta, alpha):
        F = GeneralizedGamma(beta, alpha).cdf(GRID)
        assert np.all(np.diff(F) >= 0)
        assert np.all((F >= 0) & (F <= 1))

    @given(beta=shapes, alpha=shapes)
    def test_psi_nonnegative_and_finite(self, beta, alpha):
        psi = condition_functions(GeneralizedGamma(beta, alpha)).psi(GRID)
        assert np.all(np.isfinite(psi))
        assert np.all(psi >= 0)


class TestLimits:
    @given(beta=st.floats(0.6, 2.0), alpha=shapes)
    def test_psi_at_zero(self, beta, alpha):
        psi = condition_functions(GeneralizedGamma(beta, alpha)).psi(1e-6)
        assert psi == pytest.approx(alpha, rel=1e-3)

    @given(beta=shapes, alpha=shapes)
    def test_psi_far_tail(self, beta, alpha):
        # at t**beta = 50 the gamma(alpha/beta) tail is only negligible
        # while alpha/beta stays moderate
        assume(alpha / beta <= 10)
        psi = condition_functions(GeneralizedGamma(beta, alpha)).psi(50 ** (1 / beta))
        assert psi <= 1e-6

    def test_small_beta_deviation_is_first_order(self):
        # psi(t) - alpha ~ -alpha * beta / (alpha + beta) * t**beta near zero
        beta, alpha, t = 0.1, 0.5, 1e-6
        psi = condition_functions(GeneralizedGamma(beta, alpha)).psi(t)
        lead = -alpha * beta / (alpha + beta) * t**beta
        assert (psi - alpha) / lead == pytest.approx(1.0, abs=0.1)

    def test_tiny_arguments_stay_finite(self):
        b = GeneralizedGamma(0.8, 0.5)
        t = np.array([1e-300, 1e-200, 1e-12])
        np.testing.assert_allclose(t * b.reverse_hazard(t), 0.5, rtol=1e-6)
        assert np.all(np.isfinite(b.log_cdf(t)))
