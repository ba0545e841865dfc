import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from scaleorder import DomainError, GeneralizedGamma, OutlierModel, ScaleModel, TwoBaselineModel, make_special
from scaleorder.scale_model import (
    expand,
    max_cdf,
    max_log_cdf,
    max_log_pdf,
    max_log_reverse_hazard,
    max_pdf,
    max_reverse_hazard,
)

E = math.e
EXP = make_special("exp")
T = np.geomspace(1e-3, 50, 500)

scales = st.lists(st.floats(0.1, 10.0), min_size=1, max_size=6)


class TestExamples:
    def test_iid_cdf(self):
        assert max_cdf(ScaleModel.single(EXP, (1, 1)), 1.0) == pytest.approx((1 - 1 / E) ** 2, rel=1e-14)

    def test_cdf_at_zero(self):
        m = ScaleModel.single(GeneralizedGamma(0.8, 0.5), (1, 2, 3))
        assert max_cdf(m, 0.0) == 0.0
        assert max_log_cdf(m, 0.0) == -np.inf

    def test_heterogeneous_cdf(self):
        m = ScaleModel.single(EXP, (1, 2))
        assert max_cdf(m, 1.0) == pytest.approx((1 - E**-1) * (1 - E**-2), rel=1e-14)
        assert max_cdf(m, 1.0) == pytest.approx(0.546580, abs=1e-5)

    @pytest.mark.parametrize("lam, t", [(0.3, 2.0), (4.0, 0.1)])
    def test_single_component_reverse_hazard(self, lam, t):
        b = GeneralizedGamma(0.8, 0.5)
        m = ScaleModel.single(b, (lam,))
        assert max_reverse_hazard(m, t) == pytest.approx(lam * b.reverse_hazard(lam * t), rel=1e-14)

    def test_iid_reverse_hazard(self):
        m = ScaleModel.single(EXP, (1, 1))
        assert max_reverse_hazard(m, 1.0) == pytest.approx(2 / (E - 1), rel=1e-14)

    def test_heterogeneous_reverse_hazard(self):
        m = ScaleModel.single(EXP, (1, 2))
        expected = 1 / (E - 1) + 2 * E**-2 / (1 - E**-2)
        assert max_reverse_hazard(m, 1.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.895012, abs=1e-6)

    def test_pdf_examples(self):
        assert max_pdf(ScaleModel.single(EXP, (1,)), 1.0) == pytest.approx(1 / E, rel=1e-14)
        iid = max_pdf(ScaleModel.single(EXP, (1, 1)), 1.0)
        assert iid == pytest.approx(2 * (1 - 1 / E) / E, rel=1e-14)

    @pytest.mark.parametrize(
        "model",
        [
            ScaleModel.single(EXP, (1, 2)),
            ScaleModel.single(GeneralizedGamma(0.8, 0.5), (0.5, 1.5, 4.0)),
            ScaleModel((EXP, GeneralizedGamma(2.0, 3.0)), (1.0, 0.7)),
        ],
    )
    def test_pdf_integrates_to_one(self, model):
        total, _ = integrate.quad(lambda t: max_pdf(model, t), 0, np.inf, limit=200)
        assert total == pytest.approx(1.0, abs=1e-4)

    def test_domain_errors(self):
        m = ScaleModel.single(EXP, (1, 2))
        with pytest.raises(DomainError):
            max_reverse_hazard(m, 0.0)
        with pytest.raises(DomainError):
            max_pdf(m, 0.0)
        with pytest.raises(DomainError):
            max_cdf(m, -1.0)

    @pytest.mark.parametrize("lams", [(), (1.0, 0.0), (1.0, -2.0), (np.inf,)])
    def test_rejects_bad_scales(self, lams):
        with pytest.raises(DomainError):
            ScaleModel.single(EXP, lams)


class TestOutlier:
    def test_expand(self):
        m = OutlierModel(EXP, p=2, lambda1=1.0, q=1, lam=3.0)
        assert expand(m).lambdas == (1.0, 1.0, 3.0)
        assert m.n == 3

    @pytest.mark.parametrize("p, q", [(1, 1), (2, 3), (5, 1)])
    def test_expanded_reverse_hazard_matches_direct(self, p, q):
        m = OutlierModel(GeneralizedGamma(0.8, 0.5), p, 0.7, q, 2.5)
        np.testing.assert_allclose(max_reverse_hazard(m.expand(), T), m.reverse_hazard(T), rtol=1e-13)

    def test_two_by_one_is_plain_pair(self):
        m = OutlierModel(EXP, 1, 0.5, 1, 2.0).expand()
        plain = ScaleModel.single(EXP, (0.5, 2.0))
        np.testing.assert_array_equal(max_cdf(m, T), max_cdf(plain, T))

    def test_two_baseline(self):
        f, g = GeneralizedGamma(0.8, 0.5), make_special("gamma", 2.0)
        m = TwoBaselineModel(f, g, 2, 0.5, 3, 1.5)
        sm = m.expand()
        assert sm.baselines == (f, f, g, g, g)
        np.testing.assert_allclose(max_reverse_hazard(sm, T), m.reverse_hazard(T), rtol=1e-13)

    @pytest.mark.parametrize("p, q", [(0, 1), (1, 0), (1.5, 2)])
    def test_rejects_bad_counts(self, p, q):
        with pytest.raises(DomainError):
            OutlierModel(EXP, p, 1.0, q, 2.0)


class TestProperties:
    @pytest.mark.parametrize("lams", [(0.5, 1.0, 4.0), (3.0, 0.2, 0.2, 7.0)])
    def test_permutation_invariance_is_exact(self, lams):
        b = GeneralizedGamma(0.7, 1.3)
        ref = ScaleModel.single(b, lams)
        for perm in itertools.permutations(lams):
            m = ScaleModel.single(b, perm)
            for fn in (max_cdf, max_pdf, max_reverse_hazard):
                np.testing.assert_array_equal(fn(m, T), fn(ref, T))

    def test_permutation_invariance_mixed_baselines(self):
        f, g = GeneralizedGamma(0.7, 1.3), EXP
        a = ScaleModel((f, g, f), (1.0, 2.0, 3.0))
        b = ScaleModel((g, f, f), (2.0, 3.0, 1.0))
        np.testing.assert_array_equal(max_pdf(a, T), max_pdf(b, T))

    @given(first=scales, second=scales)
    def test_reverse_hazard_additivity(self, first, second):
        b = GeneralizedGamma(0.8, 0.5)
        whole = max_reverse_hazard(ScaleModel.single(b, first + second), T)
        parts = max_reverse_hazard(ScaleModel.single(b, first), T) + max_reverse_hazard(
            ScaleModel.single(b, second), T
        )
        np.testing.assert_allclose(whole, parts, rtol=1e-12)

    @given(lams=scales, factor=st.floats(1.0, 5.0), idx=st.integers(0, 5))
    def test_cdf_increases_with_scale(self, lams, factor, idx):
        b = GeneralizedGamma(1.4, 0.6)
        bigger = list(lams)
        bigger[idx % len(lams)] *= factor
        lo = max_log_cdf(ScaleModel.single(b, lams), T)
        hi = max_log_cdf(ScaleModel.single(b, bigger), T)
        assert np.all(hi >= lo - 1e-12 * np.abs(lo))

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_common_scale_reduction(self, n):
        b = GeneralizedGamma(0.8, 0.5)
        lam = 1.7
        m = ScaleModel.single(b, (lam,) * n)
        np.testing.assert_allclose(max_cdf(m, T), b.cdf(lam * T) ** n, rtol=1e-12)
        np.testing.assert_allclose(
            max_reverse_hazard(m, T), n * lam * b.reverse_hazard(lam * T), rtol=1e-12
        )

    def test_log_forms_agree(self):
        m = ScaleModel.single(GeneralizedGamma(0.8, 0.5), (0.5, 2.0))
        np.testing.assert_allclose(np.exp(max_log_cdf(m, T)), max_cdf(m, T), rtol=1e-13)
        np.testing.assert_allclose(np.exp(max_log_pdf(m, T)), max_pdf(m, T), rtol=1e-12)
        np.testing.assert_allclose(
            np.exp(max_log_reverse_hazard(m, T)), max_reverse_hazard(m, T), rtol=1e-13
        )

    def test_underflow_policy(self):
        b = GeneralizedGamma(1.0, 40.0)
        m = ScaleModel.single(b, (1.0, 1.0))
        t = np.array([1e-9])
        assert max_cdf(m, t)[0] == 0.0
        assert max_pdf(m, t)[0] == 0.0
        assert np.isfinite(max_log_cdf(m, t)[0])
        assert np.isfinite(max_log_reverse_hazard(m, t)[0])

    def test_scalar_in_scalar_out(self):
        m = ScaleModel.single(EXP, (1, 2))
        assert np.ndim(max_cdf(m, 1.0)) == 0
        assert max_cdf(m, [1.0, 2.0]).shape == (2,)
