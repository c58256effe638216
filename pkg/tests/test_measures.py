import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from renyibounds.measures import (
    alpha_monotonicity_check,
    eof_pure,
    g_concurrence_pure,
    gconc_inequality_check,
    gm_lemma_check,
    gm_pure,
    ln_inequality_check,
    log_negativity,
)
from renyibounds.qstate import DensityMatrix, PureState, schmidt_vector
from renyibounds.states import random_decompositions, random_pure, werner

LOG3 = math.log2(3)
# frozen by direct evaluation of the order-3 entropy of (0.7, 0.2, 0.1)
E3_721 = 0.7531763330


def bell():
    return PureState([1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], (2, 2))


def phi3():
    v = np.zeros(9)
    v[[0, 4, 8]] = 1 / np.sqrt(3)
    return PureState(v, (3, 3))


simplex = st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=5).map(lambda v: np.array(v) / sum(v))


class TestPureMeasures:
    def test_bell(self):
        assert eof_pure([0.5, 0.5]) == pytest.approx(1.0)
        assert gm_pure([0.5, 0.5]) == pytest.approx(1.0)
        assert g_concurrence_pure([0.5, 0.5]) == pytest.approx(1.0)

    def test_product(self):
        assert eof_pure([1.0, 0.0]) == 0.0
        assert gm_pure([1.0, 0.0]) == 0.0
        assert g_concurrence_pure([1.0, 0.0]) == 0.0

    def test_uniform(self):
        mu = [1 / 3] * 3
        assert eof_pure(mu) == pytest.approx(LOG3)
        assert gm_pure(mu) == pytest.approx(LOG3)
        assert g_concurrence_pure(mu) == pytest.approx(1.0)

    @given(simplex)
    def test_g_concurrence_range(self, mu):
        assert 0 <= g_concurrence_pure(mu) <= 1 + 1e-12


class TestLogNegativity:
    def test_separable(self):
        assert log_negativity(DensityMatrix(np.eye(4) / 4, (2, 2))) == 0.0

    def test_bell(self):
        assert log_negativity(bell().density()) == pytest.approx(1.0)

    def test_phi3(self):
        assert log_negativity(phi3().density()) == pytest.approx(LOG3)

    def test_werner(self):
        assert log_negativity(werner(3, -0.5)) == pytest.approx(math.log2(4 / 3), abs=1e-12)


class TestMonotonicity:
    def test_bell_flat(self):
        r = alpha_monotonicity_check([0.5, 0.5], [0.5, 1, 2, 3])
        assert r.passed
        np.testing.assert_allclose(r.extra["values"], 1.0)

    def test_strict(self):
        r = alpha_monotonicity_check([0.9, 0.1], [0.5, 1, 3])
        v = r.extra["values"]
        assert r.passed and v[0] > v[1] > v[2]

    def test_unsorted(self):
        with pytest.raises(ValueError):
            alpha_monotonicity_check([0.5, 0.5], [3, 1])

    @given(st.integers(0, 2**32 - 1))
    def test_random_m4(self, seed):
        mu = schmidt_vector(random_pure(4, 4, seed=seed))
        assert alpha_monotonicity_check(mu, [0.5, 1.0, 3.0]).passed


class TestGMLemma:
    def test_bell_alpha3(self):
        r = gm_lemma_check([0.5, 0.5], 3.0)
        assert r["squared"].lhs == pytest.approx(1.5) and r["squared"].passed
        assert r["definitional"].lhs == pytest.approx(0.75) and not r["definitional"].passed

    def test_bell_alpha1_equality(self):
        r = gm_lemma_check([0.5, 0.5], 1.0)["squared"]
        assert r.lhs == pytest.approx(r.rhs) and r.passed

    def test_bell_alpha_half_equality(self):
        r = gm_lemma_check([0.5, 0.5], 0.5, d=2)["squared"]
        assert r.lhs == pytest.approx(2.0) and r.rhs == pytest.approx(2.0) and r.passed

    @given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 1.0, 3.0]), st.integers(2, 4))
    def test_squared_pure(self, seed, alpha, m):
        assert gm_lemma_check(schmidt_vector(random_pure(m, m, seed=seed)), alpha)["squared"].passed

    @given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 1.0, 3.0]))
    def test_squared_decomposition(self, seed, alpha):
        rho = werner(3, -0.5)
        dec = next(random_decompositions(rho, None, 1, seed))
        assert gm_lemma_check(dec, alpha)["squared"].passed

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            gm_lemma_check([0.5, 0.5], 0.0)


class TestLNInequality:
    def test_bell_equality(self):
        r = ln_inequality_check(bell().density(), 0.5, 1)["pure"]
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0) and r.passed

    def test_window(self):
        with pytest.raises(ValueError):
            ln_inequality_check(bell().density(), 0.6, 1)
        with pytest.raises(ValueError):
            ln_inequality_check(bell().density(), 0.4, 2)
        with pytest.raises(ValueError):
            ln_inequality_check(bell().density(), 0.5, 0)

    def test_mixed_needs_comparison(self):
        with pytest.raises(ValueError):
            ln_inequality_check(werner(3, -0.5), 0.5, 1)

    def test_separable_mixture_with_product_decomposition(self):
        rho = DensityMatrix(np.diag([0.5, 0, 0, 0.5]), (2, 2))
        dec = next(random_decompositions(rho, 2, 1, 0))
        r = ln_inequality_check(rho, 0.5, 1, decomposition=dec)
        assert r["decomposition"].lhs == 0.0
        assert r["members"].passed

    def test_werner_reports_both(self):
        rho = werner(3, -0.5)
        dec = next(random_decompositions(rho, None, 1, 0))
        r = ln_inequality_check(rho, 0.5, 1, decomposition=dec, roof_estimate=0.3)
        assert set(r) == {"decomposition", "members", "roof"}
        assert r["roof"].lhs == pytest.approx(math.log2(4 / 3))
        assert r["members"].passed

    @given(st.integers(0, 2**32 - 1), st.sampled_from([(0.5, 1), (0.6, 2), (0.75, 2)]))
    def test_pure_states(self, seed, an):
        alpha, n = an
        psi = random_pure(3, 3, seed=seed)
        assert ln_inequality_check(psi.density(), alpha, n)["pure"].passed

    @given(st.integers(0, 2**32 - 1), st.sampled_from([(0.5, 1), (0.6, 2), (0.75, 2)]))
    def test_member_form_on_decompositions(self, seed, an):
        alpha, n = an
        dec = next(random_decompositions(werner(3, -0.75), None, 1, seed))
        assert ln_inequality_check(werner(3, -0.75), alpha, n, decomposition=dec)["members"].passed


class TestGConcurrence:
    def test_bell_alpha3_equality(self):
        r = gconc_inequality_check([0.5, 0.5], 3.0)
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0) and r.passed

    def test_uniform_alpha_half(self):
        r = gconc_inequality_check([1 / 3] * 3, 0.5)
        assert r.lhs == pytest.approx(LOG3) and r.rhs == pytest.approx(LOG3)

    def test_skewed(self):
        r = gconc_inequality_check([0.7, 0.2, 0.1], 3.0)
        assert r.rhs == pytest.approx(E3_721, abs=1e-9)
        assert r.extra["G"] == pytest.approx(3 * 0.014 ** (1 / 3), abs=1e-12)
        assert r.lhs == pytest.approx(2.2867, abs=1e-4)
        assert r.passed

    def test_rank_deficient_vacuous(self):
        assert gconc_inequality_check([0.6, 0.4, 0.0], 3.0).passed

    def test_alpha_one_rejected(self):
        with pytest.raises(ValueError):
            gconc_inequality_check([0.5, 0.5], 1.0)

    @given(simplex, st.sampled_from([0.3, 0.5, 0.8, 1.5, 3.0]))
    def test_random(self, mu, alpha):
        assert gconc_inequality_check(mu, alpha).passed

    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("alpha", [0.5, 3.0])
    def test_uniform_saturates(self, d, alpha):
        r = gconc_inequality_check([1 / d] * d, alpha)
        assert abs(r.residual) < 1e-9
