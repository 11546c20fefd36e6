import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chanadapt.errors import DomainError, NumericalError
from chanadapt.stats import (PairedSamples, bh_correct, chi2_sf, cohens_d, friedman,
                             gamma_q, wilcoxon_signed_rank, within_1pp_fraction)


def brute_force_wilcoxon(diff: np.ndarray) -> tuple[float, float]:
    """Exact two-sided p by enumerating all 2^n sign assignments."""
    diff = diff[diff != 0.0]
    n = diff.size
    order = np.argsort(np.abs(diff), kind="stable")
    ranks = np.empty(n)
    sorted_abs = np.abs(diff)[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_abs[j + 1] == sorted_abs[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    w_plus = ranks[diff > 0].sum()
    w_minus = ranks[diff < 0].sum()
    w = min(w_plus, w_minus)
    count = 0
    for signs in itertools.product((0, 1), repeat=n):
        wp = sum(r for r, s in zip(ranks, signs) if s)
        if wp <= w + 1e-12:
            count += 1
    return w, min(1.0, 2.0 * count / 2.0**n)


class TestWilcoxon:
    def test_all_positive_n6(self):
        s = PairedSamples(np.arange(1.0, 7.0), np.zeros(6))
        w, p = wilcoxon_signed_rank(s)
        assert w == 0.0
        assert p == pytest.approx(2.0 / 2.0**6, abs=1e-15)  # 0.03125

    def test_all_positive_n5(self):
        s = PairedSamples(np.arange(1.0, 6.0), np.zeros(5))
        _, p = wilcoxon_signed_rank(s)
        assert p == pytest.approx(0.0625, abs=1e-15)

    def test_identical_samples_undefined(self):
        x = np.array([1.0, 2.0, 3.0])
        with pytest.raises(NumericalError, match="all differences are zero"):
            wilcoxon_signed_rank(PairedSamples(x, x))

    def test_zero_differences_dropped(self):
        a = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
        b = a.copy()
        b[:6] -= 1.0  # one zero difference, six positive
        _, p = wilcoxon_signed_rank(PairedSamples(a, b))
        assert p == pytest.approx(0.03125, abs=1e-15)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_exact_matches_enumeration(self, n):
        rng = np.random.default_rng(n)
        for trial in range(4):
            diff = np.round(rng.standard_normal(n), 1)  # rounding creates ties
            diff[diff == 0.0] = 0.5
            a = diff
            b = np.zeros(n)
            w, p = wilcoxon_signed_rank(PairedSamples(a, b))
            w_ref, p_ref = brute_force_wilcoxon(diff)
            assert w == pytest.approx(w_ref, abs=1e-12)
            assert p == pytest.approx(p_ref, abs=1e-12)

    def test_exact_matches_scipy(self):
        from scipy.stats import wilcoxon as scipy_wilcoxon

        rng = np.random.default_rng(99)
        diff = rng.standard_normal(14)
        w, p = wilcoxon_signed_rank(PairedSamples(diff, np.zeros(14)))
        ref = scipy_wilcoxon(diff, mode="exact")
        assert w == pytest.approx(ref.statistic)
        assert p == pytest.approx(ref.pvalue, rel=1e-12)

    def test_normal_approximation_matches_scipy(self):
        from scipy.stats import wilcoxon as scipy_wilcoxon

        rng = np.random.default_rng(100)
        diff = rng.standard_normal(40) + 0.3
        w, p = wilcoxon_signed_rank(PairedSamples(diff, np.zeros(40)))
        ref = scipy_wilcoxon(diff, correction=True, mode="approx")
        assert w == pytest.approx(ref.statistic)
        assert p == pytest.approx(ref.pvalue, rel=1e-9)

    def test_symmetric_case_p_is_one(self):
        a = np.array([1.0, -1.0, 2.0, -2.0])
        _, p = wilcoxon_signed_rank(PairedSamples(a, np.zeros(4)))
        assert p == 1.0


class TestBH:
    def test_boundary_vector_all_rejected(self):
        reject, adjusted = bh_correct([0.01, 0.02, 0.03, 0.04, 0.05], q=0.05)
        assert reject.all()
        assert np.max(adjusted) <= 0.05 + 1e-15

    def test_single_pvalue(self):
        reject, adjusted = bh_correct([0.04], q=0.05)
        assert reject[0]
        assert adjusted[0] == pytest.approx(0.04)

    def test_step_up_by_hand(self):
        reject, adjusted = bh_correct([0.001, 0.9], q=0.05)
        assert list(reject) == [True, False]
        assert adjusted[0] == pytest.approx(0.002)
        assert adjusted[1] == pytest.approx(0.9)

    def test_matches_statsmodels_reference_vector(self):
        # reference values computed with statsmodels.stats.multitest
        # fdrcorrection on this fixed vector
        pvals = np.array([0.8385, 0.6422, 0.6808, 0.9678, 0.7163, 0.1771,
                          5.2366e-05, 0.02027, 0.0002814, 0.014988])
        reject, adjusted = bh_correct(pvals, q=0.05)
        from scipy.stats import false_discovery_control

        expected = false_discovery_control(pvals, method="bh")
        assert np.allclose(adjusted, expected, atol=1e-12)
        # largest k with p_(k) <= k q / m is 3 (0.02027 > 4 * 0.005)
        assert list(np.nonzero(reject)[0]) == [6, 8, 9]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20), st.integers(0, 1000))
    def test_permutation_invariance_and_monotonicity(self, pvals, seed):
        pvals = np.array(pvals)
        rng = np.random.default_rng(seed)
        perm = rng.permutation(pvals.size)
        _, adj = bh_correct(pvals, q=0.05)
        _, adj_perm = bh_correct(pvals[perm], q=0.05)
        assert np.allclose(adj_perm, adj[perm], atol=1e-15)
        order = np.argsort(pvals, kind="stable")
        assert np.all(np.diff(adj[order]) >= -1e-15)
        assert np.all((adj >= pvals - 1e-15) & (adj <= 1.0))

    def test_validation(self):
        with pytest.raises(DomainError):
            bh_correct([0.5], q=1.0)
        with pytest.raises(DomainError):
            bh_correct([1.5], q=0.05)
        with pytest.raises(DomainError):
            bh_correct([], q=0.05)


class TestFriedman:
    def test_consistent_ranks_3x3(self):
        scores = np.array([[1.0, 2.0, 3.0],
                           [10.0, 20.0, 30.0],
                           [0.1, 0.2, 0.3]])
        chi2, p = friedman(scores)
        assert chi2 == pytest.approx(6.0, abs=1e-12)
        assert p == pytest.approx(chi2_sf(6.0, 2), abs=1e-15)

    def test_all_equal_scores(self):
        chi2, p = friedman(np.ones((4, 3)))
        assert chi2 == 0.0
        assert p == 1.0

    def test_column_permutation_invariant(self):
        rng = np.random.default_rng(3)
        scores = rng.standard_normal((8, 4))
        chi2, _ = friedman(scores)
        perm = rng.permutation(4)
        chi2_p, _ = friedman(scores[:, perm])
        assert chi2_p == pytest.approx(chi2, abs=1e-12)

    def test_monotone_transform_invariant(self):
        rng = np.random.default_rng(4)
        scores = rng.standard_normal((6, 3))
        chi2, _ = friedman(scores)
        chi2_t, _ = friedman(np.exp(scores))
        assert chi2_t == pytest.approx(chi2, abs=1e-12)

    def test_matches_scipy(self):
        from scipy.stats import friedmanchisquare

        rng = np.random.default_rng(5)
        scores = rng.standard_normal((12, 5))
        chi2, p = friedman(scores)
        ref = friedmanchisquare(*scores.T)
        assert chi2 == pytest.approx(ref.statistic, rel=1e-12)
        assert p == pytest.approx(ref.pvalue, rel=1e-9)

    def test_validation(self):
        with pytest.raises(DomainError):
            friedman(np.ones((1, 3)))
        with pytest.raises(DomainError):
            friedman(np.ones((3, 1)))


class TestCohensD:
    def test_unit_case(self):
        a = np.array([0.0, 1.0, 2.0])  # mean 1, var 1
        b = np.array([-1.0, 0.0, 1.0])  # mean 0, var 1
        assert cohens_d(a, b) == pytest.approx(1.0)

    def test_equal_groups(self):
        a = np.array([1.0, 2.0, 3.0])
        assert cohens_d(a, a) == 0.0

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal(10)
        b = rng.standard_normal(12)
        assert cohens_d(a, b) == -cohens_d(b, a)

    def test_zero_pooled_std(self):
        with pytest.raises(NumericalError, match="pooled"):
            cohens_d(np.ones(3), np.zeros(4))


class TestWithin1pp:
    def test_all_identical(self):
        assert within_1pp_fraction(np.full((3, 5), 80.0)) == 1.0

    def test_dominant_method(self):
        scores = np.vstack([np.full(4, 90.0), np.full(4, 80.0)])
        assert within_1pp_fraction(scores) == 0.0

    def test_half_tied(self):
        scores = np.array([[90.0, 90.0], [89.5, 80.0]])
        assert within_1pp_fraction(scores) == 0.5


class TestIncompleteGamma:
    def test_against_scipy(self):
        from scipy.special import gammaincc

        rng = np.random.default_rng(7)
        for _ in range(200):
            a = float(rng.uniform(0.25, 30.0))
            x = float(rng.uniform(0.0, 60.0))
            assert gamma_q(a, x) == pytest.approx(gammaincc(a, x), abs=1e-10)

    def test_chi2_sf_against_scipy(self):
        from scipy.stats import chi2 as scipy_chi2

        for dof in (1, 2, 5, 10):
            for x in (0.1, 1.0, 6.0, 30.0):
                assert chi2_sf(x, dof) == pytest.approx(scipy_chi2.sf(x, dof), abs=1e-12)

    def test_edges(self):
        assert gamma_q(1.0, 0.0) == 1.0
        assert chi2_sf(0.0, 3) == 1.0
        with pytest.raises(DomainError):
            gamma_q(-1.0, 2.0)
