import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.special import betainc, betaincinv

import oracles
from dualrecord import (DomainError, NumericalUnderflowError, RngStream, TruncatedScaledBeta,
                        builtin_population, cell_probabilities, sample_beta, sample_multinomial,
                        sample_negative_binomial, sample_poisson, sample_truncated_scaled_beta)
from dualrecord.core import CellProbabilities

N = 100_000


def draws(fn, n=N):
    return np.array([fn() for _ in range(n)])


class TestRngStream:
    def test_determinism(self):
        a = RngStream(7, (3, 1))
        b = RngStream(7, (3, 1))
        assert [a.random() for _ in range(50)] == [b.random() for _ in range(50)]

    def test_streams_differ(self):
        a = RngStream(7, 0).generator.random(20)
        b = RngStream(7, 1).generator.random(20)
        c = RngStream(8, 0).generator.random(20)
        assert not np.array_equal(a, b) and not np.array_equal(a, c)

    def test_child(self):
        assert RngStream(1, 2).child(3).stream_id == (2, 3)
        np.testing.assert_array_equal(RngStream(1, 2).child(3).generator.random(5),
                                      RngStream(1, (2, 3)).generator.random(5))

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            RngStream(-1)
        with pytest.raises(DomainError):
            RngStream(1, -2)


class TestBeta:
    def test_uniform_mean(self):
        rng = RngStream(1)
        assert draws(lambda: sample_beta(1, 1, rng)).mean() == pytest.approx(0.5, abs=0.005)

    def test_symmetric_moments(self):
        rng = RngStream(2)
        x = draws(lambda: sample_beta(251, 251, rng))
        assert x.mean() == pytest.approx(0.5, abs=0.002)
        var = 251 * 251 / (502 ** 2 * 503)
        assert var == pytest.approx(4.97e-4, rel=1e-3)
        assert x.var() == pytest.approx(var, rel=0.1)

    @pytest.mark.parametrize("a,b", [(0, 1), (1, -2)])
    def test_bad_shapes(self, a, b):
        with pytest.raises(DomainError):
            sample_beta(a, b, RngStream(0))


def _chi2_pvalue(x, edges, probs):
    counts, _ = np.histogram(x, bins=edges)
    return stats.chisquare(counts, probs * counts.sum()).pvalue


class TestTruncatedScaledBeta:
    def test_flat_case_is_uniform(self):
        d = TruncatedScaledBeta(1, 1, 1, 0.2, 0.9)
        rng = RngStream(3)
        x = draws(lambda: sample_truncated_scaled_beta(d, rng))
        assert x.mean() == pytest.approx(0.55, abs=0.01)
        assert x.min() >= 0.2 and x.max() <= 0.9

    def test_degenerate_interval(self):
        d = TruncatedScaledBeta(3, 4, 1, 0.4 - 1e-12, 0.4)
        rng = RngStream(4)
        x = draws(lambda: sample_truncated_scaled_beta(d, rng), 1000)
        assert np.all(np.abs(x - 0.4) <= 1e-12)

    def test_full_support_mean(self):
        d = TruncatedScaledBeta(51, 51, 2, 0.0, 0.5)
        assert d.full_support_mean == 0.25
        rng = RngStream(5)
        x = draws(lambda: sample_truncated_scaled_beta(d, rng))
        assert x.mean() == pytest.approx(0.25, abs=0.003)

    @pytest.mark.parametrize("a,b,rate,lo,hi", [
        (182, 70, 0.7240 / 1.25, 1.0, 1.25 / 0.7240),     # P1 AB-Flat, phi > 1
        (182, 70, 0.7240 / 0.9, 0.7240, 1.0),             # P1 AB-Flat, phi < 1
        (190.19, 72.50, 144 / 250, 0.7240, 250 / 144),    # P1 AB-Con shapes
        (6, 4, 0.5, 1.0, 2.0),                            # small table
        (2.5, 0.7, 1.0, 0.05, 0.95),                      # b < 1, density unbounded at 1
    ])
    def test_goodness_of_fit(self, a, b, rate, lo, hi):
        d = TruncatedScaledBeta(a, b, rate, lo, hi)
        rng = RngStream(6)
        x = draws(lambda: sample_truncated_scaled_beta(d, rng))
        assert x.min() >= lo and x.max() <= hi
        # 30 equal-mass cells of the exact truncated distribution
        flo, fhi = betainc(a, b, rate * lo), betainc(a, b, rate * min(hi, 1 / rate))
        edges = betaincinv(a, b, flo + (fhi - flo) * np.linspace(0, 1, 31)) / rate
        edges[0], edges[-1] = lo, hi
        probs = oracles.gb1_bin_probs(a, b, rate, edges)
        assert _chi2_pvalue(x, edges, probs) > 1e-3
        counts, _ = np.histogram(x, bins=edges)
        assert oracles.total_variation(counts / N, probs) < 1e-2

    def test_tiny_mass_region(self):
        # truncation far in the upper tail: rejection would stall, inversion does not
        d = TruncatedScaledBeta(182, 70, 0.5, 1.8, 2.0)
        rng = RngStream(7)
        x = draws(lambda: sample_truncated_scaled_beta(d, rng), 20_000)
        edges = np.linspace(1.8, 2.0, 11)
        probs = oracles.gb1_bin_probs(182, 70, 0.5, edges)
        counts, _ = np.histogram(x, bins=edges)
        assert oracles.total_variation(counts / len(x), probs) < 2e-2

    def test_underflow_reported(self):
        d = TruncatedScaledBeta(5000, 5000, 1.0, 0.999, 1.0)
        with pytest.raises(NumericalUnderflowError, match="0.999"):
            sample_truncated_scaled_beta(d, RngStream(0))

    @pytest.mark.parametrize("args", [(0, 1, 1, 0, 1), (1, 1, 0, 0, 1), (1, 1, 1, 0.5, 0.5),
                                      (1, 1, 2, 0.1, 0.9)])
    def test_validation(self, args):
        with pytest.raises(DomainError):
            TruncatedScaledBeta(*args)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.1, 500), st.floats(0.1, 500), st.floats(0.1, 3.0),
           st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(0, 2 ** 32))
    def test_draws_within_bounds(self, a, b, rate, f1, f2, seed):
        lo, hi = sorted((f1 / rate, f2 / rate))
        if not hi > lo:
            return
        d = TruncatedScaledBeta(a, b, rate, lo, hi)
        rng = RngStream(seed)
        for _ in range(20):
            try:
                x = sample_truncated_scaled_beta(d, rng)
            except NumericalUnderflowError:
                return
            assert lo <= x <= hi


class TestPoisson:
    def test_zero_mean(self):
        rng = RngStream(8)
        assert all(sample_poisson(0.0, rng) == 0 for _ in range(100))

    def test_moments(self):
        rng = RngStream(9)
        x = draws(lambda: sample_poisson(100.0, rng))
        assert x.mean() == pytest.approx(100, abs=1)
        assert x.var() == pytest.approx(100, abs=3)

    @pytest.mark.parametrize("lam", [3.5, 37.9, 410.0])
    def test_goodness_of_fit(self, lam):
        rng = RngStream(10)
        x = draws(lambda: sample_poisson(lam, rng))
        support = np.arange(0, int(lam + 20 * np.sqrt(lam) + 20))
        pmf = oracles.poisson_pmf(lam, support)
        cdf = np.cumsum(pmf)
        cuts = np.unique(support[np.searchsorted(cdf, np.linspace(0, 1, 21)[1:-1])])
        edges = np.concatenate(([-0.5], cuts + 0.5, [support[-1] + 0.5]))
        probs = np.histogram(support, edges, weights=pmf)[0]
        assert _chi2_pvalue(x, edges, probs) > 1e-3

    def test_negative_mean(self):
        with pytest.raises(DomainError):
            sample_poisson(-1.0, RngStream(0))


class TestNegativeBinomial:
    def test_mu_one(self):
        rng = RngStream(11)
        assert all(sample_negative_binomial(394, 1.0, rng) == 0 for _ in range(100))

    def test_p1_like_mean(self):
        rng = RngStream(12)
        x = draws(lambda: sample_negative_binomial(394, 0.789, rng))
        assert 394 * 0.211 / 0.789 == pytest.approx(105.3, abs=0.1)
        assert x.mean() == pytest.approx(394 * 0.211 / 0.789, abs=1)

    def test_matches_jeffreys_conditional(self):
        # pmf of failures-before-r-th-success vs the brute-force Jeffreys conditional
        r, q = 394, 0.211
        n, brute = oracles.jeffreys_n_conditional(r, q, r + 2000)
        pmf = stats.nbinom.pmf(n - r, r, 1 - q)
        assert oracles.total_variation(pmf / pmf.sum(), brute) < 1e-3

    @pytest.mark.parametrize("r,mu", [(12, 0.35), (394, 0.789), (458, 0.93)])
    def test_goodness_of_fit(self, r, mu):
        rng = RngStream(13)
        x = draws(lambda: sample_negative_binomial(r, mu, rng))
        support = np.arange(0, int(stats.nbinom.ppf(1 - 1e-12, r, mu)) + 1)
        pmf = stats.nbinom.pmf(support, r, mu)
        pmf[-1] += stats.nbinom.sf(support[-1], r, mu)
        cdf = np.cumsum(pmf)
        cuts = np.unique(support[np.searchsorted(cdf, np.linspace(0, 1, 21)[1:-1])])
        edges = np.concatenate(([-0.5], cuts + 0.5, [support[-1] + 0.5]))
        probs = np.histogram(support, edges, weights=pmf)[0]
        assert _chi2_pvalue(x, edges, probs) > 1e-3

    @pytest.mark.parametrize("r,mu", [(0, 0.5), (5, 0.0), (5, 1.5)])
    def test_domain(self, r, mu):
        with pytest.raises(DomainError):
            sample_negative_binomial(r, mu, RngStream(0))


class TestMultinomial:
    def test_trivial(self):
        rng = RngStream(14)
        probs = cell_probabilities(builtin_population("P1"))
        assert sample_multinomial(0, probs, rng) == (0, 0, 0, 0)
        assert sample_multinomial(7, CellProbabilities(1, 0, 0, 0), rng) == (7, 0, 0, 0)

    def test_p1_mean_x0(self):
        rng = RngStream(15)
        probs = cell_probabilities(builtin_population("P1"))
        x0 = [500 - sample_multinomial(500, probs, rng)[3] for _ in range(10_000)]
        assert np.mean(x0) == pytest.approx(394.4, abs=0.5)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.integers(0, 2 ** 32))
    def test_sums(self, n, seed):
        probs = cell_probabilities(builtin_population("P3"))
        assert sum(sample_multinomial(n, probs, RngStream(seed))) == n
