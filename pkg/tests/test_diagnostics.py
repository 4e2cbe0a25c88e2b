import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualrecord import (ChainConfig, ChainTrace, ConfigurationError, DegenerateDiagnosticError,
                        NPriorPolicy, PhiPriorPolicy, RngStream, builtin_population, burnin_scan,
                        generate_dataset, psrf, psrf_from_arrays, run_ab_con, run_ab_flat)


def trace(values, k=0):
    values = np.asarray(values, dtype=float)
    z = np.full(len(values), 0.5)
    return ChainTrace(values.round().astype(np.int64), values, z, z, burn_in=k)


def ar1(rng, n, rho=0.5, mean=0.0):
    x = np.empty(n)
    x[0] = rng.normal()
    for i in range(1, n):
        x[i] = rho * x[i - 1] + np.sqrt(1 - rho ** 2) * rng.normal()
    return x + mean


def gelman_reference(chains):
    """Textbook multiple-sequence formula written out term by term."""
    chains = np.asarray(chains, float)
    m, n = chains.shape
    means = chains.mean(axis=1)
    grand = means.mean()
    b = n / (m - 1) * ((means - grand) ** 2).sum()
    w = sum(((c - c.mean()) ** 2).sum() / (n - 1) for c in chains) / m
    v = (n - 1) / n * w + b / n + b / (m * n)
    return np.sqrt(v / w)


class TestPsrf:
    def test_matches_textbook_formula(self):
        rng = np.random.default_rng(0)
        chains = rng.normal(size=(4, 300)) + np.arange(4)[:, None] * 0.1
        assert psrf_from_arrays(chains) == pytest.approx(gelman_reference(chains), rel=1e-13)

    def test_split_halves_of_stationary_sequence(self):
        rng = np.random.default_rng(1)
        x = ar1(rng, 20_000)
        halves = [x[:10_000], x[10_000:]]
        assert 1.0 - 1e-3 <= psrf_from_arrays(halves) <= 1.05

    def test_identical_copies(self):
        # with the B/(mn) term and B = 0, identical copies give exactly sqrt((n-1)/n)
        rng = np.random.default_rng(2)
        x = ar1(rng, 2000)
        value = psrf_from_arrays([x, x, x])
        assert value == pytest.approx(np.sqrt(1999 / 2000), rel=1e-14)
        assert 1.0 - 1e-3 <= value <= 1.05

    def test_separated_chains(self):
        rng = np.random.default_rng(3)
        chains = [rng.normal(0, 1, 1000), rng.normal(10, 1, 1000)]
        assert psrf_from_arrays(chains) > 2

    def test_trace_window(self):
        rng = np.random.default_rng(4)
        traces = [trace(np.concatenate([rng.normal(1000.0 * j, 5, 100), rng.normal(50, 5, 100)]))
                  for j in range(3)]
        assert psrf(traces, "phi", 100) < 1.1
        assert psrf(traces, "phi", 50) > 2
        with pytest.raises(ConfigurationError):
            psrf(traces, "phi", 101)

    def test_errors(self):
        with pytest.raises(ConfigurationError):
            psrf([trace(np.arange(10.0))], "phi", 2)
        with pytest.raises(DegenerateDiagnosticError):
            psrf_from_arrays(np.ones((3, 50)))
        with pytest.raises(ConfigurationError):
            psrf_from_arrays(np.ones((3, 1)))

    @settings(max_examples=100, deadline=None)
    # shifts are kept small relative to the scale so that rounding of the
    # transformed *inputs* stays below the 1e-12 tolerance
    @given(st.floats(-10, 10), st.floats(0.5, 100), st.integers(0, 10_000))
    def test_affine_invariance(self, shift, scale, seed):
        rng = np.random.default_rng(seed)
        chains = rng.normal(size=(3, 200)) + rng.normal(size=(3, 1))
        assert psrf_from_arrays(shift + scale * chains) == pytest.approx(
            psrf_from_arrays(chains), abs=1e-12)

    def test_monotone_in_separation(self):
        rng = np.random.default_rng(5)
        base = rng.normal(size=(4, 500))
        offsets = np.array([-1.5, -0.5, 0.5, 1.5])[:, None]
        values = [psrf_from_arrays(base + s * offsets) for s in np.linspace(0, 3, 13)]
        assert np.all(np.diff(values) >= 0)


class TestBurninScan:
    def test_stationary_accepts_smallest(self):
        rng = np.random.default_rng(6)
        traces = [trace(ar1(rng, 4000, mean=100.0)) for _ in range(5)]
        report = burnin_scan(traces, "phi", [100, 500, 1000, 2000])
        assert report.recommended_k == 100
        assert report.threshold == 1.1
        assert [k for k, _ in report.curve] == [100, 500, 1000, 2000]

    def test_drifting_chains(self):
        rng = np.random.default_rng(7)
        traces = []
        for j in range(4):
            # opposite starting modes that merge after a drift phase of 500 sweeps
            x = 100.0 + 5 * ar1(rng, 4000)
            x[:500] += 300 if j % 2 else -300
            traces.append(trace(x))
        grid = list(range(100, 2001, 100))
        report = burnin_scan(traces, "phi", grid)
        assert report.recommended_k is not None and report.recommended_k >= 500
        assert all(r < 1.1 for k, r in report.curve if k >= report.recommended_k)

    def test_grid_errors(self):
        traces = [trace(np.arange(100.0)), trace(np.arange(100.0) + 1)]
        with pytest.raises(ConfigurationError):
            burnin_scan(traces, "phi", [])
        with pytest.raises(ConfigurationError):
            burnin_scan(traces, "phi", [10, 60])

    def test_ab_flat_p3_converges(self):
        data = generate_dataset(builtin_population("P3"), RngStream(20240613, (1,)))
        traces = run_ab_flat(data, PhiPriorPolicy("gt1"), NPriorPolicy("jeffreys"),
                             ChainConfig(k=2000, seed=20240613))
        assert psrf(traces, "N", 2000) < 1.1
        report = burnin_scan(traces, "N", [500, 1000, 1500, 2000])
        assert report.recommended_k is not None and report.recommended_k <= 2000

    @pytest.mark.slow
    def test_ab_con_p3_burnin(self):
        data = generate_dataset(builtin_population("P3"), RngStream(20240613, (1,)))
        traces = run_ab_con(data, NPriorPolicy("jeffreys"), ChainConfig(k=7000, seed=20240613))
        report = burnin_scan(traces, "N", list(range(500, 7001, 500)))
        assert report.recommended_k is not None and report.recommended_k <= 7000
