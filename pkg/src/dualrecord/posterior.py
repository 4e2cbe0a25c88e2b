"""Point estimates and credible intervals from post-burn-in draws.

Loss-based point estimates of N:

* ``mean``   -- squared-error loss;
* ``median`` -- absolute-error loss (nearest-rank sample median);
* ``map``    -- most frequent integer value, ties broken toward the smallest;
* ``sre``    -- squared *relative* error loss, ``sum(1/N) / sum(1/N**2)``.

Intervals are percentile intervals using the nearest-rank (inverse empirical
CDF) quantile, so both endpoints are actual draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = ["PosteriorSummary", "ContinuousSummary", "nearest_rank_quantile", "summarize",
           "pooled_draws", "pooled_summary", "summarize_continuous"]


def nearest_rank_quantile(x, q):
    """Quantile(s) ``q`` by the inverse empirical CDF: the ``ceil(q n)``-th order statistic."""
    return np.quantile(np.asarray(x), q, method="inverted_cdf")


def _ci(x, level):
    if not 0.0 <= level < 1.0:
        raise DomainError(f"credible level must lie in [0, 1), got {level}")
    lo, hi = nearest_rank_quantile(x, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    return lo, hi


@dataclass
class PosteriorSummary:
    """Loss-based estimates of N with a percentile credible interval."""

    mean: float
    median: float
    map: int
    sre: float
    ci: tuple
    level: float
    n_draws: int
    sd: float
    histogram: dict = field(default_factory=dict, repr=False)

    def as_dict(self, with_histogram: bool = False) -> dict:
        d = {
            "mean": self.mean, "median": self.median, "map": self.map, "sre": self.sre,
            "ci": list(self.ci), "level": self.level, "n_draws": self.n_draws, "sd": self.sd,
        }
        if with_histogram:
            d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return d


@dataclass
class ContinuousSummary:
    """Mean, median, sd and percentile interval of a real-valued parameter (e.g. phi)."""

    mean: float
    median: float
    sd: float
    ci: tuple
    level: float
    n_draws: int

    def as_dict(self) -> dict:
        return {"mean": self.mean, "median": self.median, "sd": self.sd,
                "ci": list(self.ci), "level": self.level, "n_draws": self.n_draws}


def summarize(draws, level: float = 0.95) -> PosteriorSummary:
    """Summarize integer draws of N."""
    x = np.asarray(draws)
    if x.size == 0:
        raise ConfigurationError("cannot summarize an empty trace")
    if x.size < 2:
        raise ConfigurationError("need at least 2 draws to summarize")
    if np.any(x <= 0):
        raise DomainError("N draws must be positive")
    x = x.astype(np.int64)
    values, counts = np.unique(x, return_counts=True)
    # np.unique sorts, and argmax returns the first maximum -> smallest tied value
    mode = int(values[np.argmax(counts)])
    xf = x.astype(float)
    inv = 1.0 / xf
    sre = float(inv.sum() / (inv * inv).sum())
    lo, hi = _ci(x, level)
    return PosteriorSummary(
        mean=float(xf.mean()),
        median=float(nearest_rank_quantile(x, 0.5)),
        map=mode,
        sre=sre,
        ci=(float(lo), float(hi)),
        level=float(level),
        n_draws=int(x.size),
        sd=float(xf.std(ddof=1)),
        histogram={int(v): int(c) for v, c in zip(values, counts)},
    )


def summarize_continuous(draws, level: float = 0.95) -> ContinuousSummary:
    x = np.asarray(draws, dtype=float)
    if x.size < 2:
        raise ConfigurationError("need at least 2 draws to summarize")
    lo, hi = _ci(x, level)
    return ContinuousSummary(
        mean=float(x.mean()), median=float(nearest_rank_quantile(x, 0.5)),
        sd=float(x.std(ddof=1)), ci=(float(lo), float(hi)), level=float(level),
        n_draws=int(x.size),
    )


def pooled_draws(traces, parameter: str = "N") -> np.ndarray:
    """Concatenate post-burn-in draws of ``parameter`` across chains."""
    if not traces:
        raise ConfigurationError("no traces to pool")
    ks = {t.burn_in for t in traces}
    if len(ks) != 1:
        raise ConfigurationError(f"traces have mismatched burn-in lengths {sorted(ks)}")
    return np.concatenate([t.tail(parameter) for t in traces])


def pooled_summary(traces, level: float = 0.95) -> PosteriorSummary:
    """Summary of N over post-burn-in draws pooled across chains."""
    return summarize(pooled_draws(traces, "N"), level)
