"""Multiple-sequence convergence diagnostic (potential scale reduction).

For ``m`` chains with ``n`` retained draws each, let ``W`` be the mean of the
within-chain variances and ``B/n`` the variance of the chain means.  Then::

    V = (n - 1)/n * W + B/n + B/(m n)
    R^(1/2) = sqrt(V / W)

Values near 1 indicate the chains have mixed; 1.1 is the customary cut-off.
Note that element-wise identical chains give exactly ``sqrt((n-1)/n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateDiagnosticError

__all__ = ["PsrfReport", "psrf", "psrf_from_arrays", "burnin_scan"]


@dataclass
class PsrfReport:
    """PSRF evaluated on a grid of burn-in lengths."""

    parameter: str
    curve: list = field(default_factory=list)
    threshold: float = 1.1

    @property
    def recommended_k(self):
        """Smallest grid ``k`` whose statistic is below the threshold, or ``None``."""
        for k, r in self.curve:
            if r < self.threshold:
                return k
        return None

    @property
    def r_hat_sqrt(self):
        """Statistic at the recommended ``k`` (or the last grid point)."""
        k = self.recommended_k
        for kk, r in self.curve:
            if kk == k:
                return r
        return self.curve[-1][1] if self.curve else float("nan")


def psrf_from_arrays(chains) -> float:
    """PSRF of an ``(m, n)`` array of retained draws."""
    x = np.asarray(chains, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise ConfigurationError(
            f"PSRF needs >= 2 chains with >= 2 draws each, got shape {x.shape}"
        )
    m, n = x.shape
    w = x.var(axis=1, ddof=1).mean()
    if not w > 0:
        raise DegenerateDiagnosticError("within-chain variance is zero; PSRF undefined")
    b_over_n = x.mean(axis=1).var(ddof=1)
    v = (n - 1) / n * w + b_over_n + b_over_n / m
    return float(np.sqrt(v / w))


def psrf(traces, parameter: str = "N", burn_in: int | None = None) -> float:
    """PSRF of ``parameter`` over the draws after ``burn_in``.

    With ``burn_in=k`` the window is iterations ``[k, 2k)``, i.e. the second
    half of a ``2k`` run; ``None`` uses each trace's own burn-in.
    """
    if len(traces) < 2:
        raise ConfigurationError(f"PSRF needs at least 2 chains, got {len(traces)}")
    k = traces[0].burn_in if burn_in is None else int(burn_in)
    shortest = min(len(t) for t in traces)
    if 2 * k > shortest:
        raise ConfigurationError(f"burn-in {k} needs chains of length >= {2 * k}, shortest is {shortest}")
    return psrf_from_arrays([t.column(parameter)[k:2 * k] for t in traces])


def burnin_scan(traces, parameter: str = "N", k_grid=(), threshold: float = 1.1) -> PsrfReport:
    """Evaluate :func:`psrf` at each burn-in on ``k_grid`` (window ``[k, 2k)``)."""
    grid = sorted(int(k) for k in k_grid)
    if not grid:
        raise ConfigurationError("burn-in grid is empty")
    if grid[0] < 1:
        raise ConfigurationError(f"burn-in values must be >= 1, got {grid[0]}")
    shortest = min(len(t) for t in traces) if traces else 0
    if 2 * grid[-1] > shortest:
        raise ConfigurationError(
            f"largest grid k={grid[-1]} needs chains of length >= {2 * grid[-1]}, shortest is {shortest}"
        )
    report = PsrfReport(parameter=parameter, threshold=float(threshold))
    for k in grid:
        report.curve.append((k, psrf(traces, parameter, k)))
    return report
