"""Seeded random streams and the variate generators used by the samplers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CellProbabilities
from .errors import DomainError, NumericalUnderflowError
from .kernels import active as _k

__all__ = [
    "RngStream",
    "TruncatedScaledBeta",
    "sample_beta",
    "sample_truncated_scaled_beta",
    "sample_poisson",
    "sample_negative_binomial",
    "sample_multinomial",
]


def _normalize_ids(stream_id):
    if isinstance(stream_id, (int, np.integer)):
        stream_id = (stream_id,)
    ids = tuple(int(s) for s in stream_id)
    if any(s < 0 for s in ids):
        raise DomainError(f"stream ids must be non-negative, got {ids}")
    return ids


class RngStream:
    """A deterministic random stream identified by ``(seed, stream_id)``.

    The stream id may be a tuple, e.g. ``(replication, chain)``.  Equal pairs
    give identical variate sequences; the underlying generator is PCG64
    (period 2**128) keyed through :class:`numpy.random.SeedSequence`.
    """

    def __init__(self, seed: int, stream_id=()):
        if seed < 0:
            raise DomainError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self.stream_id = _normalize_ids(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream_id)
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def child(self, *ids) -> "RngStream":
        """Independent stream keyed by this stream's id extended with ``ids``."""
        return RngStream(self.seed, self.stream_id + _normalize_ids(ids))

    def random(self) -> float:
        return float(self.generator.random())

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class TruncatedScaledBeta:
    """Generalized Beta type I with scale ``1/rate``, truncated to ``[lo, hi]``.

    Density proportional to ``phi**(a-1) * (1 - rate*phi)**(b-1)`` on
    ``[lo, hi]``; the substitution ``y = rate*phi`` turns it into a truncated
    Beta(a, b).
    """

    a: float
    b: float
    rate: float
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"shapes must be positive, got a={self.a}, b={self.b}")
        if not self.rate > 0:
            raise DomainError(f"rate must be positive, got {self.rate}")
        if not (0.0 <= self.lo < self.hi):
            raise DomainError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi}]")
        if self.rate * self.hi > 1.0 + 1e-12:
            raise DomainError(
                f"hi = {self.hi} exceeds the support bound 1/rate = {1.0 / self.rate}"
            )

    @property
    def full_support_mean(self) -> float:
        return self.a / (self.a + self.b) / self.rate


def sample_beta(a: float, b: float, rng: RngStream) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta shapes must be positive, got a={a}, b={b}")
    return float(rng.generator.beta(a, b))


def sample_truncated_scaled_beta(d: TruncatedScaledBeta, rng: RngStream) -> float:
    """One exact inverse-CDF draw from ``d``."""
    a = float(d.a)
    b = float(d.b)
    phi, status = _k.truncated_scaled_beta_draw(
        rng.generator, a, b, _k.log_beta(a, b), float(d.rate), float(d.lo), float(d.hi)
    )
    if status != 0:
        raise NumericalUnderflowError(
            f"GB-I({a}, {b}, rate={d.rate}) has negligible mass on [{d.lo}, {d.hi}]"
        )
    return phi


def sample_poisson(mean: float, rng: RngStream) -> int:
    if not mean >= 0:
        raise DomainError(f"Poisson mean must be non-negative, got {mean}")
    return int(rng.generator.poisson(mean))


def sample_negative_binomial(successes: int, success_prob: float, rng: RngStream) -> int:
    """Number of failures before the ``successes``-th success."""
    if successes < 1:
        raise DomainError(f"successes must be >= 1, got {successes}")
    if success_prob == 0.0:
        raise DomainError("success probability 0 gives a divergent negative binomial")
    if not 0.0 < success_prob <= 1.0:
        raise DomainError(f"success probability must lie in (0, 1], got {success_prob}")
    return int(rng.generator.negative_binomial(successes, success_prob))


def sample_multinomial(n: int, probs: CellProbabilities, rng: RngStream):
    """Counts ``(n11, n10, n01, n00)`` summing to ``n``."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    counts = rng.generator.multinomial(n, np.array(probs.as_tuple()))
    return tuple(int(v) for v in counts)
