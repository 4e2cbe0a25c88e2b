"""Dual-record data, the M_tb likelihood and the closed-form estimators.

A dual-record system cross-classifies a closed population by presence on
two lists::

                 List 2 in   List 2 out
    List 1 in       x11         x10       | x1.
    List 1 out      x01        (x00)      |
                 ----------
                    x.1

The both-missed cell ``x00`` is never observed, which is why it has no field
on :class:`DrsData`.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

from .errors import DegenerateDataError, DomainError, EstimatorUndefined

__all__ = [
    "DrsData",
    "MtbParams",
    "PopulationSpec",
    "CellProbabilities",
    "c_hat",
    "estimate_mt",
    "estimate_mb",
    "estimate_nour",
    "closed_form_estimates",
    "log_likelihood_mtb",
    "log_likelihood_mt",
    "cell_probabilities",
    "CLOSED_FORM",
]


def _as_count(name, value):
    if isinstance(value, bool):
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    if not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value}")
    return value


@dataclass(frozen=True)
class DrsData:
    """Observed 2x2 dual-record table."""

    x11: int
    x10: int
    x01: int

    def __post_init__(self):
        for name in ("x11", "x10", "x01"):
            object.__setattr__(self, name, _as_count(name, getattr(self, name)))
        if self.x0 < 1:
            raise DegenerateDataError("table is empty: no individual was captured")

    @property
    def x0(self) -> int:
        """Number of distinct individuals captured."""
        return self.x11 + self.x10 + self.x01

    @property
    def x1dot(self) -> int:
        return self.x11 + self.x10

    @property
    def xdot1(self) -> int:
        return self.x11 + self.x01

    def as_dict(self):
        return {"x11": self.x11, "x10": self.x10, "x01": self.x01}


@dataclass(frozen=True)
class MtbParams:
    """One state of the M_tb model. ``c = phi * p`` is the recapture probability."""

    n: int
    p1dot: float
    p: float
    phi: float

    def __post_init__(self):
        if not 0.0 < self.p1dot < 1.0:
            raise DomainError(f"p1dot must lie in (0, 1), got {self.p1dot}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if not self.phi > 0.0:
            raise DomainError(f"phi must be positive, got {self.phi}")
        if self.c >= 1.0:
            raise DomainError(f"recapture probability phi*p = {self.c} must be < 1")

    @property
    def c(self) -> float:
        return self.phi * self.p


@dataclass(frozen=True)
class CellProbabilities:
    p11: float
    p10: float
    p01: float
    p00: float

    def __post_init__(self):
        cells = self.as_tuple()
        if any(not 0.0 <= v <= 1.0 for v in cells):
            raise DomainError(f"cell probabilities must lie in [0, 1]: {cells}")
        if abs(math.fsum(cells) - 1.0) > 1e-12:
            raise DomainError(f"cell probabilities must sum to 1: {cells}")

    def as_tuple(self):
        return (self.p11, self.p10, self.p01, self.p00)


@dataclass(frozen=True)
class PopulationSpec:
    """A generating population: size, both marginal capture probabilities, and phi.

    ``pdot1`` is the unconditional List-2 capture probability; the conditional
    probability ``p`` (captured by List 2 given missed by List 1) follows from
    ``pdot1 = p1dot*phi*p + (1 - p1dot)*p``.
    """

    n_true: int
    p1dot: float
    pdot1: float
    phi: float

    @property
    def conditional_p(self) -> float:
        return self.pdot1 / (1.0 - self.p1dot + self.phi * self.p1dot)

    @property
    def expected_x0(self) -> float:
        return self.n_true * (1.0 - cell_probabilities(self).p00)


def c_hat(data: DrsData) -> float:
    """Maximum-likelihood recapture probability ``x11 / x1.``."""
    if data.x1dot == 0:
        raise DegenerateDataError("x1. = 0: nobody was captured on List 1, c-hat is undefined")
    return data.x11 / data.x1dot


def estimate_mt(data: DrsData) -> float:
    """Independence (Lincoln-Petersen / M_t) estimate ``x.1 * x1. / x11``."""
    if data.x11 == 0:
        raise EstimatorUndefined("mt", "x11 = 0 (no individual appears on both lists)")
    return data.xdot1 * data.x1dot / data.x11


def estimate_mb(data: DrsData) -> float:
    """Behavioural-response-only (M_b) estimate ``x0 / (1 - (x01/x1.)^2)``."""
    if data.x1dot == 0 or data.x01 >= data.x1dot:
        raise EstimatorUndefined(
            "mb", f"x01 = {data.x01} >= x1. = {data.x1dot} makes the denominator non-positive"
        )
    ratio = data.x01 / data.x1dot
    return data.x0 / (1.0 - ratio * ratio)


def estimate_nour(data: DrsData) -> float:
    """Nour's recapture-prone estimate ``x0 + 2 x11 x10 x01 / (x11^2 + x10 x01)``."""
    denom = data.x11 * data.x11 + data.x10 * data.x01
    if denom == 0:
        raise EstimatorUndefined("nour", "x11 = 0 and x10*x01 = 0")
    return data.x0 + 2.0 * data.x11 * data.x10 * data.x01 / denom


CLOSED_FORM = {"mt": estimate_mt, "mb": estimate_mb, "nour": estimate_nour}


def closed_form_estimates(data: DrsData) -> dict:
    """All closed-form estimates; undefined ones map to the raised exception."""
    out = {}
    for name, fn in CLOSED_FORM.items():
        try:
            out[name] = fn(data)
        except EstimatorUndefined as exc:
            out[name] = exc
    return out


def _xlogy(x, y):
    return 0.0 if x == 0 else x * math.log(y)


def _xlog1my(x, y):
    return 0.0 if x == 0 else x * math.log1p(-y)


def log_likelihood_mtb(params: MtbParams, data: DrsData) -> float:
    """Log of the M_tb likelihood, up to an additive constant free of parameters."""
    n = params.n
    if n < data.x0:
        raise DomainError(f"N = {n} is below the number of distinct captures x0 = {data.x0}")
    if params.c >= 1.0:
        raise DomainError("phi*p must be < 1")
    return (
        math.lgamma(n + 1)
        - math.lgamma(n - data.x0 + 1)
        + _xlogy(data.x11, params.phi)
        + _xlogy(data.x1dot, params.p1dot)
        + _xlogy(data.xdot1, params.p)
        + _xlog1my(n - data.x1dot, params.p1dot)
        + _xlog1my(n - data.x0, params.p)
        + _xlog1my(data.x10, params.c)
    )


def log_likelihood_mt(n: int, p1dot: float, pdot1: float, data: DrsData) -> float:
    """Log M_t likelihood kernel including its data-only multinomial constant."""
    if n < data.x0:
        raise DomainError(f"N = {n} is below x0 = {data.x0}")
    return (
        math.lgamma(n + 1)
        - math.lgamma(data.x11 + 1)
        - math.lgamma(data.x10 + 1)
        - math.lgamma(data.x01 + 1)
        - math.lgamma(n - data.x0 + 1)
        + _xlogy(data.x1dot, p1dot)
        + _xlogy(data.xdot1, pdot1)
        + _xlog1my(n - data.x1dot, p1dot)
        + _xlog1my(n - data.xdot1, pdot1)
    )


def cell_probabilities(spec: PopulationSpec) -> CellProbabilities:
    """Multinomial cell probabilities implied by a generating population."""
    p1, phi = spec.p1dot, spec.phi
    p = spec.conditional_p
    if not 0.0 < p < 1.0 or phi * p >= 1.0:
        raise DomainError(
            f"infeasible population (p1.={p1}, p.1={spec.pdot1}, phi={phi}): "
            f"induced p = {p:.6g}, phi*p = {phi * p:.6g}"
        )
    c = phi * p
    p11 = p1 * c
    p10 = p1 * (1.0 - c)
    p01 = (1.0 - p1) * p
    p00 = (1.0 - p1) * (1.0 - p)
    return CellProbabilities(p11, p10, p01, p00)
