"""AB-Flat and AB-Con Gibbs samplers for N under model M_tb.

Both samplers side-step the non-identifiability of ``(phi, p)`` by tying
``p`` to ``phi`` through the identifiable recapture probability,
``p = c_hat / phi``:

* **AB-Flat** puts a flat prior on ``phi`` over a range chosen from
  directional knowledge (``phi > 1``, ``phi < 1`` or none).
* **AB-Con** puts a conjugate generalized-beta prior on ``phi`` whose shapes
  are ``a = t*x11/x0`` and ``b = t*x10/x0`` and whose upper bound follows the
  current N through ``beta = (N - x1.)/x01``.

The prior on N is either Jeffreys (``1/N``, giving a negative-binomial
conditional for ``N - x0``) or Poisson with an empirical mean.

Each chain owns an :class:`~dualrecord.distributions.RngStream` keyed by
``(seed, *stream_id, chain)``; chains never share state, so results do not
depend on execution order.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .core import DrsData, c_hat, estimate_mb, estimate_nour
from .distributions import RngStream
from .errors import ChainFailure, ConfigurationError, DegenerateDataError, EstimatorUndefined

__all__ = [
    "PhiPriorPolicy",
    "NPriorPolicy",
    "ChainConfig",
    "ChainTrace",
    "resolve_phi_prior",
    "resolve_lambda",
    "ab_con_hyperparameters",
    "run_ab_flat",
    "run_ab_con",
]

log = logging.getLogger(__name__)

_KNOWLEDGE = {
    "gt1": "gt1", "greater-than-one": "gt1",
    "lt1": "lt1", "less-than-one": "lt1",
    "none": "none",
}
_P_RULES = {"c-over-phi": kernels.C_OVER_PHI, "lloyd": kernels.LLOYD}
_STATUS = {1: "truncated phi conditional has negligible mass",
           2: "persistent infeasible draws (more than 100 re-draws)"}


@dataclass(frozen=True)
class PhiPriorPolicy:
    """Flat prior range for phi.

    ``knowledge`` is ``"gt1"`` (phi > 1), ``"lt1"`` (phi < 1) or ``"none"``;
    ``override`` replaces the resolved range entirely.
    """

    knowledge: str = "gt1"
    upper: float = 2.0
    override: tuple | None = None

    def __post_init__(self):
        if self.knowledge not in _KNOWLEDGE:
            raise ConfigurationError(f"unknown phi knowledge {self.knowledge!r}")
        object.__setattr__(self, "knowledge", _KNOWLEDGE[self.knowledge])
        if self.override is not None:
            object.__setattr__(self, "override", tuple(float(v) for v in self.override))


@dataclass(frozen=True)
class NPriorPolicy:
    """Prior on N: ``kind`` is ``"jeffreys"`` or ``"poisson"``.

    For Poisson, ``lam`` is ``"mb"``, ``"nour"`` or a positive number.
    """

    kind: str = "jeffreys"
    lam: str | float = "mb"

    def __post_init__(self):
        if self.kind not in ("jeffreys", "poisson"):
            raise ConfigurationError(f"unknown N prior {self.kind!r}")
        if isinstance(self.lam, str):
            if self.lam not in ("mb", "nour"):
                raise ConfigurationError(f"unknown lambda source {self.lam!r}")
        elif not float(self.lam) > 0:
            raise ConfigurationError(f"fixed lambda must be positive, got {self.lam}")

    @property
    def kernel_code(self) -> int:
        return kernels.JEFFREYS if self.kind == "jeffreys" else kernels.POISSON


@dataclass(frozen=True)
class ChainConfig:
    """Chain layout: ``2*k`` sweeps per chain, the first ``k`` discarded as burn-in."""

    k: int = 2000
    n_chains: int = 5
    seed: int = 0
    p_update: str = "c-over-phi"
    t: float = 20.0
    stream_id: tuple = ()

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"burn-in k must be >= 1, got {self.k}")
        if self.n_chains < 1:
            raise ConfigurationError(f"need at least one chain, got {self.n_chains}")
        if self.p_update not in _P_RULES:
            raise ConfigurationError(f"unknown p update rule {self.p_update!r}")
        if not self.t > 0:
            raise ConfigurationError(f"t must be positive, got {self.t}")
        object.__setattr__(self, "stream_id", tuple(int(s) for s in self.stream_id))

    @property
    def total(self) -> int:
        return 2 * self.k


@dataclass
class ChainTrace:
    """Per-sweep record of one chain."""

    n: np.ndarray
    phi: np.ndarray
    p: np.ndarray
    p1dot: np.ndarray
    burn_in: int
    chain: int = 0
    redraws: int = 0
    config: dict = field(default_factory=dict)

    COLUMNS = ("N", "phi", "p", "p1dot")

    def __len__(self):
        return len(self.n)

    def column(self, name: str) -> np.ndarray:
        try:
            return {"N": self.n, "phi": self.phi, "p": self.p, "p1dot": self.p1dot}[name]
        except KeyError:
            raise ConfigurationError(f"unknown trace column {name!r}") from None

    def tail(self, name: str = "N") -> np.ndarray:
        """Post-burn-in draws of one column."""
        return self.column(name)[self.burn_in:]


def resolve_phi_prior(policy: PhiPriorPolicy, data: DrsData) -> tuple:
    """Return the flat-prior range ``(alpha, beta)`` for phi."""
    if policy.override is not None:
        lo, hi = policy.override
    elif policy.knowledge == "gt1":
        lo, hi = 1.0, float(policy.upper)
    elif policy.knowledge == "lt1":
        lo, hi = c_hat(data), 1.0
    else:
        lo, hi = c_hat(data), float(policy.upper)
    if not lo < hi:
        raise ConfigurationError(f"phi prior range ({lo}, {hi}) is empty")
    if lo <= 0:
        raise ConfigurationError(f"phi prior range must be positive, got ({lo}, {hi})")
    return lo, hi


def resolve_lambda(policy: NPriorPolicy, data: DrsData) -> float:
    """Poisson prior mean for N (0 is returned for the Jeffreys prior)."""
    if policy.kind == "jeffreys":
        return 0.0
    if not isinstance(policy.lam, str):
        return float(policy.lam)
    estimator = estimate_mb if policy.lam == "mb" else estimate_nour
    try:
        return estimator(data)
    except EstimatorUndefined as exc:
        raise ConfigurationError(
            f"Poisson prior mean from {exc.estimator}: {exc.reason}"
        ) from exc


def ab_con_hyperparameters(data: DrsData, t: float) -> tuple:
    """Conjugate prior shapes ``(t*x11/x0, t*x10/x0)``; note ``a/(a+b) = c_hat``."""
    return t * data.x11 / data.x0, t * data.x10 / data.x0


def _check_chat(data):
    if data.x1dot == 0 or data.x11 == 0:
        raise DegenerateDataError(
            "x11 = 0: no recaptures, so c-hat = 0 and p = c-hat/phi is degenerate"
        )


def _finish(status, out, chain, k, redraws, echo):
    if status != 0:
        raise ChainFailure(f"chain {chain} failed after {len(out[0])} sweeps: {_STATUS[status]}")
    if redraws:
        log.info("chain %d: %d infeasible draws re-drawn", chain, redraws)
    n, phi, p, p1 = out
    return ChainTrace(n=n, phi=phi, p=p, p1dot=p1, burn_in=k, chain=chain,
                      redraws=int(redraws), config=dict(echo))


def run_ab_flat(data: DrsData, phi_policy: PhiPriorPolicy, n_policy: NPriorPolicy,
                cfg: ChainConfig, backend: str | None = None) -> list:
    """Run ``cfg.n_chains`` AB-Flat chains of ``2k`` sweeps each."""
    _check_chat(data)
    if n_policy.kind == "poisson" and n_policy.lam == "nour" and phi_policy.knowledge != "gt1":
        raise ConfigurationError("lambda = N_Nour is only offered with phi knowledge gt1")
    if cfg.p_update == "lloyd" and data.x01 == 0:
        raise DegenerateDataError("x01 = 0: the Lloyd update p = x01/(N - x1.) is degenerate")
    k_mod = kernels.get_backend(backend)
    alpha, beta = resolve_phi_prior(phi_policy, data)
    lam = resolve_lambda(n_policy, data)
    echo = {
        "method": "ab-flat", "phi_range": [alpha, beta], "n_prior": n_policy.kind,
        "lambda": lam, "p_update": cfg.p_update, "k": cfg.k, "seed": cfg.seed,
        "stream_id": list(cfg.stream_id),
    }
    x0, x1 = data.x0, data.x1dot
    traces = []
    for j in range(cfg.n_chains):
        rng = RngStream(cfg.seed, cfg.stream_id + (j,))
        gen = rng.generator
        n0 = int(round(x0 * (1.0 + 4.0 * (j + 1) / cfg.n_chains)))
        phi0 = alpha + (beta - alpha) * gen.random()
        p1_0 = float(gen.beta(x1 + 1.0, n0 - x1 + 1.0))
        status, *out, redraws = k_mod.ab_flat_chain(
            gen, data.x11, data.x10, data.x01, alpha, beta, n_policy.kernel_code, lam,
            _P_RULES[cfg.p_update], n0, phi0, p1_0, cfg.total,
        )
        traces.append(_finish(status, out, j, cfg.k, redraws, echo))
    return traces


def run_ab_con(data: DrsData, n_policy: NPriorPolicy, cfg: ChainConfig,
               backend: str | None = None, prior_only: bool = False) -> list:
    """Run ``cfg.n_chains`` AB-Con chains of ``2k`` sweeps each.

    ``prior_only`` drops the data counts from the phi shapes, leaving the
    conjugate prior alone in the phi update (used to check the prior mean).
    """
    _check_chat(data)
    if data.x01 == 0:
        raise DegenerateDataError("x01 = 0: the phi upper bound (N - x1.)/x01 is undefined")
    if data.x10 == 0:
        raise DegenerateDataError("x10 = 0: c-hat = 1 leaves no room for phi")
    if n_policy.kind == "poisson" and n_policy.lam == "nour":
        raise ConfigurationError("lambda = N_Nour is only offered with phi knowledge gt1")
    k_mod = kernels.get_backend(backend)
    lam = resolve_lambda(n_policy, data)
    a, b = ab_con_hyperparameters(data, cfg.t)
    if prior_only:
        sa, sb = a, b
    else:
        sa, sb = data.x11 + a, data.x10 + b
    chat = c_hat(data)
    x0 = data.x0
    lb_prior = k_mod.log_beta(a, b)
    echo = {
        "method": "ab-con", "t": cfg.t, "a": a, "b": b, "n_prior": n_policy.kind,
        "lambda": lam, "k": cfg.k, "seed": cfg.seed, "stream_id": list(cfg.stream_id),
        "prior_only": prior_only,
    }
    traces = []
    for j in range(cfg.n_chains):
        rng = RngStream(cfg.seed, cfg.stream_id + (j,))
        gen = rng.generator
        p1_0 = gen.random()
        p0 = chat + (1.0 - chat) * gen.random()
        beta0 = 1.0 / p0
        phi0, status = k_mod.truncated_scaled_beta_draw(gen, a, b, lb_prior, p0, chat, beta0)
        if status != 0:
            raise ChainFailure(f"chain {j}: cannot draw the initial phi from the prior")
        q0 = (1.0 - p1_0) * (1.0 - p0)
        if n_policy.kind == "jeffreys":
            n0 = x0 + int(gen.negative_binomial(x0, 1.0 - q0))
        else:
            n0 = x0 + int(gen.poisson(lam * q0))
        status, *out, redraws = k_mod.ab_con_chain(
            gen, data.x11, data.x10, data.x01, sa, sb, n_policy.kernel_code, lam,
            n0, beta0, cfg.total,
        )
        trace = _finish(status, out, j, cfg.k, redraws, echo)
        trace.config["phi0"] = phi0
        traces.append(trace)
    return traces


def config_snapshot(**parts) -> dict:
    """JSON-ready dict of policy/config dataclasses."""
    return {name: asdict(obj) for name, obj in parts.items()}
