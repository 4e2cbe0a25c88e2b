"""Simulation studies: synthetic DRS tables from known populations, repeated
estimation, and Monte-Carlo summaries (average estimate, SE, RMSE, CI).

Replication ``r`` (1-based) draws its table from the stream ``(seed, r)`` and
runs its chains on ``(seed, r, 1, chain)``.  Every replication is therefore a
pure function of ``(design, r)`` and may run in any order or process.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import CLOSED_FORM, DrsData, PopulationSpec, cell_probabilities
from .diagnostics import psrf
from .distributions import RngStream, sample_multinomial
from .errors import ConfigurationError, DualRecordError, StudyError
from .posterior import nearest_rank_quantile, pooled_draws, summarize
from .samplers import ChainConfig, NPriorPolicy, PhiPriorPolicy, run_ab_con, run_ab_flat

__all__ = [
    "POPULATIONS",
    "builtin_population",
    "generate_dataset",
    "StudyDesign",
    "ReplicationResult",
    "StudyRow",
    "run_replication",
    "run_replications",
    "aggregate",
    "run_study",
]

log = logging.getLogger(__name__)

#: name -> (p1., p.1, phi); every population has N = 500.
POPULATIONS = {
    "P1": (0.50, 0.65, 1.25),
    "P2": (0.60, 0.70, 1.25),
    "P3": (0.80, 0.70, 1.25),
    "P4": (0.70, 0.55, 1.25),
    "P5": (0.50, 0.65, 0.80),
    "P6": (0.60, 0.70, 0.80),
    "P7": (0.80, 0.70, 0.80),
    "P8": (0.70, 0.55, 0.80),
}

METHODS = ("mt", "mb", "nour", "ab-flat", "ab-con")
ESTIMATES = ("mean", "median", "map", "sre")
CI_POOLING = ("endpoint-average", "pooled-posterior")


def builtin_population(name: str) -> PopulationSpec:
    """One of the eight reference populations ``P1`` .. ``P8``."""
    key = name.upper()
    if key not in POPULATIONS:
        raise ConfigurationError(f"unknown population {name!r}; choose from {', '.join(POPULATIONS)}")
    p1, pdot1, phi = POPULATIONS[key]
    return PopulationSpec(500, p1, pdot1, phi)


def generate_dataset(spec: PopulationSpec, rng: RngStream) -> DrsData:
    """Multinomial draw of the four cells; the unobserved ``x00`` is discarded."""
    cells = cell_probabilities(spec)
    x11, x10, x01, _ = sample_multinomial(spec.n_true, cells, rng)
    return DrsData(x11, x10, x01)


@dataclass(frozen=True)
class StudyDesign:
    """Everything that determines a simulation study, including the master seed."""

    spec: PopulationSpec
    replications: int = 50
    method: str = "ab-flat"
    phi_policy: PhiPriorPolicy = PhiPriorPolicy()
    n_policy: NPriorPolicy = NPriorPolicy()
    chain: ChainConfig = ChainConfig()
    seed: int = 0
    estimate: str = "mean"
    level: float = 0.95
    ci_pooling: str = "endpoint-average"

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigurationError(f"replications must be >= 1, got {self.replications}")
        if self.method not in METHODS:
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.estimate not in ESTIMATES:
            raise ConfigurationError(f"unknown point estimate {self.estimate!r}")
        if self.ci_pooling not in CI_POOLING:
            raise ConfigurationError(f"unknown CI pooling {self.ci_pooling!r}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be non-negative, got {self.seed}")
        cell_probabilities(self.spec)

    @property
    def bayesian(self) -> bool:
        return self.method in ("ab-flat", "ab-con")


@dataclass
class ReplicationResult:
    r: int
    data: DrsData | None
    estimates: dict = field(default_factory=dict)
    ci: tuple | None = None
    psrf: float | None = None
    error: str | None = None
    draws: np.ndarray | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class StudyRow:
    """Monte-Carlo summary of one study (one table row)."""

    average: float
    se: float
    rmse: float
    ci: tuple
    failures: int
    n_ok: int
    se_defined: bool
    averages: dict = field(default_factory=dict)
    estimates: np.ndarray = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "average": self.average, "se": self.se, "rmse": self.rmse,
            "ci_lo": self.ci[0], "ci_hi": self.ci[1], "failures": self.failures,
            "n_ok": self.n_ok, "se_defined": self.se_defined,
            **{f"avg_{k}": v for k, v in self.averages.items()},
        }


def run_replication(design: StudyDesign, r: int, backend: str | None = None) -> ReplicationResult:
    """Generate table ``r`` and estimate N on it; failures are captured, not raised."""
    data = None
    try:
        data = generate_dataset(design.spec, RngStream(design.seed, (r,)))
        if not design.bayesian:
            value = CLOSED_FORM[design.method](data)
            return ReplicationResult(r, data, {e: value for e in ESTIMATES})
        cfg = replace(design.chain, seed=design.seed, stream_id=(r, 1))
        if design.method == "ab-flat":
            traces = run_ab_flat(data, design.phi_policy, design.n_policy, cfg, backend=backend)
        else:
            traces = run_ab_con(data, design.n_policy, cfg, backend=backend)
        draws = pooled_draws(traces, "N")
        s = summarize(draws, design.level)
        diag = psrf(traces, "N") if len(traces) > 1 else None
        return ReplicationResult(
            r, data, {"mean": s.mean, "median": s.median, "map": float(s.map), "sre": s.sre},
            ci=s.ci, psrf=diag,
            draws=draws if design.ci_pooling == "pooled-posterior" else None,
        )
    except DualRecordError as exc:
        log.info("replication %d failed: %s", r, exc)
        return ReplicationResult(r, data, error=f"{type(exc).__name__}: {exc}")


def _run_one(args):
    design, r, backend = args
    return run_replication(design, r, backend)


def run_replications(design: StudyDesign, workers: int | None = None,
                     backend: str | None = None) -> list:
    """Run all replications, optionally on a process pool; output is sorted by ``r``."""
    jobs = [(design, r, backend) for r in range(1, design.replications + 1)]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=1))
    else:
        results = [_run_one(j) for j in jobs]
    return sorted(results, key=lambda res: res.r)


def aggregate(design: StudyDesign, results) -> StudyRow:
    """Average estimate, sample SE (ddof=1), RMSE against ``n_true`` and averaged CI."""
    ok = sorted((res for res in results if res.ok), key=lambda res: res.r)
    failures = len(results) - len(ok)
    if not ok:
        raise StudyError(f"all {len(results)} replications failed")
    est = np.array([res.estimates[design.estimate] for res in ok])
    n_ok = len(est)
    average = float(est.mean())
    se_defined = n_ok > 1
    se = float(est.std(ddof=1)) if se_defined else 0.0
    rmse = math.sqrt(float(np.mean((est - design.spec.n_true) ** 2)))
    if not design.bayesian:
        lo, hi = nearest_rank_quantile(est, [(1 - design.level) / 2, (1 + design.level) / 2])
        ci = (float(lo), float(hi))
    elif design.ci_pooling == "endpoint-average":
        ci = (float(np.mean([res.ci[0] for res in ok])), float(np.mean([res.ci[1] for res in ok])))
    else:
        pooled = np.concatenate([res.draws for res in ok])
        lo, hi = nearest_rank_quantile(pooled, [(1 - design.level) / 2, (1 + design.level) / 2])
        ci = (float(lo), float(hi))
    averages = {e: float(np.mean([res.estimates[e] for res in ok])) for e in ESTIMATES}
    return StudyRow(average, se, rmse, ci, failures, n_ok, se_defined, averages, est)


def run_study(design: StudyDesign, workers: int | None = None,
              backend: str | None = None) -> StudyRow:
    return aggregate(design, run_replications(design, workers, backend))
