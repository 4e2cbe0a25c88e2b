"""Command-line front end.

Subcommands::

    dualrecord estimate DATA [options]      estimate N for one observed table
    dualrecord simulate P1 [options]        Monte-Carlo study on a reference population
    dualrecord diagnose [DATA] [options]    PSRF against burn-in length
    dualrecord rerun MANIFEST [--out DIR]   repeat a run from its manifest

Settings are resolved as: command-line flag > ``--config`` file > default.
The config file holds ``key = value`` lines whose keys are the long flag
names without the leading dashes (e.g. ``phi-knowledge = gt1``).

Exit codes: 0 success, 2 usage, 3 data-file parse error, 4 configuration
error, 5 degenerate data, 6 chain/study failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .core import CLOSED_FORM, DrsData, PopulationSpec, c_hat
from .diagnostics import burnin_scan
from .errors import (ConfigurationError, DataParseError, DualRecordError,
                     EstimatorUndefined)
from .posterior import pooled_draws, pooled_summary, summarize_continuous
from .samplers import (ChainConfig, ChainTrace, NPriorPolicy, PhiPriorPolicy, run_ab_con,
                       run_ab_flat)
from .simstudy import StudyDesign, aggregate, builtin_population, run_replications

__all__ = ["main", "read_data_file", "read_config_file", "read_trace_file", "write_trace_file"]

log = logging.getLogger("dualrecord")

SEED_ENV = "DUALRECORD_SEED"
METHODS = ("mt", "mb", "nour", "closed-form-all", "ab-flat", "ab-con")
DEFAULT_K = {"ab-flat": 2000, "ab-con": 7000}

DEFAULTS = {
    "method": "ab-flat",
    "phi-knowledge": "gt1",
    "phi-upper": 2.0,
    "phi-range": None,
    "n-prior": "jeffreys",
    "lambda": "mb",
    "p-update": "c-over-phi",
    "chains": 5,
    "burnin": None,          # per-method default, see DEFAULT_K
    "t": 20.0,
    "seed": None,            # $DUALRECORD_SEED, else 0
    "reps": 50,
    "level": 0.95,
    "out": None,
    "estimator": "mean",
    "ci-pooling": "endpoint-average",
    "workers": None,
    "k-grid": None,
    "save-traces": False,
    "parameter": "N",
    "threshold": 1.1,
    "backend": None,
}


# --------------------------------------------------------------------------
# value parsing


def _parse_pair(text):
    parts = [s.strip() for s in str(text).split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_lambda(text):
    text = str(text).strip()
    if text in ("mb", "nour"):
        return text
    if text.startswith("fixed:"):
        return float(text[len("fixed:"):])
    raise ValueError(f"expected mb, nour or fixed:<value>, got {text!r}")


def _parse_grid(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(" ", "").split(",") if v]


def _parse_bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _choice(*options):
    def conv(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return conv


CONVERTERS = {
    "method": _choice(*METHODS),
    "phi-knowledge": _choice("gt1", "lt1", "none"),
    "phi-upper": float,
    "phi-range": _parse_pair,
    "n-prior": _choice("jeffreys", "poisson"),
    "lambda": _parse_lambda,
    "p-update": _choice("c-over-phi", "lloyd"),
    "chains": int,
    "burnin": int,
    "t": float,
    "seed": int,
    "reps": int,
    "level": float,
    "out": str,
    "estimator": _choice("mean", "median", "map", "sre"),
    "ci-pooling": _choice("endpoint-average", "pooled-posterior"),
    "workers": int,
    "k-grid": _parse_grid,
    "save-traces": _parse_bool,
    "parameter": _choice("N", "phi", "p", "p1dot"),
    "threshold": float,
    "backend": _choice("compiled", "python"),
}


def _argtype(key):
    conv = CONVERTERS[key]

    def f(text):
        try:
            return conv(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    f.__name__ = key
    return f


# --------------------------------------------------------------------------
# input files

_INT_RE = re.compile(r"^\+?\d+$")
_FIELDS = ("x11", "x10", "x01")


def _count(name, text, lineno, path):
    text = text.strip()
    if not _INT_RE.match(text):
        kind = "negative" if text.startswith("-") else "non-integer"
        raise DataParseError(
            f"{path}:{lineno}: {name} must be a non-negative integer, got {kind} value {text!r}"
        )
    return int(text)


def read_data_file(path) -> DrsData:
    """Read one observed table (x11, x10, x01).

    Two layouts are accepted; ``#`` starts a comment in both::

        x11,x10,x01          x11 = 181
        181,69,144           x10 = 69
                             x01 = 144
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise DataParseError(f"{path}: cannot read data file ({exc.strerror})") from None
    lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(raw, 1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise DataParseError(f"{path}: empty data file")
    values = {}
    if "=" in lines[0][1] or ":" in lines[0][1]:
        for i, ln in lines:
            m = re.match(r"^([A-Za-z0-9_]+)\s*[=:]\s*(.*)$", ln)
            if not m:
                raise DataParseError(f"{path}:{i}: expected 'key = value', got {ln!r}")
            key, val = m.group(1).lower(), m.group(2)
            if key not in _FIELDS:
                raise DataParseError(f"{path}:{i}: unknown field {key!r} (expected x11, x10, x01)")
            if key in values:
                raise DataParseError(f"{path}:{i}: duplicate field {key!r}")
            values[key] = _count(key, val, i, path)
    else:
        hline, header = lines[0]
        names = [h.strip().lower() for h in header.split(",")]
        if sorted(names) != sorted(_FIELDS):
            raise DataParseError(f"{path}:{hline}: header must name x11,x10,x01, got {header!r}")
        if len(lines) < 2:
            raise DataParseError(f"{path}: header present but no data record")
        if len(lines) > 2:
            raise DataParseError(f"{path}:{lines[2][0]}: only a single data record is allowed")
        i, rec = lines[1]
        cells = rec.split(",")
        if len(cells) != 3:
            raise DataParseError(f"{path}:{i}: expected 3 comma-separated counts, got {len(cells)}")
        for name, cell in zip(names, cells):
            values[name] = _count(name, cell, i, path)
    missing = [f for f in _FIELDS if f not in values]
    if missing:
        raise DataParseError(f"{path}: missing field(s) {', '.join(missing)}")
    return DrsData(values["x11"], values["x10"], values["x01"])


def read_config_file(path) -> dict:
    """``key = value`` settings mirroring the long flags."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read config file ({exc.strerror})") from None
    for i, ln in enumerate(raw, 1):
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        m = re.match(r"^([A-Za-z0-9_-]+)\s*=\s*(.*)$", ln)
        if not m:
            raise ConfigurationError(f"{path}:{i}: expected 'key = value', got {ln!r}")
        key = m.group(1).lower().replace("_", "-")
        if key not in CONVERTERS:
            raise ConfigurationError(f"{path}:{i}: unknown setting {key!r}")
        try:
            out[key] = CONVERTERS[key](m.group(2).strip())
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{i}: {key}: {exc}") from None
    return out


TRACE_HEADER = ("iter", "N", "phi", "p", "p1dot")


def write_trace_file(path, trace: ChainTrace):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for h in range(len(trace)):
            w.writerow((h + 1, int(trace.n[h]), repr(float(trace.phi[h])),
                        repr(float(trace.p[h])), repr(float(trace.p1dot[h]))))


def read_trace_file(path, burn_in: int = 0) -> ChainTrace:
    path = str(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataParseError(f"{path}: cannot read trace file ({exc.strerror})") from None
    if not rows or tuple(c.strip() for c in rows[0]) != TRACE_HEADER:
        raise DataParseError(f"{path}:1: trace header must be {','.join(TRACE_HEADER)}")
    cols = [[] for _ in range(4)]
    for i, row in enumerate(rows[1:], 2):
        if len(row) != 5:
            raise DataParseError(f"{path}:{i}: expected 5 columns, got {len(row)}")
        try:
            cols[0].append(int(row[1]))
            for c in range(1, 4):
                cols[c].append(float(row[c + 1]))
        except ValueError:
            raise DataParseError(f"{path}:{i}: malformed trace row {row!r}") from None
    return ChainTrace(np.array(cols[0], dtype=np.int64), np.array(cols[1]),
                      np.array(cols[2]), np.array(cols[3]), burn_in=burn_in)


# --------------------------------------------------------------------------
# settings


def _resolve(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config_file(args.config))
    for key in CONVERTERS:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            cfg[key] = val
    if cfg["seed"] is None:
        env = os.environ.get(SEED_ENV)
        try:
            cfg["seed"] = int(env) if env else 0
        except ValueError:
            raise ConfigurationError(f"${SEED_ENV} must be an integer, got {env!r}") from None
    if cfg["seed"] < 0:
        raise ConfigurationError(f"seed must be non-negative, got {cfg['seed']}")
    if cfg["burnin"] is None:
        cfg["burnin"] = DEFAULT_K.get(cfg["method"], 2000)
    if not 0.0 <= cfg["level"] < 1.0:
        raise ConfigurationError(f"--level must lie in [0, 1), got {cfg['level']}")
    if cfg["phi-range"] is not None:
        cfg["phi-range"] = list(cfg["phi-range"])
    return cfg


def _policies(cfg, n_chains=None, k=None):
    phi = PhiPriorPolicy(cfg["phi-knowledge"], cfg["phi-upper"],
                         tuple(cfg["phi-range"]) if cfg["phi-range"] else None)
    n = NPriorPolicy(cfg["n-prior"], cfg["lambda"])
    if cfg["n-prior"] == "poisson" and cfg["lambda"] == "nour":
        if cfg["method"] == "ab-con" or cfg["phi-knowledge"] != "gt1":
            raise ConfigurationError(
                "--lambda nour requires --method ab-flat with --phi-knowledge gt1"
            )
    chain = ChainConfig(k=cfg["burnin"] if k is None else k,
                        n_chains=cfg["chains"] if n_chains is None else n_chains,
                        seed=cfg["seed"], p_update=cfg["p-update"], t=cfg["t"])
    return phi, n, chain


def _run_chains(data, cfg, k=None):
    phi, n, chain = _policies(cfg, k=k)
    if cfg["method"] == "ab-flat":
        return run_ab_flat(data, phi, n, chain, backend=cfg["backend"])
    return run_ab_con(data, n, chain, backend=cfg["backend"])


def _default_grid(k):
    return sorted({max(1, (k * i) // 10) for i in range(1, 11)})


# --------------------------------------------------------------------------
# output helpers


def _out_dir(cfg):
    if cfg["out"] is None:
        return None
    d = Path(cfg["out"])
    d.mkdir(parents=True, exist_ok=True)
    return d


def _dump_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])


def _fmt(v, nd=2):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.{nd}f}"
    return str(v)


def _print_table(rows, file=None):
    file = file or sys.stdout
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for j, r in enumerate(rows):
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip(), file=file)
        if j == 0:
            print("  ".join("-" * w for w in widths), file=file)


def _write_manifest(out, command, cfg, inputs, started, wall):
    _dump_json(out / "manifest.json", {
        "command": command,
        "config": cfg,
        "inputs": inputs,
        "seeds": {"master": cfg["seed"], "stream_layout": _STREAMS[command]},
        "version": __version__,
        "kernel_backend": kernels.get_backend(cfg["backend"]).NAME,
        "numpy_version": np.__version__,
        "started": started,
        "wall_time_s": wall,
    })


_STREAMS = {
    "estimate": "chain j uses stream (seed, j)",
    "diagnose": "chain j uses stream (seed, j)",
    "simulate": "replication r uses (seed, r) for data and (seed, r, 1, j) for chain j",
}


# --------------------------------------------------------------------------
# commands


def _cmd_estimate(cfg, inputs):
    data = DrsData(**inputs["data"])
    out = _out_dir(cfg)
    method = cfg["method"]
    result = {"command": "estimate", "data": data.as_dict(), "method": method}
    closed = {}
    for name, fn in CLOSED_FORM.items():
        try:
            closed[name] = fn(data)
        except EstimatorUndefined as exc:
            closed[name] = None
            if method == name:
                raise
            closed[name + "_undefined"] = exc.reason
    result["closed_form"] = closed
    rows = [("estimator", "value")]
    if method in CLOSED_FORM or method == "closed-form-all":
        for name in CLOSED_FORM:
            if method in (name, "closed-form-all"):
                rows.append((f"N_{name}", _fmt(closed[name])))
        _print_table(rows)
    else:
        traces = _run_chains(data, cfg)
        summ = pooled_summary(traces, cfg["level"])
        phi = summarize_continuous(pooled_draws(traces, "phi"), cfg["level"])
        result["c_hat"] = c_hat(data)
        result["posterior"] = summ.as_dict(with_histogram=True)
        result["phi"] = phi.as_dict()
        result["chains"] = [{"chain": t.chain, "redraws": t.redraws, "config": t.config}
                            for t in traces]
        report = None
        if len(traces) > 1:
            grid = [k for k in (cfg["k-grid"] or _default_grid(cfg["burnin"])) if k <= cfg["burnin"]]
            report = burnin_scan(traces, cfg["parameter"], grid, cfg["threshold"]) if grid else None
        if report is not None:
            result["psrf"] = {"parameter": report.parameter, "threshold": report.threshold,
                              "curve": [list(kv) for kv in report.curve],
                              "at_burnin": report.curve[-1][1] if report.curve[-1][0] == cfg["burnin"] else None,
                              "recommended_k": report.recommended_k}
        lvl = int(round(cfg["level"] * 100))
        rows += [("N_MEAN", _fmt(summ.mean)), ("N_MED", _fmt(summ.median)),
                 ("N_MAP", str(summ.map)), ("N_SRE", _fmt(summ.sre)),
                 (f"{lvl}% CI of N", f"({_fmt(summ.ci[0], 0)}, {_fmt(summ.ci[1], 0)})"),
                 ("posterior SD", _fmt(summ.sd)),
                 ("phi (mean)", _fmt(phi.mean, 3)),
                 (f"{lvl}% CI of phi", f"({_fmt(phi.ci[0], 3)}, {_fmt(phi.ci[1], 3)})")]
        if report is not None:
            rows.append(("PSRF(N) at k", _fmt(report.curve[-1][1], 4)))
        _print_table(rows)
        if out is not None:
            if report is not None:
                _write_csv(out / "psrf.csv", ("k", "r_hat_sqrt"), report.curve)
            if cfg["save-traces"]:
                for t in traces:
                    write_trace_file(out / f"trace_chain{t.chain + 1}.csv", t)
    if out is not None:
        _dump_json(out / "summary.json", result)
    return result


def _population(inputs):
    if "population" in inputs:
        return builtin_population(inputs["population"])
    n, p1, pdot1, phi = inputs["spec"]
    return PopulationSpec(int(n), float(p1), float(pdot1), float(phi))


def _cmd_simulate(cfg, inputs):
    if cfg["reps"] < 1:
        raise ConfigurationError(f"--reps must be >= 1, got {cfg['reps']}")
    spec = _population(inputs)
    method = cfg["method"]
    if method == "closed-form-all":
        raise ConfigurationError("simulate needs a single --method")
    phi, n, chain = _policies(cfg)
    design = StudyDesign(spec, cfg["reps"], method, phi, n, chain, cfg["seed"],
                         cfg["estimator"], cfg["level"], cfg["ci-pooling"])
    results = run_replications(design, cfg["workers"], cfg["backend"])
    row = aggregate(design, results)
    label = inputs.get("population", "custom")
    rows = [("population", "method", "E(x0)", "Average Estimate", "Sample SE", "Sample RMSE",
             f"{int(round(cfg['level'] * 100))}% CI", "failures"),
            (label, method, str(int(round(spec.expected_x0))), _fmt(row.average),
             _fmt(row.se) if row.se_defined else "n/a", _fmt(row.rmse),
             f"({_fmt(row.ci[0], 0)}, {_fmt(row.ci[1], 0)})", str(row.failures))]
    _print_table(rows)
    out = _out_dir(cfg)
    if out is not None:
        d = row.as_dict()
        head = ("population", "method", "replications", "estimator") + tuple(d)
        _write_csv(out / "study.csv", head,
                   [(label, method, cfg["reps"], cfg["estimator"]) + tuple(d.values())])
        _write_csv(out / "replications.csv",
                   ("r", "x11", "x10", "x01", "mean", "median", "map", "sre",
                    "ci_lo", "ci_hi", "psrf", "error"),
                   [(r.r,
                     *(getattr(r.data, f) if r.data else None for f in _FIELDS),
                     *(r.estimates.get(e) for e in ("mean", "median", "map", "sre")),
                     r.ci[0] if r.ci else None, r.ci[1] if r.ci else None, r.psrf, r.error)
                    for r in results])
    return row


def _cmd_diagnose(cfg, inputs):
    if "traces" in inputs:
        traces = [read_trace_file(p) for p in inputs["traces"]]
        shortest = min(len(t) for t in traces)
        grid = cfg["k-grid"] or _default_grid(shortest // 2)
    else:
        if cfg["method"] not in DEFAULT_K:
            raise ConfigurationError("diagnose runs chains; choose --method ab-flat or ab-con")
        grid = cfg["k-grid"] or _default_grid(cfg["burnin"])
        traces = _run_chains(DrsData(**inputs["data"]), cfg, k=max(grid))
    if len(traces) < 2:
        raise ConfigurationError(f"diagnose needs at least 2 chains, got {len(traces)}")
    report = burnin_scan(traces, cfg["parameter"], grid, cfg["threshold"])
    _print_table([("k", f"R^1/2({report.parameter})")] +
                 [(str(k), f"{r:.4f}") for k, r in report.curve])
    rec = report.recommended_k
    print(f"recommended k: {rec if rec is not None else 'none (no grid value below threshold)'}")
    out = _out_dir(cfg)
    if out is not None:
        _write_csv(out / "psrf.csv", ("k", "r_hat_sqrt"), report.curve)
        _dump_json(out / "diagnose.json", {"parameter": report.parameter,
                                           "threshold": report.threshold,
                                           "recommended_k": rec,
                                           "curve": [list(kv) for kv in report.curve]})
    return report


COMMANDS = {"estimate": _cmd_estimate, "simulate": _cmd_simulate, "diagnose": _cmd_diagnose}


def _execute(command, cfg, inputs):
    started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    result = COMMANDS[command](cfg, inputs)
    out = _out_dir(cfg)
    if out is not None:
        _write_manifest(out, command, cfg, inputs, started, round(time.perf_counter() - t0, 3))
    return result


# --------------------------------------------------------------------------
# argument parser


def _add_common(p, *, chains=True):
    g = p.add_argument_group("model and sampler")
    g.add_argument("--method", type=_argtype("method"),
                   help="mt | mb | nour | closed-form-all | ab-flat | ab-con (default ab-flat)")
    g.add_argument("--phi-knowledge", type=_argtype("phi-knowledge"),
                   help="gt1 (phi > 1), lt1 (phi < 1) or none (default gt1)")
    g.add_argument("--phi-upper", type=_argtype("phi-upper"), help="upper bound beta (default 2)")
    g.add_argument("--phi-range", type=_argtype("phi-range"), metavar="LO,HI",
                   help="explicit flat-prior range for phi; overrides --phi-knowledge")
    g.add_argument("--n-prior", type=_argtype("n-prior"), help="jeffreys | poisson (default jeffreys)")
    g.add_argument("--lambda", type=_argtype("lambda"), metavar="SRC",
                   help="Poisson prior mean: mb | nour | fixed:<value> (default mb)")
    g.add_argument("--p-update", type=_argtype("p-update"),
                   help="AB-Flat p update: c-over-phi | lloyd (default c-over-phi)")
    g.add_argument("--t", type=_argtype("t"), help="AB-Con variance tuning t (default 20)")
    g.add_argument("--chains", type=_argtype("chains"), help="number of chains (default 5)")
    g.add_argument("--burnin", type=_argtype("burnin"), metavar="K",
                   help="burn-in k; each chain runs 2k sweeps (default 2000 ab-flat, 7000 ab-con)")
    g.add_argument("--seed", type=_argtype("seed"), help=f"master seed (default ${SEED_ENV} or 0)")
    g.add_argument("--level", type=_argtype("level"), help="credible level (default 0.95)")
    g.add_argument("--backend", type=_argtype("backend"), help="kernel backend: compiled | python")
    o = p.add_argument_group("output")
    o.add_argument("--out", type=_argtype("out"), metavar="DIR", help="directory for output files")
    o.add_argument("--config", metavar="FILE", help="key = value settings file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dualrecord",
        description="Population size estimation for dual-record systems under model M_tb.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate N for one observed table")
    p.add_argument("data", help="data file (x11,x10,x01 CSV or key = value)")
    _add_common(p)
    p.add_argument("--save-traces", action="store_const", const=True, default=None,
                   help="write one trace CSV per chain")
    p.add_argument("--k-grid", type=_argtype("k-grid"), metavar="K1,K2,...",
                   help="burn-in grid for the PSRF curve (values <= --burnin)")
    p.add_argument("--parameter", type=_argtype("parameter"), help="PSRF parameter (default N)")
    p.add_argument("--threshold", type=_argtype("threshold"), help="PSRF threshold (default 1.1)")

    p = sub.add_parser("simulate", help="simulation study on a reference or custom population")
    p.add_argument("population", nargs="?", help="P1 .. P8")
    p.add_argument("--spec", type=str, metavar="N,P1,PDOT1,PHI", help="custom population")
    _add_common(p)
    p.add_argument("-R", "--reps", type=_argtype("reps"), help="replications (default 50)")
    p.add_argument("--full", action="store_true", help="use 200 replications")
    p.add_argument("--estimator", type=_argtype("estimator"),
                   help="point estimate averaged over replications: mean | median | map | sre")
    p.add_argument("--ci-pooling", type=_argtype("ci-pooling"),
                   help="endpoint-average (default) | pooled-posterior")
    p.add_argument("--workers", type=_argtype("workers"), help="worker processes for replications")

    p = sub.add_parser("diagnose", help="PSRF against burn-in length")
    p.add_argument("data", nargs="?", help="data file for an inline run")
    p.add_argument("--traces", nargs="+", metavar="CSV", help="trace files, one per chain")
    _add_common(p)
    p.add_argument("--k-grid", type=_argtype("k-grid"), metavar="K1,K2,...", help="burn-in grid")
    p.add_argument("--parameter", type=_argtype("parameter"), help="N | phi | p | p1dot (default N)")
    p.add_argument("--threshold", type=_argtype("threshold"), help="PSRF threshold (default 1.1)")

    p = sub.add_parser("rerun", help="repeat a run from its manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out", metavar="DIR", help="write outputs here instead of the recorded directory")
    return parser


def _inputs(args):
    if args.command == "estimate":
        return {"data": read_data_file(args.data).as_dict(), "data_file": args.data}
    if args.command == "simulate":
        if args.full and args.reps is None:
            args.reps = 200
        if (args.population is None) == (args.spec is None):
            raise ConfigurationError("give exactly one of a population name or --spec")
        if args.population is not None:
            builtin_population(args.population)
            return {"population": args.population.upper()}
        try:
            vals = [float(v) for v in args.spec.split(",")]
            if len(vals) != 4:
                raise ValueError
        except ValueError:
            raise ConfigurationError(f"--spec needs N,P1,PDOT1,PHI, got {args.spec!r}") from None
        return {"spec": vals}
    if (args.data is None) == (args.traces is None):
        raise ConfigurationError("give exactly one of a data file or --traces")
    if args.traces:
        return {"traces": list(args.traces)}
    return {"data": read_data_file(args.data).as_dict(), "data_file": args.data}


def _rerun(args):
    try:
        with open(args.manifest, encoding="utf-8") as fh:
            man = json.load(fh)
        command, cfg, inputs = man["command"], man["config"], man["inputs"]
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigurationError(f"{args.manifest}: not a usable manifest ({exc})") from None
    if command not in COMMANDS:
        raise ConfigurationError(f"{args.manifest}: unknown command {command!r}")
    cfg = {**DEFAULTS, **cfg}
    if args.out is not None:
        cfg["out"] = args.out
    if cfg.get("phi-range") is not None:
        cfg["phi-range"] = list(cfg["phi-range"])
    return _execute(command, cfg, inputs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "rerun":
            _rerun(args)
        else:
            inputs = _inputs(args)
            cfg = _resolve(args)
            _execute(args.command, cfg, inputs)
    except DualRecordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
