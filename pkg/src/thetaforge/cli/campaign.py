"""Seeded verification campaigns and their JSON-line reports.

A campaign is one JSON document::

    {"seed": 42, "trials": 10, "tol": 1e-9, "mode": "both",
     "identities": [{"id": "rr"},
                    {"id": "thmrn", "n": [1, 4], "tol": 1e-8},
                    {"id": "thm-vst", "mode": "exact", "N": 2, "m": [2, 1]}]}

Top-level ``seed``, ``trials``, ``tol`` and ``mode`` are defaults that each
entry may override.  ``n`` given as ``[lo, hi]`` expands into one report per
n.  A document with an ``id`` key and no ``identities`` list is a campaign
of that single entry.  ``mode`` is ``numeric``, ``exact`` or ``both``
(every mode the identity supports).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

from ..errors import ConfigError, PoleError, SamplerExhaustedError
from . import registry

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_SAMPLER = 0, 1, 2, 3

_ENTRY_KEYS = {"id", "seed", "trials", "tol", "mode"}
_TOP_KEYS = {"seed", "trials", "tol", "mode", "identities"}
_DEFAULTS = {"seed": 0, "trials": 50, "tol": 1e-9, "mode": "both"}


@dataclass(frozen=True)
class Job:
    id: str
    mode: str
    params: dict
    seed: int
    trials: int
    tol: float


def _check_int(value, what, lo=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise ConfigError(f"{what} must be an integer >= {lo}, got {value!r}")
    return value


def plan(config: dict) -> list[Job]:
    """Validate the whole document and expand it into jobs, before any evaluation."""
    if not isinstance(config, dict):
        raise ConfigError("campaign must be a JSON object")
    if "identities" not in config and "id" in config:
        config = {"identities": [config]}
    extra = set(config) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown campaign keys {sorted(extra)}")
    base = {**_DEFAULTS, **{k: config[k] for k in _DEFAULTS if k in config}}
    items = config.get("identities", [])
    if not isinstance(items, list):
        raise ConfigError("'identities' must be a list")
    jobs = []
    for item in items:
        if not isinstance(item, dict) or "id" not in item:
            raise ConfigError(f"each identity needs an 'id': {item!r}")
        entry = registry.get(item["id"])
        opts = {**base, **{k: item[k] for k in _DEFAULTS if k in item}}
        seed = _check_int(opts["seed"], "seed")
        if seed >= 2**64:
            raise ConfigError("seed must fit in 64 bits")
        trials = _check_int(opts["trials"], "trials")
        tol = opts["tol"]
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
            raise ConfigError(f"tol must be a nonnegative number, got {tol!r}")
        mode = opts["mode"]
        if mode == "both":
            modes = entry.modes
        elif mode in entry.modes:
            modes = (mode,)
        elif mode in (registry.NUMERIC, registry.EXACT):
            raise ConfigError(f"{entry.id} has no {mode} mode (modes: {', '.join(entry.modes)})")
        else:
            raise ConfigError(f"unknown mode {mode!r}")
        raw = {k: v for k, v in item.items() if k not in _ENTRY_KEYS}
        n_spec = raw.get("n")
        if isinstance(n_spec, list) and len(n_spec) == 2 and "n" in entry.defaults:
            ns = range(_check_int(n_spec[0], "n"), _check_int(n_spec[1], "n") + 1)
            variants = [{**raw, "n": n} for n in ns]
        else:
            variants = [raw]
        for params in variants:
            resolved = registry.resolve_params(entry, params)
            for m in modes:
                jobs.append(Job(entry.id, m, resolved, seed, trials, float(tol)))
    return jobs


def run_job(job: Job) -> dict:
    entry = registry.get(job.id)
    runner = entry.numeric if job.mode == registry.NUMERIC else entry.exact
    t0 = time.perf_counter()
    out = runner(job.params, job.seed, job.trials)
    ms = round((time.perf_counter() - t0) * 1000, 3)
    report = {"id": job.id, "mode": job.mode, "params": job.params, "seed": job.seed,
              "trials": job.trials}
    if job.mode == registry.NUMERIC:
        report["tol"] = job.tol
        report["max_residual"] = out["max_residual"]
        report["pass"] = out["max_residual"] < job.tol
    else:
        report["exact_pass"] = out["exact_pass"]
        report["pass"] = bool(out["exact_pass"])
    report["worst_point"] = out["worst_point"]
    report["ms"] = ms
    return report


def run_campaign(config: dict, emit=None) -> tuple[list[dict], int]:
    """Run every job; ``emit`` receives each report's JSON line as it completes.

    Returns ``(reports, exit_code)``.  A config error raises before anything
    runs; a sampler or pole error stops the campaign with exit code 3.
    """
    jobs = plan(config)
    reports = []
    code = EXIT_PASS
    for job in jobs:
        try:
            report = run_job(job)
        except (SamplerExhaustedError, PoleError) as exc:
            report = {"id": job.id, "mode": job.mode, "params": job.params, "seed": job.seed,
                      "trials": job.trials, "error": f"{type(exc).__name__}: {exc}"}
            reports.append(report)
            if emit:
                emit(to_json(report))
            return reports, EXIT_SAMPLER
        reports.append(report)
        if emit:
            emit(to_json(report))
        if not report["pass"]:
            code = EXIT_FAIL
    return reports, code


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=False, separators=(", ", ": "))


def strip_timing(line: str) -> str:
    """A report line without its wall-time field, for reproducibility comparisons."""
    d = json.loads(line)
    d.pop("ms", None)
    return json.dumps(d)
