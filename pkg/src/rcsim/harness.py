"""Seeded Monte Carlo experiments in the critical window p = (k log n + c) / n.

Every trial draws from its own generator keyed by (master_seed, ..., trial),
and results are folded in trial order, so a report depends only on its
configuration, never on the worker count.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import comb, exp, factorial, log
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np
from scipy.stats import poisson

from rcsim.cohomology import betti_top
from rcsim.complex import make_rng, sample_growth_order, sample_ynp, save_json
from rcsim.connectivity import is_hypergraph_connected, isolated_count
from rcsim.errors import ConfigError, InvalidInputError
from rcsim.oracle import brute_betti
from rcsim.process import HittingTimes, coincidence_flags, run_hitting_times

logger = logging.getLogger(__name__)

MODES = ("betti-dist", "vanish-sweep", "hitting", "isolated-dist", "oracle-check")
CSV_FIELDS = ("trial", "beta", "isolated", "m1", "m2", "m3")
ORACLE_P_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))


def window_p(n: int, k: int, c: float) -> float:
    return (k * log(n) + c) / n


def poisson_lambda(c: float, k: int) -> float:
    """Limiting mean e^{-c} / k! of the isolated-face count."""
    return exp(-c) / factorial(k)


def vanish_probability(c: float, k: int) -> float:
    """Limiting probability exp(-e^{-c}/k!) that H^{k-1} vanishes."""
    return exp(-poisson_lambda(c, k))


def exact_isolated_mean(n: int, k: int, p: float) -> float:
    """E[#isolated (k-1)-faces] in Y_k(n, p): each lies in n - k possible k-faces."""
    return comb(n, k) * (1.0 - p) ** (n - k)


def isolated_binomial_sd(n: int, k: int, p: float) -> float:
    """Standard deviation of the isolated count treating faces as independent."""
    q = (1.0 - p) ** (n - k)
    return math.sqrt(comb(n, k) * q * (1.0 - q))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    trials: int
    master_seed: int = 0
    c: float | None = 0.0
    p: float | None = None
    c_grid: tuple[float, ...] = ()
    mode: str = "betti-dist"
    workers: int = 1
    n_min: int = 4  # oracle-check draws n from [n_min, n]

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.n <= self.k:
            raise ConfigError(f"need n > k, got n={self.n}, k={self.k}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p={self.p} outside [0, 1]")
        if self.mode == "vanish-sweep" and not self.c_grid:
            raise ConfigError("vanish-sweep needs a non-empty c_grid")
        if self.mode == "oracle-check" and not self.k < self.n_min <= self.n:
            raise ConfigError("oracle-check needs k < n_min <= n")
        if self.mode in ("betti-dist", "isolated-dist") and self.p is None and self.c is None:
            raise ConfigError("give either c or p")

    def resolved_p(self, c: float | None = None) -> float:
        """Edge probability: explicit p, else the window formula clamped to [0, 1]."""
        if self.p is not None:
            return self.p
        c = self.c if c is None else c
        p = window_p(self.n, self.k, c)
        if not 0.0 <= p <= 1.0:
            logger.warning("window p=%.4g for n=%d, c=%g clamped to [0, 1]", p, self.n, c)
            p = min(max(p, 0.0), 1.0)
        return p


# --- per-trial work (module level so process pools can pickle it) ---------


def _betti_trial(args: tuple[ExperimentConfig, float, Sequence[int]]) -> dict:
    cfg, p, key = args
    cx = sample_ynp(cfg.n, cfg.k, p, make_rng(key))
    return {"beta": betti_top(cx).beta, "isolated": isolated_count(cx)}


def _isolated_trial(args: tuple[ExperimentConfig, float, Sequence[int]]) -> dict:
    cfg, p, key = args
    cx = sample_ynp(cfg.n, cfg.k, p, make_rng(key))
    return {"isolated": isolated_count(cx)}


def _hitting_trial(args: tuple[ExperimentConfig, float, Sequence[int]]) -> dict:
    cfg, _, key = args
    h = run_hitting_times(sample_growth_order(cfg.n, cfg.k, make_rng(key)))
    return {"m1": h.m1, "m2": h.m2, "m3": h.m3}


def _oracle_trial(args: tuple[ExperimentConfig, float, Sequence[int]]) -> dict:
    cfg, _, key = args
    rng = make_rng(key)
    n = int(rng.integers(cfg.n_min, cfg.n + 1))
    p = ORACLE_P_GRID[int(rng.integers(len(ORACLE_P_GRID)))]
    cx = sample_ynp(n, cfg.k, p, rng)
    beta = betti_top(cx).beta
    return {
        "n": n,
        "p": p,
        "beta": beta,
        "brute_beta": brute_betti(cx),
        "isolated": isolated_count(cx),
        "connected": is_hypergraph_connected(cx),
    }


def trial_key(cfg: ExperimentConfig, trial: int, *extra: int) -> tuple[int, ...]:
    return (int(cfg.master_seed), *extra, int(trial))


def _map_trials(fn: Callable, jobs: list, workers: int) -> list:
    """Run jobs and return results in job order."""
    if workers == 1 or len(jobs) == 1:
        return [fn(j) for j in jobs]
    chunk = max(1, len(jobs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=chunk))


# --- statistics -----------------------------------------------------------


@dataclass(frozen=True)
class PoissonFit:
    tv_distance: float
    factorial_moments: dict[int, float]  # t -> E[(X)_t]
    lambda_powers: dict[int, float]  # t -> lambda^t
    truncation: int


def _as_histogram(data: dict[int, int] | Iterable[int]) -> dict[int, int]:
    if isinstance(data, dict):
        return {int(v): int(c) for v, c in data.items() if c}
    return dict(Counter(int(v) for v in data))


def poisson_fit(histogram: dict[int, int] | Iterable[int], lam: float) -> PoissonFit:
    """Compare an empirical count distribution with Poisson(lam).

    TV distance is taken over 0..T with T = max observed + 5; the Poisson mass
    beyond T goes into bucket T.
    """
    hist = _as_histogram(histogram)
    total = sum(hist.values())
    if total == 0:
        raise InvalidInputError("empty histogram")
    if lam <= 0:
        raise InvalidInputError("lambda must be > 0")
    top = max(hist) + 5
    support = np.arange(top + 1)
    model = poisson.pmf(support, lam)
    model[-1] += poisson.sf(top, lam)
    emp = np.zeros(top + 1)
    for v, c in hist.items():
        emp[v] = c / total
    tv = 0.5 * float(np.abs(emp - model).sum())
    moments = {}
    for t in (1, 2):
        falling = sum(c * math.perm(v, t) for v, c in hist.items())
        moments[t] = falling / total
    return PoissonFit(tv, moments, {t: lam**t for t in (1, 2)}, top)


def _summary(values: list[int]) -> dict:
    arr = np.asarray(values, dtype=float)
    return {
        "histogram": {str(v): c for v, c in sorted(Counter(values).items())},
        "mean": float(arr.mean()),
        "variance": float(arr.var(ddof=1)) if len(arr) > 1 else 0.0,
    }


def _fit_dict(values: list[int], lam: float) -> dict:
    fit = poisson_fit(values, lam)
    return {
        "lambda": lam,
        "tv_distance": fit.tv_distance,
        "truncation": fit.truncation,
        "factorial_moments": {str(t): v for t, v in fit.factorial_moments.items()},
        "lambda_powers": {str(t): v for t, v in fit.lambda_powers.items()},
    }


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    records: list[dict]
    stats: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        cfg = asdict(self.config)
        cfg["c_grid"] = list(cfg["c_grid"])
        del cfg["workers"]  # execution detail; must not change report bytes
        out = {"config": cfg, "stats": self.stats, "records": self.records}
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for rec in self.records:
            writer.writerow([rec.get(name, "") for name in CSV_FIELDS])


# --- experiments ----------------------------------------------------------


def _window_stats(cfg: ExperimentConfig, c: float | None, p: float) -> dict:
    out = {"p": p, "c": c, "exact_isolated_mean": exact_isolated_mean(cfg.n, cfg.k, p)}
    if c is not None and cfg.p is None:
        out["poisson_lambda"] = poisson_lambda(c, cfg.k)
        out["predicted_vanish_probability"] = vanish_probability(c, cfg.k)
        out["lambda_gap"] = abs(out["exact_isolated_mean"] - out["poisson_lambda"])
    return out


def run_betti_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Distribution of beta^{k-1} and the isolated count in Y_k(n, p)."""
    if cfg.mode != "betti-dist":
        raise ConfigError(f"mode {cfg.mode!r} is not betti-dist")
    start = time.perf_counter()
    p = cfg.resolved_p()
    jobs = [(cfg, p, trial_key(cfg, i)) for i in range(cfg.trials)]
    results = _map_trials(_betti_trial, jobs, cfg.workers)
    records = [{"trial": i, "c": cfg.c, **r} for i, r in enumerate(results)]

    betas = [r["beta"] for r in records]
    isolated = [r["isolated"] for r in records]
    stats = _window_stats(cfg, cfg.c, p)
    stats["beta"] = _summary(betas)
    stats["isolated"] = _summary(isolated)
    stats["vanish_frequency"] = sum(b == 0 for b in betas) / cfg.trials
    stats["beta_equals_isolated_frequency"] = sum(
        b == i for b, i in zip(betas, isolated)
    ) / cfg.trials
    stats["beta_isolated_mismatch_trials"] = [
        r["trial"] for r in records if r["beta"] != r["isolated"]
    ]
    stats["beta_below_isolated_trials"] = [
        r["trial"] for r in records if r["beta"] < r["isolated"]
    ]
    if "poisson_lambda" in stats:
        stats["beta"]["poisson_fit"] = _fit_dict(betas, stats["poisson_lambda"])
    if stats["exact_isolated_mean"] > 0:
        stats["isolated"]["poisson_fit"] = _fit_dict(isolated, stats["exact_isolated_mean"])
    return ExperimentReport(cfg, records, stats, time.perf_counter() - start)


def run_isolated_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Isolated (k-1)-face counts only; cheap enough for large trial counts."""
    if cfg.mode != "isolated-dist":
        raise ConfigError(f"mode {cfg.mode!r} is not isolated-dist")
    start = time.perf_counter()
    p = cfg.resolved_p()
    jobs = [(cfg, p, trial_key(cfg, i)) for i in range(cfg.trials)]
    results = _map_trials(_isolated_trial, jobs, cfg.workers)
    records = [{"trial": i, "c": cfg.c, **r} for i, r in enumerate(results)]
    isolated = [r["isolated"] for r in records]
    stats = _window_stats(cfg, cfg.c, p)
    stats["isolated"] = _summary(isolated)
    stats["isolated"]["binomial_sd"] = isolated_binomial_sd(cfg.n, cfg.k, p)
    if stats["exact_isolated_mean"] > 0:
        stats["isolated"]["poisson_fit"] = _fit_dict(isolated, stats["exact_isolated_mean"])
    return ExperimentReport(cfg, records, stats, time.perf_counter() - start)


def run_sweep_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Vanishing frequency of H^{k-1} across a grid of window offsets c."""
    if cfg.mode != "vanish-sweep":
        raise ConfigError(f"mode {cfg.mode!r} is not vanish-sweep")
    start = time.perf_counter()
    records, rows = [], []
    for ci, c in enumerate(cfg.c_grid):
        point = replace(cfg, c=c, p=None)
        p = point.resolved_p()
        jobs = [(point, p, trial_key(cfg, i, ci)) for i in range(cfg.trials)]
        results = _map_trials(_betti_trial, jobs, cfg.workers)
        betas = [r["beta"] for r in results]
        records.extend({"trial": i, "c": c, **r} for i, r in enumerate(results))
        row = _window_stats(point, c, p)
        row["vanish_frequency"] = sum(b == 0 for b in betas) / cfg.trials
        row["mean_beta"] = float(np.mean(betas))
        rows.append(row)
    return ExperimentReport(cfg, records, {"sweep": rows}, time.perf_counter() - start)


def run_hitting_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Coincidence of the three hitting times over independent growth orders.

    M1 is also reported on the window scale c_hat = n M1 / C(n, k+1) - k log n,
    whose limiting law has P(c_hat <= c) -> exp(-e^{-c}/k!).
    """
    if cfg.mode != "hitting":
        raise ConfigError(f"mode {cfg.mode!r} is not hitting")
    start = time.perf_counter()
    jobs = [(cfg, 0.0, trial_key(cfg, i)) for i in range(cfg.trials)]
    results = _map_trials(_hitting_trial, jobs, cfg.workers)
    records = [{"trial": i, **r} for i, r in enumerate(results)]

    flags = [coincidence_flags_from(r) for r in records]
    total = comb(cfg.n, cfg.k + 1)
    m1 = [r["m1"] for r in records]
    c_hat = [cfg.n * m / total - cfg.k * log(cfg.n) for m in m1]
    stats = {
        "freq12": sum(f[0] for f in flags) / cfg.trials,
        "freq123": sum(f[1] for f in flags) / cfg.trials,
        "ordered_fraction": sum(r["m1"] <= r["m2"] <= r["m3"] for r in records) / cfg.trials,
        "m1": _summary(m1),
        "m1_window_offset": {
            "mean": float(np.mean(c_hat)),
            "median": float(np.median(c_hat)),
            "predicted_cdf_at_0": vanish_probability(0.0, cfg.k),
            "empirical_cdf_at_0": sum(ch <= 0 for ch in c_hat) / cfg.trials,
        },
    }
    return ExperimentReport(cfg, records, stats, time.perf_counter() - start)


def coincidence_flags_from(rec: dict) -> tuple[bool, bool]:
    return coincidence_flags(HittingTimes(rec["m1"], rec["m2"], rec["m3"]))


def run_oracle_check(cfg: ExperimentConfig) -> ExperimentReport:
    """betti_top against exhaustive enumeration, plus connectivity properties."""
    if cfg.mode != "oracle-check":
        raise ConfigError(f"mode {cfg.mode!r} is not oracle-check")
    start = time.perf_counter()
    jobs = [(cfg, 0.0, trial_key(cfg, i)) for i in range(cfg.trials)]
    results = _map_trials(_oracle_trial, jobs, cfg.workers)
    records = [{"trial": i, **r} for i, r in enumerate(results)]
    stats = {
        "betti_mismatches": [r["trial"] for r in records if r["beta"] != r["brute_beta"]],
        "vanishing_but_disconnected": [
            r["trial"] for r in records if r["beta"] == 0 and not r["connected"]
        ],
        "beta_below_isolated": [r["trial"] for r in records if r["beta"] < r["isolated"]],
        "vanishing_count": sum(r["beta"] == 0 for r in records),
    }
    return ExperimentReport(cfg, records, stats, time.perf_counter() - start)


RUNNERS = {
    "betti-dist": run_betti_experiment,
    "isolated-dist": run_isolated_experiment,
    "vanish-sweep": run_sweep_experiment,
    "hitting": run_hitting_experiment,
    "oracle-check": run_oracle_check,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[cfg.mode](cfg)


def dump_mismatches(report: ExperimentReport, directory: str | Path) -> list[Path]:
    """Regenerate and save every trial where beta != isolated count."""
    cfg = report.config
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    p = cfg.resolved_p()
    paths = []
    for trial in report.stats.get("beta_isolated_mismatch_trials", []):
        cx = sample_ynp(cfg.n, cfg.k, p, make_rng(trial_key(cfg, trial)))
        path = directory / f"mismatch_trial{trial}.json"
        save_json(cx, path)
        paths.append(path)
    return paths
