"""Numeric checks of the analysis, one JSON-ready record per check.

Each check reports what was measured, what was expected, the tolerance and
whether it passed. Everything is a pure function of the arguments and the
seed.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from . import theory
from .bench import ExperimentConfig, ExperimentReport, run_experiment

__all__ = ["SUITES", "run_suites", "sweep_config"]

CDF_GRID_N = 30
CONTENT_CASES = ((9, 5), (99, 1), (49, 10))
ORDER_STAT_CASES = ((1, 1), (3, 5), (10, 19))


def _check(suite: str, name: str, measured, expected, tolerance, passed: bool) -> dict:
    return {
        "suite": suite,
        "check": name,
        "measured": measured,
        "expected": expected,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def cdf_grid(n_max: int = CDF_GRID_N) -> Iterable[tuple[int, int, float]]:
    cs = [i / 10 for i in range(11)]
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            for c in cs:
                yield k, n, c


def suite_beta(seed: int, draws: int = 100_000, **_) -> list[dict]:
    worst = max(abs(theory.beta_order_cdf(k, n, c) - theory.beta_order_cdf_integral(k, n, c))
                for k, n, c in cdf_grid())
    out = [_check("beta", "cdf_sum_vs_integral_max_abs_diff", worst, 0.0, 1e-10, worst <= 1e-10)]
    uni = max(abs(theory.beta_order_cdf(1, 1, c) - c) for c in [i / 100 for i in range(101)])
    out.append(_check("beta", "beta11_cdf_is_identity_max_abs_diff", uni, 0.0, 0.0, uni == 0.0))
    for k, n in ORDER_STAT_CASES:
        s = theory.monte_carlo_order_stat(k, n, draws, seed)
        expected = theory.beta_mean(k, n - k + 1)
        tol = 4 * s.std_error
        out.append(_check("beta", f"order_stat_mean k={k} n={n}", s.estimate, expected, tol,
                          abs(s.estimate - expected) <= tol))
    return out


def suite_content(seed: int, n=None, k=None, d=None, queries: int = 10_000, **_) -> list[dict]:
    cases = [(n, k)] if n is not None and k is not None else list(CONTENT_CASES)
    d = d or 2
    out = []
    for nn, kk in cases:
        s = theory.monte_carlo_probability_content("uniform-cube", nn, kk, queries, seed, d=d)
        expected = theory.expected_probability_content(kk, nn)
        err = abs(s.estimate - expected)
        tol = min(4 * s.std_error, 0.02)
        out.append(_check("content", f"probability_content n={nn} k={kk} d={d}", s.estimate, expected, tol,
                          err <= 4 * s.std_error and err < 0.02))
    return out


def suite_bounds(seed: int, k=None, b=None, d=None, **_) -> list[dict]:
    out = [
        _check("bounds", "cube_ball_ratio d=1", theory.cube_ball_ratio(1), 1.0, 0.0,
               theory.cube_ball_ratio(1) == 1.0),
    ]
    for dd, ref in ((2, 4 / math.pi), (3, 6 / math.pi)):
        v = theory.cube_ball_ratio(dd)
        out.append(_check("bounds", f"cube_ball_ratio d={dd}", v, ref, 1e-12, abs(v - ref) <= 1e-12))
    for dd in range(1, 11):
        v = theory.records_bound(1, 1, dd)
        out.append(_check("bounds", f"records_bound k=1 b=1 d={dd}", v, float(2 ** dd), 0.0, v == 2 ** dd))
    v = theory.expected_probability_content(5, 9)
    out.append(_check("bounds", "expected_probability_content k=5 n=9", v, 0.5, 0.0, v == 0.5))
    k, b, d = k or 8, b or 1, d or 3
    rb = theory.records_bound(k, b, d)
    covered = b * theory.bucket_overlap_bound(k, b, d)
    out.append(_check("bounds", f"records_bound k={k} b={b} d={d} dominates b*overlap", covered, rb, 1e-9,
                      covered <= rb * (1 + 1e-9)))
    return out


def sweep_config(seed: int, queries: int = 500) -> ExperimentConfig:
    return ExperimentConfig(
        distribution="uniform-cube",
        n_grid=[2 ** e for e in range(10, 19, 2)],
        d=2, k=1, b=1,
        queries_per_n=queries,
        seed=seed,
        variant="bucket",
    )


def records_checks(report: ExperimentReport) -> list[dict]:
    fit = report.fits["buckets_vs_n"]
    z = abs(fit["slope"]) / fit["slope_se"] if fit["slope_se"] else math.inf
    spread = report.fits["buckets_spread"]
    return [
        _check("records", "buckets_examined slope vs n (standard errors from 0)", z, 0.0, 2.0, z <= 2.0),
        _check("records", "buckets_examined max/min - 1 across n", spread, 0.0, 0.25, spread < 0.25),
    ]


def logtime_checks(report: ExperimentReport) -> list[dict]:
    log_r2 = report.fits["log_model"]["r2"]
    lin_r2 = report.fits["linear_model"]["r2"]
    return [
        _check("logtime", "nodes_visited ~ log2(n) R^2", log_r2, 1.0, 0.05, log_r2 >= 0.95),
        _check("logtime", "nodes_visited ~ n R^2 below log model", lin_r2, log_r2, 0.0, lin_r2 < log_r2),
    ]


def _sweep_suites(seed: int, sweep_queries: int = 500, _cache: dict | None = None, **_) -> ExperimentReport:
    key = (seed, sweep_queries)
    if _cache is not None and key in _cache:
        return _cache[key]
    report = run_experiment(sweep_config(seed, sweep_queries))
    if _cache is not None:
        _cache[key] = report
    return report


def suite_records(seed: int, **kw) -> list[dict]:
    return records_checks(_sweep_suites(seed, **kw))


def suite_logtime(seed: int, **kw) -> list[dict]:
    return logtime_checks(_sweep_suites(seed, **kw))


SUITES: dict[str, Callable[..., list[dict]]] = {
    "beta": suite_beta,
    "content": suite_content,
    "bounds": suite_bounds,
    "records": suite_records,
    "logtime": suite_logtime,
}


def run_suites(names: Iterable[str], seed: int, **kw) -> Iterable[dict]:
    """Yield check records for each named suite, in order."""
    cache: dict = {}
    for name in names:
        yield from SUITES[name](seed, _cache=cache, **kw)
