"""Instrumented query experiments.

For each point count in a grid, build a tree on fresh data, run queries drawn
from the same distribution, and aggregate the traversal counters. The report
then fits node visits against log2(n) and against n, and bucket visits
against n, which is what the constant-records / logarithmic-time claims are
checked with.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import KdError, Point, PointSet
from .rng import derive_seed, make_rng
from .search import knn
from .tree import build, build_bucket, depth, leaf_census

__all__ = [
    "ConfigError",
    "DISTRIBUTIONS",
    "ExperimentConfig",
    "ExperimentReport",
    "LineFit",
    "fit_line",
    "generate_points",
    "run_experiment",
]

DISTRIBUTIONS = ("uniform-cube", "gaussian", "clustered")
VARIANTS = ("interior", "bucket")
COUNTERS = ("nodes_visited", "buckets_examined", "distance_evaluations")

# Report fields that depend on the machine rather than the seed.
TIMING_FIELDS = ("wall_build_s", "wall_query_mean_us", "wall_query_median_us")

_CLUSTERS = 8
_CLUSTER_SIGMA = 0.05


class ConfigError(KdError):
    pass


def generate_points(distribution: str, n: int, d: int, seed: int) -> PointSet:
    """``n`` i.i.d. points with ids ``0..n-1``.

    ``uniform-cube`` is uniform on [0, 1]^d, ``gaussian`` standard normal,
    ``clustered`` an equal-weight mixture of 8 isotropic normals (sigma 0.05)
    with centers uniform in the unit cube.
    """
    if distribution not in DISTRIBUTIONS:
        raise ConfigError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")
    if int(n) != n or n < 0:
        raise ConfigError(f"n must be a non-negative integer, got {n!r}")
    if int(d) != d or d < 1:
        raise ConfigError(f"d must be a positive integer, got {d!r}")
    rng = make_rng(seed, "points", distribution, d)
    if distribution == "uniform-cube":
        X = rng.random((n, d))
    elif distribution == "gaussian":
        X = rng.standard_normal((n, d))
    else:
        centers = rng.random((_CLUSTERS, d))
        labels = rng.integers(0, _CLUSTERS, size=n)
        X = centers[labels] + _CLUSTER_SIGMA * rng.standard_normal((n, d))
    return PointSet((Point(tuple(row), i) for i, row in enumerate(X.tolist())), d)


@dataclass
class ExperimentConfig:
    distribution: str = "uniform-cube"
    n_grid: list[int] = field(default_factory=lambda: [2 ** e for e in range(10, 19, 2)])
    d: int = 2
    k: int = 1
    b: int = 1
    queries_per_n: int = 500
    seed: int = 0
    variant: str = "bucket"
    eps: float = math.inf

    def __post_init__(self) -> None:
        self.n_grid = [int(n) for n in self.n_grid]
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigError(f"unknown distribution {self.distribution!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise ConfigError("n_grid must be a non-empty list of positive counts")
        if any(a > b for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be nondecreasing")
        for name in ("d", "k", "b", "queries_per_n"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if not self.eps > 0:
            raise ConfigError(f"eps must be positive, got {self.eps!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        if isinstance(data.get("eps"), str):
            data["eps"] = float(data["eps"])
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = asdict(self)
        out["eps"] = "inf" if math.isinf(self.eps) else self.eps
        return out


@dataclass
class LineFit:
    slope: float
    intercept: float
    r2: float
    slope_se: float | None = None


def fit_line(x, y, y_se=None) -> LineFit:
    """Ordinary least squares ``y ~ slope * x + intercept``.

    ``slope_se`` is propagated from the per-point standard errors ``y_se``
    when given, otherwise taken from the residuals (needs >= 3 points).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two points to fit a line")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    if y_se is not None:
        w = xc / sxx
        slope_se = float(math.sqrt(float((w ** 2) @ (np.asarray(y_se, dtype=float) ** 2))))
    elif len(x) > 2:
        slope_se = math.sqrt(ss_res / (len(x) - 2) / sxx)
    else:
        slope_se = None
    return LineFit(slope, intercept, r2, slope_se)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict]
    fits: dict

    def to_dict(self, timing: bool = True) -> dict:
        rows = self.rows if timing else [{k: v for k, v in r.items() if k not in TIMING_FIELDS} for r in self.rows]
        return {
            "config": self.config.to_dict(),
            "rows": rows,
            "fits": self.fits,
            "timing_fields": list(TIMING_FIELDS),
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    def to_csv(self, timing: bool = True) -> str:
        if not self.rows:
            return ""
        cols = [c for c in self.rows[0] if timing or c not in TIMING_FIELDS]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({c: repr(v) if isinstance(v, float) else v for c, v in r.items() if c in cols})
        return buf.getvalue()


def _moments(values: list[int]) -> tuple[float, float, float]:
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd, sd / math.sqrt(len(values))


def run_cell(config: ExperimentConfig, n: int) -> dict:
    """One grid cell: build on ``n`` points and run the configured queries."""
    data = generate_points(config.distribution, n, config.d, derive_seed(config.seed, "data", n))
    queries = generate_points(config.distribution, config.queries_per_n, config.d,
                              derive_seed(config.seed, "queries", n))
    t0 = time.perf_counter()
    if config.variant == "bucket":
        tree = build_bucket(data, config.b)
        leaves = len(leaf_census(tree))
    else:
        tree = build(data)
        leaves = sum(1 for i in range(tree.num_nodes) if tree.is_leaf(i))
    build_s = time.perf_counter() - t0

    samples = {c: [] for c in COUNTERS}
    found = []
    times = []
    for q in queries:
        t0 = time.perf_counter_ns()
        res, st = knn(tree, q.coords, config.k, config.eps)
        times.append((time.perf_counter_ns() - t0) / 1000.0)
        for c in COUNTERS:
            samples[c].append(getattr(st, c))
        found.append(len(res))

    row: dict = {"n": n, "depth": depth(tree), "nodes": tree.num_nodes, "leaves": leaves,
                 "queries": config.queries_per_n}
    for c in COUNTERS:
        mean, sd, se = _moments(samples[c])
        row[f"{c}_mean"] = mean
        row[f"{c}_std"] = sd
        row[f"{c}_se"] = se
    row["neighbors_found_mean"] = statistics.fmean(found)
    row["wall_build_s"] = build_s
    row["wall_query_mean_us"] = statistics.fmean(times)
    row["wall_query_median_us"] = statistics.median(times)
    return row


def _fits(rows: list[dict]) -> dict:
    ns = [r["n"] for r in rows]
    if len(set(ns)) < 2:
        return {"log_model": None, "linear_model": None, "buckets_vs_n": None, "buckets_spread": None}
    nodes = [r["nodes_visited_mean"] for r in rows]
    buckets = [r["buckets_examined_mean"] for r in rows]
    log_fit = fit_line([math.log2(n) for n in ns], nodes)
    lin_fit = fit_line(ns, nodes)
    bfit = fit_line(ns, buckets, [r["buckets_examined_se"] for r in rows])
    ols_se = fit_line(ns, buckets).slope_se
    return {
        "log_model": {"alpha": log_fit.slope, "beta": log_fit.intercept, "r2": log_fit.r2},
        "linear_model": {"slope": lin_fit.slope, "intercept": lin_fit.intercept, "r2": lin_fit.r2},
        "buckets_vs_n": {
            "slope": bfit.slope,
            "intercept": bfit.intercept,
            "slope_se": bfit.slope_se,
            "slope_se_residual": ols_se,
        },
        "buckets_spread": max(buckets) / min(buckets) - 1.0,
    }


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    rows = [run_cell(config, n) for n in config.n_grid]
    return ExperimentReport(config=config, rows=rows, fits=_fits(rows))
