"""Closed-form quantities behind the expected-logarithmic query bound, and
Monte Carlo estimators that check them.

Everything here is about i.i.d. samples: the probability content of the ball
reaching the k-th nearest of n points, the uniform order statistics that
govern it, and the bucket/record counts that follow once the buckets are
treated as roughly cubical cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import KdError, Point
from .oracle import brute_force_knn
from .rng import make_rng

__all__ = [
    "TheoryParams",
    "OrderStatSample",
    "gamma_half_integer",
    "unit_ball_volume",
    "cube_ball_ratio",
    "bucket_overlap_bound",
    "records_bound",
    "expected_probability_content",
    "beta_order_cdf",
    "beta_order_cdf_integral",
    "beta_mean",
    "monte_carlo_order_stat",
    "monte_carlo_probability_content",
    "DENSITIES",
]

DENSITIES = ("uniform-cube",)


def _positive_int(name: str, v) -> int:
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise KdError(f"{name} must be a positive integer, got {v!r}")
    return int(v)


@dataclass(frozen=True)
class TheoryParams:
    n: int
    d: int
    k: int
    b: int = 1

    def __post_init__(self) -> None:
        for name in ("n", "d", "k", "b"):
            _positive_int(name, getattr(self, name))
        if self.k > self.n:
            raise KdError(f"k={self.k} exceeds n={self.n}")


@dataclass(frozen=True)
class OrderStatSample:
    n: int
    k: int
    draws: int
    estimate: float
    std_error: float


# -- geometry -----------------------------------------------------------------


def gamma_half_integer(x: float) -> float:
    """Gamma at a positive integer or half-integer, by the exact recurrence
    Gamma(x + 1) = x Gamma(x) from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi)."""
    twice = 2 * x
    if twice != int(twice) or x <= 0:
        raise ValueError(f"{x!r} is not a positive integer or half-integer")
    if int(twice) % 2 == 0:
        g, t = 1.0, 1.0
    else:
        g, t = math.sqrt(math.pi), 0.5
    while t < x:
        g *= t
        t += 1.0
    return g


def _pi_pow_half(d: int) -> float:
    # pi ** (d/2) built from the same sqrt(pi) the recurrence uses.
    r = math.pi ** (d // 2)
    return r * math.sqrt(math.pi) if d % 2 else r


def unit_ball_volume(d: int) -> float:
    d = _positive_int("d", d)
    return _pi_pow_half(d) / gamma_half_integer(d / 2 + 1)


def cube_ball_ratio(d: int) -> float:
    """Volume of the cube circumscribing a d-ball over the ball's volume,
    ``2**d * Gamma(d/2 + 1) / pi**(d/2)``."""
    d = _positive_int("d", d)
    return 2.0 ** d * gamma_half_integer(d / 2 + 1) / _pi_pow_half(d)


def _int_root_floor(num: int, den: int, d: int) -> int:
    """Largest integer m with m**d <= num/den."""
    m = int((num / den) ** (1.0 / d))
    while (m + 1) ** d * den <= num:
        m += 1
    while m > 0 and m ** d * den > num:
        m -= 1
    return m


def _root(x: float, d: int) -> float:
    r = x ** (1.0 / d)
    near = round(r)
    return float(near) if near ** d == x else r


def bucket_overlap_bound(k: int, b: int, d: int, edge_ratio_mode: str = "auto") -> float:
    """Upper bound on the number of buckets meeting the cube around the k-ball.

    With the cube-edge / bucket-edge ratio approximated by ``(k/b)**(1/d)``
    the bound is ``(floor((k/b)**(1/d)) + 1)**d`` when buckets are no larger
    than the cube (``k >= b``), else ``2**d``. ``edge_ratio_mode="formula"``
    applies the first expression unconditionally.
    """
    k = _positive_int("k", k)
    b = _positive_int("b", b)
    d = _positive_int("d", d)
    if edge_ratio_mode not in ("auto", "formula"):
        raise KdError(f"unknown edge_ratio_mode {edge_ratio_mode!r}")
    if edge_ratio_mode == "auto" and k < b:
        return float(2 ** d)
    return float((_int_root_floor(k, b, d) + 1) ** d)


def records_bound(k: int, b: int, d: int) -> float:
    """``(k**(1/d) + b**(1/d))**d``; smallest at ``b = 1``."""
    k = _positive_int("k", k)
    b = _positive_int("b", b)
    d = _positive_int("d", d)
    return (_root(k, d) + _root(b, d)) ** d


def expected_probability_content(k: int, n: int) -> float:
    """Mean probability mass of the ball reaching the k-th of n neighbors."""
    k = _positive_int("k", k)
    n = _positive_int("n", n)
    if k > n:
        raise KdError(f"k={k} exceeds n={n}")
    return k / (n + 1)


# -- order statistics ---------------------------------------------------------


def _check_rank(k, n) -> tuple[int, int]:
    k = _positive_int("k", k)
    n = _positive_int("n", n)
    if k > n:
        raise KdError(f"rank k={k} exceeds n={n}")
    return k, n


def beta_order_cdf(k: int, n: int, c: float) -> float:
    """P(k-th smallest of n uniforms <= c), as the binomial tail
    ``sum_{j>=k} C(n, j) c**j (1-c)**(n-j)``."""
    k, n = _check_rank(k, n)
    if not 0.0 <= c <= 1.0:
        raise KdError(f"c must lie in [0, 1], got {c!r}")
    q = 1.0 - c
    return math.fsum(math.comb(n, j) * c ** j * q ** (n - j) for j in range(k, n + 1))


def beta_order_cdf_integral(k: int, n: int, c: float) -> float:
    """Same probability by adaptive quadrature of the order-statistic density
    ``n!/((k-1)!(n-k)!) s**(k-1) (1-s)**(n-k)`` over ``[0, c]``."""
    from scipy.integrate import quad

    k, n = _check_rank(k, n)
    if not 0.0 <= c <= 1.0:
        raise KdError(f"c must lie in [0, 1], got {c!r}")
    coef = math.factorial(n) / (math.factorial(k - 1) * math.factorial(n - k))
    val, _ = quad(lambda s: s ** (k - 1) * (1.0 - s) ** (n - k), 0.0, c, epsabs=1e-15, epsrel=1e-13, limit=200)
    return coef * val


def beta_mean(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise KdError(f"beta parameters must be positive, got a={a!r}, b={b!r}")
    return a / (a + b)


def monte_carlo_order_stat(k: int, n: int, draws: int, seed: int) -> OrderStatSample:
    """Estimate E[k-th smallest of n uniforms] from ``draws`` batches."""
    k, n = _check_rank(k, n)
    draws = _positive_int("draws", draws)
    rng = make_rng(seed, "order-stat", k, n)
    values = np.empty(draws)
    chunk = max(1, 1_000_000 // n)
    for lo in range(0, draws, chunk):
        hi = min(draws, lo + chunk)
        u = rng.random((hi - lo, n))
        values[lo:hi] = np.partition(u, k - 1, axis=1)[:, k - 1]
    return _summarize(n, k, draws, values)


def _summarize(n: int, k: int, draws: int, values: np.ndarray) -> OrderStatSample:
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    return OrderStatSample(n=n, k=k, draws=draws, estimate=mean, std_error=se)


def _ball_content_in_unit_cube(x: np.ndarray, r: float, rng: np.random.Generator, buf: np.ndarray) -> float:
    d = len(x)
    lo = np.maximum(x - r, 0.0)
    hi = np.minimum(x + r, 1.0)
    if np.all(x - r >= 0.0) and np.all(x + r <= 1.0):
        return unit_ball_volume(d) * r ** d
    # Clipped ball: sample its bounding box restricted to the cube.
    span = hi - lo
    # buf is (d, sub_draws): one contiguous row per axis.
    rng.random(out=buf)
    acc = buf[0]
    for j in range(d):
        row = buf[j]
        row *= span[j]
        row += lo[j] - x[j]
        np.square(row, out=row)
        if j:
            acc += row
    inside = np.count_nonzero(acc <= r * r)
    return float(np.prod(span)) * inside / buf.shape[1]


def monte_carlo_probability_content(
    point_gen: str,
    n: int,
    k: int,
    queries: int,
    seed: int,
    d: int = 2,
    sub_draws: int = 100_000,
) -> OrderStatSample:
    """Mean probability mass of the ball around a query reaching its k-th
    nearest neighbor among ``n`` sampled points.

    Each repetition draws a fresh point set and query from ``point_gen``,
    finds the k-th neighbor distance with the brute-force oracle and
    integrates the density over the ball. For the uniform density on the unit
    cube an interior ball has content ``vol(ball)``; a ball cut by the cube
    boundary is integrated by Monte Carlo with ``sub_draws`` samples from a
    per-repetition sub-stream.
    """
    if point_gen not in DENSITIES:
        raise KdError(f"unsupported density {point_gen!r}; choose from {DENSITIES}")
    k, n = _check_rank(k, n)
    queries = _positive_int("queries", queries)
    d = _positive_int("d", d)
    rng = make_rng(seed, "content", n, k, d)
    values = np.empty(queries)
    buf = np.empty((d, _positive_int("sub_draws", sub_draws)))
    for rep in range(queries):
        sample = rng.random((n + 1, d))
        pts = [Point(tuple(row), i) for i, row in enumerate(sample[:n].tolist())]
        x = sample[n]
        r = brute_force_knn(pts, tuple(x.tolist()), k).farthest()
        sub = make_rng(seed, "content-sub", n, k, d, rep)
        values[rep] = _ball_content_in_unit_cube(x, r, sub, buf)
    return _summarize(n, k, queries, values)
