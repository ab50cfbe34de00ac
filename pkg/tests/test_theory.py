import math

import pytest

from kdnn import KdError
from kdnn import theory as th


def lanczos_ratio(d):
    # math.gamma is CPython's Lanczos approximation.
    return 2 ** d * math.gamma(d / 2 + 1) / math.pi ** (d / 2)


def test_gamma_recurrence_matches_lanczos():
    for twice in range(1, 60):
        x = twice / 2
        assert th.gamma_half_integer(x) == pytest.approx(math.gamma(x), rel=1e-13)
    with pytest.raises(ValueError):
        th.gamma_half_integer(0.3)


def test_cube_ball_ratio_examples():
    assert th.cube_ball_ratio(1) == 1.0
    assert th.cube_ball_ratio(2) == pytest.approx(4 / math.pi, abs=1e-12)
    assert th.cube_ball_ratio(3) == pytest.approx(6 / math.pi, abs=1e-12)
    with pytest.raises(KdError):
        th.cube_ball_ratio(0)


def test_cube_ball_ratio_properties():
    values = [th.cube_ball_ratio(d) for d in range(1, 21)]
    assert all(a < b for a, b in zip(values, values[1:]))
    for d in range(1, 21):
        assert values[d - 1] == pytest.approx(lanczos_ratio(d), rel=1e-13)
    for d in range(1, 11):
        assert th.cube_ball_ratio(d) * th.unit_ball_volume(d) == pytest.approx(2 ** d, rel=1e-14)


def test_unit_ball_volume_known_values():
    assert th.unit_ball_volume(1) == pytest.approx(2.0, rel=1e-15)
    assert th.unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
    assert th.unit_ball_volume(3) == pytest.approx(4 / 3 * math.pi, rel=1e-15)


def overlap_enumerated(k, b, d):
    # Brute force: largest m with m^d <= k/b, by counting up.
    m = 0
    while (m + 1) ** d * b <= k:
        m += 1
    return (m + 1) ** d


def test_bucket_overlap_bound_examples():
    assert th.bucket_overlap_bound(1, 1, 2) == 4
    assert th.bucket_overlap_bound(8, 1, 3) == 27
    for d in range(1, 8):
        for k in (1, 3, 16):
            assert th.bucket_overlap_bound(k, k, d) == 2 ** d
    assert th.bucket_overlap_bound(1, 4, 2) == 4
    assert th.bucket_overlap_bound(1, 4, 2, edge_ratio_mode="formula") == 1
    with pytest.raises(KdError):
        th.bucket_overlap_bound(1, 1, 2, edge_ratio_mode="bogus")


def test_bucket_overlap_bound_exact_roots():
    for d in range(1, 6):
        for k in range(1, 300):
            for b in (1, 2, 3):
                if k >= b:
                    assert th.bucket_overlap_bound(k, b, d) == overlap_enumerated(k, b, d)


def test_records_bound_examples():
    for d in range(1, 11):
        assert th.records_bound(1, 1, d) == 2 ** d
    assert th.records_bound(8, 1, 3) == 27
    assert th.records_bound(4, 1, 2) == 9
    assert th.records_bound(64, 1, 3) == 125


def test_records_bound_dominates_overlap_and_is_min_at_b1():
    for d in range(1, 8):
        for k in range(1, 200):
            assert th.records_bound(k, 1, d) >= th.bucket_overlap_bound(k, 1, d) * (1 - 1e-12)
            assert all(th.records_bound(k, 1, d) < th.records_bound(k, b, d) for b in (2, 3, 8))


def test_expected_probability_content():
    assert th.expected_probability_content(1, 1) == 0.5
    assert th.expected_probability_content(5, 9) == 0.5
    assert th.expected_probability_content(1, 99) == 0.01
    with pytest.raises(KdError):
        th.expected_probability_content(5, 4)


def test_beta_order_cdf_examples():
    assert th.beta_order_cdf(1, 1, 0.3) == 0.3
    assert th.beta_order_cdf(1, 2, 0.5) == 0.75
    for n in range(1, 12):
        for k in range(1, n + 1):
            assert th.beta_order_cdf(k, n, 1.0) == 1.0
            assert th.beta_order_cdf(k, n, 0.0) == 0.0
    with pytest.raises(KdError):
        th.beta_order_cdf(1, 2, 1.5)
    with pytest.raises(KdError):
        th.beta_order_cdf(3, 2, 0.5)


def test_beta_order_cdf_matches_integral_on_grid():
    worst = 0.0
    for n in range(1, 31):
        for k in range(1, n + 1):
            for i in range(11):
                c = i / 10
                worst = max(worst, abs(th.beta_order_cdf(k, n, c) - th.beta_order_cdf_integral(k, n, c)))
    assert worst <= 1e-10


def test_beta_order_cdf_monotonicity():
    for n in (1, 5, 17):
        for k in range(1, n + 1):
            vals = [th.beta_order_cdf(k, n, i / 50) for i in range(51)]
            assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
        for c in (0.2, 0.5, 0.8):
            vals = [th.beta_order_cdf(k, n, c) for k in range(1, n + 1)]
            assert all(a > b for a, b in zip(vals, vals[1:]))


def test_beta_mean():
    assert th.beta_mean(1, 1) == 0.5
    assert th.beta_mean(2, 3) == 0.4
    for n in (1, 5, 40):
        for k in range(1, n + 1):
            assert th.beta_mean(k, n - k + 1) == pytest.approx(th.expected_probability_content(k, n), rel=1e-15)
    with pytest.raises(KdError):
        th.beta_mean(0, 1)


@pytest.mark.parametrize("k,n", [(1, 1), (3, 5), (2, 7), (7, 7), (10, 19)])
def test_monte_carlo_order_stat(k, n):
    s = th.monte_carlo_order_stat(k, n, 100_000, seed=11)
    assert abs(s.estimate - th.beta_mean(k, n - k + 1)) <= 4 * s.std_error
    assert 0 <= s.estimate <= 1 and s.std_error > 0


def test_monte_carlo_order_stat_deterministic():
    assert th.monte_carlo_order_stat(3, 5, 1000, 4) == th.monte_carlo_order_stat(3, 5, 1000, 4)
    assert th.monte_carlo_order_stat(3, 5, 1000, 4) != th.monte_carlo_order_stat(3, 5, 1000, 5)
    with pytest.raises(KdError):
        th.monte_carlo_order_stat(6, 5, 10, 0)


def test_probability_content_k_equals_n():
    s = th.monte_carlo_probability_content("uniform-cube", 3, 3, 2000, seed=2, sub_draws=20_000)
    assert abs(s.estimate - 3 / 4) <= 4 * s.std_error


def test_probability_content_single_query_reproducible():
    a = th.monte_carlo_probability_content("uniform-cube", 9, 5, 1, seed=8)
    assert a == th.monte_carlo_probability_content("uniform-cube", 9, 5, 1, seed=8)
    assert 0.0 <= a.estimate <= 1.0 and a.std_error == 0.0


def test_probability_content_errors():
    with pytest.raises(KdError):
        th.monte_carlo_probability_content("gaussian", 9, 5, 10, 0)
    with pytest.raises(KdError):
        th.monte_carlo_probability_content("uniform-cube", 4, 5, 10, 0)


def test_interior_ball_uses_exact_volume():
    import numpy as np
    rng = np.random.default_rng(0)
    buf = np.empty((2, 10))
    v = th._ball_content_in_unit_cube(np.array([0.5, 0.5]), 0.1, rng, buf)
    assert v == pytest.approx(math.pi * 0.01, rel=1e-15)
    # A ball around a cube corner keeps a quarter of its area.
    buf = np.empty((2, 400_000))
    v = th._ball_content_in_unit_cube(np.array([0.0, 0.0]), 0.5, rng, buf)
    assert v == pytest.approx(math.pi * 0.25 / 4, abs=3e-3)


def test_theory_params():
    th.TheoryParams(n=10, d=2, k=3, b=1)
    with pytest.raises(KdError):
        th.TheoryParams(n=2, d=2, k=3)
    with pytest.raises(KdError):
        th.TheoryParams(n=2, d=0, k=1)
