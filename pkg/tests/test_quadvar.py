import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import bilinear_covariance
from hurstqv import (
    DomainError,
    SamplePath,
    UniformGrid,
    expected_qv,
    generate_fbm_paths,
    increments,
    normalized_qv,
    qv_constant,
    qv_limit,
    raw_quadratic_sum,
    running_qv,
    second_order_increment_covariance,
    sup_deviation,
)
from hurstqv.quadvar import compensated_cumsum

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_increments_examples(make_path):
    p = make_path([0, 1, 2, 3])
    assert list(increments(p, 1)) == [1, 1, 1]
    assert list(increments(p, 2)) == [0, 0]
    assert list(increments(make_path([0, 1, 0, 1]), 2)) == [-2, 2]


def test_increments_need_enough_points(make_path):
    with pytest.raises(DomainError):
        increments(make_path([0, 1]), 2)
    with pytest.raises(DomainError):
        increments(make_path([0, 1, 2]), 3)


def test_raw_sum_examples(make_path):
    assert raw_quadratic_sum(make_path([0, 1, 2, 3]), 1) == 3
    assert raw_quadratic_sum(make_path([0, 1, 0, 1]), 2) == 8
    for order in (1, 2):
        assert raw_quadratic_sum(make_path([2.5] * 7), order) == 0


def test_qv_constants():
    assert qv_constant(1, 0.8) == 1.0
    assert qv_constant(2, 0.5) == 2.0
    hs = np.linspace(0.01, 0.99, 50)
    c2 = [qv_constant(2, h) for h in hs]
    assert np.all(np.diff(c2) < 0)
    assert 4 - 2 ** (2 * 0.999999) == pytest.approx(0.0, abs=1e-5)


@given(arrays(float, st.integers(1, 300), elements=finite))
def test_compensated_cumsum_matches_fsum(x):
    got = compensated_cumsum(x)
    for k in (0, len(x) // 2, len(x) - 1):
        exact = math.fsum(x[: k + 1])
        bound = 2 * np.finfo(float).eps * math.fsum(np.abs(x[: k + 1])) + 1e-300
        assert abs(got[k] - exact) <= bound


def test_compensated_cumsum_beats_naive_summation():
    x = np.array([1.0, 1e-16] * 50000)
    exact = math.fsum(x)
    assert compensated_cumsum(x)[-1] == exact
    assert np.cumsum(x)[-1] != exact


def test_compensated_cumsum_batched_axis():
    x = np.arange(12.0).reshape(3, 4)
    assert np.array_equal(compensated_cumsum(x, axis=0), np.cumsum(x, axis=0))
    assert np.array_equal(compensated_cumsum(x), np.cumsum(x, axis=1))


@given(arrays(float, st.integers(3, 40), elements=st.floats(-100, 100)), st.integers(-6, 6))
def test_raw_sum_scaling_exact_for_powers_of_two(v, e):
    p = SamplePath(UniformGrid(len(v) - 1), v)
    c = 2.0**e
    for order in (1, 2):
        assert raw_quadratic_sum(p.scaled(c), order) == c * c * raw_quadratic_sum(p, order)


@given(arrays(float, st.integers(3, 40), elements=st.floats(-100, 100)), st.floats(-50, 50))
def test_raw_sum_scaling_any_factor(v, c):
    p = SamplePath(UniformGrid(len(v) - 1), v)
    for order in (1, 2):
        assert raw_quadratic_sum(p.scaled(c), order) == pytest.approx(c * c * raw_quadratic_sum(p, order), rel=1e-13, abs=1e-300)


@given(st.floats(-5, 5), st.just(0.0) | st.floats(1e-3, 5) | st.floats(-5, -1e-3), st.integers(2, 50))
def test_order2_vanishes_on_affine_paths(a, b, n):
    t = UniformGrid(n).points()
    p = SamplePath(UniformGrid(n), a + b * t)
    assert raw_quadratic_sum(p, 2) == pytest.approx(0.0, abs=1e-20 + 1e-24 * n)
    if b != 0:
        assert raw_quadratic_sum(p, 1) > 0


def test_normalized_qv_linear_path():
    for n in (4, 10, 100):
        g = UniformGrid(n)
        p = SamplePath(g, g.points())
        for H in (0.5, 0.7):
            assert normalized_qv(p, 1, H) == pytest.approx(n ** (2 * H - 2), rel=1e-12)


def test_normalized_qv_brownian_equals_raw(make_path):
    p = make_path([0.0, 0.3, -0.1, 0.4, 0.2])
    for order in (1, 2):
        assert normalized_qv(p, order, 0.5) == raw_quadratic_sum(p, order)


@pytest.mark.parametrize("H", [0.6, 0.75])
def test_normalized_qv_of_fbm_near_limit(H):
    grid = UniformGrid(4096, 1.0)
    paths = generate_fbm_paths(grid, H, 40, seed=2)
    v1 = [normalized_qv(SamplePath(grid, p), 1, H) for p in paths]
    v2 = [normalized_qv(SamplePath(grid, p), 2, H) for p in paths]
    assert np.median(v1) == pytest.approx(1.0, abs=0.03)
    assert np.median(v2) == pytest.approx(4 - 2 ** (2 * H), abs=0.03)


def test_running_qv_examples(make_path):
    p = make_path([0, 1, 3])
    assert running_qv(p, 1, 0.5, 0.5) == 1.0
    assert running_qv(p, 1, 0.5, 0.2) == 0.0
    assert running_qv(p, 2, 0.5, 0.5) == 0.0
    for order in (1, 2):
        assert running_qv(p, order, 0.7, 1.0) == normalized_qv(p, order, 0.7)
    with pytest.raises(DomainError):
        running_qv(p, 1, 0.5, 1.5)


def test_running_qv_monotone_and_right_continuous():
    grid = UniformGrid(50, 2.0)
    p = SamplePath(grid, generate_fbm_paths(grid, 0.7, 1, seed=8)[0])
    ts = np.linspace(0, 2.0, 401)
    for order in (1, 2):
        vals = [running_qv(p, order, 0.7, t) for t in ts]
        assert np.all(np.diff(vals) >= 0)
        # constant between grid points, jumping exactly at them
        k = 10
        t_k, t_next = grid.point(k), grid.point(k + 1)
        assert running_qv(p, order, 0.7, t_k) == running_qv(p, order, 0.7, 0.5 * (t_k + t_next))


def test_expected_qv_examples():
    g = UniformGrid(4, 1.0)
    assert expected_qv(1.0, g, 0.7, 1) == pytest.approx(1.0, rel=1e-15)
    assert expected_qv(1.0, g, 0.5, 2) == pytest.approx(2.0 * 3 / 4)
    assert expected_qv(0.3, g, 0.7, 1) == pytest.approx(0.25, rel=1e-15)
    with pytest.raises(DomainError):
        expected_qv(1.1, g, 0.7, 1)


def test_expected_qv_order2_counts_summed_terms():
    g = UniformGrid(8, 1.0)
    H = 0.7
    c2 = 4 - 2 ** (2 * H)
    # r(t) = 3 -> two second differences summed
    assert expected_qv(3 / 8, g, H, 2) == pytest.approx(c2 * 2 / 8, rel=1e-14)
    # with T = 1 this approaches c2 * rho(t) as n grows; at t = T it differs by one term
    assert expected_qv(1.0, g, H, 2) == pytest.approx(c2 * 7 / 8, rel=1e-14)


def test_expected_qv_general_horizon_scales_as_t_power():
    g = UniformGrid(10, 3.0)
    assert expected_qv(3.0, g, 0.7, 1) == pytest.approx(3.0**1.4, rel=1e-14)


@pytest.mark.parametrize("H", [0.55, 0.7, 0.9])
def test_per_term_expectation_order2_matches_bilinear(H):
    n, T = 12, 2.0
    expected = (4 - 2 ** (2 * H)) * (T / n) ** (2 * H)
    assert second_order_increment_covariance(5, 5, n, T, H, 2) == pytest.approx(expected, rel=1e-13)
    assert bilinear_covariance(5, 5, n, T, H, 2) == pytest.approx(expected, rel=1e-10)


def test_running_expectation_matches_empirical_mean():
    grid = UniformGrid(32, 1.0)
    paths = generate_fbm_paths(grid, 0.7, 4000, seed=6)
    for order in (1, 2):
        vals = np.array([running_qv(SamplePath(grid, p), order, 0.7, 0.5) for p in paths])
        se = vals.std() / math.sqrt(vals.size)
        assert abs(vals.mean() - expected_qv(0.5, grid, 0.7, order)) < 4 * se


def test_qv_limit_values():
    assert qv_limit(1, 0.7) == 1.0
    assert qv_limit(2, 0.75) == pytest.approx(4 - 2**1.5, rel=1e-15)
    assert 4 - 2**1.5 == pytest.approx(1.17157, abs=1e-5)
    assert qv_limit(1, 0.7, horizon=2.0) == pytest.approx(2.0**1.4)
    assert qv_limit(1, 0.7, horizon=1.0, g2_integral=4.0) == 4.0


def test_sup_deviation_zero_path():
    for n in (4, 64):
        p = SamplePath(UniformGrid(n, 1.0), np.zeros(n + 1))
        assert sup_deviation(p, 1, 0.7) == pytest.approx(1.0, rel=1e-13)
        p2 = SamplePath(UniformGrid(n, 2.5), np.zeros(n + 1))
        assert sup_deviation(p2, 1, 0.7) == pytest.approx(2.5**1.4, rel=1e-13)


def test_sup_deviation_single_term(make_path):
    H = 0.7
    p = make_path([0.0, 0.4], horizon=1.0)
    assert sup_deviation(p, 1, H) == pytest.approx(abs(0.16 - 1.0), rel=1e-14)
    p2 = make_path([0.0, 0.4, 0.1], horizon=1.0)
    e2 = (4 - 2 ** (2 * H)) * 0.5 ** (2 * H)
    d2 = (0.1 - 0.8) ** 2
    assert sup_deviation(p2, 2, H) == pytest.approx(2 ** (2 * H - 1) * abs(d2 - e2), rel=1e-13)


def test_sup_deviation_matches_running_definition():
    grid = UniformGrid(40, 1.0)
    p = SamplePath(grid, generate_fbm_paths(grid, 0.7, 1, seed=4)[0])
    for order in (1, 2):
        brute = max(
            abs(running_qv(p, order, 0.7, t) - expected_qv(t, grid, 0.7, order)) for t in grid.points()
        )
        assert sup_deviation(p, order, 0.7) == pytest.approx(brute, rel=1e-12)


def test_sup_deviation_batch_matches_single():
    grid = UniformGrid(30, 1.0)
    paths = generate_fbm_paths(grid, 0.6, 5, seed=1)
    batch = sup_deviation(paths, 2, 0.6, grid=grid)
    single = [sup_deviation(SamplePath(grid, p), 2, 0.6) for p in paths]
    assert np.allclose(batch, single, rtol=1e-15)
    with pytest.raises(DomainError):
        sup_deviation(paths, 1, 0.6)


def test_bad_order_rejected(make_path):
    with pytest.raises(DomainError):
        raw_quadratic_sum(make_path([0, 1, 2]), 0)
