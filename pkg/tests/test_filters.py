import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from lowdepth_gsee import oracles
from lowdepth_gsee.filters import (
    GaussianDerivativeFilter,
    GaussianFilter,
    choose_band_limit,
    choose_sigma,
    g_hat,
    g_value,
    gaussian_band_limit,
    gaussian_f_hat,
    gaussian_f_value,
)

UNIT = GaussianDerivativeFilter(1.0, 10.0)


def test_g_value_examples():
    assert g_value(UNIT, 0.0) == 0.0
    assert g_value(UNIT, 1.0) == pytest.approx(-math.exp(-0.5) / math.sqrt(2 * math.pi), rel=1e-15)
    assert g_value(UNIT, 1.0) == pytest.approx(-0.2419707, abs=1e-7)
    x = np.linspace(-4, 4, 101)
    np.testing.assert_allclose(g_value(UNIT, -x), -g_value(UNIT, x), atol=0)


def test_g_hat_matches_transform_of_g():
    # the Fourier transform of the spatial kernel, by quadrature, is the authority
    for sigma, xi in [(1.0, 1 / math.pi), (0.3, 0.7), (0.05, -4.0), (2.0, 0.0)]:
        f = GaussianDerivativeFilter(sigma, 100.0)
        assert complex(g_hat(f, xi)) == pytest.approx(oracles.fourier_quadrature(f, xi), abs=1e-9)
    assert complex(g_hat(UNIT, 1 / math.pi)) == pytest.approx(2j * math.exp(-2.0), rel=1e-14)


def test_g_hat_support_and_symmetry():
    f = GaussianDerivativeFilter(0.5, 2.0)
    assert g_hat(f, 0.0) == 0
    assert g_hat(f, 2.0 + 1e-9) == 0 and g_hat(f, -3.0) == 0
    xi = np.linspace(0, 2, 50)
    np.testing.assert_allclose(np.abs(g_hat(f, -xi)), np.abs(g_hat(f, xi)))


def test_phase(rng):
    assert UNIT.phase(2.0) == 0.25
    assert UNIT.phase(-2.0) == 0.75
    assert UNIT.phase(0.0) == 0.25
    xi = rng.uniform(-10, 10, 100)
    rebuilt = np.exp(2j * np.pi * UNIT.phase(xi)) * np.abs(g_hat(UNIT, xi))
    np.testing.assert_allclose(rebuilt, g_hat(UNIT, xi), atol=1e-14)
    np.testing.assert_array_equal(UNIT.phase_factor(xi), np.exp(2j * np.pi * UNIT.phase(xi)).round(15))


def test_l1_norm_examples():
    sigma = 0.37
    full = GaussianDerivativeFilter(sigma, 1e3 / sigma).l1_norm()
    assert full == pytest.approx(1 / (math.pi * sigma**2), rel=1e-14)
    assert full <= 4 / (math.pi * sigma**2)
    assert GaussianDerivativeFilter(1.0, 0.0).l1_norm() == 0.0
    f = GaussianDerivativeFilter(1.0, 1.0)
    assert f.l1_norm() == pytest.approx(oracles.l1_quadrature(f), rel=1e-12)
    assert f.l1_norm() == pytest.approx((1 - math.exp(-2 * math.pi**2)) / math.pi, rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 3.0), st.floats(0.05, 30.0))
def test_l1_norm_vs_quadrature(sigma, tsig):
    f = GaussianDerivativeFilter(sigma, tsig / sigma)
    assert f.l1_norm() == pytest.approx(oracles.l1_quadrature(f), rel=1e-9)
    assert f.l1_norm() <= 4 / (math.pi * sigma**2)


def test_sampler_support_and_symmetry():
    f = GaussianDerivativeFilter(0.02, 60.19)
    t = f.sample_frequency(np.random.default_rng(1), 10**6)
    assert np.all(np.abs(t) <= f.band_limit)
    assert abs(t.mean()) < 4 * t.std() / 1e3


def test_sampler_matches_analytic_cdf():
    sigma, T = 0.7, 1.1
    f = GaussianDerivativeFilter(sigma, T)
    a = 2 * (math.pi * sigma) ** 2
    t = np.abs(f.sample_frequency(np.random.default_rng(2), 10**6))
    cdf = lambda x: np.expm1(-a * np.asarray(x) ** 2) / math.expm1(-a * T * T)  # noqa: E731
    assert stats.kstest(t, cdf).statistic < 0.002


def test_sampler_density_proportional_to_magnitude():
    f = GaussianDerivativeFilter(0.3, 2.5)
    t = f.sample_frequency(np.random.default_rng(3), 400_000)
    hist, edges = np.histogram(t, bins=40, range=(-2.5, 2.5), density=True)
    mid = 0.5 * (edges[1:] + edges[:-1])
    expected = np.abs(g_hat(f, mid)) / oracles.l1_quadrature(f)
    assert np.max(np.abs(hist - expected)) < 0.03 * expected.max()


def test_sampler_rejects_zero_band():
    with pytest.raises(ValueError):
        GaussianDerivativeFilter(1.0, 0.0).sample_frequency(np.random.default_rng(0), 3)


def test_choose_sigma_examples():
    assert choose_sigma(0.244, 1e-3, 1e-3) == pytest.approx(0.0407, abs=1e-4)
    assert choose_sigma(0.448, 1e-3, 1e-3) == pytest.approx(0.0731, abs=1e-4)
    assert choose_sigma(0.1, 0.002, 0.5) == 0.2 * 0.1
    with pytest.raises(ValueError):
        choose_sigma(0.1, 1.0, 1.0)


def test_choose_band_limit_examples():
    s = choose_sigma(0.244, 1e-3, 1e-3)
    eps1 = 0.1 * 1e-3 * 1e-3 / (math.sqrt(2 * math.pi) * s**3)
    assert eps1 == pytest.approx(5.93e-4, rel=5e-3)
    assert choose_band_limit(s, eps1) == pytest.approx(42.5, abs=0.1)
    s = choose_sigma(0.448, 1e-3, 1e-3)
    eps1 = 0.1 * 1e-6 / (math.sqrt(2 * math.pi) * s**3)
    assert choose_band_limit(s, eps1) == pytest.approx(24.1, abs=0.1)
    assert choose_band_limit(0.1, 2e-3) < choose_band_limit(0.1, 1e-3)
    with pytest.raises(ValueError):
        choose_band_limit(1.0, 10.0)


def test_band_limit_bound_small_grid():
    sigma, eps1 = 0.2, 0.05
    f = GaussianDerivativeFilter(sigma, choose_band_limit(sigma, eps1))
    xs = np.linspace(-10 * sigma, 10 * sigma, 801)
    diff = np.abs(g_value(f, xs) - oracles.truncated_filter_quadrature(f, xs))
    assert diff.max() <= eps1 / 2
    assert diff.max() <= oracles.band_limit_tail_bound(sigma, f.band_limit)


def test_fact1_monotonicity():
    sigma = 0.3
    a = np.abs(g_value(GaussianDerivativeFilter(sigma, 1.0), np.linspace(0, sigma, 500)))
    b = np.abs(g_value(GaussianDerivativeFilter(sigma, 1.0), np.linspace(sigma, 8 * sigma, 500)))
    assert np.all(np.diff(a) > 0) and np.all(np.diff(b) < 0)


def test_gaussian_examples():
    g = GaussianFilter(1.0)
    assert gaussian_f_value(g, 0.0) == pytest.approx(0.3989423, abs=1e-7)
    assert gaussian_f_hat(g, 0.0) == 1.0
    x = np.linspace(-3, 3, 61)
    np.testing.assert_array_equal(gaussian_f_value(g, x), gaussian_f_value(g, -x))
    assert complex(gaussian_f_hat(g, 0.4)) == pytest.approx(oracles.fourier_quadrature(g, 0.4), abs=1e-10)


def test_gaussian_filter_l1_and_sampler():
    g = GaussianFilter(0.05, 4.0)
    assert g.l1_norm() == pytest.approx(oracles.l1_quadrature(g), rel=1e-10)
    t = g.sample_frequency(np.random.default_rng(4), 200_000)
    assert np.all(np.abs(t) <= 4.0)
    scale = 1 / (2 * math.pi * 0.05)
    cdf = lambda x: (stats.norm.cdf(x / scale) - stats.norm.cdf(-4 / scale)) / (1 - 2 * stats.norm.cdf(-4 / scale))  # noqa: E731
    assert stats.kstest(t, cdf).pvalue > 1e-4
    assert np.all(g.phase(t) == 0) and np.all(g.phase_factor(t) == 1)


@pytest.mark.parametrize("sigma, eps1", [(0.01, 1.0), (0.1, 0.3), (1.0, 1e-4)])
def test_gaussian_band_limit_tail(sigma, eps1):
    T = gaussian_band_limit(sigma, eps1)
    a = 2 * (math.pi * sigma) ** 2
    tail, _ = integrate.quad(lambda x: 2 * math.exp(-a * x * x), T, math.inf)
    assert tail <= eps1 / 2 * (1 + 1e-9)
    slightly_less, _ = integrate.quad(lambda x: 2 * math.exp(-a * x * x), 0.99 * T, math.inf)
    assert slightly_less > eps1 / 2


def test_gaussian_band_limit_large_budget():
    assert gaussian_band_limit(1.0, 100.0) == pytest.approx(1 / (2 * math.pi))


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_constructors_validate(bad):
    with pytest.raises(ValueError):
        GaussianFilter(bad)
    with pytest.raises(ValueError):
        GaussianDerivativeFilter(bad, 1.0)
    with pytest.raises(ValueError):
        GaussianDerivativeFilter(1.0, -1.0)
