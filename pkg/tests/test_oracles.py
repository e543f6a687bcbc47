import math

import numpy as np
import pytest

from lowdepth_gsee import oracles
from lowdepth_gsee.filters import GaussianDerivativeFilter, GaussianFilter
from lowdepth_gsee.spectral import SpectralMeasure


def test_convolution_exact_examples():
    f = GaussianDerivativeFilter(0.1, 30.0)
    one = SpectralMeasure((0.2,), (1.0,))
    assert oracles.convolution_exact(f, one, 0.2) == 0.0
    u = 0.05
    assert oracles.convolution_exact(f, one, 0.2 + u) == pytest.approx(f.value(u), rel=1e-15)
    sym = SpectralMeasure((-0.3, 0.3), (0.5, 0.5))
    assert oracles.convolution_exact(f, sym, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert oracles.convolution_exact(lambda v: v * 0 + 1.0, sym, 7.0) == pytest.approx(1.0)


def test_truncated_filter_examples():
    f = GaussianDerivativeFilter(1.0, 10.0)
    assert oracles.truncated_filter_quadrature(f, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert oracles.truncated_filter_quadrature(f, 1.0) == pytest.approx(-0.2419707245191434, abs=1e-8)


@pytest.mark.parametrize("sigma, T", [(0.5, 0.6), (0.1, 4.0), (1.0, 0.3)])
def test_tail_bound_holds(sigma, T):
    f = GaussianDerivativeFilter(sigma, T)
    xs = np.linspace(-6 * sigma, 6 * sigma, 301)
    diff = np.abs(f.value(xs) - oracles.truncated_filter_quadrature(f, xs))
    assert diff.max() <= oracles.band_limit_tail_bound(sigma, T)


def test_self_consistency_of_truncated_convolution():
    f = GaussianDerivativeFilter(0.05, 9.0)
    m = SpectralMeasure((0.1, 0.3, 0.32), (0.5, 0.3, 0.2))
    xs = np.linspace(0.0, 0.4, 21)
    a = oracles.truncated_convolution_quadrature(f, m, xs)
    b = oracles.truncated_convolution_series(f, m, xs)
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_l1_quadrature_gaussian_untruncated():
    # f_hat > 0, so its integral is the inverse transform at x = 0, i.e. f(0)
    g = GaussianFilter(0.3)
    assert oracles.l1_quadrature(g) == pytest.approx(1 / (math.sqrt(2 * math.pi) * 0.3), rel=1e-10)


def test_signal_exact():
    m = SpectralMeasure((0.25,), (1.0,))
    assert oracles.signal_exact(m, 1.0) == pytest.approx(-1j, abs=1e-15)


def test_random_instances_are_valid(rng):
    from lowdepth_gsee.spectral import epsilon_condition

    for _ in range(50):
        inst, eps = oracles.random_valid_instance(rng)
        assert inst.gap_promise_holds
        assert inst.eta_lb <= inst.measure.ground_weight
        assert epsilon_condition(inst.delta_lb, inst.eta_lb, eps)


def test_quadrature_needs_finite_band():
    with pytest.raises(ValueError):
        oracles.truncated_filter_quadrature(GaussianFilter(1.0), 0.0)
    with pytest.raises(TypeError):
        oracles.convolution_exact(object(), SpectralMeasure((0.0,), (1.0,)), 0.0)
