import numpy as np
import pytest

from lowdepth_gsee.spectral import ProblemInstance, SpectralMeasure, load_instance, shipped_instance_path


@pytest.fixture
def demo():
    return load_instance(shipped_instance_path("demo"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def single_level(e0=0.3, delta_lb=0.1, eta_lb=0.5, window=(0.0, 1.0)):
    return ProblemInstance(SpectralMeasure((e0,), (1.0,)), delta_lb, eta_lb, *window)
