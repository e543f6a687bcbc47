import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowdepth_gsee.spectral import (
    SEPARATION_CONST,
    Accuracy,
    InstanceError,
    ProblemInstance,
    SpectralMeasure,
    epsilon_condition,
    from_dense_hamiltonian,
    load_instance,
    max_admissible_epsilon,
    min_admissible_gap,
    parse_instance,
    resolve_instance,
    validate_epsilon,
)


def test_measure_accessors():
    m = SpectralMeasure.from_levels([(0.4, 0.25), (0.3, 0.6), (0.55, 0.15)])
    assert m.energies == (0.3, 0.4, 0.55)
    assert (m.ground_energy, m.ground_weight, m.count) == (0.3, 0.6, 3)
    assert m.gap == pytest.approx(0.1)
    assert SpectralMeasure((1.0,), (1.0,)).gap == math.inf


@pytest.mark.parametrize(
    "energies, weights",
    [
        ((), ()),
        ((0.0, 0.0), (0.5, 0.5)),
        ((0.1, 0.0), (0.5, 0.5)),
        ((0.0, 1.0), (1.2, -0.2)),
        ((0.0, 1.0), (0.5, 0.4)),
        ((0.0,), (1.0, 0.0)),
    ],
)
def test_measure_rejects_bad_input(energies, weights):
    with pytest.raises(InstanceError):
        SpectralMeasure(energies, weights)


def test_dense_diagonal():
    m = from_dense_hamiltonian(np.diag([0.1, 0.5]), np.diag([1.0, 0.0]))
    assert m.levels == [(0.1, 1.0), (0.5, 0.0)]


def test_dense_degenerate_merge():
    m = from_dense_hamiltonian(np.eye(2), np.eye(2) / 2)
    assert m.levels == [(1.0, 1.0)]


def test_dense_pauli_x():
    m = from_dense_hamiltonian(0.3 * np.array([[0, 1], [1, 0]]), np.diag([1.0, 0.0]))
    np.testing.assert_allclose(m.energies, [-0.3, 0.3], atol=1e-14)
    np.testing.assert_allclose(m.weights, [0.5, 0.5], atol=1e-14)


@pytest.mark.parametrize(
    "H, rho",
    [
        (np.array([[0, 1], [0, 0]]), np.diag([1.0, 0.0])),
        (np.eye(2), np.diag([0.6, 0.6])),
        (np.eye(2), np.diag([1.5, -0.5])),
        (np.eye(2), np.eye(3) / 3),
        (np.eye(65), np.eye(65) / 65),
    ],
)
def test_dense_errors(H, rho):
    with pytest.raises(InstanceError):
        from_dense_hamiltonian(H, rho)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31))
def test_dense_random_consistency(n, seed):
    r = np.random.default_rng(seed)
    A = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    H = (A + A.conj().T) / 2
    B = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    rho = B @ B.conj().T
    rho /= np.trace(rho).real
    m = from_dense_hamiltonian(H, rho)
    assert math.fsum(m.weights) == pytest.approx(1.0, abs=1e-10)
    assert m.mean_energy() == pytest.approx(np.trace(rho @ H).real, abs=1e-8)


def test_instance_invariants():
    m = SpectralMeasure((0.0, 1.0), (0.3, 0.7))
    with pytest.raises(InstanceError):
        ProblemInstance(m, 0.5, 0.4, -1, 2)  # eta above p0
    with pytest.raises(InstanceError):
        ProblemInstance(m, 0.5, 0.2, 0.1, 2)  # window misses E0
    with pytest.raises(InstanceError):
        ProblemInstance(m, 0.0, 0.2, -1, 2)
    wide = ProblemInstance(m, 2.0, 0.2, -1, 2)
    assert not wide.gap_promise_holds
    assert ProblemInstance(m, 0.5, 0.2, -1, 2).gap_promise_holds


def test_accuracy_ranges():
    with pytest.raises(InstanceError):
        Accuracy(0.0, 0.1)
    with pytest.raises(InstanceError):
        Accuracy(0.1, 1.0)


def test_parse_roundtrip(tmp_path, demo):
    p = tmp_path / "i.json"
    p.write_text(json.dumps(demo.to_dict()))
    assert load_instance(p) == demo
    assert resolve_instance(str(p)) == demo
    assert resolve_instance("demo") == demo


@pytest.mark.parametrize(
    "patch",
    [
        {"weights": [0.6, 0.4]},
        {"energies": "0.3"},
        {"delta_lb": None},
    ],
)
def test_parse_rejects(demo, patch):
    doc = {**demo.to_dict(), **patch}
    if patch.get("delta_lb", 0) is None:
        del doc["delta_lb"]
    with pytest.raises(InstanceError):
        parse_instance(doc)


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InstanceError):
        load_instance(p)
    with pytest.raises(InstanceError):
        resolve_instance(str(tmp_path / "missing.json"))


def test_validate_epsilon_examples(demo):
    ok = validate_epsilon(demo, Accuracy(0.002, 0.1))
    assert ok.ok and ok.max_epsilon == pytest.approx(SEPARATION_CONST * 0.02, rel=1e-9)
    assert ok.max_epsilon == pytest.approx(9.18e-3, abs=1e-5)
    bad = validate_epsilon(demo, Accuracy(0.05, 0.1))
    assert not bad.ok and bad.max_epsilon < 0.05
    assert validate_epsilon(demo, Accuracy(1e-12, 0.1)).ok


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(0.01, 0.99), st.floats(0.0, 1.0))
def test_admissible_epsilon_is_sharp_and_monotone(delta, eta, frac):
    e_max = max_admissible_epsilon(delta, eta)
    assert epsilon_condition(delta, eta, e_max)
    assert not epsilon_condition(delta, eta, e_max * (1 + 1e-9))
    assert epsilon_condition(delta, eta, e_max * max(frac, 1e-6))


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 0.05), st.floats(0.01, 0.99))
def test_min_admissible_gap(eps, eta):
    d = min_admissible_gap(eps, eta)
    assert epsilon_condition(d, eta, eps)
    assert not epsilon_condition(d * (1 - 1e-9), eta, eps)
