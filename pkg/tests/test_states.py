import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from oracle import entropy_of, h2, vn_entropy
from qdiscord import states
from qdiscord.errors import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
    OutOfRange,
    StateFormatError,
)
from qdiscord.separability import ppt_test
from qdiscord.states import SeparableSpec, from_separable_spec, validate

BELL = np.zeros((4, 4))
BELL[0, 0] = BELL[0, 3] = BELL[3, 0] = BELL[3, 3] = 0.5

KET0, KET1 = np.array([1, 0]), np.array([0, 1])
PLUS, MINUS = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)


def test_validate_accepts_maximally_mixed():
    s = validate(np.eye(4) / 4, 2, 2)
    assert_allclose(s.spectrum, 0.25)


def test_validate_rejects_negative():
    with pytest.raises(NotPositive, match="-1.000e-01"):
        validate(np.diag([0.6, 0.6, -0.1, -0.1]), 2, 2)


def test_validate_bell():
    assert_allclose(validate(BELL, 2, 2).spectrum, [1, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize(
    "rho,err",
    [
        (np.array([[0.5, 0.1], [0.0, 0.5]]), NotHermitian),
        (np.eye(2) / 3, NotUnitTrace),
        (np.eye(3) / 3, DimensionMismatch),
    ],
)
def test_validate_errors(rho, err):
    with pytest.raises(err):
        validate(rho, 2, 1)


def test_state_is_immutable():
    s = validate(np.eye(4) / 4, 2, 2)
    with pytest.raises(ValueError):
        s.rho[0, 0] = 1.0


def test_pre_measurement():
    assert_allclose(states.pre_measurement([1, 0]).rho, np.diag([1, 0, 0, 0]))
    assert_allclose(states.pre_measurement([2**-0.5, 2**-0.5]).rho, BELL, atol=1e-15)
    s = states.pre_measurement([3**-0.5, (2 / 3) ** 0.5])
    assert abs(vn_entropy(s.rho_s) - h2(1 / 3)) < 1e-12
    assert abs(vn_entropy(s.rho_a) - h2(1 / 3)) < 1e-12
    with pytest.raises(NotNormalized):
        states.pre_measurement([1, 1])


def test_decohered_cnot():
    assert_allclose(states.decohered_cnot(1).rho, BELL)
    assert_array_equal(states.decohered_cnot(0).rho, np.diag([0.5, 0, 0, 0.5]))
    s = states.decohered_cnot(0.5)
    assert_allclose(s.spectrum, [0.75, 0.25, 0, 0], atol=1e-15)
    assert abs(vn_entropy(s.rho) - h2(0.75)) < 1e-12
    with pytest.raises(OutOfRange):
        states.decohered_cnot(1.5)


def test_werner():
    assert_allclose(states.werner(0).rho, np.eye(4) / 4)
    assert_allclose(states.werner(1).rho, BELL, atol=1e-15)
    assert_allclose(states.werner(1).rho, states.decohered_cnot(1).rho, atol=1e-15)
    s = states.werner(1 / 3)
    assert abs(vn_entropy(s.rho) - (1 + 0.5 * np.log2(3))) < 1e-12
    for z in (0.2, 0.7):
        s = states.werner(z)
        assert_allclose(s.spectrum, [(1 + 3 * z) / 4] + [(1 - z) / 4] * 3, atol=1e-14)
        assert_allclose(s.rho_s, np.eye(2) / 2, atol=1e-15)
        assert_allclose(s.rho_a, np.eye(2) / 2, atol=1e-15)
    with pytest.raises(OutOfRange):
        states.werner(-0.1)


def test_families_validate_over_parameter_range():
    for z in np.linspace(0, 1, 100):
        for make in (states.decohered_cnot, states.werner):
            s = make(z)
            validate(s.rho, 2, 2)


def test_separable_single_and_classical_mixture():
    s = from_separable_spec(SeparableSpec([1.0], [[(1.0, KET0, KET0)]]))
    assert_array_equal(s.rho, np.diag([1, 0, 0, 0]))
    s = from_separable_spec(SeparableSpec([0.5, 0.5], [[(1.0, KET0, KET0)], [(1.0, KET1, KET1)]]))
    assert_array_equal(s.rho, states.decohered_cnot(0).rho)


def test_separable_spec_errors():
    with pytest.raises(NotNormalized):
        SeparableSpec([1.0], [[(1.0, np.array([1, 1]), KET0)]])
    with pytest.raises(NotNormalized):
        SeparableSpec([0.4, 0.4], [[(1.0, KET0, KET0)], [(1.0, KET1, KET1)]])
    with pytest.raises(OutOfRange):
        SeparableSpec([1.5, -0.5], [[(1.0, KET0, KET0)], [(1.0, KET1, KET1)]])


def test_random_state_properties():
    a = states.random_state(2, 3, seed=4)
    b = states.random_state(2, 3, seed=4)
    assert_array_equal(a.rho, b.rho)
    assert a.spectrum[-1] > 0
    validate(a.rho, 2, 3)
    with pytest.raises(DimensionMismatch):
        states.random_state(1, 2, seed=0)


def test_random_state_mean_eigenvalue():
    means = [np.mean(np.linalg.eigvalsh(states.random_state(2, 2, seed).rho)) for seed in range(1000)]
    assert abs(np.mean(means) - 0.25) < 0.02 * 0.25


def test_random_separable_is_ppt(rng):
    for _ in range(20):
        kets = lambda d: (lambda v: v / np.linalg.norm(v))(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        w = rng.dirichlet(np.ones(3))
        comps = [[(0.5, kets(2), kets(3)), (0.5, kets(2), kets(3))] for _ in range(3)]
        s = from_separable_spec(SeparableSpec(list(w), comps))
        assert ppt_test(s).is_ppt


def test_json_roundtrip(tmp_path):
    s = states.random_state(2, 2, seed=1)
    path = tmp_path / "s.json"
    states.dump_state(s, path)
    back = states.load_state(path)
    assert back.allclose(s, atol=0)
    data = json.loads(path.read_text())
    assert set(data) == {"dim_s", "dim_a", "re", "im"}


@pytest.mark.parametrize(
    "text,err",
    [
        ("{not json", StateFormatError),
        ('{"dim_s": 2, "re": [[1]]}', StateFormatError),
        ('{"dim_s": 2, "dim_a": 2, "re": [[1, 0], [0]]}', StateFormatError),
        ('{"dim_s": 2, "dim_a": 2, "re": [[0.5, 0], [0, 0.5]]}', DimensionMismatch),
        ('{"dim_s": 1, "dim_a": 2, "re": [[0.6, 0], [0, 0.6]]}', NotUnitTrace),
    ],
)
def test_json_errors(tmp_path, text, err):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(err):
        states.load_state(path)
