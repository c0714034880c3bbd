import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from oracle import vn_entropy
from qdiscord import measurement as m
from qdiscord import states
from qdiscord.errors import DimensionMismatch, InvalidMeasurement, NonzeroDiscord
from qdiscord.measurement import ProjectiveMeasurement, qubit_basis


def same_projector_set(a, b, atol=1e-12):
    used = set()
    for p in a.projectors:
        hit = [k for k, q in enumerate(b.projectors) if k not in used and np.allclose(p, q, atol=atol)]
        if not hit:
            return False
        used.add(hit[0])
    return len(used) == len(b.projectors)


def test_qubit_basis_fixtures():
    meas = qubit_basis(0.0, 0.3)
    assert_allclose(meas.projectors[0], np.diag([1, 0]))
    assert_allclose(meas.projectors[1], np.diag([0, 1]))
    meas = qubit_basis(np.pi / 4, 0.0)
    assert_allclose(meas.projectors[0], np.full((2, 2), 0.5), atol=1e-15)
    assert_allclose(meas.projectors[1], [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)


def test_qubit_basis_residuals():
    p0, p1 = qubit_basis(1.0, 1.0).projectors
    assert np.abs(p0 + p1 - np.eye(2)).max() < 1e-12
    assert np.abs(p0 @ p1).max() < 1e-12
    assert qubit_basis(1.0, 1.0).ranks == (1, 1)


@pytest.mark.parametrize("theta,phi", [(0.3, 1.0), (1.2, -0.4), (2.5, 4.0)])
def test_qubit_basis_theta_period(theta, phi):
    assert same_projector_set(qubit_basis(theta, phi), qubit_basis(theta + np.pi, phi))


def test_invalid_measurements():
    with pytest.raises(InvalidMeasurement):
        ProjectiveMeasurement((np.diag([1, 0]),))  # incomplete
    with pytest.raises(InvalidMeasurement):
        ProjectiveMeasurement((np.diag([1, 0]), np.diag([1, 1])))  # overlapping
    with pytest.raises(InvalidMeasurement):
        ProjectiveMeasurement((np.array([[1, 1], [0, 0]]), np.array([[0, -1], [0, 1]])))  # not Hermitian


def test_multi_rank_ranks():
    meas = ProjectiveMeasurement((np.diag([1, 1, 0, 0]), np.diag([0, 0, 1, 1])))
    assert meas.ranks == (2, 2) and not meas.is_rank1


def test_condition_product_state(rng):
    rs = states.random_state(2, 2, 0).rho_s
    ra = states.random_state(2, 3, 1).rho_a
    prod = states.validate(np.kron(rs, ra), 2, 3)
    meas = m.random_basis(3, rng)
    for mode in m.MODES:
        for cond in m.condition(prod, meas, mode).s_marginals():
            assert_allclose(cond, rs, atol=1e-12)


def test_condition_bell_computational():
    ens = m.condition(states.bell_state(), qubit_basis(0, 0), "traced")
    assert_allclose(ens.probabilities, [0.5, 0.5])
    assert_allclose(ens.outcomes[0].state, np.diag([1, 0]), atol=1e-15)
    assert_allclose(ens.outcomes[1].state, np.diag([0, 1]), atol=1e-15)


def test_condition_einselected_diagonal_basis():
    # direct 4x4 algebra: kron(I, |v><v|) rho kron(I, |v><v|) traced over A
    ens = m.condition(states.decohered_cnot(0), qubit_basis(np.pi / 4, 1.0), "traced")
    assert_allclose(ens.probabilities, [0.5, 0.5], atol=1e-15)
    for o in ens.outcomes:
        assert_allclose(o.state, np.eye(2) / 2, atol=1e-15)


def test_condition_projected_matches_explicit_lift(rng):
    s = states.random_state(2, 3, 7)
    meas = m.random_basis(3, rng)
    ens = m.condition(s, meas, "projected")
    for o, proj in zip(ens.outcomes, meas.projectors):
        big = np.kron(np.eye(2), proj)
        p = np.trace(big @ s.rho).real
        assert abs(o.probability - p) < 1e-12
        assert_allclose(o.state.rho, big @ s.rho @ big / p, atol=1e-12)
        states.validate(o.state.rho, 2, 3)


def test_condition_flags_zero_probability_outcome():
    ens = m.condition(states.validate(np.diag([1.0, 0, 0, 0]), 2, 2), qubit_basis(0, 0))
    assert ens.outcomes[1].probability == 0.0
    assert not ens.outcomes[1].defined and ens.s_marginals()[1] is None


def test_condition_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        m.condition(states.random_state(2, 3, 0), qubit_basis(0, 0))
    with pytest.raises(ValueError):
        m.condition(states.bell_state(), qubit_basis(0, 0), "sideways")


def test_dephase_fixtures():
    assert_allclose(m.dephase(states.bell_state(), qubit_basis(0, 0)).rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    for z in np.linspace(0, 1, 7):
        assert_allclose(m.dephase(states.decohered_cnot(z), qubit_basis(0, 1)).rho,
                        states.decohered_cnot(0).rho, atol=1e-15)
    block = states.decohered_cnot(0)
    assert_allclose(m.dephase(block, qubit_basis(0, 0)).rho, block.rho, atol=1e-12)


def test_dephase_idempotent_trace_entropy(rng):
    for seed in range(20):
        s = states.random_state(2, 3, seed)
        meas = m.random_basis(3, rng)
        once = m.dephase(s, meas)
        twice = m.dephase(once, meas)
        assert np.abs(once.rho - twice.rho).max() < 1e-12
        assert abs(np.trace(once.rho) - 1) < 1e-12
        assert vn_entropy(once.rho) >= vn_entropy(s.rho) - 1e-10


def test_superselection_residual():
    assert m.superselection_residual(states.decohered_cnot(0), qubit_basis(0, 0)) == 0.0
    assert abs(m.superselection_residual(states.bell_state(), qubit_basis(0, 0)) - np.sqrt(2) / 2) < 1e-15
    s = states.random_state(2, 2, 3)
    assert m.superselection_residual(s, ProjectiveMeasurement.identity(2)) < 1e-15


def test_classical_decomposition_uniform():
    parts = m.classical_decomposition(states.werner(0), qubit_basis(0, 0))
    assert len(parts) == 4
    assert_allclose([w for w, _ in parts], 0.25)
    diag = sorted(int(np.argmax(np.diag(s.rho).real)) for _, s in parts)
    assert diag == [0, 1, 2, 3]


def test_classical_decomposition_einselected():
    parts = m.classical_decomposition(states.decohered_cnot(0), qubit_basis(0, 0))
    assert len(parts) == 2
    assert_allclose([w for w, _ in parts], [0.5, 0.5])
    assert_allclose(parts[0][1].rho, np.diag([1, 0, 0, 0]), atol=1e-15)
    assert_allclose(parts[1][1].rho, np.diag([0, 0, 0, 1]), atol=1e-15)


def test_classical_decomposition_reconstructs_dephased(rng):
    for seed in range(10):
        meas = m.random_basis(3, rng)
        s = m.dephase(states.random_state(3, 3, seed), meas)
        parts = m.classical_decomposition(s, meas)
        assert abs(sum(w for w, _ in parts) - 1) < 1e-10
        assert np.linalg.norm(m.reconstruct(parts) - s.rho) <= 1e-8
        for _, pure in parts:
            assert np.trace(pure.rho @ pure.rho).real >= 1 - 1e-8


@pytest.mark.parametrize("theta", [0.0, 0.4, np.pi / 4])
def test_classical_decomposition_bell_fails(theta):
    with pytest.raises(NonzeroDiscord):
        m.classical_decomposition(states.bell_state(), qubit_basis(theta, 1.0))


def test_conjugated_measurement():
    u = np.array([[0, 1], [1, 0]])
    meas = qubit_basis(0, 0).conjugated(u)
    assert_array_equal(meas.projectors[0], np.diag([0, 1]))
