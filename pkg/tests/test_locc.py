import numpy as np
import pytest
from hypothesis import given, strategies as st

from gravwitness.linalg import I2, SZ, is_cptp_choi, phi_plus
from gravwitness.locc import (
    ClassicalRealization, SeparableDynamics, classical_decomposition, haar_unitary,
    random_realizations, random_separable_dynamics, realize_dynamics_pair, traced_out_pair,
)
from gravwitness.qubit_gravity import MEMORY_ONE, S_GATE, TwoQubitProtocol, dynamics_pair
from gravwitness.sdp import build_witness_sdp, solve_sdp, verify_solution
from gravwitness.witness import WitnessOperators


def _close(p, q, tol=1e-12):
    return np.max(np.abs(p.e1 - q.e1)) < tol and np.max(np.abs(p.e2 - q.e2)) < tol


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
def test_realization_matches_trace_out(seed, n1, n2, dm):
    sep = random_separable_dynamics(np.random.default_rng(seed), n1, n2, dm)
    real = classical_decomposition(sep)
    # memory weights p_i sum to 1 only when every A_i is unitary; what always holds is
    # sum_i p_i A_i^dag A_i = 1, i.e. sum_i p_i tr[A_i^dag A_i] / 2 = 1
    kept = [a for (a, b), _ in zip(sep.first_step, sep.second_step)
            if np.trace(b.conj().T @ b @ sep.memory_state).real >= 1e-14]
    weighted = sum(p * np.trace(a.conj().T @ a).real / 2 for p, a in zip(real.branch_probabilities, kept))
    assert abs(weighted - 1) < 1e-10
    assert _close(realize_dynamics_pair(real), traced_out_pair(sep))


def test_default_instances_match_trace_out():
    for sep in random_realizations(11, 20):
        assert len(sep.first_step) == 3 and all(len(b) == 2 for b in sep.second_step)
        assert _close(realize_dynamics_pair(classical_decomposition(sep)), traced_out_pair(sep))


def test_unitary_probe_branches_sum_to_one(rng):
    u = haar_unitary(2, rng)
    sep = SeparableDynamics([(u, b) for b in (np.diag([1.0, 0]), np.diag([0, 1.0]))],
                            [[(I2, I2)], [(I2, I2)]], np.eye(2) / 2)
    assert sum(classical_decomposition(sep).branch_probabilities) == pytest.approx(1.0, abs=1e-12)


def test_single_unitary_pair(rng):
    a, b = haar_unitary(2, rng), haar_unitary(2, rng)
    sep = SeparableDynamics([(a, b)], [[(I2, I2)]], MEMORY_ONE)
    real = classical_decomposition(sep)
    assert len(real.kraus_first) == 1 and np.allclose(real.kraus_first[0], a)


def test_local_protocol_recast():
    # theta = 0: V = S (x) S, and V Z V = (S Z S) (x) S^2
    sep = SeparableDynamics([(S_GATE, S_GATE)], [[(S_GATE @ SZ, S_GATE)]], MEMORY_ONE)
    assert _close(realize_dynamics_pair(classical_decomposition(sep)), dynamics_pair(TwoQubitProtocol(0.0)))


def test_identity_realization():
    pair = realize_dynamics_pair(ClassicalRealization([I2], [[I2]]))
    assert np.allclose(pair.e1, phi_plus(2)) and np.allclose(pair.e2, phi_plus(2))


def test_dephasing_first_step(rng):
    k0, k1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    real = ClassicalRealization([k0, k1], [[haar_unitary(2, rng)], [haar_unitary(2, rng)]])
    pair = realize_dynamics_pair(real)
    assert is_cptp_choi(pair.e1) and is_cptp_choi(pair.e2)


def test_zero_probability_branch_pruned(rng):
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    u, v = haar_unitary(2, rng), haar_unitary(2, rng)
    sep = SeparableDynamics([(u, p0), (v, p1)], [[(I2, I2)], [(I2, I2)]], p0)
    real = classical_decomposition(sep)
    assert len(real.kraus_first) == 1 and np.allclose(real.kraus_first[0], u)
    assert _close(realize_dynamics_pair(real), traced_out_pair(sep))


def test_incomplete_input_rejected(rng):
    with pytest.raises(ValueError):
        SeparableDynamics([(0.5 * I2, I2)], [[(I2, I2)]], MEMORY_ONE)
    with pytest.raises(ValueError):
        SeparableDynamics([(I2, I2)], [[(I2, 0.5 * I2)]], MEMORY_ONE)
    with pytest.raises(ValueError):
        SeparableDynamics([(I2, I2)], [], MEMORY_ONE)
    with pytest.raises(ValueError):
        ClassicalRealization([0.9 * I2], [[I2]])


def test_generation_deterministic():
    a, b = random_realizations(5, 3), random_realizations(5, 3)
    for x, y in zip(a, b):
        assert np.array_equal(x.memory_state, y.memory_state)
        assert all(np.array_equal(p[0], q[0]) for p, q in zip(x.first_step, y.first_step))


def test_negative_control_analytical():
    w = WitnessOperators.analytical(1.0 / 8.0)
    for sep in random_realizations(42, 50):
        assert w.value(realize_dynamics_pair(classical_decomposition(sep))) >= -1e-7


def test_negative_control_sdp_sample():
    for sep in random_realizations(99, 3, memory_dim=3):
        prob = build_witness_sdp(realize_dynamics_pair(classical_decomposition(sep)))
        sol = solve_sdp(prob)
        assert verify_solution(prob, sol).feasible and sol.objective >= -1e-7
