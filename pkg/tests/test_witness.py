import numpy as np
import pytest
from hypothesis import given, strategies as st

from gravwitness.linalg import I2, SX, SY, SZ, apply_choi, min_eig, phi_plus
from gravwitness.locc import classical_decomposition, random_realizations, realize_dynamics_pair
from gravwitness.qubit_gravity import TwoQubitProtocol, dynamics_pair
from gravwitness.witness import (
    CorrelatorSet, WitnessOperators, analytical_certificate, analytical_witness, certify_witness,
    closed_form_witness, correlator, correlators, decomposition_lhs, kappa_state, pt_db, tp_slack,
)

lams = st.floats(1e-3, 1e3)


def test_witness_operator_coefficients():
    w = WitnessOperators.analytical(1.0)
    assert np.allclose(w.coefficients, [2, -1, -2 / 3, -2 / 3])
    assert np.trace(w.W1).real == pytest.approx(8.0)
    assert np.trace(w.W2).real == pytest.approx(0.0)
    with pytest.raises(ValueError):
        WitnessOperators.analytical(0.0)


@given(st.floats(0, np.pi / 2), lams)
def test_operator_and_correlator_forms_agree(th, lam):
    pair = dynamics_pair(TwoQubitProtocol(th))
    w_ops = WitnessOperators.analytical(lam).value(pair)
    w_corr = analytical_witness(correlators(pair), lam)
    assert w_ops == pytest.approx(w_corr, rel=1e-12, abs=1e-12 * lam)
    assert w_corr == pytest.approx(closed_form_witness(th, lam), rel=1e-9, abs=1e-9 * lam)


def test_value_at_quarter_pi():
    assert closed_form_witness(np.pi / 4) == pytest.approx(-2 / 3)
    pair = dynamics_pair(TwoQubitProtocol(np.pi / 4))
    assert analytical_witness(correlators(pair)) == pytest.approx(-2 / 3, abs=1e-12)


def test_correlator_identity(rng):
    z = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    q, _ = np.linalg.qr(z)
    kraus = [q[:2], q[2:]]
    from gravwitness.linalg import choi_from_kraus
    e = choi_from_kraus(kraus)
    for si in (I2, SX, SZ):
        for so in (I2, SX, SZ):
            direct = np.trace(so @ apply_choi(e, si.T)).real
            assert correlator(e, si, so) == pytest.approx(direct, abs=1e-12)


def test_correlator_rejects_sigma_y_and_bad_input():
    with pytest.raises(ValueError):
        correlator(phi_plus(2), SY, SZ)
    with pytest.raises(ValueError):
        correlator(np.eye(8), SZ, SZ)
    bad = phi_plus(2).astype(complex)
    bad[0, 3] += 0.5j
    bad[3, 0] += 0.5j  # anti-Hermitian perturbation gives an imaginary correlator
    with pytest.raises(ValueError):
        correlator(bad, SX, SX)


def test_correlator_set_pauli_bound():
    with pytest.raises(ValueError):
        CorrelatorSet(2.5, 0, 0)


@given(lams)
def test_analytical_certificate_valid(lam):
    cert = certify_witness(WitnessOperators.analytical(lam))
    assert cert.valid
    assert cert.min_eig_Q >= -1e-10 * max(1.0, lam)
    assert cert.min_eig_R >= -1e-10 * max(1.0, lam)


def test_certificate_pieces():
    k = kappa_state()
    assert np.linalg.norm(k) == pytest.approx(1.0)
    r, y = analytical_certificate(1.0)
    q = decomposition_lhs(WitnessOperators.analytical(1.0)) - pt_db(r) - tp_slack(y)
    assert min_eig(q) > -1e-12
    assert min_eig(q) < 1e-12  # tight: Q is singular
    assert np.allclose(q, q.conj().T)


def test_unit_constant_variant_is_not_a_witness():
    # A constant of 1 instead of 2 on the identity term goes negative on a local unitary process.
    w = WitnessOperators(1.0, -1.0, -2 / 3, -2 / 3)
    assert w.value(dynamics_pair(TwoQubitProtocol(0.0))) == pytest.approx(-2 / 3)
    r = np.outer(kappa_state(), kappa_state().conj())
    assert not certify_witness(w, R=r).valid


def test_plain_decomposition_does_not_certify_analytical_witness():
    w = WitnessOperators.analytical(1.0)
    r, _ = analytical_certificate(1.0)
    assert not certify_witness(w, R=r, Y=np.zeros((8, 8))).valid


def test_negative_correlation_alone_is_invalid():
    assert not certify_witness(WitnessOperators(0, 0, -1, 0)).valid
    assert certify_witness(WitnessOperators(1, 0, 0, 0)).valid


def test_certified_witness_nonnegative_on_classical_memory():
    w = WitnessOperators.analytical(1.0)
    for sep in random_realizations(7, 20):
        pair = realize_dynamics_pair(classical_decomposition(sep))
        assert w.value(pair) >= -1e-8


def test_witness_detects_quantum_memory_only_where_expected():
    lam = 1.0
    w = WitnessOperators.analytical(lam)
    negative = [th for th in np.linspace(0, np.pi / 2, 101)
                if w.value(dynamics_pair(TwoQubitProtocol(th))) < 0]
    lo = np.arccos(-1 / 3) / 4
    assert negative and min(negative) >= lo - 1e-12 and max(negative) <= np.pi / 2 - lo + 1e-12
