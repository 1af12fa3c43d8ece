"""Qubit-oscillator example: Jaynes-Cummings probe dynamics and the concurrence witness.

The probe qubit uses the package basis (``sigma_z |1> = +|1>``). The
interaction exchanges one excitation between qubit and oscillator, coupling
``|1, n>`` to ``|0, n+1>`` with rate ``g sqrt(n+1)``. Coefficients are given
in the frame where the probe phase ``exp(-i Delta sigma_z t / 2)`` has been
undone, so that ``|0, 0>`` is stationary:

    |psi(t)> = exp(i Delta sigma_z t / 2) exp(-i H t) |psi(0)>,
    H = Delta/2 sigma_z + g (|0><1| (x) a^dag + |1><0| (x) a).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .linalg import SY, herm_eig, kron

log = logging.getLogger(__name__)

NORM_TOL = 1e-10
NORM_FAIL = 1e-8
DISCREPANCY_TOL = 1e-7


@dataclass(frozen=True)
class JCModel:
    """Coupling ``g`` and detuning ``delta`` (rad/s); oscillator amplitudes ``c_n``."""

    g: float
    delta: float
    amplitudes: Sequence[complex] = (1.0, 0.0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or len(amps) < 2:
            raise ValueError("need amplitudes for at least n = 0, 1")
        if abs(np.sum(np.abs(amps) ** 2) - 1.0) > 1e-12:
            raise ValueError("oscillator amplitudes are not normalized")
        object.__setattr__(self, "amplitudes", tuple(amps))

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    @property
    def kappa(self) -> float:
        return float(np.sqrt(self.g**2 + self.delta**2 / 4))

    def omega(self, n) -> np.ndarray:
        """``Omega_n = sqrt(g^2 (n+1) + Delta^2/4)``; ``Omega_0 = kappa``."""
        return np.sqrt(self.g**2 * (np.asarray(n, dtype=float) + 1) + self.delta**2 / 4)


def vacuum(n_max: int = 1) -> tuple:
    a = np.zeros(n_max + 1, dtype=complex)
    a[0] = 1.0
    return tuple(a)


def coherent_amplitudes(alpha: complex, n_max: int) -> tuple:
    """Truncated, renormalized coherent-state amplitudes."""
    n = np.arange(n_max + 1)
    from scipy.special import gammaln

    logs = n * np.log(abs(alpha) + 1e-300) - 0.5 * gammaln(n + 1)
    a = np.exp(logs - abs(alpha) ** 2 / 2) * np.exp(1j * n * np.angle(alpha))
    if alpha == 0:
        a = np.zeros(n_max + 1, dtype=complex)
        a[0] = 1.0
    return tuple(a / np.linalg.norm(a))


def _sinc_ratio(omega: np.ndarray, t: float) -> np.ndarray:
    """``sin(omega t) / omega``, finite at ``omega = 0``."""
    out = np.full(omega.shape, float(t))
    nz = omega != 0
    out[nz] = np.sin(omega[nz] * t) / omega[nz]
    return out


def jc_coefficients(initial_qubit: int, model: JCModel, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``(c_{1,n}(t), c_{0,n}(t))`` for a product initial state.

    The oscillator index runs over ``0 .. n_max + 1`` so that the excitation
    exchanged out of the highest populated level is kept.
    """
    if initial_qubit not in (0, 1):
        raise ValueError("initial qubit must be 0 or 1")
    if model.n_max < 1:
        raise ValueError("n_max must be at least 1")
    g, d = model.g, model.delta
    nf = model.n_max + 2
    c = np.zeros(nf + 1, dtype=complex)
    c[: model.n_max + 1] = model.amplitudes
    n = np.arange(nf)
    om = model.omega(n)  # Omega_n
    om_m1 = model.omega(n - 1)  # Omega_{n-1}, equals |Delta|/2 at n = 0
    ph = np.exp(1j * d * t / 2)
    if initial_qubit == 1:
        c1 = c[:nf] * (np.cos(om * t) - 0.5j * d * _sinc_ratio(om, t)) * ph
        c_prev = np.concatenate([[0.0], c[: nf - 1]])
        c0 = -1j * g * np.sqrt(n) * c_prev * _sinc_ratio(om_m1, t) / ph
    else:
        c1 = -1j * g * np.sqrt(n + 1) * c[1 : nf + 1] * _sinc_ratio(om, t) * ph
        c0 = c[:nf] * (np.cos(om_m1 * t) + 0.5j * d * _sinc_ratio(om_m1, t)) / ph
    norm = np.sum(np.abs(c1) ** 2 + np.abs(c0) ** 2)
    drift = abs(norm - 1.0)
    if drift > NORM_FAIL:
        raise ArithmeticError(f"norm drift {drift:.2e}: Fock truncation too small")
    if drift > NORM_TOL:
        log.warning("JC coefficient norm drift %.2e", drift)
    return c1, c0


def joint_state(c1: np.ndarray, c0: np.ndarray) -> np.ndarray:
    """State vector in qubit (x) Fock order, qubit basis ``(|0>, |1>)``."""
    return np.concatenate([c0, c1])


def excitation_number(c1: np.ndarray, c0: np.ndarray) -> float:
    """``<a^dag a + sigma_z / 2>``."""
    n = np.arange(len(c1))
    p1, p0 = np.abs(c1) ** 2, np.abs(c0) ** 2
    return float(np.sum(n * (p1 + p0)) + 0.5 * (np.sum(p1) - np.sum(p0)))


# -- Hamiltonians (used as propagation oracles) ---------------------------------------


def _ladder(n_fock: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_fock)), 1).astype(complex)


def jc_hamiltonian(g: float, delta: float, n_fock: int) -> np.ndarray:
    """Interaction-picture JC Hamiltonian (units of hbar) on qubit (x) Fock(n_fock)."""
    a = _ladder(n_fock)
    sz = np.diag([-1.0, 1.0]).astype(complex)
    lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
    return delta / 2 * kron(sz, np.eye(n_fock)) + g * (kron(lower, a.conj().T) + kron(lower.T, a))


def rabi_hamiltonian(omega: float, omega_a: float, g: float, n_fock: int) -> np.ndarray:
    """Full Rabi Hamiltonian ``w a^dag a + w_a/2 sz + g sx (a^dag + a)`` (hbar = 1).

    Provided for comparison with the rotating-wave model; not used by the witness.
    """
    a = _ladder(n_fock)
    sz = np.diag([-1.0, 1.0]).astype(complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    return (omega * kron(np.eye(2), a.conj().T @ a) + omega_a / 2 * kron(sz, np.eye(n_fock))
            + g * kron(sx, a + a.conj().T))


# -- Choi states -------------------------------------------------------------------------


@dataclass
class JCChoi:
    matrix: np.ndarray
    t: float
    mode: str  # "closed_form_ground" | "propagated"
    metadata: dict = field(default_factory=dict)


def jc_choi(model: JCModel, t: float) -> JCChoi:
    """Choi state from the coefficients: ``sum c^{(i)}_{k,n} c^{(j)*}_{l,n} |ik><jl|``."""
    coeffs = {}
    for i in (0, 1):
        c1, c0 = jc_coefficients(i, model, t)
        coeffs[i] = np.vstack([c0, c1])  # rows: output qubit k = 0, 1
    chi = np.zeros((4, 4), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            chi[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = coeffs[i] @ coeffs[j].conj().T
    return JCChoi(chi, float(t), "propagated", {"g": model.g, "delta": model.delta, "n_max": model.n_max})


def jc_choi_converged(
    amplitude_fn: Callable[[int], Sequence[complex]],
    g: float,
    delta: float,
    t: float,
    n_max: int = 8,
    tol: float = 1e-10,
    max_n: int = 1024,
) -> JCChoi:
    """Double the truncation until the Choi state changes by less than ``tol``."""
    prev = jc_choi(JCModel(g, delta, amplitude_fn(n_max)), t)
    while n_max < max_n:
        n_max *= 2
        cur = jc_choi(JCModel(g, delta, amplitude_fn(n_max)), t)
        if np.max(np.abs(cur.matrix - prev.matrix)) < tol:
            return cur
        prev = cur
    raise ArithmeticError(f"Choi state not converged up to n_max = {max_n}")


def jc_choi_ground_closed_form(g: float, delta: float, t: float) -> JCChoi:
    """Choi state for an oscillator starting in its ground state."""
    kappa = np.sqrt(g**2 + delta**2 / 4)
    if kappa == 0:
        raise ValueError("g and delta cannot both vanish")
    k2 = kappa**2
    e = np.zeros((4, 4), dtype=complex)
    e[3, 3] = (2 * g**2 + delta**2 + 2 * g**2 * np.cos(2 * kappa * t)) / (4 * k2)
    e[0, 0] = 1.0
    e[2, 2] = g**2 * np.sin(kappa * t) ** 2 / k2
    off = np.exp(-1j * t * delta / 2) * (2 * kappa * np.cos(kappa * t) + 1j * delta * np.sin(kappa * t)) / (2 * kappa)
    e[0, 3] = off
    e[3, 0] = np.conj(off)
    return JCChoi(e, float(t), "closed_form_ground", {"g": g, "delta": delta})


# -- entanglement measures -----------------------------------------------------------------

_YY = kron(SY, SY)


def _check_state(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a two-qubit density matrix")
    if np.max(np.abs(rho - rho.conj().T)) > tol or abs(np.trace(rho).real - 1) > tol:
        raise ValueError("input is not a normalized Hermitian matrix")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -tol:
        raise ValueError("input is not positive semidefinite")
    return rho


def spin_flip_lambdas(rho: np.ndarray, rank_tol: float = 1e-14) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho (sy sy) rho^* (sy sy)``.

    Computed as singular values of ``V^T (sy sy) V`` for a factorization
    ``rho = V V^dag`` built from the eigenvectors with eigenvalue above
    ``rank_tol``. This avoids square roots of round-off eigenvalues.
    """
    rho = _check_state(rho)
    vals, vecs = herm_eig((rho + rho.conj().T) / 2)
    keep = vals > rank_tol
    v = vecs[:, keep] * np.sqrt(vals[keep])
    lam = np.zeros(4)
    if v.shape[1]:
        sv = np.linalg.svd(v.T @ _YY @ v, compute_uv=False)
        lam[: len(sv)] = sv
    return np.sort(lam)[::-1]


def concurrence(rho: np.ndarray) -> float:
    lam = spin_flip_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_assistance(rho: np.ndarray) -> float:
    return float(np.sum(spin_flip_lambdas(rho)))


def pure_state_concurrence(psi: np.ndarray) -> float:
    """``2 |ad - bc|`` for ``psi = (a, b, c, d)``."""
    a, b, c, d = np.asarray(psi, dtype=complex) / np.linalg.norm(psi)
    return float(2 * abs(a * d - b * c))


# -- witness --------------------------------------------------------------------------


def vacuum_witness_closed_form(g: float, delta: float) -> float:
    return float(abs(delta) / np.sqrt(4 * g**2 + delta**2) - 1.0)


def vacuum_witness_quadratic(g: float, delta: float) -> float:
    return float(-2 * g**2 / delta**2)


@dataclass
class JCWitnessReport:
    g: float
    delta: float
    t1: float
    t2: float
    measured: float
    closed_form: float

    @property
    def discrepancy(self) -> float:
        return abs(self.measured - self.closed_form)


def jc_witness_report(g: float, delta: float, model: Optional[JCModel] = None) -> JCWitnessReport:
    """``C#[E1] - C[E2]`` at ``t1 = pi / (2 kappa)``, ``t2 = 2 t1``, with normalized Choi states."""
    if g == 0 and delta == 0:
        raise ValueError("g and delta cannot both vanish")
    model = model or JCModel(g, delta, vacuum(1))
    t1 = np.pi / (2 * model.kappa)
    t2 = 2 * t1
    e1 = jc_choi(model, t1).matrix / 2
    e2 = jc_choi(model, t2).matrix / 2
    measured = concurrence_assistance(e1) - concurrence(e2)
    return JCWitnessReport(g, delta, t1, t2, measured, vacuum_witness_closed_form(g, delta))


def jc_witness(g: float, delta: float) -> float:
    rep = jc_witness_report(g, delta)
    if rep.discrepancy > DISCREPANCY_TOL:
        raise ArithmeticError(
            f"witness discrepancy {rep.discrepancy:.2e} between Choi measures and closed form")
    return rep.measured
