"""Analytical quantum-memory witness and its validity certificate.

A witness is a pair of 4x4 Hermitian operators ``(W1, W2)`` evaluated on the
Choi states of the probe maps as ``tr[W1 E1] + tr[W2 E2]``. It is valid if it
is non-negative on every pair realizable with classical memory. Validity is
certified on the four-qubit space ``A, D, D', B`` (tensor slots 0-3) by

    W1^{AD} (x) 1^{D'B}/2 + W2^{AB} (x) Phi+^{DD'}
        = Q + R^{T_{D'B}} + Y^{ADD'} (x) 1^B - tr_{D'}[Y] (x) 1^{D'B}/2 + Z^A (x) 1^{DD'B}

with ``Q, R >= 0``, ``Y`` Hermitian and ``Z`` Hermitian with ``tr Z >= 0``.
The ``Y`` and ``Z`` terms vanish (respectively are non-negative) on every
classical-memory process because its second-step maps are trace preserving
and its first-step instrument sums to a channel. Setting ``Y = Z = 0`` gives
the plain decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    I2,
    SX,
    SY,
    SZ,
    hermiticity_error,
    is_hermitian,
    ket,
    kron,
    min_eig,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    phi_plus,
    proj,
)
from .qubit_gravity import DynamicsPair

CERT_TOL = 1e-10
CORR_IMAG_TOL = 1e-10

II = np.eye(4, dtype=complex)
IZ = kron(I2, SZ)
XX = kron(SX, SX)
ZZ = kron(SZ, SZ)
WITNESS_BASIS = (II, IZ, XX, ZZ)

DIMS4 = (2, 2, 2, 2)
# order A, B, D, D' -> A, D, D', B
_ABDD_TO_ADDB = (0, 2, 3, 1)


@dataclass(frozen=True)
class WitnessOperators:
    """``W1 = w11 1(x)1 + w1z 1(x)sz``, ``W2 = wxx sx(x)sx + wzz sz(x)sz``."""

    w11: float
    w1z: float
    wxx: float
    wzz: float

    @property
    def W1(self) -> np.ndarray:
        return self.w11 * II + self.w1z * IZ

    @property
    def W2(self) -> np.ndarray:
        return self.wxx * XX + self.wzz * ZZ

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.w11, self.w1z, self.wxx, self.wzz], dtype=float)

    @classmethod
    def from_coefficients(cls, c) -> "WitnessOperators":
        c = [float(x) for x in c]
        return cls(*c)

    @classmethod
    def analytical(cls, lam: float = 1.0) -> "WitnessOperators":
        """Operators of ``lam * [4 - tr sz E1[1] - 2/3 (tr sx E2[sx] + tr sz E2[sz])]``.

        The constant 4 equals ``tr[2 * 1(x)1 E1]`` for a trace-2 Choi state,
        hence ``w11 = 2 lam``.
        """
        if lam <= 0:
            raise ValueError("lambda must be positive")
        return cls(2.0 * lam, -lam, -2.0 * lam / 3.0, -2.0 * lam / 3.0)

    def value(self, pair: DynamicsPair) -> float:
        return witness_value(self, pair)


@dataclass(frozen=True)
class CorrelatorSet:
    """Measured correlators ``tr sz E1[1]``, ``tr sx E2[sx]``, ``tr sz E2[sz]``."""

    c_z1: float
    c_xx2: float
    c_zz2: float

    def __post_init__(self):
        for name in ("c_z1", "c_xx2", "c_zz2"):
            if abs(getattr(self, name)) > 2 + 1e-9:
                raise ValueError(f"{name} = {getattr(self, name)} exceeds the Pauli bound 2")


def correlator(e: np.ndarray, sigma_in: np.ndarray, sigma_out: np.ndarray) -> float:
    """``tr[(sigma_in (x) sigma_out) E] = tr sigma_out E[sigma_in^T]``.

    ``sigma_y`` inputs are rejected: the witness only uses transpose-invariant
    observables, and ``sigma_y^T = -sigma_y`` would silently flip a sign.
    """
    e = np.asarray(e, dtype=complex)
    if e.shape != (4, 4):
        raise ValueError(f"expected a 4x4 Choi state, got {e.shape}")
    for s in (sigma_in, sigma_out):
        s = np.asarray(s)
        if s.shape != (2, 2) or not is_hermitian(s):
            raise ValueError("observables must be Hermitian 2x2 matrices")
        if abs(np.trace(s @ SY)) > 1e-12:
            raise ValueError("sigma_y components are not part of the witness; "
                             "correlators here assume transpose-invariant observables")
    val = np.trace(kron(sigma_in, sigma_out) @ e)
    if abs(val.imag) > CORR_IMAG_TOL:
        raise ValueError(f"correlator has imaginary part {val.imag:.3e}; Choi input is not physical")
    return float(val.real)


def correlators(pair: DynamicsPair) -> CorrelatorSet:
    return CorrelatorSet(
        c_z1=correlator(pair.e1, I2, SZ),
        c_xx2=correlator(pair.e2, SX, SX),
        c_zz2=correlator(pair.e2, SZ, SZ),
    )


def analytical_witness(corrs: CorrelatorSet, lam: float = 1.0) -> float:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return lam * (4.0 - corrs.c_z1 - (2.0 / 3.0) * (corrs.c_xx2 + corrs.c_zz2))


def closed_form_witness(theta: float, lam: float = 1.0) -> float:
    """Witness value of the two-qubit protocol, ``lam * (1/3 + cos 4 theta)``."""
    return lam * (1.0 / 3.0 + np.cos(4.0 * theta))


def witness_value(w_ops: WitnessOperators, pair: DynamicsPair) -> float:
    return float(np.real(np.trace(w_ops.W1 @ pair.e1) + np.trace(w_ops.W2 @ pair.e2)))


# -- four-qubit certificate ---------------------------------------------------


def embed_w1(w1: np.ndarray) -> np.ndarray:
    """``W1^{AD} (x) 1^{D'B} / 2``."""
    return kron(w1, np.eye(4) / 2)


def embed_w2(w2: np.ndarray) -> np.ndarray:
    """``W2^{AB} (x) Phi+^{DD'}`` placed in A, D, D', B order."""
    return permute_subsystems(kron(w2, phi_plus(2)), DIMS4, _ABDD_TO_ADDB)


def decomposition_lhs(w_ops: WitnessOperators) -> np.ndarray:
    return embed_w1(w_ops.W1) + embed_w2(w_ops.W2)


def pt_db(m: np.ndarray) -> np.ndarray:
    """Partial transpose on ``D'`` and ``B``."""
    return partial_transpose(m, DIMS4, [2, 3])


def tp_slack(y: Optional[np.ndarray] = None, z: Optional[np.ndarray] = None) -> np.ndarray:
    """``Y^{ADD'} (x) 1^B - tr_{D'}[Y] (x) 1^{D'B}/2 + Z^A (x) 1^{DD'B}``."""
    out = np.zeros((16, 16), dtype=complex)
    if y is not None:
        y = np.asarray(y, dtype=complex)
        out += kron(y, I2) - kron(partial_trace(y, (2, 2, 2), keep=[0, 1]), np.eye(4) / 2)
    if z is not None:
        out += kron(np.asarray(z, dtype=complex), np.eye(8))
    return out


def kappa_state() -> np.ndarray:
    """``(|0111> - |1110>)/sqrt(2)`` in A, D, D', B order."""
    return (ket("0111") - ket("1110")) / np.sqrt(2)


def analytical_certificate(lam: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """``(R, Y)`` certifying :meth:`WitnessOperators.analytical` with scale ``lam``.

    ``R = lam |kappa><kappa|`` and
    ``Y = lam 1^A (x) [1(x)sz/2 - (sx(x)sx - sy(x)sy)/2 - sz(x)sz]^{DD'}``;
    the resulting ``Q`` is PSD with smallest eigenvalue zero.
    """
    r = lam * proj(kappa_state())
    y_dd = 0.5 * kron(I2, SZ) - 0.5 * (kron(SX, SX) - kron(SY, SY)) - kron(SZ, SZ)
    return r, lam * kron(I2, y_dd)


@dataclass
class Certificate:
    valid: bool
    Q: np.ndarray
    R: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    min_eig_Q: float
    min_eig_R: float
    residual: float


def _analytical_scale(w_ops: WitnessOperators) -> Optional[float]:
    lam = -w_ops.w1z
    if lam <= 0:
        return None
    ref = WitnessOperators.analytical(lam).coefficients
    return lam if np.allclose(w_ops.coefficients, ref, atol=1e-12, rtol=0) else None


def certify_witness(
    w_ops: WitnessOperators,
    R: Optional[np.ndarray] = None,
    Y: Optional[np.ndarray] = None,
    Z: Optional[np.ndarray] = None,
    tol: float = CERT_TOL,
) -> Certificate:
    """Check the decomposition for given ``R``, ``Y``, ``Z`` with ``Q`` by subtraction.

    When no certificate is supplied and ``w_ops`` is a positive multiple of the
    analytical witness, :func:`analytical_certificate` is used; otherwise
    missing pieces default to zero. Invalid certificates are reported, not raised.
    """
    if R is None and Y is None and Z is None:
        lam = _analytical_scale(w_ops)
        if lam is not None:
            R, Y = analytical_certificate(lam)
    R = np.zeros((16, 16), dtype=complex) if R is None else np.asarray(R, dtype=complex)
    Y = np.zeros((8, 8), dtype=complex) if Y is None else np.asarray(Y, dtype=complex)
    Z = np.zeros((2, 2), dtype=complex) if Z is None else np.asarray(Z, dtype=complex)
    q = decomposition_lhs(w_ops) - pt_db(R) - tp_slack(Y, Z)
    residual = max(hermiticity_error(q), hermiticity_error(R), hermiticity_error(Y), hermiticity_error(Z))
    mq, mr = min_eig(q), min_eig(R)
    valid = (
        mq >= -tol
        and mr >= -tol
        and np.trace(Z).real >= -tol
        and residual <= 1e-12
    )
    return Certificate(bool(valid), q, R, Y, Z, mq, mr, residual)
