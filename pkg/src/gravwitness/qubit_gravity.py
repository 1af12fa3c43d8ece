"""Two-qubit gravitational protocol: U, S gates, Z echo, and the probe maps E1, E2."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import (
    I2,
    SM,
    SP,
    SX,
    SZ,
    choi_errors,
    choi_from_kraus,
    choi_from_map,
    dag,
    expm_herm,
    kron,
    min_eig,
    partial_trace,
    proj,
)

XX = kron(SX, SX)
S_GATE = expm_herm(SZ, np.pi / 4)  # exp(-i pi sigma_z / 4)
Z_GATE = SZ
MEMORY_ONE = proj(np.array([0.0, 1.0]))  # |1><1|, an equal superposition of |L>, |R>

STATE_TOL = 1e-12
CHOI_TOL = 1e-10


def validate_density_matrix(rho: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"memory state must be 2x2, got {rho.shape}")
    if np.max(np.abs(rho - dag(rho))) > tol:
        raise ValueError("memory state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"memory state has trace {np.trace(rho).real!r}, expected 1")
    if min_eig(rho) < -tol:
        raise ValueError("memory state is not positive semidefinite")
    return rho


@dataclass(frozen=True)
class TwoQubitProtocol:
    """Protocol parameters: ``theta = g * tau`` and the memory's initial state."""

    theta: float
    memory_state: np.ndarray = field(default_factory=lambda: MEMORY_ONE.copy())

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        validate_density_matrix(self.memory_state)


@dataclass
class DynamicsPair:
    """Choi states of the probe maps at ``t1`` and ``t2`` (both from ``t0``)."""

    e1: np.ndarray
    e2: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    def validate(self, tol: float = CHOI_TOL) -> None:
        for name, e in (("e1", self.e1), ("e2", self.e2)):
            errs = choi_errors(e)
            bad = {k: v for k, v in errs.items() if v > tol}
            if bad:
                raise ValueError(f"{name} is not a CPT Choi state: {bad}")


def grav_unitary(theta: float) -> np.ndarray:
    """``exp(-i theta sigma_x (x) sigma_x)`` with ``theta = g * tau``."""
    return np.cos(theta) * np.eye(4) - 1j * np.sin(theta) * XX


def sequence_V(theta: float) -> np.ndarray:
    """Gate sequence up to ``t1 = 2 tau``: ``U (S (x) S) U``."""
    u = grav_unitary(theta)
    return u @ kron(S_GATE, S_GATE) @ u


def _reduced_map(global_unitary: np.ndarray, rho_m: np.ndarray):
    def channel(rho_s):
        out = global_unitary @ kron(rho_s, rho_m) @ dag(global_unitary)
        return partial_trace(out, (2, 2), keep=[0])

    return channel


def dynamics_pair(protocol: TwoQubitProtocol) -> DynamicsPair:
    """Simulate the circuit and return the Choi states of E1 and E2.

    E1 is the probe map after ``V``; E2 is the map after ``V Z_S V``.
    """
    rho_m = validate_density_matrix(protocol.memory_state)
    v = sequence_V(protocol.theta)
    full = v @ kron(Z_GATE, I2) @ v
    e1 = choi_from_map(_reduced_map(v, rho_m), 2)
    e2 = choi_from_map(_reduced_map(full, rho_m), 2)
    pair = DynamicsPair(e1, e2, {"theta": float(protocol.theta), "source": "two_qubit"})
    pair.validate()
    return pair


def kraus_e1_closed_form(theta: float) -> list[np.ndarray]:
    """Partial amplitude damping towards ``|1>`` followed by ``S``.

    Valid for the default memory state ``|1><1|``.
    """
    k0 = SP @ SM + np.cos(2 * theta) * (SM @ SP)
    k1 = np.sin(2 * theta) * SP
    return [S_GATE @ k0, S_GATE @ k1]


def closed_form_e1(theta: float) -> np.ndarray:
    return choi_from_kraus(kraus_e1_closed_form(theta))
