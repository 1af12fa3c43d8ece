"""Separable memoryless joint dynamics and their classical-memory probe realization.

Used as the negative control: every pair produced here is realizable with
classical memory, so no valid witness may evaluate negative on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import choi_from_kraus, choi_from_map, dag, kron, partial_trace
from .qubit_gravity import DynamicsPair, validate_density_matrix

COMPLETENESS_TOL = 1e-10
BRANCH_CUTOFF = 1e-14

OpPair = tuple[np.ndarray, np.ndarray]


def _completeness_error(pairs: Sequence[OpPair]) -> float:
    a0, b0 = pairs[0]
    total = sum(kron(dag(a) @ a, dag(b) @ b) for a, b in pairs)
    return float(np.max(np.abs(total - np.eye(a0.shape[1] * b0.shape[1]))))


@dataclass
class SeparableDynamics:
    """Product Kraus operators ``A_i (x) B_i`` then, conditioned on ``i``, ``C_j^i (x) D_j^i``."""

    first_step: list[OpPair]
    second_step: list[list[OpPair]]
    memory_state: np.ndarray

    def __post_init__(self):
        if len(self.second_step) != len(self.first_step):
            raise ValueError("need one conditional Kraus list per first-step branch")
        rho = np.asarray(self.memory_state, dtype=complex)
        if rho.shape == (2, 2):
            validate_density_matrix(rho)
        err = _completeness_error(self.first_step)
        if err > COMPLETENESS_TOL:
            raise ValueError(f"first step is not trace preserving (error {err:.2e})")
        for i, branch in enumerate(self.second_step):
            err = _completeness_error(branch)
            if err > COMPLETENESS_TOL:
                raise ValueError(f"second step branch {i} is not trace preserving (error {err:.2e})")

    def joint_kraus(self, time: int) -> list[np.ndarray]:
        """Global Kraus operators of the joint map up to ``t1`` (1) or ``t2`` (2)."""
        first = [kron(a, b) for a, b in self.first_step]
        if time == 1:
            return first
        return [kron(c, d) @ k for k, branch in zip(first, self.second_step) for c, d in branch]


@dataclass
class ClassicalRealization:
    kraus_first: list[np.ndarray]
    conditional_maps: list[list[np.ndarray]]
    branch_probabilities: list[float] = field(default_factory=list)

    def __post_init__(self):
        total = sum(dag(k) @ k for k in self.kraus_first)
        if np.max(np.abs(total - np.eye(total.shape[0]))) > COMPLETENESS_TOL:
            raise ValueError("first-step Kraus operators are not complete")
        for i, g in enumerate(self.conditional_maps):
            total = sum(dag(k) @ k for k in g)
            if np.max(np.abs(total - np.eye(total.shape[0]))) > COMPLETENESS_TOL:
                raise ValueError(f"conditional map {i} is not trace preserving")


def classical_decomposition(sep: SeparableDynamics) -> ClassicalRealization:
    """``K_i = sqrt(p_i) A_i`` and ``G_j^i = sqrt(tr[B_i^dag D^dag D B_i rho_M] / p_i) C_j^i``.

    ``p_i = tr[B_i^dag B_i rho_M]``; branches with ``p_i < 1e-14`` are dropped.
    """
    rho_m = np.asarray(sep.memory_state, dtype=complex)
    kraus, maps, probs = [], [], []
    for (a, b), branch in zip(sep.first_step, sep.second_step):
        p = float(np.trace(dag(b) @ b @ rho_m).real)
        if p < BRANCH_CUTOFF:
            continue
        kraus.append(np.sqrt(p) * a)
        g = []
        for c, d in branch:
            q = float(np.trace(dag(b) @ dag(d) @ d @ b @ rho_m).real)
            g.append(np.sqrt(max(q, 0.0) / p) * c)
        maps.append(g)
        probs.append(p)
    return ClassicalRealization(kraus, maps, probs)


def realize_dynamics_pair(real: ClassicalRealization) -> DynamicsPair:
    """Choi states of ``E1 = sum K_i . K_i^dag`` and ``E2 = sum_i Phi_i[K_i . K_i^dag]``."""
    e1 = choi_from_kraus(real.kraus_first)
    e2 = choi_from_kraus([g @ k for k, branch in zip(real.kraus_first, real.conditional_maps) for g in branch])
    pair = DynamicsPair(e1, e2, {"source": "classical_realization"})
    pair.validate()
    return pair


def traced_out_pair(sep: SeparableDynamics) -> DynamicsPair:
    """Probe maps obtained directly from the joint dynamics by tracing out the memory."""
    rho_m = np.asarray(sep.memory_state, dtype=complex)
    dm = rho_m.shape[0]

    def probe_map(ops):
        def channel(rho):
            joint = kron(rho, rho_m)
            out = sum(k @ joint @ dag(k) for k in ops)
            return partial_trace(out, (2, dm), keep=[0])

        return channel

    e1 = choi_from_map(probe_map(sep.joint_kraus(1)), 2)
    e2 = choi_from_map(probe_map(sep.joint_kraus(2)), 2)
    return DynamicsPair(e1, e2, {"source": "traced_out"})


# -- random instances ----------------------------------------------------------------


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus(n: int, d: int, rng: np.random.Generator) -> list[np.ndarray]:
    """``n`` Kraus operators of a random channel on dimension ``d`` (blocks of a random isometry)."""
    if n == 1:
        return [haar_unitary(d, rng)]
    z = rng.standard_normal((n * d, d)) + 1j * rng.standard_normal((n * d, d))
    q, _ = np.linalg.qr(z)
    return [q[i * d : (i + 1) * d, :] for i in range(n)]


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = z @ dag(z)
    return rho / np.trace(rho).real


def _random_product_step(n: int, d_m: int, rng: np.random.Generator) -> list[OpPair]:
    """``n = k l`` product Kraus pairs ``A_a (x) B_b`` from a random probe channel with ``k``
    operators and a random memory channel with ``l``; one operator means a Haar unitary."""
    divisors = [k for k in range(1, n + 1) if n % k == 0]
    k = int(rng.choice(divisors))
    probe = random_kraus(k, 2, rng)
    memory = random_kraus(n // k, d_m, rng)
    return [(a, b) for a in probe for b in memory]


def random_separable_dynamics(
    rng: np.random.Generator, n_first: int = 3, n_second: int = 2, memory_dim: int = 2
) -> SeparableDynamics:
    first = _random_product_step(n_first, memory_dim, rng)
    second = [_random_product_step(n_second, memory_dim, rng) for _ in first]
    return SeparableDynamics(first, second, random_state(memory_dim, rng))


def random_realizations(seed: int, count: int, **kw) -> list[SeparableDynamics]:
    rng = np.random.default_rng(seed)
    return [random_separable_dynamics(rng, **kw) for _ in range(count)]
