"""Laboratory parameters to coupling rates, interaction times and probe masses (SI units)."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

G_NEWTON = 6.674e-11
HBAR = 1.0546e-34
TUNGSTEN_DENSITY = 19300.0


@dataclass(frozen=True)
class QubitQubitSetup:
    """Two masses in parallel horizontal superpositions, vertical offset ``d``."""

    M: float
    m: float
    delta_X: float
    delta_x: float
    d: float = 0.0

    def __post_init__(self):
        if self.M <= 0 or self.m <= 0:
            raise ValueError("masses must be positive")
        if self.delta_X <= 0 or self.delta_x <= 0:
            raise ValueError("superposition sizes must be positive")
        if self.d < 0:
            raise ValueError("vertical offset must be non-negative")


@dataclass(frozen=True)
class QubitOscillatorSetup:
    """Probe qubit at distances ``gap_l`` and ``gap_r`` from the surface of a spherical oscillator."""

    M: float
    frequency: float
    gap_l: float
    gap_r: float
    m: float = 0.0
    density: float = TUNGSTEN_DENSITY

    def __post_init__(self):
        if self.M <= 0 or self.frequency <= 0 or self.density <= 0:
            raise ValueError("oscillator mass, frequency and density must be positive")
        if self.m < 0:
            raise ValueError("probe mass must be non-negative")
        if not 0 <= self.gap_l < self.gap_r:
            raise ValueError("need 0 <= gap_l < gap_r for a positive coupling")

    @property
    def radius(self) -> float:
        return float((3 * self.M / (4 * np.pi * self.density)) ** (1 / 3))

    @property
    def d_l(self) -> float:
        return self.radius + self.gap_l

    @property
    def d_r(self) -> float:
        return self.radius + self.gap_r

    @property
    def omega(self) -> float:
        return 2 * np.pi * self.frequency


def qubit_qubit_coupling(setup: QubitQubitSetup) -> float:
    """``g = G M m / (2 hbar) [r_near^-1 - r_far^-1]`` for the same- and opposite-side branch distances."""
    near = np.hypot((setup.delta_X - setup.delta_x) / 2, setup.d)
    far = np.hypot((setup.delta_X + setup.delta_x) / 2, setup.d)
    if near == 0:
        raise ValueError("coincident branches: coupling diverges")
    return float(G_NEWTON * setup.M * setup.m / (2 * HBAR) * (1 / near - 1 / far))


def min_negative_time(g: float) -> float:
    """Smallest ``tau`` with ``1/3 + cos(4 g tau) < 0``."""
    if g <= 0:
        raise ValueError("coupling must be positive")
    return float(np.arccos(-1 / 3) / (4 * g))


def qubit_osc_coupling(setup: QubitOscillatorSetup, d_l: float | None = None, d_r: float | None = None) -> float:
    """``g = G m sqrt(M) / sqrt(8 hbar omega) (d_l^-2 - d_r^-2)``, distances from the centre.

    By default the centre distances are the surface gaps plus the sphere radius.
    """
    d_l = setup.d_l if d_l is None else d_l
    d_r = setup.d_r if d_r is None else d_r
    if d_l >= d_r:
        raise ValueError("d_l must be smaller than d_r")
    if d_l <= 0:
        raise ValueError("distances must be positive")
    pref = G_NEWTON * setup.m * np.sqrt(setup.M) / np.sqrt(8 * HBAR * setup.omega)
    return float(pref * (d_l**-2 - d_r**-2))


def coupling_for_witness(target_w_mag: float, tau: float) -> float:
    """Coupling ``g`` giving ``2 g^2 / Delta^2 = target`` at ``tau = pi / (2 kappa)``.

    Uses ``kappa = pi / (2 tau)`` and ``Delta^2 = 4 kappa^2 - 4 g^2``.
    """
    if target_w_mag <= 0 or tau <= 0:
        raise ValueError("target witness magnitude and tau must be positive")
    kappa = np.pi / (2 * tau)
    g2 = 2 * kappa**2 * target_w_mag / (1 + 2 * target_w_mag)
    if g2 >= kappa**2:
        raise ValueError("target witness magnitude needs g >= kappa")
    return float(np.sqrt(g2))


def required_probe_mass(setup: QubitOscillatorSetup, target_w_mag: float, tau: float) -> float:
    """Probe mass needed for ``|w| = target_w_mag`` at interaction time ``tau``."""
    g = coupling_for_witness(target_w_mag, tau)
    g_per_kg = qubit_osc_coupling(replace(setup, m=1.0))
    return g / g_per_kg


def detuning_for(g: float, tau: float) -> float:
    """``Delta >= 0`` such that ``pi / (2 kappa) = tau``."""
    kappa = np.pi / (2 * tau)
    if g >= kappa:
        raise ValueError("g >= kappa: no real detuning")
    return float(2 * np.sqrt(kappa**2 - g**2))


BENCHMARK_QUBIT_QUBIT = QubitQubitSetup(M=1e-14, m=1e-14, delta_X=100e-6, delta_x=300e-6, d=0.0)
BENCHMARK_OSCILLATOR = QubitOscillatorSetup(M=1e-6, frequency=10.0, gap_l=100e-6, gap_r=350e-6)
