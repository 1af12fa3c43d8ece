"""Experimental-scale numbers for both setups, plus the probe mass versus interaction time."""
from dataclasses import replace

import numpy as np

from gravwitness import physical as ph

g = ph.qubit_qubit_coupling(ph.BENCHMARK_QUBIT_QUBIT)
print(f"qubit-qubit: g = {g:.4f} rad/s, first negative witness after {ph.min_negative_time(g):.3f} s")

osc = ph.BENCHMARK_OSCILLATOR
print(f"oscillator: radius {osc.radius * 1e6:.1f} um, centre distances {osc.d_l * 1e6:.1f} / {osc.d_r * 1e6:.1f} um")
print(f"  g for a 1e-14 kg probe: {ph.qubit_osc_coupling(replace(osc, m=1e-14)):.3e} rad/s")
for tau in (10.0, 30.0, 100.0, 300.0):
    m = ph.required_probe_mass(osc, 1e-6, tau)
    print(f"  |w| = 1e-6 at tau = {tau:5.0f} s needs m = {m:.3e} kg")
for target in (1e-6, 1e-27):
    print(f"  target {target:.0e}, tau = 100 s -> m = {ph.required_probe_mass(osc, target, 100.0):.3e} kg")
