"""Quantum-memory witnesses for gravitationally coupled probe dynamics."""
from .linalg import choi_from_kraus, partial_trace, partial_transpose
from .qubit_gravity import DynamicsPair, TwoQubitProtocol, dynamics_pair
from .witness import WitnessOperators, certify_witness, correlators
from .sdp import build_witness_sdp, solve_sdp, sweep, verify_solution
from .jaynes_cummings import JCModel, concurrence, concurrence_assistance, jc_witness_report
from .locc import SeparableDynamics, classical_decomposition, realize_dynamics_pair

__version__ = "0.1.0"
