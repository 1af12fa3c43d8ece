"""Optimal four-coefficient witness for a dynamics pair, by ADMM.

The program is

    min_w  tr[W1 E1] + tr[W2 E2]
    s.t.   W1^{AD}(x)1/2 + W2^{AB}(x)Phi+ = Q + R^{T_{D'B}} + slack(Y, Z),
           Q >= 0, R >= 0, tr W1 + tr W2 = 1,

with ``slack`` as in :mod:`gravwitness.witness`. ``Z`` is restricted to be
traceless: a positive multiple of the identity can always be moved into ``Q``.
Passing ``tp_slack=False`` drops ``Y`` and ``Z`` entirely.

The solver alternates an exact projection onto the affine constraint set
(one cached Cholesky factorization) with eigenvalue clipping of ``Q`` and
``R``, using a fixed over-relaxation parameter.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .linalg import SX, SY, SZ, min_eig, psd_projection
from .qubit_gravity import DynamicsPair, TwoQubitProtocol, dynamics_pair
from .witness import (
    WITNESS_BASIS,
    WitnessOperators,
    analytical_certificate,
    embed_w1,
    embed_w2,
    pt_db,
    tp_slack,
)

log = logging.getLogger(__name__)

FEAS_TOL = 1e-7
NORM_TOL = 1e-8


# -- isometric real coordinates for Hermitian matrices ------------------------


def _herm_index(n: int):
    iu = np.triu_indices(n, 1)
    return iu


def herm_to_vec(m: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix; preserves the Frobenius inner product."""
    n = m.shape[0]
    iu = _herm_index(n)
    s = np.sqrt(2.0)
    return np.concatenate([m.diagonal().real, s * m[iu].real, s * m[iu].imag])


def vec_to_herm(v: np.ndarray, n: int) -> np.ndarray:
    iu = _herm_index(n)
    k = len(iu[0])
    s = np.sqrt(2.0)
    m = np.zeros((n, n), dtype=complex)
    m[iu] = (v[n : n + k] + 1j * v[n + k : n + 2 * k]) / s
    m = m + m.conj().T
    m[np.diag_indices(n)] = v[:n]
    return m


def _herm_basis(n: int):
    for i in range(n * n):
        e = np.zeros(n * n)
        e[i] = 1.0
        yield vec_to_herm(e, n)


# -- problem ----------------------------------------------------------------------------

_Z_BASIS = (SX, SY, SZ)


@dataclass
class SdpProblem:
    e1: np.ndarray
    e2: np.ndarray
    objective: np.ndarray
    tp_slack: bool = True
    metadata: dict = field(default_factory=dict)

    @property
    def normalization(self) -> np.ndarray:
        """Coefficients of ``tr W1 + tr W2`` in the witness basis."""
        return np.array([np.trace(b).real for b in WITNESS_BASIS])

    def lhs(self, coefficients) -> np.ndarray:
        w = WitnessOperators.from_coefficients(coefficients)
        return embed_w1(w.W1) + embed_w2(w.W2)

    def constraint_residual(self, coefficients, Q, R, Y=None, Z=None) -> np.ndarray:
        """``Q + R^{T_{D'B}} + slack(Y, Z) - LHS(coefficients)``; zero when feasible."""
        if not self.tp_slack:
            Y = Z = None
        return Q + pt_db(R) + tp_slack(Y, Z) - self.lhs(coefficients)

    def objective_value(self, coefficients) -> float:
        return float(np.dot(self.objective, coefficients))


def build_witness_sdp(pair: DynamicsPair, tp_slack: bool = True) -> SdpProblem:
    obj = np.array(
        [np.trace(WITNESS_BASIS[0] @ pair.e1).real,
         np.trace(WITNESS_BASIS[1] @ pair.e1).real,
         np.trace(WITNESS_BASIS[2] @ pair.e2).real,
         np.trace(WITNESS_BASIS[3] @ pair.e2).real]
    )
    return SdpProblem(np.asarray(pair.e1), np.asarray(pair.e2), obj, tp_slack, dict(pair.metadata))


@dataclass
class SdpSolution:
    coefficients: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: str  # "optimal" | "max_iter" | "infeasible"

    @property
    def witness(self) -> WitnessOperators:
        return WitnessOperators.from_coefficients(self.coefficients)


class _Layout:
    """Column layout of the stacked real variable ``(w, y, z, q, r)``."""

    def __init__(self, tp: bool):
        self.nw = 4
        self.ny = 64 if tp else 0
        self.nz = 3 if tp else 0
        self.nfree = self.nw + self.ny + self.nz
        self.nq = self.nr = 256
        self.n = self.nfree + self.nq + self.nr

    def split(self, v):
        a = self.nw
        b = a + self.ny
        c = b + self.nz
        d = c + self.nq
        return v[:a], v[a:b], v[b:c], v[c:d], v[d:]


def _constraint_matrix(problem: SdpProblem):
    lay = _Layout(problem.tp_slack)
    cols = []
    for k, b in enumerate(WITNESS_BASIS):
        op = embed_w1(b) if k < 2 else embed_w2(b)
        cols.append(herm_to_vec(op))
    if problem.tp_slack:
        for e in _herm_basis(8):
            cols.append(-herm_to_vec(tp_slack(y=e)))
        for p in _Z_BASIS:
            cols.append(-herm_to_vec(tp_slack(z=p)))
    cols.extend(-np.eye(256))
    for e in _herm_basis(16):
        cols.append(-herm_to_vec(pt_db(e)))
    M = np.column_stack(cols)
    norm_row = np.zeros(lay.n)
    norm_row[: lay.nw] = problem.normalization
    M = np.vstack([M, norm_row])
    b = np.zeros(M.shape[0])
    b[-1] = 1.0
    return lay, M, b


def _unpack(lay: _Layout, v: np.ndarray):
    w, y, z, q, r = lay.split(v)
    Y = vec_to_herm(y, 8) if lay.ny else np.zeros((8, 8), dtype=complex)
    Z = sum(c * p for c, p in zip(z, _Z_BASIS)) if lay.nz else np.zeros((2, 2), dtype=complex)
    return w.copy(), Y, np.asarray(Z, dtype=complex), vec_to_herm(q, 16), vec_to_herm(r, 16)


def solve_sdp(
    problem: SdpProblem,
    tol: float = 1e-8,
    max_iter: int = 50000,
    rho: float = 1.0,
    alpha: float = 1.6,
) -> SdpSolution:
    """Solve the witness program; see the module docstring for the splitting."""
    lay, M, b = _constraint_matrix(problem)
    chol = cho_factor(M @ M.T)

    def project_affine(v):
        return v - M.T @ cho_solve(chol, M @ v - b)

    c = np.zeros(lay.n)
    c[: lay.nw] = problem.objective

    def project_cone(v):
        out = v.copy()
        _, _, _, q, r = lay.split(v)
        off = lay.nfree
        out[off : off + 256] = herm_to_vec(psd_projection(vec_to_herm(q, 16)))
        out[off + 256 :] = herm_to_vec(psd_projection(vec_to_herm(r, 16)))
        return out

    zhat = np.zeros(lay.n)
    u = np.zeros(lay.n)
    best = None
    status = "max_iter"
    prim = dual = np.inf
    first_prim = None
    it = 0
    for it in range(1, max_iter + 1):
        v = project_affine(zhat - u - c / rho)
        v_rel = alpha * v + (1 - alpha) * zhat
        znew = project_cone(v_rel + u)
        u = u + v_rel - znew
        prim = float(np.max(np.abs(v - znew)))
        dual = float(rho * np.max(np.abs(znew - zhat)))
        zhat = znew
        score = max(prim, dual)
        if best is None or score < best[0]:
            best = (score, zhat.copy(), prim, dual, it)
        if prim < tol and dual < tol:
            status = "optimal"
            break
        if it == 100:
            first_prim = prim
        # diverging dual iterate with stalled primal residual
        if it > 2000 and it % 500 == 0 and np.max(np.abs(u)) > 1e8 and prim > 0.5 * first_prim:
            status = "infeasible"
            break

    if status == "optimal":
        zsol, p_res, d_res = zhat, prim, dual
    else:
        _, zsol, p_res, d_res, _ = best
    w, Y, Z, Q, R = _unpack(lay, zsol)
    if status != "optimal":
        log.warning("witness SDP stopped with status %s after %d iterations", status, it)
    return SdpSolution(
        coefficients=w,
        Q=Q,
        R=R,
        Y=Y,
        Z=Z,
        objective=problem.objective_value(w),
        primal_residual=p_res,
        dual_residual=d_res,
        iterations=it,
        status=status,
    )


@dataclass
class VerificationReport:
    feasible: bool
    certified_w: float
    min_eig_Q: float
    min_eig_R: float
    equality_residual: float
    normalization_error: float


def verify_solution(problem: SdpProblem, sol: SdpSolution) -> VerificationReport:
    """Recheck every constraint of ``sol`` from scratch."""
    w = np.asarray(sol.coefficients, dtype=float)
    res = problem.constraint_residual(w, sol.Q, sol.R, sol.Y, sol.Z)
    eq = float(np.max(np.abs(res)))
    mq, mr = min_eig(sol.Q), min_eig(sol.R)
    norm_err = abs(float(problem.normalization @ w) - 1.0)
    z_ok = (not problem.tp_slack) or np.trace(sol.Z).real >= -FEAS_TOL
    feasible = mq >= -FEAS_TOL and mr >= -FEAS_TOL and eq <= FEAS_TOL and norm_err <= NORM_TOL and z_ok
    return VerificationReport(bool(feasible), problem.objective_value(w), mq, mr, eq, norm_err)


def analytical_solution(problem: SdpProblem) -> SdpSolution:
    """The analytical witness, normalized, embedded as a candidate solution."""
    lam = 1.0 / float(problem.normalization @ WitnessOperators.analytical(1.0).coefficients)
    w = WitnessOperators.analytical(lam)
    R, Y = analytical_certificate(lam)
    Z = np.zeros((2, 2), dtype=complex)
    if not problem.tp_slack:
        Y = np.zeros((8, 8), dtype=complex)
    Q = problem.lhs(w.coefficients) - pt_db(R) - (tp_slack(Y, None) if problem.tp_slack else 0)
    return SdpSolution(w.coefficients, Q, R, Y, Z, problem.objective_value(w.coefficients),
                       0.0, 0.0, 0, "optimal")


# -- sweeps -----------------------------------------------------------------------------


@dataclass
class SweepRow:
    theta: float
    w_star: float
    status: str
    iterations: int
    primal_res: float
    dual_res: float
    feasible: bool


def _sweep_point(args) -> SweepRow:
    theta, tol, max_iter, tp = args
    prob = build_witness_sdp(dynamics_pair(TwoQubitProtocol(theta)), tp_slack=tp)
    sol = solve_sdp(prob, tol=tol, max_iter=max_iter)
    rep = verify_solution(prob, sol)
    return SweepRow(float(theta), sol.objective, sol.status, sol.iterations,
                    sol.primal_residual, sol.dual_residual, rep.feasible)


def sweep(
    theta_grid: Sequence[float],
    tol: float = 1e-8,
    max_iter: int = 50000,
    workers: Optional[int] = 1,
    tp_slack: bool = True,
) -> list[SweepRow]:
    """One solve per grid point; rows come back in grid order."""
    grid = [float(t) for t in theta_grid]
    if not grid:
        raise ValueError("theta grid is empty")
    args = [(t, tol, max_iter, tp_slack) for t in grid]
    if workers is None or workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_sweep_point, args))
    return [_sweep_point(a) for a in args]
