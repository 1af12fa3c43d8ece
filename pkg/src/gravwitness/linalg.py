"""Dense complex linear algebra for small qubit and qubit-oscillator problems.

Basis conventions used throughout the package:

* single qubit basis order ``(|0>, |1>)`` with ``sigma_z = diag(-1, +1)``,
  i.e. ``sigma_z |1> = +|1>``;
* ``sigma_+ = |1><0|`` and ``sigma_- = |0><1|``;
* ``sigma_y = [[0, i], [-i, 0]]`` so that ``sigma_x sigma_y = i sigma_z``;
* tensor products are ordered left to right, most significant index first.

Matrices are plain complex ``numpy.ndarray`` objects.
"""
from __future__ import annotations

from functools import reduce
from typing import Callable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
SQRT_NEG_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
SP = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
SM = SP.T.copy()  # |0><1|

PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def ket(bits: str) -> np.ndarray:
    """Computational basis vector for a bit string, e.g. ``ket("0111")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def proj(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def phi_plus(d: int = 2) -> np.ndarray:
    """Unnormalized maximally entangled projector ``|phi+><phi+|`` with trace ``d``."""
    v = np.eye(d, dtype=complex).reshape(d * d)
    return np.outer(v, v)


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of operators, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def pauli_string(label: str) -> np.ndarray:
    """Tensor product of Paulis from a label such as ``"XZ"``."""
    return kron(*(PAULI[c] for c in label))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if int(np.prod(dims)) != m.shape[0]:
        raise ValueError(f"subsystem dims {dims} do not match matrix dimension {m.shape[0]}")
    return dims


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems appear in the output in their original order.
    """
    m = np.asarray(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    r = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return r.reshape(dk, dk)


def partial_transpose(m: np.ndarray, dims: Sequence[int], subsystems: Sequence[int]) -> np.ndarray:
    """Transpose the listed subsystems only."""
    m = np.asarray(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    for s in set(int(s) for s in subsystems):
        if s < 0 or s >= n:
            raise ValueError(f"subsystem {s} out of range for {n} subsystems")
        axes[s], axes[n + s] = axes[n + s], axes[s]
    return t.transpose(axes).reshape(m.shape)


def permute_subsystems(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output slot ``k`` holds input subsystem ``order[k]``."""
    m = np.asarray(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of {n} subsystems")
    t = m.reshape(dims + dims).transpose(order + [n + o for o in order])
    return t.reshape(m.shape)


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dag(m)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermiticity_error(m) <= tol


def herm_eig(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors (columns) of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError(f"matrix is not Hermitian (max|M - M^dag| = {hermiticity_error(m):.3e})")
    vals, vecs = np.linalg.eigh((m + dag(m)) / 2)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def min_eig(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.linalg.eigvalsh((m + dag(m)) / 2)[0])


def func_herm(m: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its eigenbasis.

    ``f`` receives the real eigenvalue array and must return an array of the
    same length. Passing ``np.sqrt`` clamps eigenvalues in ``[-1e-10, 0)`` to
    zero and rejects anything more negative.
    """
    vals, vecs = herm_eig(m)
    if f is np.sqrt:
        if vals[-1] < -SQRT_NEG_TOL:
            raise ValueError(f"sqrt of matrix with negative eigenvalue {vals[-1]:.3e}")
        vals = np.clip(vals, 0.0, None)
    fv = np.asarray(f(vals), dtype=complex)
    return (vecs * fv) @ dag(vecs)


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    return func_herm(m, np.sqrt)


def expm_herm(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(-i t M)`` for Hermitian ``M``."""
    return func_herm(m, lambda x: np.exp(-1j * t * x))


def psd_projection(m: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues set to zero)."""
    m = np.asarray(m, dtype=complex)
    vals, vecs = np.linalg.eigh((m + dag(m)) / 2)
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ dag(vecs)


# -- channels -------------------------------------------------------------


def choi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Choi operator ``(1 (x) E)[|phi+><phi+|]`` of a Kraus map, input slot first."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    d_out, d_in = kraus[0].shape
    v = np.eye(d_in, dtype=complex).reshape(d_in * d_in)
    out = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in kraus:
        w = kron(np.eye(d_in), k) @ v
        out += np.outer(w, w.conj())
    return out


def choi_from_map(channel: Callable[[np.ndarray], np.ndarray], d_in: int) -> np.ndarray:
    """Choi operator of an arbitrary linear map given as a Python callable."""
    blocks = []
    for i in range(d_in):
        row = []
        for j in range(d_in):
            e = np.zeros((d_in, d_in), dtype=complex)
            e[i, j] = 1.0
            row.append(np.asarray(channel(e), dtype=complex))
        blocks.append(row)
    d_out = blocks[0][0].shape[0]
    out = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            out[i * d_out : (i + 1) * d_out, j * d_out : (j + 1) * d_out] = blocks[i][j]
    return out


def apply_choi(choi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply the map encoded by a Choi operator: ``tr_in[(rho^T (x) 1) E]``."""
    rho = np.asarray(rho, dtype=complex)
    d_in = rho.shape[0]
    d_out = choi.shape[0] // d_in
    return partial_trace(kron(rho.T, np.eye(d_out)) @ choi, (d_in, d_out), keep=[1])


def choi_errors(choi: np.ndarray, d_in: int = 2) -> dict[str, float]:
    """Violations of the CPT conditions for a Choi operator.

    Returns the Hermiticity error, the negated minimum eigenvalue (clipped at
    zero), the deviation of the trace from ``d_in`` and the max deviation of the
    input marginal from the identity.
    """
    choi = np.asarray(choi, dtype=complex)
    d_out = choi.shape[0] // d_in
    marg = partial_trace(choi, (d_in, d_out), keep=[0])
    return {
        "hermiticity": hermiticity_error(choi),
        "negativity": max(0.0, -min_eig(choi)),
        "trace": abs(np.trace(choi).real - d_in),
        "marginal": float(np.max(np.abs(marg - np.eye(d_in)))),
    }


def is_cptp_choi(choi: np.ndarray, d_in: int = 2, tol: float = 1e-10) -> bool:
    return all(v <= tol for v in choi_errors(choi, d_in).values())
