"""Dense complex matrix kernel.

Matrices are plain ``numpy`` complex arrays. The composite index convention is
fixed for the whole package: on ``H_S (x) H_A`` the basis index is
``s * dim_a + a``, i.e. the A index runs fastest. ``tensor`` (``np.kron``),
``partial_trace`` and ``partial_transpose`` all follow it.
"""
from typing import NamedTuple

import numpy as np

from . import _accel
from ._jacobi import jacobi_numba, jacobi_numpy
from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
RECON_TOL = 1e-9
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100

BACKEND = _accel.BACKEND
_kernel = jacobi_numba if _accel.USE_NUMBA else jacobi_numpy


class EigenDecomposition(NamedTuple):
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Coerce to a square ``complex128`` array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def hermitian_residual(m) -> float:
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, raising :class:`NotHermitian` if ``max|M - M^H| > tol``."""
    m = as_matrix(m)
    res = hermitian_residual(m)
    if res > tol:
        raise NotHermitian(f"max|M - M^H| = {res:.3e} exceeds {tol:.1e}")
    return m


def _run_kernel(m, want_vectors, kernel):
    m = check_hermitian(m)
    herm = 0.5 * (m + m.conj().T)
    w, v, sweeps, converged = (kernel or _kernel)(herm, want_vectors, JACOBI_TOL, MAX_SWEEPS)
    if not converged:
        raise NoConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def _fix_phases(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            lead = col[nz[0]]
            v[:, k] = col * (abs(lead) / lead)
    return v


def hermitian_eigen(m, kernel=None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back sorted descending (stable for ties), and every
    eigenvector is scaled so its first nonzero component is real positive.

    Args:
        m: square Hermitian matrix.
        kernel: override the backend kernel (``jacobi_numpy`` / ``jacobi_numba``);
            used by the benchmark and the cross-backend tests.

    Raises:
        NotHermitian: if ``max|M - M^H|`` exceeds ``HERMITIAN_TOL``.
        NoConvergence: if the sweep budget is exhausted.
    """
    w, v = _run_kernel(m, True, kernel)
    return EigenDecomposition(w, _fix_phases(v))


def eigvalsh(m, kernel=None) -> np.ndarray:
    """Eigenvalues only (descending); skips the eigenvector accumulation."""
    return _run_kernel(m, False, kernel)[0]


def tensor(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def _split(m, dim_s: int, dim_a: int) -> np.ndarray:
    m = as_matrix(m)
    if dim_s < 1 or dim_a < 1 or m.shape[0] != dim_s * dim_a:
        raise DimensionMismatch(
            f"matrix of dim {m.shape[0]} does not factor as {dim_s} x {dim_a}"
        )
    return m.reshape(dim_s, dim_a, dim_s, dim_a)


def partial_trace(m, dim_s: int, dim_a: int, keep: str = "S") -> np.ndarray:
    """Reduce a composite operator to the factor named by ``keep`` ("S" or "A")."""
    m4 = _split(m, dim_s, dim_a)
    key = keep.upper()
    if key == "S":
        return np.einsum("iaja->ij", m4)
    if key == "A":
        return np.einsum("iaib->ab", m4)
    raise ValueError(f"keep must be 'S' or 'A', got {keep!r}")


def partial_transpose(m, dim_s: int, dim_a: int) -> np.ndarray:
    """Transpose the A indices only."""
    m4 = _split(m, dim_s, dim_a)
    n = dim_s * dim_a
    return np.ascontiguousarray(m4.transpose(0, 3, 2, 1)).reshape(n, n)


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m), "fro"))
