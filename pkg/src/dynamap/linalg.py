"""Dense complex matrix kernel.

Everything downstream works with plain ``numpy`` arrays.  The one global
convention fixed here is column-stacking vectorization:

    vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)

All tolerances are explicit; matrices in this package are at most
d**2 x d**2 with d <= 4, so dense LAPACK routines are used throughout.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import ConvergenceError, NotHermitianError, SingularMatrixError

HERM_TOL = 1e-10
PIVOT_TOL = 1e-12

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


class HermEig(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return frob(m - dagger(m)) <= tol * max(1.0, frob(m))


def _require_hermitian(m: np.ndarray, tol: float) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian within tol={tol:g} "
            f"(residual {frob(m - dagger(m)):.3e})"
        )
    # symmetrize to kill finite-difference noise before the eigensolve
    return 0.5 * (m + dagger(m))


def herm_eig(m: np.ndarray, tol: float = HERM_TOL) -> HermEig:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in descending order with matching orthonormal
    eigenvector columns.  Raises ``NotHermitianError`` if the symmetry check
    fails and ``ConvergenceError`` if LAPACK does not converge.
    """
    m = _require_hermitian(m, tol)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    order = np.argsort(vals)[::-1]
    return HermEig(vals[order].real, vecs[:, order])


def eigvals_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Eigenvalues only (descending), same checks as :func:`herm_eig`."""
    m = _require_hermitian(m, tol)
    try:
        vals = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    return vals[::-1].real


def trace_norm(m: np.ndarray, tol: float = HERM_TOL) -> float:
    """Trace norm of a Hermitian matrix: the sum of |eigenvalue|."""
    return float(np.sum(np.abs(eigvals_hermitian(m, tol))))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def inv(m: np.ndarray) -> np.ndarray:
    """Inverse via LU with an explicit pivot check.

    Raises ``SingularMatrixError`` when any pivot falls below
    ``PIVOT_TOL * ||m||_F``, instead of silently amplifying noise.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = frob(m)
    try:
        with warnings.catch_warnings():
            # the pivot check below raises a typed error instead
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(m, check_finite=True)
    except Exception as exc:
        raise SingularMatrixError(f"LU factorization failed: {exc}") from exc
    pivots = np.abs(np.diag(lu))
    if np.any(pivots <= PIVOT_TOL * scale):
        raise SingularMatrixError(
            f"matrix singular to working precision "
            f"(min pivot {pivots.min():.3e}, scale {scale:.3e})"
        )
    return lu_solve((lu, piv), np.eye(m.shape[0], dtype=complex))


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"cannot reshape length-{v.size} vector to {dim}x{dim}")
    return v.reshape((dim, dim), order="F")
