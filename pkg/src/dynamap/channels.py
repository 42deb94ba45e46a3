"""States, superoperators, Choi matrices, and CPTP projector channels.

A superoperator is a d^2 x d^2 complex matrix acting on column-stacked
operators (see :mod:`dynamap.linalg`).  Complete positivity is tested
operationally through the Choi matrix; the unnormalized convention
C = sum_ij |i><j| (x) S(|i><j|) is used, so Tr C = d for trace-preserving
maps and S is CP iff C is positive semidefinite.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidStateError,
    NotHermitianError,
    NotProjectorError,
)
from .linalg import dagger, eigvals_hermitian, frob, is_hermitian, unvec, vec

CHOI_HERM_TOL = 1e-8
PSD_TOL = 1e-10


class CpCheck(NamedTuple):
    """Complete-positivity verdict with the witnessing Choi eigenvalue."""

    ok: bool
    min_eig: float


def superop_dim(s: np.ndarray) -> int:
    """System dimension d of a d^2 x d^2 superoperator matrix."""
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionMismatchError(f"superoperator must be square, got {s.shape}")
    d = int(round(np.sqrt(s.shape[0])))
    if d * d != s.shape[0]:
        raise DimensionMismatchError(
            f"superoperator side {s.shape[0]} is not a perfect square"
        )
    return d


def identity_superop(d: int) -> np.ndarray:
    return np.eye(d * d, dtype=complex)


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def validate_state(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return as complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"state must be a square matrix, got {rho.shape}")
    if not is_hermitian(rho, tol):
        raise InvalidStateError("state is not Hermitian")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"state trace {tr} differs from 1")
    min_eig = float(eigvals_hermitian(rho)[-1])
    if min_eig < -tol:
        raise InvalidStateError(f"state has negative eigenvalue {min_eig:.3e}")
    return rho


def random_density_matrix(d: int, rng=None) -> np.ndarray:
    """Full-rank random state: normalized A A† with standard-Gaussian A."""
    gen = np.random.default_rng(rng)
    a = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    rho = a @ dagger(a)
    return rho / np.trace(rho).real


def apply(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Act with a superoperator on an operator: unvec(S vec(rho))."""
    s = np.asarray(s, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    d = superop_dim(s)
    if rho.shape != (d, d):
        raise DimensionMismatchError(
            f"operator shape {rho.shape} does not match superoperator dim {d}"
        )
    return unvec(s @ vec(rho), d)


def choi(s: np.ndarray) -> np.ndarray:
    """Choi matrix C = sum_ij |i><j| (x) S(|i><j|), unnormalized.

    Implemented as an index reshuffle of the superoperator matrix:
    C[i*d+k, j*d+l] = S[k+l*d, i+j*d].
    """
    s = np.asarray(s, dtype=complex)
    d = superop_dim(s)
    return s.reshape(d, d, d, d).transpose(3, 1, 2, 0).reshape(d * d, d * d)


def is_cp(s: np.ndarray, tol: float = PSD_TOL) -> CpCheck:
    """CP test: the Choi matrix must be PSD up to -tol on its smallest eigenvalue.

    Raises ``NotHermitianError`` when the Choi matrix is not Hermitian, i.e.
    the map is not Hermiticity-preserving.
    """
    c = choi(s)
    if not is_hermitian(c, CHOI_HERM_TOL):
        raise NotHermitianError("Choi matrix is not Hermitian within 1e-8")
    min_eig = float(eigvals_hermitian(c, CHOI_HERM_TOL)[-1])
    return CpCheck(min_eig >= -tol, min_eig)


def is_tp(s: np.ndarray, tol: float = 1e-10) -> bool:
    """Trace preservation on the full basis of matrix units."""
    s = np.asarray(s, dtype=complex)
    d = superop_dim(s)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            expected = 1.0 if i == j else 0.0
            if abs(complex(np.trace(apply(s, unit))) - expected) > tol:
                return False
    return True


def is_projector(s: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff S composed with itself equals S (||S S - S||_F <= tol)."""
    s = np.asarray(s, dtype=complex)
    superop_dim(s)
    return frob(s @ s - s) <= tol


def projector_replacer(omega: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> omega Tr(rho); a CPTP projector for any state omega."""
    omega = validate_state(omega)
    d = omega.shape[0]
    tr_row = vec(np.eye(d, dtype=complex))
    return np.outer(vec(omega), tr_row)


def projector_depolarize(d: int) -> np.ndarray:
    """Completely depolarizing projector rho -> (I/d) Tr(rho)."""
    if d < 2:
        raise DimensionMismatchError(f"dimension must be >= 2, got {d}")
    return projector_replacer(maximally_mixed(d))


def projector_dephase(d: int) -> np.ndarray:
    """Pinching onto the computational basis: rho -> sum_k |k><k| rho |k><k|."""
    if d < 2:
        raise DimensionMismatchError(f"dimension must be >= 2, got {d}")
    return np.diag(vec(np.eye(d, dtype=complex)))


def transpose_superop(d: int) -> np.ndarray:
    """Matrix transposition rho -> rho^T; Hermiticity-preserving but not CP."""
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[i + j * d, j + i * d] = 1.0
    return s


def require_projector(e: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    e = np.asarray(e, dtype=complex)
    if not is_projector(e, tol):
        raise NotProjectorError(
            f"superoperator is not idempotent (||E E - E||_F > {tol:g})"
        )
    return e
