"""Time-local GKSL generators and canonical Pauli-rate decomposition.

A generator L(t)rho = -i[H(t), rho] + sum_a gamma_a(t) (V_a rho V_a†
- (1/2){V_a† V_a, rho}) is realized as a superoperator under the global
column-stacking convention.  Generators can also be extracted numerically
from a map family via finite differences of d/dt Lambda = L Lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError, SingularMatrixError
from .linalg import PAULIS, dagger, frob, inv, is_hermitian, kron, unvec, vec

FD_STEP = 1e-4

MatrixFn = Callable[[float], np.ndarray]
RateFn = Callable[[float], float]


def _as_matrix_fn(value) -> MatrixFn:
    if callable(value):
        return value
    mat = np.asarray(value, dtype=complex)
    return lambda t: mat


def _as_rate_fn(value) -> RateFn:
    if callable(value):
        return value
    rate = float(value)
    return lambda t: rate


@dataclass(frozen=True)
class GkslGenerator:
    """Hamiltonian plus (rate, noise operator) channels, all possibly time-dependent.

    ``hamiltonian`` and the noise operators may be given as constants or as
    callables of t; rates likewise.
    """

    dim: int
    hamiltonian: MatrixFn
    channels: tuple = field(default_factory=tuple)

    def __init__(self, dim, hamiltonian=None, channels=()):
        object.__setattr__(self, "dim", int(dim))
        if hamiltonian is None:
            hamiltonian = np.zeros((dim, dim), dtype=complex)
        object.__setattr__(self, "hamiltonian", _as_matrix_fn(hamiltonian))
        object.__setattr__(
            self,
            "channels",
            tuple((_as_rate_fn(g), _as_matrix_fn(v)) for g, v in channels),
        )


def gksl_superop(gen: GkslGenerator, t: float) -> np.ndarray:
    """Superoperator of the generator at time t; annihilates trace."""
    d = gen.dim
    eye = np.eye(d, dtype=complex)
    h = np.asarray(gen.hamiltonian(t), dtype=complex)
    if h.shape != (d, d):
        raise DimensionMismatchError(f"hamiltonian shape {h.shape}, expected {(d, d)}")
    if not is_hermitian(h):
        raise NotHermitianError(f"hamiltonian at t={t} is not Hermitian")
    out = -1j * (kron(eye, h) - kron(h.T, eye))
    for rate, noise in gen.channels:
        g = float(rate(t))
        v = np.asarray(noise(t), dtype=complex)
        if v.shape != (d, d):
            raise DimensionMismatchError(
                f"noise operator shape {v.shape}, expected {(d, d)}"
            )
        vv = dagger(v) @ v
        out += g * (kron(v.conj(), v) - 0.5 * kron(eye, vv) - 0.5 * kron(vv.T, eye))
    return out


def pauli_gksl(rates, dim: int = 2) -> GkslGenerator:
    """Qubit generator sum_k gamma_k(t) (sigma_k rho sigma_k - rho)."""
    if dim != 2:
        raise DimensionMismatchError("Pauli generator requires d=2")
    channels = [(rates[k - 1], PAULIS[k]) for k in (1, 2, 3)]
    return GkslGenerator(2, None, channels)


def extract_generator(
    family, t: float, h: float = FD_STEP, breakpoints: Sequence[float] = ()
) -> np.ndarray:
    """Finite-difference generator of a map family: dLambda/dt Lambda^{-1}.

    Central differences of order h^2, switching to one-sided differences when
    t is within h of 0 or of a listed breakpoint so the stencil never
    straddles a kink.
    """
    map_at = family.map_at if hasattr(family, "map_at") else family
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    lam = np.asarray(map_at(t), dtype=complex)
    try:
        lam_inv = inv(lam)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"map at t={t} is not invertible: {exc}") from exc

    kink_behind = any(0 <= t - b < h for b in breakpoints)
    kink_ahead = any(0 < b - t < h for b in breakpoints)
    if kink_ahead and t >= h:
        deriv = (lam - map_at(t - h)) / h
    elif t < h or kink_behind:
        deriv = (map_at(t + h) - lam) / h
    else:
        deriv = (map_at(t + h) - map_at(t - h)) / (2.0 * h)
    return deriv @ lam_inv


class PauliRates(NamedTuple):
    """Canonical qubit rates with off-Pauli-diagonal leakage."""

    gamma1: float
    gamma2: float
    gamma3: float
    residual: float


def pauli_transfer(s: np.ndarray) -> np.ndarray:
    """Matrix of a qubit superoperator in the orthonormal basis sigma_a/sqrt(2)."""
    s = np.asarray(s, dtype=complex)
    if s.shape != (4, 4):
        raise DimensionMismatchError("Pauli transfer matrix requires d=2")
    out = np.empty((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            image = unvec(s @ vec(PAULIS[b]), 2)
            out[a, b] = np.trace(PAULIS[a] @ image) / 2.0
    return out


def pauli_rates(l: np.ndarray) -> PauliRates:
    """Decompose a qubit generator into rates of sum_k gamma_k(sigma_k . sigma_k - .).

    The eigenvalues xi_k = Tr(sigma_k L(sigma_k))/2 of the Pauli-diagonal part
    satisfy xi_1 = -2(gamma_2+gamma_3) and cyclic, which inverts to
    gamma_1 = (xi_1 - xi_2 - xi_3)/4 and cyclic.  The residual is the
    Frobenius norm of L minus its Pauli-diagonal part.
    """
    m = pauli_transfer(l)
    xi = np.diag(m).real
    residual = float(frob(m - np.diag(np.diag(m))))
    g1 = (xi[1] - xi[2] - xi[3]) / 4.0
    g2 = (xi[2] - xi[1] - xi[3]) / 4.0
    g3 = (xi[3] - xi[1] - xi[2]) / 4.0
    return PauliRates(float(g1), float(g2), float(g3), residual)
