"""Dynamical-map families: closed forms, convex combination, and solvers.

A family is a time-indexed superoperator t -> Lambda(t) with Lambda(0) = 1,
optionally carrying an analytic generator and an analytic scalar profile
(the weight mu(t) of the identity for projector families).  Numerical
propagation (time-local RK4, memory-kernel Volterra) yields grid-sampled
families for cross-validation against the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .channels import require_projector, superop_dim
from .errors import (
    DimensionMismatchError,
    DomainError,
    GridError,
    ProfileError,
    StepSizeError,
)
from .linalg import PAULIS, kron, vec
from .quad import adaptive_simpson

DEFAULT_SUBSTEP = 1e-3
DEFAULT_ERR_TOL = 1e-6

ScalarFn = Callable[[float], float]
SuperopFn = Callable[[float], np.ndarray]


def _no_breakpoints(tmax: float) -> tuple:
    return ()


@dataclass(frozen=True)
class DynamicalMapFamily:
    """Closed-form family t -> Lambda(t) with optional generator and profile."""

    dim: int
    map_at: SuperopFn
    generator_at: Optional[SuperopFn] = None
    profile: Optional[ScalarFn] = None
    breakpoints_upto: Callable[[float], tuple] = _no_breakpoints


@dataclass(frozen=True)
class SampledFamily:
    """Solver output: maps on an ascending time grid starting at 0."""

    dim: int
    tgrid: np.ndarray
    maps: np.ndarray


@dataclass(frozen=True)
class MemoryKernel:
    """Kernel K(t) = k(t) (E - 1) with a CPTP projector E and scalar k."""

    dim: int
    k: ScalarFn
    projector: np.ndarray

    def __post_init__(self):
        e = require_projector(self.projector)
        if superop_dim(e) != self.dim:
            raise DimensionMismatchError(
                f"projector dimension does not match dim={self.dim}"
            )


def _pauli_projectors():
    """HS-orthogonal projectors |sigma_a><sigma_a|/2 onto the Pauli directions."""
    return [np.outer(vec(s), vec(s).conj()) / 2.0 for s in PAULIS]


_PAULI_PROJ = _pauli_projectors()


def pauli_semigroup(c: float, k: int) -> DynamicalMapFamily:
    """Semigroup e^{t L_k} with L_k = (c/2)(sigma_k . sigma_k - .).

    Leaves I and sigma_k fixed and scales the other two Paulis by e^{-ct}.
    """
    if c <= 0:
        raise DomainError(f"rate must be positive, got c={c}")
    if k not in (1, 2, 3):
        raise DomainError(f"axis index must be 1, 2 or 3, got {k}")
    others = [a for a in (1, 2, 3) if a != k]
    decaying = _PAULI_PROJ[others[0]] + _PAULI_PROJ[others[1]]
    eye4 = np.eye(4, dtype=complex)
    gen = (c / 2.0) * (kron(PAULIS[k].conj(), PAULIS[k]) - eye4)

    def map_at(t: float) -> np.ndarray:
        return eye4 + (math.exp(-c * t) - 1.0) * decaying

    return DynamicalMapFamily(2, map_at, generator_at=lambda t: gen)


def pauli_mixture(c: float) -> DynamicalMapFamily:
    """Equal mixture of the axis-1 and axis-2 semigroups at rate 2c.

    Pauli eigenvalues lambda_1 = lambda_2 = (1 + e^{-2ct})/2 and
    lambda_3 = e^{-2ct}; the canonical rates of its time-local generator are
    gamma_1 = gamma_2 = c/2 and gamma_3 = -(c/2) tanh(ct), negative for all
    t > 0 while the map stays CP.
    """
    if c <= 0:
        raise DomainError(f"rate must be positive, got c={c}")
    transverse = _PAULI_PROJ[1] + _PAULI_PROJ[2]
    longitudinal = _PAULI_PROJ[3]
    eye4 = np.eye(4, dtype=complex)

    def map_at(t: float) -> np.ndarray:
        q = math.exp(-2.0 * c * t)
        return eye4 + ((1.0 + q) / 2.0 - 1.0) * transverse + (q - 1.0) * longitudinal

    def generator_at(t: float) -> np.ndarray:
        q = math.exp(-2.0 * c * t)
        xi_t = -2.0 * c * q / (1.0 + q)
        return xi_t * transverse + (-2.0 * c) * longitudinal

    return DynamicalMapFamily(2, map_at, generator_at=generator_at)


def projector_family(
    mu: ScalarFn,
    e: np.ndarray,
    rate: Optional[ScalarFn] = None,
    breakpoints: Sequence[float] | Callable[[float], tuple] = (),
) -> DynamicalMapFamily:
    """Family mu(t) 1 + (1 - mu(t)) E for a CPTP projector E.

    ``rate``, when given, is the local rate gamma(t) = -mu'(t)/mu(t) and
    enables the analytic generator gamma(t)(E - 1).  ``breakpoints`` lists
    the kink locations of mu, either as a sequence or as a callable mapping
    a horizon to the kinks below it.  The map is CP iff mu(t) lies in
    [0, 1]; values outside are allowed (the solvers use such families as
    references) but yield non-CP maps.
    """
    e = require_projector(e)
    d = superop_dim(e)
    if abs(mu(0.0) - 1.0) > 1e-12:
        raise ProfileError(f"profile must start at 1, got mu(0)={mu(0.0)!r}")
    eye = np.eye(d * d, dtype=complex)
    shift = e - eye

    def map_at(t: float) -> np.ndarray:
        return eye + (1.0 - mu(t)) * shift

    generator_at = None
    if rate is not None:
        generator_at = lambda t: rate(t) * shift

    if callable(breakpoints):
        breakpoints_upto = breakpoints
    else:
        bp = tuple(sorted(breakpoints))

        def breakpoints_upto(tmax: float) -> tuple:
            return tuple(b for b in bp if b <= tmax)

    return DynamicalMapFamily(
        d, map_at, generator_at=generator_at, profile=mu,
        breakpoints_upto=breakpoints_upto,
    )


def projector_semigroup(gamma: float, e: np.ndarray) -> DynamicalMapFamily:
    """Semigroup e^{gamma t (E - 1)} = e^{-gamma t} 1 + (1 - e^{-gamma t}) E."""
    if gamma <= 0:
        raise DomainError(f"rate must be positive, got gamma={gamma}")
    return projector_family(
        lambda t: math.exp(-gamma * t), e, rate=lambda t: gamma
    )


def convex_combine(
    p: float, f1: DynamicalMapFamily, f2: DynamicalMapFamily
) -> DynamicalMapFamily:
    """Pointwise mixture p Lambda_1(t) + (1-p) Lambda_2(t)."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"mixing probability must be in [0, 1], got {p}")
    if f1.dim != f2.dim:
        raise DimensionMismatchError(
            f"family dimensions differ: {f1.dim} vs {f2.dim}"
        )

    def map_at(t: float) -> np.ndarray:
        return p * f1.map_at(t) + (1.0 - p) * f2.map_at(t)

    def breakpoints_upto(tmax: float) -> tuple:
        merged = set(f1.breakpoints_upto(tmax)) | set(f2.breakpoints_upto(tmax))
        return tuple(sorted(merged))

    return DynamicalMapFamily(f1.dim, map_at, breakpoints_upto=breakpoints_upto)


def _validate_tgrid(tgrid: np.ndarray, uniform: bool = False) -> np.ndarray:
    tgrid = np.asarray(tgrid, dtype=float)
    if tgrid.ndim != 1 or tgrid.size < 2:
        raise GridError("time grid must be a 1-d array with at least 2 points")
    if abs(tgrid[0]) > 1e-15:
        raise GridError(f"time grid must start at 0, got {tgrid[0]}")
    steps = np.diff(tgrid)
    if np.any(steps <= 0):
        raise GridError("time grid must be strictly ascending")
    if uniform:
        h = steps[0]
        if np.any(np.abs(steps - h) > 1e-12 * max(1.0, h)):
            raise GridError("memory-kernel solver requires a uniform grid")
    return tgrid


def _substep_edges(lo: float, hi: float, substep: float, breakpoints) -> list:
    """Split [lo, hi] at interior breakpoints, then into substeps <= substep."""
    pts = [lo]
    for b in breakpoints:
        if lo + 1e-12 < b < hi - 1e-12:
            pts.append(b)
    pts.append(hi)
    edges = [lo]
    for a, b in zip(pts[:-1], pts[1:]):
        nsub = max(1, math.ceil((b - a) / substep - 1e-9))
        edges.extend(a + (b - a) * (i + 1) / nsub for i in range(nsub))
    return edges


def propagate_ode(
    generator: SuperopFn,
    tgrid: np.ndarray,
    substep: float = DEFAULT_SUBSTEP,
    err_tol: float = DEFAULT_ERR_TOL,
    breakpoints: Sequence[float] = (),
) -> SampledFamily:
    """Propagate dLambda/dt = G(t) Lambda(t) from the identity with RK4.

    Each grid cell is split at the listed breakpoints and into fixed substeps
    no larger than ``substep``; every substep carries a step-doubling error
    estimate and ``StepSizeError`` is raised when any exceeds ``err_tol``.
    """
    tgrid = _validate_tgrid(tgrid)
    if substep <= 0:
        raise DomainError(f"substep must be positive, got {substep}")
    g0 = np.asarray(generator(0.0), dtype=complex)
    n = g0.shape[0]
    if g0.shape != (n, n):
        raise DimensionMismatchError("generator must return square matrices")
    d = int(round(math.sqrt(n)))
    if d * d != n:
        raise DimensionMismatchError(
            f"generator side {n} is not a perfect square"
        )
    bp = sorted(breakpoints)

    y = np.eye(n, dtype=complex)
    maps = [y]
    for lo, hi in zip(tgrid[:-1], tgrid[1:]):
        edges = _substep_edges(lo, hi, substep, bp)
        m = len(edges) - 1
        gs = np.empty((m, 5, n, n), dtype=complex)
        hs = np.empty(m)
        for i in range(m):
            u, v = edges[i], edges[i + 1]
            h = v - u
            hs[i] = h
            for q, tau in enumerate((u, u + h / 4, u + h / 2, u + 3 * h / 4, v)):
                gs[i, q] = generator(tau)
        y, err = _kernels.rk4_steps(gs, hs, y)
        if err > err_tol:
            raise StepSizeError(
                f"local error estimate {err:.3e} exceeds {err_tol:g} "
                f"on [{lo:g}, {hi:g}]; reduce the substep"
            )
        maps.append(y)
    return SampledFamily(d, tgrid, np.stack(maps))


def solve_memory_kernel(kernel: MemoryKernel, tgrid: np.ndarray) -> SampledFamily:
    """Solve dLambda/dt = int_0^t K(t-tau) Lambda(tau) dtau on a uniform grid.

    With K = k (E - 1) the solution stays in span{1, E}: writing
    Lambda = a(t) 1 + (1 - a(t)) E reduces the equation to the scalar
    Volterra equation a'(t) = -int_0^t k(t-tau) a(tau) dtau, solved to
    second order (trapezoid memory quadrature, Heun step).
    """
    tgrid = _validate_tgrid(tgrid, uniform=True)
    h = float(tgrid[1] - tgrid[0])
    kvals = np.array([float(kernel.k(t)) for t in tgrid])
    a, _ = _kernels.volterra_profile(kvals, h)
    n = kernel.dim * kernel.dim
    eye = np.eye(n, dtype=complex)
    shift = np.asarray(kernel.projector, dtype=complex) - eye
    maps = eye[None, :, :] + (1.0 - a)[:, None, None] * shift[None, :, :]
    return SampledFamily(kernel.dim, tgrid, maps)


def projector_weight(superop: np.ndarray, e: np.ndarray) -> float:
    """Weight a of a map in span{1, E}: Lambda = a 1 + (1 - a) E.

    Computed as the HS projection Tr[(1-E)†(Lambda-E)] / ||1-E||_F^2, which
    recovers a exactly for maps in the span and least-squares otherwise.
    """
    superop = np.asarray(superop, dtype=complex)
    e = np.asarray(e, dtype=complex)
    shift = np.eye(e.shape[0], dtype=complex) - e
    denom = float(np.vdot(shift, shift).real)
    return float(np.vdot(shift, superop - e).real / denom)


def analytic_memory_solution(
    f: ScalarFn,
    e: np.ndarray,
    t: float,
    breakpoints: Sequence[float] = (),
) -> np.ndarray:
    """Map (1 - F(t)) 1 + F(t) E with F(t) = int_0^t f, by adaptive Simpson."""
    e = require_projector(e)
    d = superop_dim(e)
    weight = adaptive_simpson(f, 0.0, t, tol=1e-10, breakpoints=breakpoints)
    eye = np.eye(d * d, dtype=complex)
    return eye + weight * (e - eye)
