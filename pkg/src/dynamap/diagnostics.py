"""Markovianity diagnostics for dynamical-map families.

Three independent witnesses are implemented: complete positivity of the
intermediate propagators V(t+dt, t) = Lambda(t+dt) Lambda(t)^{-1} (scanned
through Choi spectra), the derivative of the trace distance over state
pairs, and monotonicity of the depolarizing channel capacity.  Semi-Markov
waiting-time checks and the Laplace-domain kernel relation
k~(s) = s f~(s) / (1 - f~(s)) connect the memory-kernel picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .channels import apply
from .errors import DomainError
from .families import DynamicalMapFamily, SampledFamily
from .linalg import PAULIS, inv, trace_norm, vec
from .quad import adaptive_simpson

ScalarFn = Callable[[float], float]

CHOI_TOL = 1e-8
SIGMA_TOL = 1e-8
FD_STEP = 1e-4


def _intervals_from_mask(tgrid: np.ndarray, mask: np.ndarray) -> List[Tuple[float, float]]:
    """Maximal runs of True grid points as (t_lo, t_hi) pairs."""
    intervals = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            intervals.append((float(tgrid[start]), float(tgrid[i - 1])))
            start = None
    if start is not None:
        intervals.append((float(tgrid[start]), float(tgrid[-1])))
    return intervals


def _choi_batch(superops: np.ndarray, d: int) -> np.ndarray:
    m = superops.shape[0]
    return superops.reshape(m, d, d, d, d).transpose(0, 4, 2, 3, 1).reshape(
        m, d * d, d * d
    )


@dataclass(frozen=True)
class DivisibilityReport:
    """Minimum Choi eigenvalue of each intermediate step, with verdict."""

    tgrid: np.ndarray
    min_choi_eig: np.ndarray
    verdict: str
    violation_intervals: List[Tuple[float, float]]


def cp_divisibility_scan(
    family,
    tgrid: Optional[np.ndarray] = None,
    delta: Optional[float] = None,
    tol: float = CHOI_TOL,
) -> DivisibilityReport:
    """Scan CP-ness of the propagators V(t + delta, t) along the grid.

    ``delta`` defaults to the grid spacing, i.e. consecutive grid points.
    Accepts a closed-form family (with ``tgrid``) or a solver-produced
    ``SampledFamily`` (grid taken from it, consecutive steps only).  Entry i
    reports the smallest Choi eigenvalue of the step leaving t_i; the
    verdict is "nondivisible" iff any entry falls below -tol.
    """
    if isinstance(family, SampledFamily):
        if tgrid is not None or delta is not None:
            raise DomainError(
                "sampled families carry their own grid and step"
            )
        ts = np.asarray(family.tgrid, dtype=float)
        maps = np.asarray(family.maps, dtype=complex)
        ends = maps[1:]
        starts = maps[:-1]
        scan_grid = ts[:-1]
        d = family.dim
    else:
        if tgrid is None:
            raise DomainError("closed-form families need an explicit grid")
        ts = np.asarray(tgrid, dtype=float)
        d = family.dim
        if delta is None:
            maps = np.stack([family.map_at(t) for t in ts]).astype(complex)
            ends = maps[1:]
            starts = maps[:-1]
            scan_grid = ts[:-1]
        else:
            if delta <= 0:
                raise DomainError(f"step must be positive, got {delta}")
            starts = np.stack([family.map_at(t) for t in ts]).astype(complex)
            ends = np.stack([family.map_at(t + delta) for t in ts]).astype(complex)
            scan_grid = ts

    steps = np.stack([e @ inv(s) for e, s in zip(ends, starts)])
    chois = _choi_batch(steps, d)
    chois = 0.5 * (chois + np.conj(np.transpose(chois, (0, 2, 1))))
    min_eig = np.linalg.eigvalsh(chois)[:, 0]
    mask = min_eig < -tol
    verdict = "nondivisible" if bool(mask.any()) else "divisible"
    return DivisibilityReport(
        scan_grid, min_eig, verdict, _intervals_from_mask(scan_grid, mask)
    )


def _axis_pair(n: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    bloch = n[0] * PAULIS[1] + n[1] * PAULIS[2] + n[2] * PAULIS[3]
    rho1 = 0.5 * (PAULIS[0] + bloch)
    rho2 = 0.5 * (PAULIS[0] - bloch)
    return rho1, rho2


def default_qubit_pairs(n_random: int = 20, seed: int = 0) -> list:
    """Antipodal Bloch pairs: the three axes plus seeded random directions."""
    pairs = [_axis_pair(n) for n in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        n = rng.standard_normal(3)
        n /= np.linalg.norm(n)
        pairs.append(_axis_pair(n))
    return pairs


def blp_derivative(
    family, rho1: np.ndarray, rho2: np.ndarray, t: float, h: float = FD_STEP
) -> float:
    """Derivative of ||Lambda(t)(rho1 - rho2)||_1 by finite differences.

    Central when t >= h, forward otherwise; positive values witness
    information backflow.
    """
    map_at = family.map_at if hasattr(family, "map_at") else family
    delta = np.asarray(rho1, dtype=complex) - np.asarray(rho2, dtype=complex)

    def dist(u: float) -> float:
        return trace_norm(apply(map_at(u), delta))

    if t >= h:
        return (dist(t + h) - dist(t - h)) / (2.0 * h)
    return (dist(t + h) - dist(t)) / h


@dataclass(frozen=True)
class BlpReport:
    """Largest trace-distance derivative over the pair set, per grid point."""

    tgrid: np.ndarray
    sigma: np.ndarray
    positive_intervals: List[Tuple[float, float]]


def _batch_trace_norms(s: np.ndarray, delta_vecs: np.ndarray, d: int) -> np.ndarray:
    imgs = delta_vecs @ s.T
    y = imgs.reshape(-1, d, d)
    y = 0.5 * (y + np.conj(np.transpose(y, (0, 2, 1))))
    return np.abs(np.linalg.eigvalsh(y)).sum(axis=1)


def blp_scan(
    family,
    tgrid: np.ndarray,
    pairs: Optional[list] = None,
    h: float = FD_STEP,
    tol: float = SIGMA_TOL,
    seed: int = 0,
) -> BlpReport:
    """Max trace-distance derivative over state pairs at each grid point.

    ``pairs`` defaults to the qubit set (3 axis pairs plus 20 seeded random
    antipodal pairs); non-qubit families must pass explicit pairs.
    """
    map_at = family.map_at if hasattr(family, "map_at") else family
    d = family.dim if hasattr(family, "dim") else None
    if pairs is None:
        if d != 2:
            raise DomainError("default state pairs exist only for d=2")
        pairs = default_qubit_pairs(seed=seed)
    if d is None:
        d = np.asarray(pairs[0][0]).shape[0]
    delta_vecs = np.stack(
        [vec(np.asarray(r1, dtype=complex) - np.asarray(r2, dtype=complex))
         for r1, r2 in pairs]
    )
    tgrid = np.asarray(tgrid, dtype=float)
    sigma = np.empty(tgrid.shape)
    for i, t in enumerate(tgrid):
        if t >= h:
            hi = _batch_trace_norms(map_at(t + h), delta_vecs, d)
            lo = _batch_trace_norms(map_at(t - h), delta_vecs, d)
            derivs = (hi - lo) / (2.0 * h)
        else:
            hi = _batch_trace_norms(map_at(t + h), delta_vecs, d)
            lo = _batch_trace_norms(map_at(t), delta_vecs, d)
            derivs = (hi - lo) / h
        sigma[i] = derivs.max()
    mask = sigma > tol
    return BlpReport(tgrid, sigma, _intervals_from_mask(tgrid, mask))


def _xlnx(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log(x)


def depolarizing_capacity(lam: float, d: int) -> float:
    """Capacity ln d - S_min of the map lam*identity + (1-lam)*depolarize, in nats."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")
    d = int(d)
    if lam == 0.0:
        # S_min = ln d exactly; avoid rounding residue from the two log terms
        return 0.0
    big = lam + (1.0 - lam) / d
    small = (1.0 - lam) / d
    return math.log(d) + _xlnx(big) + (d - 1) * _xlnx(small)


@dataclass(frozen=True)
class CapacitySeries:
    """Capacity along a scalar profile, with the lambda values used."""

    tgrid: np.ndarray
    capacity: np.ndarray
    lam_values: np.ndarray


def capacity_trajectory(mu: ScalarFn, tgrid: np.ndarray, d: int) -> CapacitySeries:
    """Capacity of the depolarizing family at lambda = mu(t) down the grid."""
    tgrid = np.asarray(tgrid, dtype=float)
    lam = np.empty(tgrid.shape)
    cap = np.empty(tgrid.shape)
    for i, t in enumerate(tgrid):
        value = float(mu(t))
        if not 0.0 <= value <= 1.0:
            raise DomainError(
                f"profile leaves [0, 1] at t={t:g} (mu={value!r})"
            )
        lam[i] = value
        cap[i] = depolarizing_capacity(value, d)
    return CapacitySeries(tgrid, cap, lam)


@dataclass(frozen=True)
class SemiMarkovReport:
    """Waiting-time distribution checks: pointwise sign and total mass."""

    tgrid: np.ndarray
    fvals: np.ndarray
    survival: np.ndarray
    integral: float
    nonneg_ok: bool
    integral_ok: bool
    passed: bool
    first_negative_t: Optional[float]


def semimarkov_check(
    f: ScalarFn,
    horizon: float,
    grid: Optional[np.ndarray] = None,
    breakpoints: Sequence[float] = (),
) -> SemiMarkovReport:
    """Check f >= 0 on the grid and int_0^T f <= 1; report survival 1 - int f.

    A pass certifies f as a legitimate waiting-time density on [0, T];
    negativity anywhere marks the component as non-Markovian.
    """
    if horizon <= 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    if grid is None:
        grid = np.linspace(0.0, horizon, 2001)
    tgrid = np.asarray(grid, dtype=float)
    fvals = np.array([float(f(t)) for t in tgrid])
    negative = fvals < -1e-12
    nonneg_ok = not bool(negative.any())
    first_negative_t = float(tgrid[int(np.argmax(negative))]) if not nonneg_ok else None

    survival = np.empty(tgrid.shape)
    acc = adaptive_simpson(f, 0.0, tgrid[0], 1e-10, breakpoints)
    survival[0] = 1.0 - acc
    for i in range(1, len(tgrid)):
        acc += adaptive_simpson(f, tgrid[i - 1], tgrid[i], 1e-10, breakpoints)
        survival[i] = 1.0 - acc
    integral = adaptive_simpson(f, 0.0, horizon, 1e-10, breakpoints)
    integral_ok = integral <= 1.0 + 1e-10
    return SemiMarkovReport(
        tgrid,
        fvals,
        survival,
        float(integral),
        nonneg_ok,
        integral_ok,
        nonneg_ok and integral_ok,
        first_negative_t,
    )


class LaplaceResult(NamedTuple):
    """Truncated Laplace transform with an explicit tail bound."""

    value: float
    truncation_bound: float


def laplace(
    fn: ScalarFn,
    s: float,
    horizon: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> LaplaceResult:
    """Transform f~(s) = int_0^T e^{-st} f(t) dt by adaptive Simpson.

    The horizon defaults to 40/s, making e^{-sT} ~ 4e-18; the reported
    bound sup|f| e^{-sT}/s dominates the discarded tail for bounded f.
    """
    if s <= 0:
        raise DomainError(f"transform variable must be positive, got s={s}")
    if horizon is None:
        horizon = 40.0 / s
    value = adaptive_simpson(
        lambda t: math.exp(-s * t) * fn(t), 0.0, horizon, 1e-10, breakpoints
    )
    sup = max(abs(float(fn(t))) for t in np.linspace(0.0, horizon, 1001))
    bound = sup * math.exp(-s * horizon) / s
    return LaplaceResult(float(value), float(bound))


def kernel_laplace_from_f(f_tilde: float, s: float) -> float:
    """Memory-kernel transform k~(s) = s f~(s) / (1 - f~(s))."""
    rest = 1.0 - f_tilde
    if abs(rest) <= 1e-12:
        raise DomainError(f"pole: 1 - f~ = {rest} at s={s}")
    return s * f_tilde / rest
