"""Decomposition of the projector semigroup into two non-Markovian pieces.

Given a rate gamma, a weight p and a profile g(t) with g = p up to
t* = -ln(1-p)/gamma and 0 < g <= p afterwards, the semigroup profile
splits exactly as

    p mu_1(t) + (1-p) mu_2(t) = e^{-gamma t},
    mu_1 = e^{-gamma t} g/p,   mu_2 = e^{-gamma t} (1-g)/(1-p),

and each mu_k drives a projector family with local rate
gamma_1 = gamma - g'/g, gamma_2 = gamma + g'/(1-g) and waiting density
f_k = -mu_k' = gamma_k mu_k.  Both rates dip negative for the sin^2
profile even though the combination is an exact semigroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

from .errors import DomainError
from .families import DynamicalMapFamily, projector_family

ScalarFn = Callable[[float], float]

RATE_GUARD = 1e-12


def t_star(gamma: float, p: float) -> float:
    """Split time -ln(1-p)/gamma at which e^{-gamma t} has decayed to 1-p."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"weight p must lie in (0, 1), got {p}")
    if gamma <= 0:
        raise DomainError(f"rate gamma must be positive, got {gamma}")
    return -math.log1p(-p) / gamma


@dataclass(frozen=True)
class GProfile:
    """Profile g(t) with analytic derivative and kink locations.

    g is constant (= p) on [0, t_star]; g_dot must be its exact derivative.
    """

    p: float
    gamma: float
    t_star: float
    g: ScalarFn
    g_dot: ScalarFn
    period: Optional[float] = None

    def breakpoints_upto(self, tmax: float) -> tuple:
        """Kinks (t* and subsequent quarter periods) up to tmax."""
        if self.t_star > tmax:
            return ()
        if self.period is None:
            return (self.t_star,)
        pts = []
        n = 0
        while True:
            b = self.t_star + n * self.period
            if b > tmax:
                break
            pts.append(b)
            n += 1
        return tuple(pts)


def g_profile(
    gamma: float,
    p: float,
    g: ScalarFn,
    g_dot: ScalarFn,
    period: Optional[float] = None,
) -> GProfile:
    """Wrap a custom (g, g') pair; run validate_profile before trusting it."""
    return GProfile(p, gamma, t_star(gamma, p), g, g_dot, period)


def g_sin2(gamma: float, p: float, epsilon: float) -> GProfile:
    """Profile g(t) = p (1 - epsilon sin^2(gamma (t - t*))) for t > t*, p before.

    Requires 0 < epsilon < 1; at epsilon = 1 the profile touches 0 and the
    local rate gamma_1 diverges.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie strictly in (0, 1), got {epsilon}")
    ts = t_star(gamma, p)

    def g(t: float) -> float:
        if t <= ts:
            return p
        return p * (1.0 - epsilon * math.sin(gamma * (t - ts)) ** 2)

    def g_dot(t: float) -> float:
        if t <= ts:
            return 0.0
        return -p * epsilon * gamma * math.sin(2.0 * gamma * (t - ts))

    return GProfile(p, gamma, ts, g, g_dot, period=math.pi / (2.0 * gamma))


def mu_profiles(prof: GProfile) -> Tuple[ScalarFn, ScalarFn]:
    """Component profiles mu_1 = e^{-gamma t} g/p, mu_2 = e^{-gamma t} (1-g)/(1-p).

    On [0, t*] both reduce exactly to e^{-gamma t}.
    """
    gamma, p, g = prof.gamma, prof.p, prof.g

    def mu1(t: float) -> float:
        return math.exp(-gamma * t) * (g(t) / p)

    def mu2(t: float) -> float:
        return math.exp(-gamma * t) * ((1.0 - g(t)) / (1.0 - p))

    return mu1, mu2


def local_rates(prof: GProfile) -> Tuple[ScalarFn, ScalarFn]:
    """Local rates gamma_1 = gamma - g'/g and gamma_2 = gamma + g'/(1-g)."""
    gamma, g, g_dot = prof.gamma, prof.g, prof.g_dot

    def gamma1(t: float) -> float:
        gt = g(t)
        if abs(gt) <= RATE_GUARD:
            raise ZeroDivisionError(f"g({t}) = {gt} is within {RATE_GUARD} of 0")
        return gamma - g_dot(t) / gt

    def gamma2(t: float) -> float:
        rest = 1.0 - g(t)
        if abs(rest) <= RATE_GUARD:
            raise ZeroDivisionError(f"1 - g({t}) = {rest} is within {RATE_GUARD} of 0")
        return gamma + g_dot(t) / rest

    return gamma1, gamma2


@dataclass(frozen=True)
class MixtureDecomposition:
    """All derived functions of a profile: weights, local rates, densities."""

    profile: GProfile
    mu1: ScalarFn
    mu2: ScalarFn
    gamma1: ScalarFn
    gamma2: ScalarFn
    f1: ScalarFn
    f2: ScalarFn


def decompose(prof: GProfile) -> MixtureDecomposition:
    """Derive mu_k, gamma_k and f_k = gamma_k mu_k from the profile."""
    mu1, mu2 = mu_profiles(prof)
    gamma1, gamma2 = local_rates(prof)

    def f1(t: float) -> float:
        return gamma1(t) * mu1(t)

    def f2(t: float) -> float:
        return gamma2(t) * mu2(t)

    return MixtureDecomposition(prof, mu1, mu2, gamma1, gamma2, f1, f2)


def waiting_densities(dec: MixtureDecomposition) -> Tuple[ScalarFn, ScalarFn]:
    """Densities f_k = -mu_k'; negative values flag non-Markovian components."""
    return dec.f1, dec.f2


class ProfileReport(NamedTuple):
    """validate_profile outcome; first_violation is (t, check name) or None."""

    passed: bool
    checks: dict
    first_violation: Optional[Tuple[float, str]]


def validate_profile(prof: GProfile, grid) -> ProfileReport:
    """Grid checks: g(0) = p, g constant before t*, 0 < g <= p, 0 < mu_k <= 1."""
    grid = np.asarray(grid, dtype=float)
    mu1, mu2 = mu_profiles(prof)
    checks = {
        "g_starts_at_p": True,
        "g_constant_before_t_star": True,
        "g_in_bounds": True,
        "mu_in_bounds": True,
    }
    first: Optional[Tuple[float, str]] = None

    def fail(name: str, t: float):
        nonlocal first
        checks[name] = False
        if first is None:
            first = (float(t), name)

    if abs(prof.g(0.0) - prof.p) > 1e-12:
        fail("g_starts_at_p", 0.0)
    # single pass in time order so first_violation is the earliest grid hit
    for t in grid:
        gt = prof.g(t)
        if (
            checks["g_constant_before_t_star"]
            and t <= prof.t_star
            and abs(gt - prof.p) > 1e-12
        ):
            fail("g_constant_before_t_star", t)
        if checks["g_in_bounds"] and (gt <= 0.0 or gt > prof.p + 1e-12):
            fail("g_in_bounds", t)
        if checks["mu_in_bounds"]:
            m1, m2 = mu1(t), mu2(t)
            if not (0.0 < m1 <= 1.0 + 1e-12 and 0.0 < m2 <= 1.0 + 1e-12):
                fail("mu_in_bounds", t)
    return ProfileReport(all(checks.values()), checks, first)


def decomposition_families(
    dec: MixtureDecomposition, e: np.ndarray
) -> Tuple[DynamicalMapFamily, DynamicalMapFamily]:
    """Projector families driven by mu_1 and mu_2 over the projector E."""
    prof = dec.profile
    fam1 = projector_family(
        dec.mu1, e, rate=dec.gamma1, breakpoints=prof.breakpoints_upto
    )
    fam2 = projector_family(
        dec.mu2, e, rate=dec.gamma2, breakpoints=prof.breakpoints_upto
    )
    return fam1, fam2
