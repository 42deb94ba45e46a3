"""Closed-form families, RK4 propagation, memory-kernel solver."""

import math

import numpy as np
import pytest

from dynamap.channels import apply, is_cp, is_tp, projector_depolarize, projector_dephase
from dynamap.errors import (
    DimensionMismatchError,
    DomainError,
    GridError,
    NotProjectorError,
    ProfileError,
    StepSizeError,
)
from dynamap.families import (
    MemoryKernel,
    analytic_memory_solution,
    convex_combine,
    pauli_mixture,
    pauli_semigroup,
    projector_family,
    projector_semigroup,
    projector_weight,
    propagate_ode,
    solve_memory_kernel,
)
from dynamap.linalg import PAULIS, frob


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pauli_semigroup_action(k):
    c, t = 0.8, 0.7
    fam = pauli_semigroup(c, k)
    lam = fam.map_at(t)
    assert np.allclose(apply(lam, PAULIS[0]), PAULIS[0])
    assert np.allclose(apply(lam, PAULIS[k]), PAULIS[k])
    for j in (1, 2, 3):
        if j != k:
            assert np.allclose(apply(lam, PAULIS[j]), math.exp(-c * t) * PAULIS[j])


def test_pauli_semigroup_composition_law():
    fam = pauli_semigroup(1.3, 2)
    assert np.allclose(fam.map_at(0.0), np.eye(4))
    assert np.allclose(fam.map_at(0.9) @ fam.map_at(0.4), fam.map_at(1.3))


def test_pauli_semigroup_generator_consistency():
    fam = pauli_semigroup(0.6, 1)
    t, h = 0.5, 1e-5
    fd = (fam.map_at(t + h) - fam.map_at(t - h)) / (2 * h)
    assert np.linalg.norm(fd - fam.generator_at(t) @ fam.map_at(t)) <= 1e-8


def test_pauli_semigroup_rejects_bad_arguments():
    with pytest.raises(DomainError):
        pauli_semigroup(0.0, 1)
    with pytest.raises(DomainError):
        pauli_semigroup(1.0, 4)


def test_pauli_mixture_is_equal_mixture_of_semigroups():
    c = 0.9
    s1 = pauli_semigroup(2 * c, 1)
    s2 = pauli_semigroup(2 * c, 2)
    mix = pauli_mixture(c)
    for t in (0.0, 0.3, 1.7):
        expected = 0.5 * (s1.map_at(t) + s2.map_at(t))
        assert np.allclose(mix.map_at(t), expected, atol=1e-14)


def test_pauli_mixture_stays_cptp():
    mix = pauli_mixture(1.0)
    for t in (0.2, 1.0, 4.0):
        lam = mix.map_at(t)
        assert is_cp(lam).ok
        assert is_tp(lam)


def test_pauli_mixture_generator_matches_map_derivative():
    mix = pauli_mixture(1.0)
    t, h = 0.8, 1e-5
    fd = (mix.map_at(t + h) - mix.map_at(t - h)) / (2 * h)
    assert np.linalg.norm(fd - mix.generator_at(t) @ mix.map_at(t)) <= 1e-8


def test_convex_combine_reproduces_mixture():
    c = 1.4
    combined = convex_combine(0.5, pauli_semigroup(c, 1), pauli_semigroup(c, 2))
    mix = pauli_mixture(c / 2)
    for t in (0.0, 0.5, 2.0):
        assert np.allclose(combined.map_at(t), mix.map_at(t), atol=1e-14)


def test_convex_combine_rejects_bad_arguments():
    f2 = pauli_semigroup(1.0, 2)
    with pytest.raises(DomainError):
        convex_combine(1.5, pauli_semigroup(1.0, 1), f2)
    f3 = projector_semigroup(1.0, projector_depolarize(3))
    with pytest.raises(DimensionMismatchError):
        convex_combine(0.5, f3, f2)


def test_projector_family_shape_and_profile():
    e = projector_dephase(2)
    mu = lambda t: math.exp(-2.0 * t)
    fam = projector_family(mu, e, rate=lambda t: 2.0)
    t = 0.6
    expected = mu(t) * np.eye(4) + (1 - mu(t)) * e
    assert np.allclose(fam.map_at(t), expected)
    assert fam.profile is mu
    assert np.allclose(fam.generator_at(t), 2.0 * (e - np.eye(4)))


def test_projector_family_requires_unit_start():
    with pytest.raises(ProfileError):
        projector_family(lambda t: 0.5, projector_depolarize(2))
    with pytest.raises(NotProjectorError):
        projector_family(lambda t: 1.0, 0.5 * projector_depolarize(2))


def test_projector_family_breakpoints():
    e = projector_depolarize(2)
    fam = projector_family(lambda t: 1.0, e, breakpoints=(2.0, 0.5, 7.0))
    assert fam.breakpoints_upto(3.0) == (0.5, 2.0)
    fam2 = projector_family(lambda t: 1.0, e, breakpoints=lambda tmax: (tmax / 2,))
    assert fam2.breakpoints_upto(8.0) == (4.0,)


def test_projector_semigroup_profile():
    e = projector_depolarize(3)
    fam = projector_semigroup(0.7, e)
    assert fam.profile(1.1) == pytest.approx(math.exp(-0.77))
    with pytest.raises(DomainError):
        projector_semigroup(-1.0, e)


def test_propagate_ode_matches_semigroup():
    fam = pauli_semigroup(1.0, 3)
    tgrid = np.linspace(0.0, 2.0, 21)
    sol = propagate_ode(fam.generator_at, tgrid)
    assert sol.dim == 2
    devs = [frob(m - fam.map_at(t)) for t, m in zip(sol.tgrid, sol.maps)]
    assert max(devs) <= 1e-9


def test_propagate_ode_time_dependent_generator():
    """G(t) = -2t P solves to the Gaussian profile e^{-t^2} on the decaying block."""
    e = projector_depolarize(2)
    fam = projector_family(lambda t: math.exp(-(t**2)), e, rate=lambda t: 2.0 * t)
    tgrid = np.linspace(0.0, 1.5, 16)
    sol = propagate_ode(fam.generator_at, tgrid)
    devs = [frob(m - fam.map_at(t)) for t, m in zip(sol.tgrid, sol.maps)]
    assert max(devs) <= 1e-9


def test_propagate_ode_validation():
    fam = pauli_semigroup(1.0, 1)
    with pytest.raises(GridError):
        propagate_ode(fam.generator_at, np.array([0.5, 1.0]))
    with pytest.raises(GridError):
        propagate_ode(fam.generator_at, np.array([0.0, 1.0, 0.5]))
    with pytest.raises(GridError):
        propagate_ode(fam.generator_at, np.array([0.0]))
    with pytest.raises(DomainError):
        propagate_ode(fam.generator_at, np.linspace(0, 1, 5), substep=0.0)


def test_propagate_ode_step_rejection():
    fam = pauli_semigroup(1.0, 1)
    with pytest.raises(StepSizeError):
        propagate_ode(
            fam.generator_at, np.linspace(0.0, 1.0, 3), substep=0.5, err_tol=1e-30
        )


def test_solve_memory_kernel_cosine():
    gamma = 1.0
    e = projector_depolarize(2)
    kernel = MemoryKernel(2, lambda t: gamma**2, e)
    tgrid = np.linspace(0.0, math.pi, 2001)
    sol = solve_memory_kernel(kernel, tgrid)
    weights = np.array([projector_weight(m, e) for m in sol.maps])
    assert np.max(np.abs(weights - np.cos(gamma * tgrid))) <= 1e-5


def test_solve_memory_kernel_requires_uniform_grid():
    kernel = MemoryKernel(2, lambda t: 1.0, projector_depolarize(2))
    with pytest.raises(GridError):
        solve_memory_kernel(kernel, np.array([0.0, 0.1, 0.3]))


def test_memory_kernel_validation():
    with pytest.raises(NotProjectorError):
        MemoryKernel(2, lambda t: 1.0, 2.0 * projector_depolarize(2))
    with pytest.raises(DimensionMismatchError):
        MemoryKernel(3, lambda t: 1.0, projector_depolarize(2))


def test_projector_weight_recovers_known_combination():
    e = projector_dephase(3)
    for a in (-0.4, 0.0, 0.37, 1.0):
        s = a * np.eye(9) + (1 - a) * e
        assert projector_weight(s, e) == pytest.approx(a, abs=1e-13)


def test_analytic_memory_solution_matches_volterra():
    """f = gamma sin(gamma t) integrates to the constant-kernel profile cos."""
    gamma, t = 1.0, 1.3
    e = projector_depolarize(2)
    got = analytic_memory_solution(lambda u: gamma * math.sin(gamma * u), e, t)
    expected = math.cos(gamma * t) * np.eye(4) + (1 - math.cos(gamma * t)) * e
    assert np.allclose(got, expected, atol=1e-9)
