"""Matrix kernel: Pauli algebra, Hermitian eigensolves, vectorization."""

import numpy as np
import pytest

from dynamap.errors import NotHermitianError, SingularMatrixError
from dynamap.linalg import (
    PAULIS,
    dagger,
    eigvals_hermitian,
    frob,
    herm_eig,
    inv,
    is_hermitian,
    kron,
    trace_norm,
    unvec,
    vec,
)


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + dagger(a)


def test_pauli_algebra():
    s0, s1, s2, s3 = PAULIS
    for s in PAULIS:
        assert np.allclose(s @ s, s0)
    assert np.allclose(s1 @ s2, 1j * s3)
    assert np.allclose(s2 @ s3, 1j * s1)
    assert np.allclose(s3 @ s1, 1j * s2)
    # Hilbert-Schmidt orthogonality, Tr sigma_a sigma_b = 2 delta_ab
    for a in range(4):
        for b in range(4):
            expected = 2.0 if a == b else 0.0
            assert np.trace(PAULIS[a] @ PAULIS[b]) == pytest.approx(expected)


def test_dagger_and_frob(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(dagger(m), m.conj().T)
    assert frob(m) == pytest.approx(np.sqrt(np.sum(np.abs(m) ** 2)))


def test_is_hermitian(rng):
    h = random_hermitian(rng, 4)
    assert is_hermitian(h)
    assert not is_hermitian(h + 1e-6 * 1j * np.eye(4))
    # tolerance is relative to the matrix scale
    assert is_hermitian(1e8 * h + 1e-6 * 1j * np.eye(4))
    assert not is_hermitian(np.ones((2, 3)))


def test_herm_eig_reconstructs(rng):
    h = random_hermitian(rng, 5)
    vals, vecs = herm_eig(h)
    assert np.all(np.diff(vals) <= 0), "eigenvalues must be descending"
    assert np.allclose(vecs @ np.diag(vals) @ dagger(vecs), h)
    assert np.allclose(dagger(vecs) @ vecs, np.eye(5))
    assert np.allclose(eigvals_hermitian(h), vals)


def test_herm_eig_rejects_nonhermitian(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    with pytest.raises(NotHermitianError):
        herm_eig(m)


def test_trace_norm_matches_singular_values(rng):
    assert trace_norm(np.diag([3.0, -2.0, 0.5])) == pytest.approx(5.5)
    h = random_hermitian(rng, 6)
    assert trace_norm(h) == pytest.approx(np.linalg.svd(h, compute_uv=False).sum())


def test_kron_matches_numpy(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    assert np.allclose(kron(a, b), np.kron(a, b))


def test_inv_roundtrip(rng):
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m += 4 * np.eye(4)
    assert np.allclose(inv(m) @ m, np.eye(4), atol=1e-12)


def test_inv_rejects_singular():
    m = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    with pytest.raises(SingularMatrixError):
        inv(m)
    with pytest.raises(ValueError):
        inv(np.ones((2, 3)))


def test_vec_unvec_roundtrip(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(unvec(vec(m)), m)
    # column-stacking: the first d entries are the first column
    assert np.array_equal(vec(m)[:3], m[:, 0])
    with pytest.raises(ValueError):
        unvec(np.ones(5))


def test_vec_conjugation_identity(rng):
    """vec(A rho B) == kron(B.T, A) vec(rho), the convention everything relies on."""
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.allclose(kron(b.T, a) @ vec(rho), vec(a @ rho @ b))
