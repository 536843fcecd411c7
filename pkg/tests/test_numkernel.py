import numpy as np
import pytest
from hypothesis import given, strategies as st

from imaginarity import numkernel
from imaginarity.errors import DimensionMismatch, NotHermitian, NotPSD
from imaginarity.states import projector, sample_density, sample_pure


def random_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (A + A.conj().T)


def random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def test_identity_spectrum():
    spec = numkernel.eig_hermitian(np.eye(3))
    assert np.allclose(spec.eigenvalues, [1, 1, 1])


def test_pauli_y_spectrum():
    Y = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(numkernel.eig_hermitian(Y).eigenvalues, [-1, 1], atol=1e-14)


def test_random_reconstruction():
    H = random_hermitian(5, 0)
    spec = numkernel.eig_hermitian(H)
    assert np.max(np.abs(spec.reconstruct() - H)) <= 1e-10
    V = spec.eigenvectors
    assert np.max(np.abs(V.conj().T @ V - np.eye(5))) <= 1e-10
    assert np.all(np.diff(spec.eigenvalues) >= 0)


def test_eig_matches_numpy():
    H = random_hermitian(6, 3)
    assert np.allclose(numkernel.eig_hermitian(H).eigenvalues, np.linalg.eigvalsh(H), atol=1e-12)


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        numkernel.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


@given(st.integers(1, 8), st.integers(0, 2**31))
def test_trace_and_unitary_invariance(d, seed):
    H = random_hermitian(d, seed)
    w = numkernel.eig_hermitian(H).eigenvalues
    assert abs(w.sum() - np.trace(H).real) <= 1e-10 * max(1.0, np.abs(H).max() * d)
    U = random_unitary(d, seed + 1)
    w2 = numkernel.eig_hermitian(U @ H @ U.conj().T).eigenvalues
    assert np.max(np.abs(w - w2)) <= 1e-9


def test_func_psd_diagonal_sqrt():
    out = numkernel.psd_sqrt(np.diag([4.0, 9.0]).astype(complex))
    assert np.allclose(out, np.diag([2.0, 3.0]))
    assert np.allclose(numkernel.psd_sqrt(np.eye(3)), np.eye(3))


def test_func_psd_identity_function_and_composition():
    A = sample_density(4, 3, 1)
    assert np.max(np.abs(numkernel.func_psd(A, lambda w: w) - A)) <= 1e-10
    twice = numkernel.psd_power(numkernel.psd_power(A, 0.5), 0.5)
    assert np.max(np.abs(twice - numkernel.psd_power(A, 0.25))) <= 1e-9


def test_func_psd_rejects_negative():
    with pytest.raises(NotPSD):
        numkernel.psd_sqrt(np.diag([1.0, -0.1]).astype(complex))


def test_small_negative_eigenvalues_clamped():
    out = numkernel.psd_sqrt(np.diag([1.0, -1e-11]).astype(complex))
    assert np.allclose(out, np.diag([1.0, 0.0]))


def test_entropy_values():
    assert abs(numkernel.von_neumann_entropy(projector(sample_pure(3, 0)))) <= 1e-12
    assert abs(numkernel.von_neumann_entropy(np.eye(2) / 2) - 1.0) <= 1e-12
    expected = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
    assert abs(numkernel.von_neumann_entropy(np.diag([0.25, 0.75]).astype(complex)) - expected) <= 1e-12


@given(st.integers(2, 5), st.integers(0, 2**31))
def test_entropy_unitary_invariance(d, seed):
    rho = sample_density(d, d, seed)
    U = random_unitary(d, seed + 7)
    s1 = numkernel.von_neumann_entropy(rho)
    s2 = numkernel.von_neumann_entropy(U @ rho @ U.conj().T)
    assert abs(s1 - s2) <= 1e-9
    assert -1e-12 <= s1 <= np.log2(d) + 1e-12


def test_fidelity_examples():
    rho = sample_density(3, 3, 4)
    assert abs(numkernel.root_fidelity(rho, rho) - 1.0) <= 1e-9
    e0, e1 = np.eye(2)[0], np.eye(2)[1]
    assert numkernel.root_fidelity(projector(e0), projector(e1)) <= 1e-12
    psi, phi = sample_pure(4, 1), sample_pure(4, 2)
    assert abs(numkernel.root_fidelity(projector(psi), projector(phi)) - abs(np.vdot(phi, psi))) <= 1e-10


def test_fidelity_matches_textbook_formula():
    rho, sigma = sample_density(3, 3, 5), sample_density(3, 2, 6)
    s = numkernel.psd_sqrt(rho)
    direct = np.trace(numkernel.psd_sqrt(s @ sigma @ s)).real
    assert abs(numkernel.root_fidelity(rho, sigma) - direct) <= 1e-8


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        numkernel.root_fidelity(np.eye(2) / 2, np.eye(3) / 3)


@given(st.integers(2, 4), st.integers(0, 2**31))
def test_fidelity_symmetric_and_unitary_invariant(d, seed):
    rho, sigma = sample_density(d, d, seed), sample_density(d, 2, seed + 1)
    U = random_unitary(d, seed + 2)
    f = numkernel.root_fidelity(rho, sigma)
    assert abs(f - numkernel.root_fidelity(sigma, rho)) <= 1e-8
    f2 = numkernel.root_fidelity(U @ rho @ U.conj().T, U @ sigma @ U.conj().T)
    assert abs(f - f2) <= 1e-9
