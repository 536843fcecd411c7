import numpy as np
import pytest
from hypothesis import given, strategies as st

from imaginarity import monof, pure
from imaginarity.states import projector, sample_pure

from conftest import max_imag_qubit


def random_orthogonal(d, seed):
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(d, d)))
    return Q * np.sign(np.diag(R))


def phi_eta(eta):
    return np.array([np.sqrt(eta), 1j * np.sqrt(1 - eta)])


def test_overlap_examples():
    assert abs(pure.overlap(np.array([0.6, 0.8])) - 1) < 1e-15
    assert pure.overlap(max_imag_qubit()) < 1e-15
    for eta in (0.1, 0.3, 0.75):
        assert abs(pure.overlap(phi_eta(eta)) - abs(2 * eta - 1)) < 1e-14


def test_pure_measure_examples():
    geo = monof.builtin("geometric")
    assert abs(pure.pure_measure(geo, max_imag_qubit()) - 0.5) < 1e-15
    for f in monof.registry():
        assert pure.pure_measure(f, np.array([0.6, -0.8])) == 0.0


@given(st.integers(2, 8), st.integers(0, 2**31))
def test_l2_row_equals_offdiagonal_imaginary_norm(d, seed):
    psi = sample_pure(d, seed)
    im = projector(psi).imag
    assert abs(pure.pure_measure(monof.builtin("l2"), psi) - np.sqrt(np.sum(im**2))) <= 1e-10


def test_overlap_via_im_parts_examples():
    assert pure.overlap_via_im_parts(max_imag_qubit()) < 1e-7
    assert abs(pure.overlap_via_im_parts(np.array([0.6, 0.8])) - 1) < 1e-15


@given(st.integers(2, 8), st.integers(0, 2**31), st.floats(0, 2 * np.pi))
def test_overlap_invariances(d, seed, alpha):
    psi = sample_pure(d, seed)
    x = pure.overlap(psi)
    O = random_orthogonal(d, seed + 1)
    assert abs(pure.overlap(O @ psi) - x) <= 1e-10
    assert abs(pure.overlap(np.exp(1j * alpha) * psi) - x) <= 1e-10
    assert abs(pure.overlap_via_im_parts(psi) - x) <= 1e-10
    assert abs(pure.overlap_deficit(psi) - (1 - x)) <= 1e-12


def check_canonical(psi, form):
    O = form.O
    assert np.isrealobj(O)
    assert np.max(np.abs(O.T @ O - np.eye(O.shape[0]))) <= 1e-10
    image = O @ (np.exp(1j * form.phase) * psi)
    assert np.max(np.abs(image - form.image())) <= 1e-9
    assert abs(form.x - pure.overlap(psi)) <= 1e-12


def test_canonical_examples():
    e1 = np.array([1.0, 0.0, 0.0])
    form = pure.canonical_form(e1)
    assert form.x == 1.0
    check_canonical(e1, form)
    form = pure.canonical_form(max_imag_qubit())
    assert form.x < 1e-15
    check_canonical(max_imag_qubit(), form)
    check_canonical(sample_pure(5, 0), pure.canonical_form(sample_pure(5, 0)))


@given(st.integers(2, 7), st.integers(0, 2**31))
def test_canonical_property(d, seed):
    psi = sample_pure(d, seed)
    check_canonical(psi, pure.canonical_form(psi))


def test_canonical_real_up_to_phase():
    psi = np.exp(0.7j) * np.array([0.6, 0.0, 0.8])
    check_canonical(psi, pure.canonical_form(psi))


def brute_force_real_fidelity(psi, n=400):
    """max over real unit phi of |<phi|psi>|^2 by sampling and refinement."""
    d = psi.size
    rng = np.random.default_rng(0)
    best, best_v = 0.0, None
    for v in rng.normal(size=(n, d)):
        v /= np.linalg.norm(v)
        val = abs(np.vdot(v, psi)) ** 2
        if val > best:
            best, best_v = val, v
    step = 0.1
    while step > 1e-9:
        improved = False
        for k in range(d):
            for s in (step, -step):
                w = best_v.copy()
                w[k] += s
                w /= np.linalg.norm(w)
                val = abs(np.vdot(w, psi)) ** 2
                if val > best:
                    best, best_v, improved = val, w, True
        if not improved:
            step /= 2
    return best


@pytest.mark.parametrize("d,seed", [(2, 1), (2, 2), (3, 3), (3, 4)])
def test_geometric_matches_distance_to_real_states(d, seed):
    psi = sample_pure(d, seed)
    geo = pure.pure_measure(monof.builtin("geometric"), psi)
    assert abs(geo - (1 - brute_force_real_fidelity(psi))) <= 1e-7
