import json

import numpy as np
import pytest

from imaginarity import monof, nogo
from imaginarity.errors import NoWitnessFound, ParamOutOfRange, WrongForm
from imaginarity.pure import overlap
from imaginarity.roof import RoofOptions, convex_roof
from imaginarity.states import sample_density


def test_build_states():
    rho, sigma = nogo.build_states(0.3, 0.1, 0.2)
    assert np.allclose(rho[:2, 2:], 0) and abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.matrix_rank(sigma) == 1
    assert overlap(nogo._psi1()) < 1e-15
    assert abs(overlap(nogo._psi2(0.1)) - 0.8) < 1e-12
    assert abs(overlap(nogo._phi(0.2)) - 0.6) < 1e-12
    with pytest.raises(ParamOutOfRange):
        nogo.build_states(0.3, 0.6, 0.1)


def test_fk_direct_values():
    rho, _ = nogo.build_states(0.3, 0.1, 0.2)
    assert abs(nogo.fk_measure_direct(rho, 1.0) - (0.3 + 0.7 * 0.2)) < 1e-12
    _, sigma = nogo.build_states(0.3, 0.1, 0.2)
    assert abs(nogo.fk(0.4)(overlap(nogo._phi(0.2))) - 1.0) < 1e-12
    rho0, _ = nogo.build_states(0.3, 0.0, 0.2)
    assert abs(nogo.fk_measure_direct(rho0, 0.4) - 0.3) < 1e-12
    with pytest.raises(WrongForm):
        nogo.fk_measure_direct(sample_density(4, 4, 0), 0.5)


@pytest.mark.parametrize("p1,lam,k", [(0.3, 0.05, 0.2), (0.6, 0.2, 0.5), (0.5, 0.45, 1.0)])
def test_fk_direct_matches_optimizer(p1, lam, k):
    rho, _ = nogo.build_states(p1, lam, 0.1)
    value = convex_roof(nogo.fk(k), rho, RoofOptions(n_starts=8)).value
    assert abs(value - nogo.fk_measure_direct(rho, k)) <= 1e-5


def test_witness_with_geometric_only():
    w = nogo.find_witness([monof.builtin("geometric")], opts=RoofOptions(n_starts=4))
    assert w.lam < w.eta and w.holds()


def test_fk_inequality_alone():
    grid = nogo.NogoGrid(p1=(0.5,), lam=(0.1,), eta=(0.2,))
    w = nogo.find_witness([], grid, RoofOptions(n_starts=4))
    assert w.fk_rho < w.fk_sigma


def test_no_witness_when_lambda_not_below_eta():
    grid = nogo.NogoGrid(p1=(0.3, 0.9), lam=(0.3, 0.4), eta=(0.1, 0.2, 0.3))
    with pytest.raises(NoWitnessFound):
        nogo.find_witness([monof.builtin("geometric")], grid, RoofOptions(n_starts=4))


def test_empty_grid():
    with pytest.raises(NoWitnessFound):
        nogo.find_witness(None, nogo.NogoGrid(eta=()))


def test_default_search_and_verification():
    w = nogo.find_witness(opts=RoofOptions(n_starts=8))
    assert (w.p1, w.lam, w.eta, w.k) == (0.3, 0.05, 0.1, 0.2)
    assert w.holds()
    v = nogo.verify_witness(w, opts=RoofOptions(n_starts=8))
    assert v.ok and v.witness.n_starts == 16
    text = nogo.witness_to_text(w)
    assert json.loads(text)["lambda"] == 0.05
