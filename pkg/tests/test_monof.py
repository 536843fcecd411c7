import numpy as np
import pytest

from imaginarity import monof
from imaginarity.errors import ParamOutOfRange, UnknownName


def h(x):
    p, q = (1 + x) / 2, (1 - x) / 2
    return -sum(t * np.log2(t) for t in (p, q) if t > 0)


def test_scalar_values():
    assert monof.builtin("geometric")(0.0) == 0.5
    assert abs(monof.builtin("entropy")(0.0) - 1.0) < 1e-15
    assert abs(monof.builtin("fk", 0.4)(0.9) - 0.25) < 1e-12
    assert monof.builtin("fk", 0.4)(0.0) == 1.0


@pytest.mark.parametrize("x", [0.0, 0.1, 0.37, 0.8, 0.999, 1.0])
def test_formulas(x):
    assert abs(monof.builtin("geometric")(x) - (1 - x) / 2) < 1e-15
    assert abs(monof.builtin("robustness_row")(x) - np.sqrt(1 - x * x) / 2) < 1e-12
    assert abs(monof.builtin("entropy")(x) - h(x)) < 1e-12
    assert abs(monof.builtin("fidelity_row")(x) - (1 - x)) < 1e-15
    assert abs(monof.builtin("tsallis", 0.3)(x) - (1 - x * x)) < 1e-12
    assert abs(monof.builtin("l2")(x) - np.sqrt((1 - x * x) / 2)) < 1e-12


def test_vectorized_and_deficit():
    f = monof.builtin("robustness_row")
    xs = np.linspace(0, 1, 5)
    assert f(xs).shape == (5,)
    # deficit supplied separately keeps digits that 1 - x would lose
    u = 1e-18
    assert abs(f(1.0 - u, u) - 0.5 * np.sqrt(2e-18)) < 1e-24


def test_errors():
    with pytest.raises(UnknownName):
        monof.builtin("nope")
    with pytest.raises(ParamOutOfRange):
        monof.builtin("tsallis", 1.0)
    with pytest.raises(ParamOutOfRange):
        monof.builtin("fk", 0.0)
    with pytest.raises(ParamOutOfRange):
        monof.builtin("geometric", 0.5)


def test_parse():
    assert monof.parse("tsallis:0.25").params == (0.25,)
    assert monof.parse("fk:0.4").label == "fk:0.4"
    assert monof.parse("l2").name == "l2"


def test_registry_contents():
    assert [f.name for f in monof.registry()] == [
        "geometric", "robustness_row", "entropy", "fidelity_row", "tsallis", "l2", "fk"]
    assert [f.name for f in monof.table_one()] == list(monof.TABLE_ONE)


@pytest.mark.parametrize("f", monof.registry(), ids=lambda f: f.label)
def test_builtins_admissible(f):
    rep = monof.check_admissible(f, grid_step=1e-3)
    assert rep.ok, rep.first_violation


@pytest.mark.parametrize("k", [0.1, 0.5, 1.0])
def test_fk_admissible(k):
    assert monof.check_admissible(monof.builtin("fk", k)).ok


def test_inadmissible_functions():
    rep = monof.check_admissible(monof.from_callable(lambda x: x))
    assert not rep.ok and rep.condition.startswith("(i)")
    rep = monof.check_admissible(monof.from_callable(lambda x: x - 1.0))
    assert not rep.ok and rep.condition.startswith("(ii)")
    rep = monof.check_admissible(monof.from_callable(lambda x: (1 - x) ** 2))
    assert not rep.ok and rep.condition.startswith("(iii)")


def test_tabulated_matches_builtin_on_grid():
    xs = np.linspace(0, 1, 201)
    f = monof.tabulated(xs, np.sqrt((1 - xs**2) / 2))
    assert monof.check_admissible(f).ok
    assert abs(f(0.5) - np.sqrt(0.75 / 2)) < 1e-4
    with pytest.raises(ParamOutOfRange):
        monof.tabulated([0.2, 1.0], [0.1, 0.0])
