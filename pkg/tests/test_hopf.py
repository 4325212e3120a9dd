import pytest

from qe2.catalog import build, el
from qe2.hopf import (act, antipode, check_hopf_axioms, coproduct, counit, cross_relation, delta_power,
                      module_algebra_residue)
from qe2.pbw import random_element
from qe2.scalar import S, ScalarFraction


def T(alg, text):
    return el(alg + "2", text)


def test_coproduct_examples():
    assert coproduct(el("Oq", "b")) == T("Oq", "b_1*a_2^-1 + a_1*b_2")
    x, y = el("Oq", "a"), el("Oq", "b")
    assert coproduct(x * y) == coproduct(x) * coproduct(y)


def test_counit_and_antipode_values():
    assert counit(el("Uq", "K")) == ScalarFraction.one()
    assert counit(el("Oq", "b")).is_zero()
    assert antipode(el("Uq", "E")) == el("Uq", "-E*K^-1")


@pytest.mark.parametrize("which", ["Oq", "Uq"])
def test_hopf_axioms(which):
    rep = check_hopf_axioms(which)
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("which", ["Oq", "Uq"])
def test_coproduct_multiplicative(which, rng):
    H = build(which)
    for _ in range(30):
        x, y = random_element(H, rng, max_deg=2), random_element(H, rng, max_deg=2)
        assert coproduct(x * y) == coproduct(x) * coproduct(y)


def test_action_examples():
    assert act("E", el("Oq", "c")) == el("Oq", "a^-1")
    assert act("F", el("Oq", "a")).is_zero()
    assert act("F", el("Oq", "b^2")) == el("Oq", "(1+q^-2)*a*b")


def test_k_acts_diagonally():
    for i in range(-2, 3):
        for j in range(3):
            for k in range(3):
                x = el("Oq", f"a^{i}*b^{j}*c^{k}")
                assert act("K", x) == x * ScalarFraction.qpow(-i + j - k)


@pytest.mark.parametrize("u", ["K", "K^-1", "E", "F"])
def test_module_algebra_on_generator_pairs(u):
    O = build("Oq")
    for x in ("a", "b", "c", "a^-1"):
        for y in ("a", "b", "c", "a^-1"):
            assert module_algebra_residue(u, el("Oq", x), el("Oq", y)).is_zero()


def test_module_algebra_random(rng):
    O = build("Oq")
    for _ in range(20):
        x, y = random_element(O, rng, max_deg=2), random_element(O, rng, max_deg=2)
        for u in ("K", "E", "F"):
            assert module_algebra_residue(u, x, y).is_zero()


@pytest.mark.parametrize("u", ["K", "E", "F"])
@pytest.mark.parametrize("x", ["a", "b", "c"])
def test_cross_relations_match_defining_rules(u, x):
    assert cross_relation(u, x) == el("Dq", f"{u}*{x}")


def test_cross_relation_examples():
    assert cross_relation("F", "b") == el("Dq", "q^-1*b*F + a")
    assert cross_relation("E", "a") == el("Dq", "a*E")
    assert cross_relation("E", "c") == el("Dq", "c*E + a^-1*K")


@pytest.mark.parametrize("m, n", [(1, 1), (3, 2), (0, 2)])
def test_delta_power(m, n):
    ok, direct, closed = delta_power(m, n)
    assert ok


def test_delta_power_bounds():
    with pytest.raises(ValueError):
        delta_power(9, 1)
