import json

import pytest

from qe2 import gwa
from qe2.catalog import build
from qe2.pbw import Element, apply_morphism, check_morphism, diamond_check
from qe2.scalar import S


def data(pid):
    if pid in gwa.DQ_FACTORS:
        return gwa.dq_factor_data(gwa.DQ_FACTORS.index(pid) + 1)
    return gwa.cchi_factor_data(gwa.CCHI_FACTORS.index(pid) + 1)


def g(spec, name):
    return Element.gen(spec, name)


@pytest.mark.parametrize("pid", gwa.DQ_FACTORS + gwa.CCHI_FACTORS)
def test_ggwa_condition_and_confluence(pid):
    d = data(pid)
    assert gwa.check_ggwa(d).passed
    spec = build(pid)
    assert diamond_check(spec, samples=60).passed
    x, y = g(spec, d.x), g(spec, d.y)
    a = Element(spec, {m: c for m, c in _lift(spec, d.a_elem).terms.items()})
    assert y * x == a
    assert x * y == _lift(spec, apply_morphism(d.sigma, d.a_elem))


def _lift(spec, x):
    out = Element.zero(spec)
    for m, c in x.terms.items():
        word = [(x.spec.gens[k], e) for k, e in enumerate(m) if e]
        out = out + Element.from_word(spec, word, c)
    return out


@pytest.mark.parametrize("pid", gwa.CCHI_FACTORS)
def test_classical_path_agrees(pid):
    d = data(pid)
    if gwa.is_inverse_pair(d.sigma, d.tau):
        assert gwa.check_classical(d).passed == gwa.check_ggwa(d).passed


@pytest.mark.parametrize("pid, name", [(p, v[0]) for p, v in gwa.CENTRAL.items()])
def test_central_elements(pid, name):
    spec = build(pid)
    assert gwa.central_element_check(spec, spec.named[name]).passed


@pytest.mark.parametrize("pid", sorted(gwa.QUOTIENT_MAPS))
def test_quotient_maps(pid):
    f = gwa.quotient_map(pid)
    assert check_morphism(f).passed
    killed = {"Dq/phi": "phi", "Dq/psi": "psi", "Cchi/u": "u", "Cchi/v": "v"}[pid]
    assert apply_morphism(f, f.source.named[killed]).is_zero()


def test_u_quotient_shape():
    spec = build("Cchi/u")
    assert spec.gens == ("x1", "v", "x2", "y2")
    assert g(spec, "y2") * g(spec, "x2") == (g(spec, "v") - Element.one(spec)) * S("(q^-3-q^-1)^-1")


def test_u_theta_at_zero_is_quantum_torus():
    T = gwa.cchi_factor("u-theta", alpha=0)
    yx = g(T, "y2") * g(T, "x2")
    assert yx.is_scalar() and not yx.scalar_value().is_zero()
    assert g(T, "x2") * g(T, "x1") == g(T, "x1") * g(T, "x2") * S("q^2")


def test_alpha_zero_makes_x_y_units():
    d = gwa.dq_factor_data(3)
    a0 = gwa.specialize_element(d.a_elem, {"alpha": 0})
    assert a0.is_unit()
    assert not d.a_elem.is_unit()


def test_qgwa_rejects_bad_polynomials():
    with pytest.raises(gwa.GwaConditionError):
        gwa.QgwaData.parse("h^2 + h + 1")
    with pytest.raises(gwa.GwaConditionError):
        gwa.QgwaData.parse("0")


def test_qgwa_relations():
    d = gwa.QgwaData.parse("(1-q^-2)^-1*h^-1*(h - zeta)", 2)
    A = gwa.qgwa_build(d)
    x, y, h = g(A, "x"), g(A, "y"), g(A, "h")
    a = Element.zero(A)
    for e, c in d.a_poly.items():
        a = a + Element.gen(A, "h", e) * c if e else a + Element.one(A) * c
    assert y * x == a
    assert x * h == h * x * S("q^2")
    assert diamond_check(A, samples=40).passed


@pytest.mark.parametrize("key, pid, rename", [
    ("u-theta", "Cchi/u,theta-alpha", {"h": "x1", "x": "x2", "y": "y2"}),
    ("v-omega", "Cchi/v,omega-beta", {"h": "x2", "x": "x1", "y": "y1"}),
])
def test_cchip_forms_match_presentations(key, pid, rename):
    short, long = gwa.cchip_forms()[key]
    assert short.a_poly == long.a_poly
    assert gwa.same_rules(gwa.qgwa_build(short), build(pid), rename).passed


def test_export_presentation():
    data = json.loads(gwa.export_presentation(build("Cchi/u")))
    assert data["generators"]
