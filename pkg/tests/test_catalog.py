import pytest

from qe2.catalog import ALGEBRA_IDS, build, el, embedding, identity_suite, named, suite_json
from qe2.pbw import apply_morphism, check_morphism, diamond_check
from qe2.scalar import S


def test_build_dq():
    D = build("Dq")
    assert D.gens == ("K", "a", "c", "E", "b", "F")
    assert build("Dq") is D  # cached


def test_quantum_plane():
    assert (el("Pi", "x*y") - el("Pi", "q^2*y*x")).is_zero()


def test_cchi_replaces_k_by_chi():
    C = build("Cchi")
    assert "K" not in C.gens
    assert el("Cchi", "x1*y1") == el("Cchi", "q^2*y1*x1 + chi")


def test_named_elements():
    assert named("phi", "Dq") == el("Dq", "(1-q^2)*F*b + q^2*a")
    assert named("C", "Uq") == el("Uq", "E*F")
    assert named("u", "C") == el("C", "(q^2-1)*y1*x1 + K")
    with pytest.raises(KeyError):
        named("nope", "Dq")


def test_unknown_algebra():
    with pytest.raises(KeyError):
        build("Xq")


@pytest.mark.parametrize("sub, sup", [("C", "Dq"), ("A", "Dq"), ("Pi", "Oq"), ("Oq", "Dq"), ("Uq", "Dq")])
def test_embeddings_are_algebra_maps(sub, sup):
    assert check_morphism(embedding(sub, sup)).passed


def test_u_v_under_embedding():
    f = embedding("C", "Dq")
    assert apply_morphism(f, named("u", "C")) == el("Dq", "a*psi")
    assert apply_morphism(f, named("v", "C")) == el("Dq", "a^-1*phi")


def test_pi_relation_maps_to_zero():
    f = embedding("Pi", "Oq")
    assert apply_morphism(f, el("Pi", "x*y - q^2*y*x")).is_zero()


@pytest.mark.parametrize("alg", ALGEBRA_IDS)
def test_every_catalog_algebra_is_confluent(alg):
    assert diamond_check(build(alg), samples=50).passed


def test_torus_drop():
    T = build("torus:56")
    assert T.gens == ("a", "b", "c", "K")
    assert build("torus:").n == 6


def test_identity_suite_is_large_and_zero():
    entries = identity_suite()
    assert len(entries) >= 30
    assert len({e.id for e in entries}) == len(entries)
    assert [e.id for e in entries] == sorted(e.id for e in entries)
    for e in entries:
        assert e.residue().is_zero(), e.id


def test_specific_entries():
    by_id = {e.id: e for e in identity_suite()}
    assert by_id["Fbi@i=3"].residue().is_zero()
    e = by_id["Eci@i=4"]
    assert e.residue().is_zero()
    # the expanded coefficient against the geometric form
    assert el("Dq", "E*c^4 - c^4*E - (1+q^-2+q^-4+q^-6)*c^3*a^-1*K").is_zero()
    assert S("(1-q^-8)/(1-q^-2)") == S("1+q^-2+q^-4+q^-6")


def test_star_identities():
    assert named("psi", "Dq") == el("Dq", "q^-3*K*phi_star")


def test_suite_json_shape():
    import json

    data = json.loads(suite_json(identity_suite()[:3]))
    assert len(data) == 3 and {"id", "anchor"} <= set(data[0])
