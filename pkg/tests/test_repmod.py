import pytest

from qe2 import repmod as R
from qe2.autgrp import make
from qe2.catalog import build
from qe2.gwa import QgwaData
from qe2.parser import parse_element
from qe2.pbw import AlgebraSpec, Element
from qe2.scalar import S, ScalarFraction

q = ScalarFraction.qpow
A_POLY = "(1-q^-2)^-1*h^-1*(h - zeta)"


@pytest.fixture(scope="module")
def d():
    return QgwaData.parse(A_POLY, 1)


def poly_at(d, value):
    out = ScalarFraction.zero()
    for e, c in d.a_poly.items():
        out = out + c * value ** e
    return out


# quantum GWA modules ------------------------------------------------------------

def test_w_gamma_straightening(d):
    W = R.gwa_torsion_module("W(gamma)", d)
    A, g = W.algebra, S("gamma")
    assert W.act(parse_element("h", A), 0) == W.vec(0, g)
    for k in range(1, 6):
        lhs = W.act(parse_element(f"x*y^{k}", A), 0)
        assert lhs == W.vec(-(k - 1), poly_at(d, q(k) * g))


def test_w_boundary(d):
    W = R.gwa_torsion_module("W", d)
    assert W.act_gen("x", W.vec(0)).is_zero()
    assert W.act_gen("h", W.vec(0)) == W.vec(0, d.root())
    Wp = R.gwa_torsion_module("W'", d)
    assert Wp.act_gen("y", Wp.vec(0)).is_zero()


@pytest.mark.parametrize("kind", ["W(gamma)", "W", "W'"])
def test_torsion_audit_and_connectivity(d, kind):
    M = R.gwa_torsion_module(kind, d)
    assert R.relation_audit(M, 12).passed
    assert R.connectivity_probe(M, 10).passed


def test_unknown_kinds(d):
    with pytest.raises(R.ModuleError):
        R.gwa_torsion_module("V", d)
    with pytest.raises(R.ModuleError):
        R.cchi_module("Q")


@pytest.mark.parametrize("kind", ["X(gamma)", "Y(gamma)"])
@pytest.mark.parametrize("qpower", [1, 2])
def test_torsionfree_audit(kind, qpower):
    M = R.gwa_torsionfree_module(kind, QgwaData.parse(A_POLY, qpower))
    assert R.relation_audit(M, 8).passed


def test_x_gamma_actions(d):
    M = R.gwa_torsionfree_module("X(gamma)", d)
    A = M.algebra
    assert M.act_gen("x", M.vec(0)) == M.vec(0, S("gamma"))
    for i in range(-3, 4):
        v = M.act(parse_element(f"h^{i}", A), 0)
        assert M.act_gen("x", v) == v.scale(q(i) * S("gamma"))
    for i in range(1, 4):
        lhs = M.act(parse_element(f"x*y^{i}", A), 0)
        rhs = M.act(parse_element(f"(1-q^-2)^-1*(q*h - zeta)*(q*h)^-1*y^{i - 1}", A), 0)
        assert lhs == rhs


@pytest.mark.parametrize("kind, bad_rule", [("X(gamma)", "y*x"), ("Y(gamma)", "x*y")])
def test_graded_basis_is_not_a_module(d, kind, bad_rule):
    # y^i 1 for i >= 1 is not independent of k[h^+-1] 1 once x 1 = gamma 1
    M = R.gwa_torsionfree_module(kind, d, basis="graded")
    rep = R.relation_audit(M, 3)
    assert not rep.passed
    assert bad_rule in {rid for rid, _, _ in rep.failures}


# modules over C(chi) -------------------------------------------------------------------

def reordered_cchi(first, second, killers):
    """C(chi) with the annihilators ordered last, so 1-bar survivors are w1^i w2^j."""
    order = [first, second, *killers]
    C = AlgebraSpec("Cchi-reordered", [(g, False) for g in order], params=("chi",))
    C.relate("x1", "y1", q(2), [(S("chi"), [])])
    C.relate("x2", "y2", q(-2), [(q(1), [])])
    C.relate("x2", "x1", q(2))
    C.relate("y2", "x1", q(-2))
    C.relate("x2", "y1", q(-2))
    C.relate("y2", "y1", q(2))
    C.validate()
    return C


@pytest.mark.parametrize("kind", ["H", "L", "M", "N"])
def test_cchi_modules_against_quotient_oracle(kind):
    M = R.cchi_module(kind)
    w1, w2, killers = R.CCHI_KINDS[kind]
    C = reordered_cchi(w1, w2, killers)
    k1, k2 = C.index[killers[0]], C.index[killers[1]]
    for g in ("x1", "y1", "x2", "y2"):
        for i in range(5):
            for j in range(5):
                word = [(g, 1)] + [(w1, 1)] * i + [(w2, 1)] * j
                nf = Element.from_word(C, word)
                expect = R.ModVector({})
                for m, c in nf.terms.items():
                    if m[k1] == 0 and m[k2] == 0:
                        expect = expect + M.vec((m[C.index[w1]], m[C.index[w2]]), c)
                assert M.act_gen(g, M.vec((i, j))) == expect, (kind, g, i, j)


@pytest.mark.parametrize("kind", ["H", "L", "M", "N"])
def test_cchi_audit(kind):
    assert R.relation_audit(R.cchi_module(kind), 8).passed
    assert R.relation_audit(R.cchi_module(kind, algebra="C"), 4).passed
    assert R.relation_audit(R.achi_module(kind), 4).passed


def test_h_examples():
    H = R.cchi_module("H")
    C = H.algebra
    assert H.act_gen("x1", H.vec((0, 0))).is_zero()
    assert H.act_gen("y2", H.vec((0, 0))).is_zero()
    assert H.act(C.named["u"], (0, 0)) == H.vec((0, 0), S("chi"))
    assert H.act(C.named["v"], (0, 0)) == H.vec((0, 0), q(2))
    for i in range(1, 5):
        assert H.act_gen("x1", H.vec((i, 0))) == H.vec((i - 1, 0), S(f"chi*(1-q^{2 * i})/(1-q^2)"))


def test_zero_module():
    assert R.relation_audit(R.zero_module(build("Dq")), 3).passed


# induction ---------------------------------------------------------------------------

def test_induced_h_normal_elements():
    I = R.induce(R.cchi_module("H", algebra="C"))
    D = build("Dq")
    g = (0, (0, 0))
    assert I.act(D.named["psi"], g) == I.vec((-1, (0, 0)), S("chi"))
    assert I.act(D.named["phi"], g) == I.vec((1, (0, 0)), q(2))


def test_induced_m_is_highest_weight():
    I = R.induce(R.cchi_module("M", algebra="C"))
    assert I.act_gen("E", I.vec(I.generator)).is_zero()
    assert I.act_gen("F", I.vec(I.generator)).is_zero()
    assert I.act_gen("K", I.vec(I.generator)) == I.vec(I.generator, S("chi"))


@pytest.mark.parametrize("kind", ["H", "L", "M", "N"])
def test_induced_weights_and_shift(kind):
    I = R.induce(R.cchi_module(kind, algebra="C"))
    support = R.weight_support(I, 3)
    for i, ev in support.items():
        assert ev == q(-i) * S("chi")
    for idx in I.window(2):
        kv = I.act_gen("K", I.vec(idx))
        av = I.act_gen("a", I.vec(idx))
        (j, m), = av.terms
        assert j == idx[0] + 1 and m == idx[1]
        # a conjugates the K action by q^-1
        assert I.act_gen("K", av) == av.scale(kv.terms[idx] * q(-1))


@pytest.mark.parametrize("kind", ["H", "M"])
def test_twist_shifts_strata(kind):
    M = R.cchi_module(kind, algebra="C")
    I = R.induce(M)
    J = R.induce(R.twist(M, make("C.tau_a")))
    for g in build("Dq").gens:
        for i in range(-2, 3):
            for m in M.window(2):
                left = J.act_gen(g, J.vec((i, m)))
                right = I.act_gen(g, I.vec((i + 1, m)))
                shifted = R.ModVector({(k[0] - 1, k[1]): c for k, c in right.terms.items()})
                assert left == shifted


@pytest.mark.parametrize("kind", ["H", "L"])
def test_induced_over_a(kind):
    I = R.induce(R.achi_module(kind))
    assert R.relation_audit(I, 2).passed


def test_induce_needs_c_or_a():
    with pytest.raises(R.ModuleError):
        R.induce(R.cchi_module("H"))


def test_audit_report_json():
    rep = R.relation_audit(R.cchi_module("H"), 1)
    assert '"failures"' in rep.to_json()
