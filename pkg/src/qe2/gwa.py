"""Generalized Weyl algebras, their generalized form, and explicit presentations of prime factors."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .pbw import (AlgebraSpec, Element, MorphismSpec, PBWError, Report, apply_morphism,
                  check_morphism, commutator_q, compose)
from .parser import parse_element
from .scalar import ScalarFraction

q = ScalarFraction.qpow

# ids of the factor presentations, named by the ideal divided out
DQ_FACTORS = ("Dq/phi", "Dq/psi", "Dq/phi,psi-alpha*b", "Dq/psi,phi-beta*c*K^-1")
CCHI_FACTORS = ("Cchi/u", "Cchi/v", "Cchi/u,theta-alpha", "Cchi/v,omega-beta")


class GwaConditionError(PBWError):
    pass


@dataclass
class GgwaData:
    base: AlgebraSpec
    sigma: MorphismSpec
    tau: MorphismSpec
    a_elem: Element
    x: str = "x"
    y: str = "y"
    name: str = "GGWA"


def diagonal_scalars(f: MorphismSpec) -> dict[str, ScalarFraction]:
    """Scalars s_r with f(r) = s_r * r; rejects anything else."""
    out = {}
    for i, g in enumerate(f.source.gens):
        img = f.images[i]
        mono = f.source.unit_mono(i)
        if len(img.terms) != 1 or mono not in img.terms:
            raise GwaConditionError(f"{f.name or 'map'} must scale each generator; {g} -> {img.render()}")
        out[g] = img.terms[mono]
    return out


def check_ggwa(d: GgwaData) -> Report:
    """tau sigma(a) = a, a r = tau sigma(r) a, sigma(a) r = sigma tau(r) sigma(a)."""
    rep = Report(f"GGWA condition {d.name}")
    ts = compose(d.tau, d.sigma)
    st = compose(d.sigma, d.tau)
    a = d.a_elem
    sa = apply_morphism(d.sigma, a)
    rep.add("tau sigma(a) = a", apply_morphism(ts, a) - a)
    for g in d.base.gens:
        r = Element.gen(d.base, g)
        rep.add(f"a {g} = tau sigma({g}) a", a * r - apply_morphism(ts, r) * a)
        rep.add(f"sigma(a) {g} = sigma tau({g}) sigma(a)", sa * r - apply_morphism(st, r) * sa)
    return rep


def is_inverse_pair(sigma: MorphismSpec, tau: MorphismSpec) -> bool:
    ts = compose(tau, sigma)
    return all((ts.images[i] - Element.gen(sigma.source, g)).is_zero() for i, g in enumerate(sigma.source.gens))


def check_classical(d: GgwaData) -> Report:
    """Classical GWA path: with tau = sigma^-1 the condition is centrality of a in the base."""
    if not is_inverse_pair(d.sigma, d.tau):
        raise GwaConditionError("classical check needs tau = sigma^-1")
    rep = Report(f"GWA centrality {d.name}")
    for g in d.base.gens:
        rep.add(f"[a, {g}]", commutator_q(d.a_elem, Element.gen(d.base, g)))
    return rep


def ggwa_build(d: GgwaData) -> AlgebraSpec:
    rep = check_ggwa(d)
    if not rep.passed:
        raise GwaConditionError("GGWA condition violated: " + ", ".join(lbl for lbl, _ in rep.failures))
    for f in (d.sigma, d.tau):
        if not check_morphism(f).passed:
            raise GwaConditionError(f"{f.name} is not an algebra map")
    s_sig = diagonal_scalars(d.sigma)
    s_tau = diagonal_scalars(d.tau)
    B = d.base
    gens = list(zip(B.gens, B.invertible)) + [(d.x, False), (d.y, False)]
    A = AlgebraSpec(d.name, gens, params=B.param_ring.params[1:] + _extra_params(d))
    for (i, j), r in B.rules.items():
        A.set_rule(B.gens[i], B.gens[j], r.scalar, Element(B, r.correction) if r.correction else ())
    for g in B.gens:
        A.set_rule(d.x, g, s_sig[g])
        A.set_rule(d.y, g, s_tau[g])
    lift = lambda e: [(c, [(B.gens[k], v) for k, v in enumerate(m) if v]) for m, c in e.terms.items()]  # noqa: E731
    A.set_rule(d.y, d.x, 0, lift(d.a_elem))
    A.set_rule(d.x, d.y, 0, lift(apply_morphism(d.sigma, d.a_elem)))
    A.validate()
    A.ggwa = d
    return A


def _extra_params(d: GgwaData) -> tuple:
    names = set()
    for c in d.a_elem.terms.values():
        names |= c.variables()
    return tuple(sorted(n for n in names if n != "q" and n not in d.base.param_ring))


def central_element_check(spec: AlgebraSpec, z: Element) -> Report:
    rep = Report(f"central {z.render()} in {spec.name}")
    for g in spec.gens:
        rep.add(f"[z, {g}]", commutator_q(z, Element.gen(spec, g)))
    return rep


def _diag(base: AlgebraSpec, scal: Mapping[str, str], name: str) -> MorphismSpec:
    imgs = {g: parse_element(f"({scal.get(g, '1')})*{g}", base) for g in base.gens}
    return MorphismSpec(base, base, imgs, name=name)


def _commutative(name: str, gens, params=()) -> AlgebraSpec:
    B = AlgebraSpec(name, gens, params=params)
    B.commute_rest()
    B.validate()
    return B


def dq_factor_data(k: int) -> GgwaData:
    """Factors of D_q by phi, psi, (phi, psi - alpha b), (psi, phi - beta c K^-1) as GGWAs over tori."""
    from .catalog import torus

    sig1 = {"K": "q^-2"}
    tau1 = {"a": "q^-1", "K": "q"}
    sig2 = {"a": "q", "c": "q", "K": "q^2", "phi": "q^-1"}
    tau2 = {"a": "q^-1", "K": "q^-1", "phi": "q"}
    if k == 1:
        B = torus((3, 6))
        a = "(1-q^-2)^-1*(psi - a^-1*K)"
        sig, tau, x, y = sig1, tau1, "E", "c"
    elif k == 2:
        B = torus((2, 5))
        a = "(q^-1-q)^-1*(phi - a)"
        sig, tau, x, y = sig2, tau2, "F", "b"
    elif k == 3:
        B = torus((3, 5, 6))
        B.param_ring = B.param_ring.union(type(B.param_ring)(["alpha"]))
        a = "(1-q^-2)^-1*(alpha*b - a^-1*K)"
        sig, tau, x, y = sig1, tau1, "E", "c"
    elif k == 4:
        B = torus((2, 5, 6))
        B.param_ring = B.param_ring.union(type(B.param_ring)(["beta"]))
        a = "(q^-1-q)^-1*(beta*c*K^-1 - a)"
        sig, tau, x, y = sig2, tau2, "F", "b"
    else:
        raise KeyError(k)
    return GgwaData(B, _diag(B, sig, "sigma"), _diag(B, tau, "tau"), parse_element(a, B), x, y, DQ_FACTORS[k - 1])


def cchi_factor_data(k: int) -> GgwaData:
    """GWA factors of C(chi) by u, v, (u, theta - alpha), (v, omega - beta)."""
    if k == 1:
        B = _commutative("k[x1,v]", [("x1", True), ("v", False)], ("chi",))
        sig, a, x, y = {"v": "q^-2", "x1": "q^2"}, "(q^-3-q^-1)^-1*(v - 1)", "x2", "y2"
    elif k == 2:
        B = _commutative("k[x2,u]", [("x2", True), ("u", False)], ("chi",))
        sig, a, x, y = {"u": "q^2", "x2": "q^-2"}, "(q^2-1)^-1*(u - chi)", "x1", "y1"
    elif k == 3:
        B = _commutative("k[x1]", [("x1", True)], ("chi", "alpha"))
        sig, a, x, y = {"x1": "q^2"}, "(q^-3-q^-1)^-1*(alpha*x1^-1 - 1)", "x2", "y2"
    elif k == 4:
        B = _commutative("k[x2]", [("x2", True)], ("chi", "beta"))
        sig, a, x, y = {"x2": "q^-2"}, "(q^2-1)^-1*(beta*x2^-1 - chi)", "x1", "y1"
    else:
        raise KeyError(k)
    inv = {g: f"({s})^-1" for g, s in sig.items()}
    return GgwaData(B, _diag(B, sig, "sigma"), _diag(B, inv, "sigma^-1"), parse_element(a, B), x, y, CCHI_FACTORS[k - 1])


CENTRAL = {
    "Dq/phi": ("Theta", "psi*b^-1"),
    "Dq/psi": ("Omega", "phi*K*c^-1"),
    "Cchi/u": ("theta", "v*x1"),
    "Cchi/v": ("omega", "u*x2"),
}


def presentation(pid: str) -> AlgebraSpec:
    if pid in DQ_FACTORS:
        d = dq_factor_data(DQ_FACTORS.index(pid) + 1)
    elif pid in CCHI_FACTORS:
        d = cchi_factor_data(CCHI_FACTORS.index(pid) + 1)
    else:
        raise KeyError(f"unknown presentation {pid!r}")
    spec = ggwa_build(d)
    if pid in CENTRAL:
        name, text = CENTRAL[pid]
        spec.named[name] = parse_element(text, spec)
    return spec


CCHI_TAGS = {"u-quotient": "Cchi/u", "v-quotient": "Cchi/v", "u-theta": "Cchi/u,theta-alpha", "v-omega": "Cchi/v,omega-beta"}


def cchi_factor(which: str, **values) -> AlgebraSpec:
    """Prime factor presentation of C(chi); optional numeric values specialize parameters."""
    from .catalog import build

    if which not in CCHI_TAGS:
        raise KeyError(f"unknown factor tag {which!r}")
    if not values:
        return build(CCHI_TAGS[which])
    d = cchi_factor_data(CCHI_FACTORS.index(CCHI_TAGS[which]) + 1)
    a = specialize_element(d.a_elem, values)
    d = GgwaData(d.base, d.sigma, d.tau, a, d.x, d.y, f"{d.name}[{','.join(f'{k}={v}' for k, v in values.items())}]")
    return ggwa_build(d)


def specialize_element(x: Element, values: Mapping) -> Element:
    return Element(x.spec, {m: c.specialize(values) for m, c in x.terms.items() if not c.specialize(values).is_zero()})


# quotient maps from the big algebras onto the presentations ------------------

QUOTIENT_MAPS = {
    "Dq/phi": ("Dq", {"K": "K", "a": "a", "c": "c", "E": "E", "b": "b",
                     "F": "-q^2*(1-q^2)^-1*a*b^-1"}),
    "Dq/psi": ("Dq", {"K": "K", "a": "a", "c": "c", "b": "b", "F": "F",
                     "E": "-q^-2*(1-q^-2)^-1*a^-1*K*c^-1"}),
    "Cchi/u": ("Cchi", {"x1": "x1", "y1": "chi*(1-q^2)^-1*x1^-1", "x2": "x2", "y2": "y2"}),
    "Cchi/v": ("Cchi", {"x1": "x1", "y1": "y1", "x2": "x2", "y2": "-(q^-3-q^-1)^-1*x2^-1"}),
}


def quotient_map(pid: str) -> MorphismSpec:
    """The surjection onto a presentation; its kernel contains phi, psi, u or v respectively."""
    from .catalog import build

    src_id, imgs = QUOTIENT_MAPS[pid]
    src, tgt = build(src_id), build(pid)
    return MorphismSpec(src, tgt, {g: parse_element(t, tgt) for g, t in imgs.items()}, name=f"{src_id}->{pid}")


# quantum GWAs A(a(h), q) ----------------------------------------------------------

@dataclass
class QgwaData:
    """a_poly maps h-exponents to scalars; the twisting scalar is q^q_power."""

    a_poly: dict
    q_power: int = 1
    name: str = "QGWA"

    def __post_init__(self):
        self.a_poly = {e: ScalarFraction.coerce(c) for e, c in self.a_poly.items()
                       if not ScalarFraction.coerce(c).is_zero()}
        if not self.a_poly:
            raise GwaConditionError("a(h) must be nonzero")
        lo, hi = min(self.a_poly), max(self.a_poly)
        if hi - lo > 1:
            raise GwaConditionError("a(h) must be mu*h^i or mu*h^i*(h - zeta): more than one root")

    @staticmethod
    def parse(text: str, q_power: int = 1, name: str = "QGWA") -> "QgwaData":
        H = AlgebraSpec("k[h]", [("h", True)], params=_params_in(text))
        H.validate()
        p = parse_element(text, H)
        return QgwaData({m[0]: c for m, c in p.terms.items()}, q_power, name)

    @property
    def shift(self) -> ScalarFraction:
        return q(self.q_power)

    def root(self) -> ScalarFraction | None:
        lo, hi = min(self.a_poly), max(self.a_poly)
        if lo == hi:
            return None
        return -self.a_poly[lo] / self.a_poly[hi]

    def __call__(self, h: ScalarFraction) -> ScalarFraction:
        out = ScalarFraction.zero()
        for e, c in self.a_poly.items():
            out = out + c * h ** e
        return out

    def shifted(self, k: int = 1) -> dict:
        """Coefficients of a(q^k h) as a Laurent polynomial in h."""
        return {e: c * self.shift ** (k * e) for e, c in self.a_poly.items()}

    def params(self) -> tuple:
        names = set()
        for c in self.a_poly.values():
            names |= c.variables()
        return tuple(sorted(names - {"q"}))


def _params_in(text: str) -> tuple:
    import re

    words = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text))
    return tuple(sorted(words - {"q", "h"}))


def qgwa_build(d: QgwaData) -> AlgebraSpec:
    A = AlgebraSpec(d.name, [("h", True), ("x", False), ("y", False)], params=d.params())
    s = d.shift
    A.set_rule("x", "h", s)
    A.set_rule("y", "h", s.inverse())
    A.set_rule("y", "x", 0, [(c, [("h", e)]) for e, c in d.a_poly.items()])
    A.set_rule("x", "y", 0, [(c, [("h", e)]) for e, c in d.shifted(1).items()])
    A.validate()
    A.qgwa = d
    return A


def cchip_forms() -> dict[str, tuple[QgwaData, QgwaData]]:
    """The factor a-elements as written with an h^-1 factor and as written in the GWA presentation."""
    return {
        "u-theta": (QgwaData.parse("(q^-1-q^-3)^-1*h^-1*(h - alpha)", 2, "Cchip-u"),
                    QgwaData.parse("(q^-3-q^-1)^-1*(alpha*h^-1 - 1)", 2, "u-theta GWA form")),
        "v-omega": (QgwaData.parse("(1-q^2)^-1*chi*h^-1*(h - chi^-1*beta)", -2, "Cchip-v"),
                    QgwaData.parse("(q^2-1)^-1*(beta*h^-1 - chi)", -2, "v-omega GWA form")),
    }


def same_rules(A: AlgebraSpec, B: AlgebraSpec, rename: Mapping[str, str]) -> Report:
    """Compare rule sets of two specs under a generator renaming A -> B."""
    rep = Report(f"rules {A.name} vs {B.name}")
    idx = [B.index[rename.get(g, g)] for g in A.gens]
    for (i, j), r in sorted(A.rules.items()):
        key = (idx[i], idx[j])
        if key not in B.rules:
            rep.failures.append((f"{A.gens[i]}*{A.gens[j]}", Element.one(B)))
            continue
        mapped = {}
        for m, c in A._finalize(r).items():
            mm = [0] * B.n
            for k, e in enumerate(m):
                mm[idx[k]] = e
            mapped[tuple(mm)] = c
        rep.add(f"{A.gens[i]}*{A.gens[j]}", Element(B, mapped) - Element(B, B._finalize(B.rules[key])))
    return rep


def export_presentation(spec: AlgebraSpec) -> str:
    rules = []
    for (i, j), r in sorted(spec.rules.items()):
        rules.append({"lhs": f"{spec.gens[i]}*{spec.gens[j]}", "rhs": Element(spec, spec._finalize(r)).render()})
    return json.dumps({"name": spec.name,
                       "generators": [{"name": g, "invertible": inv} for g, inv in zip(spec.gens, spec.invertible)],
                       "params": list(spec.param_ring.params), "rules": rules}, indent=2)


__all__ = ["GgwaData", "QgwaData", "check_ggwa", "check_classical", "ggwa_build", "central_element_check",
           "dq_factor_data", "cchi_factor_data", "presentation", "cchi_factor", "qgwa_build", "cchip_forms",
           "same_rules", "quotient_map", "export_presentation"]
