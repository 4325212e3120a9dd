"""Built-in algebras, named elements, embeddings and the identity registry."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, asdict
from typing import Callable, Sequence

from .pbw import AlgebraSpec, Element, MorphismSpec, apply_morphism, tensor_power
from .parser import parse_element
from .scalar import ScalarFraction

q = ScalarFraction.qpow

# Generator order of the D_q basis: units, then the (c, E) and (b, F) pairs.
DQ_ORDER = ("K", "a", "c", "E", "b", "F")

# Skew-exponent matrix for the localization k_Q[a, b, c, K, psi, phi]:
# X_i X_j = q^{D[i][j]} X_j X_i.
D_MATRIX = [
    [0, 1, 1, 1, 1, 0],
    [-1, 0, 0, -1, 0, 1],
    [-1, 0, 0, 1, 0, -1],
    [-1, 1, -1, 0, 1, -1],
    [-1, 0, 0, -1, 0, -1],
    [0, -1, 1, 1, 1, 0],
]
TORUS_GENS = (("a", True), ("b", True), ("c", True), ("K", True), ("psi", False), ("phi", False))


def _w(*pairs) -> list:
    """Word helper: _w('a', -1, 'K', 1) -> [('a', -1), ('K', 1)]."""
    return [(pairs[k], pairs[k + 1]) for k in range(0, len(pairs), 2)]


def _register(spec: AlgebraSpec, name: str, value: Element) -> None:
    if name in spec.index:
        raise ValueError(f"named element {name!r} collides with a generator of {spec.name}")
    if name in spec.named:
        raise ValueError(f"named element {name!r} registered twice in {spec.name}")
    spec.named[name] = value


def _name(spec: AlgebraSpec, name: str, text: str) -> None:
    _register(spec, name, parse_element(text, spec))


def _build_oq() -> AlgebraSpec:
    A = AlgebraSpec("Oq", [("a", True), ("b", False), ("c", False)])
    A.relate("a", "b", q(1))
    A.relate("a", "c", q(1))
    A.relate("b", "c", 1)
    A.validate()
    _name(A, "x", "a*b")
    _name(A, "y", "c*a^-1")
    return A


def _build_uq() -> AlgebraSpec:
    U = AlgebraSpec("Uq", [("K", True), ("E", False), ("F", False)])
    U.relate("K", "E", q(2))
    U.relate("K", "F", q(-2))
    U.relate("E", "F", 1)
    U.validate()
    _name(U, "C", "E*F")
    return U


def _build_dq() -> AlgebraSpec:
    D = AlgebraSpec("Dq", [(g, g in ("K", "a")) for g in DQ_ORDER])
    D.relate("a", "b", q(1))
    D.relate("a", "c", q(1))
    D.relate("b", "c", 1)
    D.relate("K", "E", q(2))
    D.relate("K", "F", q(-2))
    D.relate("E", "F", 1)
    D.relate("K", "a", q(-1))
    D.relate("K", "b", q(1))
    D.relate("K", "c", q(-1))
    D.relate("E", "a", 1)
    D.relate("E", "b", 1)
    D.relate("E", "c", 1, [(1, _w("a", -1, "K", 1))])
    D.relate("F", "a", q(1))
    D.relate("F", "b", q(-1), [(1, _w("a", 1))])
    D.relate("F", "c", q(1))
    D.validate()
    _name(D, "phi", "(1-q^2)*F*b + q^2*a")
    _name(D, "psi", "(1-q^-2)*E*c + q^-2*a^-1*K")
    star = involution(D)
    _register(D, "phi_star", apply_morphism(star, D.named["phi"]))
    _register(D, "psi_star", apply_morphism(star, D.named["psi"]))
    return D


def _build_pi() -> AlgebraSpec:
    P = AlgebraSpec("Pi", [("x", False), ("y", False)])
    P.relate("x", "y", q(2))
    P.validate()
    return P


def _build_c(chi: bool = False) -> AlgebraSpec:
    gens = [("x1", False), ("y1", False), ("x2", False), ("y2", False)]
    if chi:
        C = AlgebraSpec("Cchi", gens, params=("chi",))
        k_corr = [(ScalarFraction.var("chi"), [])]
    else:
        C = AlgebraSpec("C", [("K", True)] + gens)
        k_corr = [(1, _w("K", 1))]
    C.relate("x1", "y1", q(2), k_corr)
    C.relate("x2", "y2", q(-2), [(q(1), [])])
    C.relate("x2", "x1", q(2))
    C.relate("y2", "x1", q(-2))
    C.relate("x2", "y1", q(-2))
    C.relate("y2", "y1", q(2))
    C.commute_rest()  # K central
    C.validate()
    k = "chi" if chi else "K"
    _name(C, "u", f"(q^2-1)*y1*x1 + {k}")
    _name(C, "v", "(q^-3-q^-1)*y2*x2 + 1")
    _register(C, "theta", C.named["v"] * Element.gen(C, "x1"))
    _register(C, "omega", C.named["u"] * Element.gen(C, "x2"))
    return C


def _build_a(chi: bool = False) -> AlgebraSpec:
    gens = [("E", False), ("w", False), ("t1", False), ("t2", False)]
    if chi:
        A = AlgebraSpec("Achi", gens, params=("chi",))
        a_corr = [(ScalarFraction.var("chi"), [])]
    else:
        A = AlgebraSpec("A", [("a", True)] + gens)
        a_corr = [(1, _w("a", 1))]
    A.relate("E", "w", q(2), a_corr)
    A.relate("t1", "t2", q(-2), [(q(1), [])])
    A.relate("t1", "E", q(2))
    A.relate("t2", "E", q(-2))
    A.relate("t1", "w", q(-2))
    A.relate("t2", "w", q(2))
    A.commute_rest()  # a central
    A.validate()
    k = "chi" if chi else "a"
    _name(A, "u", f"(q^2-1)*w*E + {k}")
    _name(A, "v", "(q^-3-q^-1)*t2*t1 + 1")
    return A


def torus(drop: Sequence[int] = ()) -> AlgebraSpec:
    """Quantum torus/affine space k_{Q_I}: generators of D_q S^-1 with rows I (1-based) removed."""
    keep = [k for k in range(6) if k + 1 not in set(drop)]
    label = "".join(str(k) for k in sorted(drop))
    T = AlgebraSpec(f"torus:{label}" if label else "torus", [TORUS_GENS[k] for k in keep])
    for x in range(len(keep)):
        for y in range(x + 1, len(keep)):
            i, j = keep[x], keep[y]
            T.relate(TORUS_GENS[i][0], TORUS_GENS[j][0], q(D_MATRIX[i][j]))
    T.validate()
    return T


_BUILDERS: dict[str, Callable[[], AlgebraSpec]] = {
    "Oq": _build_oq,
    "Uq": _build_uq,
    "Dq": _build_dq,
    "Pi": _build_pi,
    "C": lambda: _build_c(False),
    "Cchi": lambda: _build_c(True),
    "A": lambda: _build_a(False),
    "Achi": lambda: _build_a(True),
}

_CACHE: dict[str, AlgebraSpec] = {}

ALGEBRA_IDS = ("Oq", "Uq", "Dq", "Pi", "C", "Cchi", "A", "Achi", "torus:", "torus:56", "Oq2", "Uq2")


def build(algebra_id: str) -> AlgebraSpec:
    """Return the (cached) spec for an algebra id.

    Besides the fixed ids, accepts ``torus:<digits>`` (rows of D removed),
    ``Oq2``/``Uq2``/``Oq3``/``Uq3`` (tensor powers) and the presentation
    ids of :mod:`qe2.gwa` (``Dq/phi``, ``Cchi/u`` and so on).
    """
    spec = _CACHE.get(algebra_id)
    if spec is not None:
        return spec
    if algebra_id in _BUILDERS:
        spec = _BUILDERS[algebra_id]()
    elif algebra_id.startswith("torus"):
        m = re.fullmatch(r"torus(?::|\()?([1-6]*)\)?", algebra_id)
        if not m:
            raise KeyError(f"unknown algebra id {algebra_id!r}")
        spec = torus([int(ch) for ch in m.group(1)])
    elif re.fullmatch(r"(Oq|Uq)[23]", algebra_id):
        spec = tensor_power(build(algebra_id[:2]), int(algebra_id[2]), name=algebra_id)
    elif algebra_id in ("tensor-square(Oq)", "tensor-square(Uq)"):
        spec = build(algebra_id[-3:-1] + "2")
    elif algebra_id.startswith(("Dq/", "Cchi/")):
        from . import gwa

        spec = gwa.presentation(algebra_id)
    else:
        raise KeyError(f"unknown algebra id {algebra_id!r}")
    _CACHE[algebra_id] = spec
    return spec


def named(name: str, algebra_id: str) -> Element:
    spec = build(algebra_id)
    if name not in spec.named:
        raise KeyError(f"no named element {name!r} in {algebra_id}")
    return spec.named[name]


def gen(algebra_id: str, name: str, exp: int = 1) -> Element:
    return Element.gen(build(algebra_id), name, exp)


def el(algebra_id: str, text: str) -> Element:
    """Parse an expression in a catalog algebra."""
    return parse_element(text, build(algebra_id))


def involution(D: AlgebraSpec | None = None) -> MorphismSpec:
    """The anti-automorphism * of D_q."""
    D = D or build("Dq")
    e = lambda t: parse_element(t, D)  # noqa: E731
    imgs = {"a": e("a^-1"), "b": e("-q*c"), "c": e("-q^-1*b"),
            "K": e("K"), "E": e("q*K*F"), "F": e("q*K^-1*E")}
    return MorphismSpec(D, D, imgs, anti=True, name="star")


_EMBED_IMAGES = {
    ("C", "Dq"): {"K": "K", "x1": "a^2*E", "y1": "a^-1*c", "x2": "a^-2*F", "y2": "a*b"},
    ("A", "Dq"): {"a": "a", "E": "E", "w": "q^-1*a^2*K^-1*c", "t1": "K*F", "t2": "q^3*a^-1*K^-1*b"},
    ("Pi", "Oq"): {"x": "a*b", "y": "c*a^-1"},
    ("Oq", "Dq"): {"a": "a", "b": "b", "c": "c"},
    ("Uq", "Dq"): {"K": "K", "E": "E", "F": "F"},
}


def embedding(sub_id: str, super_id: str) -> MorphismSpec:
    key = (sub_id, super_id)
    if key not in _EMBED_IMAGES:
        raise KeyError(f"no embedding {sub_id} -> {super_id}")
    src, tgt = build(sub_id), build(super_id)
    imgs = {g: parse_element(t, tgt) for g, t in _EMBED_IMAGES[key].items()}
    return MorphismSpec(src, tgt, imgs, name=f"{sub_id}->{super_id}")


# identity registry ---------------------------------------------------------

@dataclass
class IdentityEntry:
    id: str
    algebra: str
    lhs: str
    rhs: str
    anchor: str
    transport: str | None = None  # matching C entry for A entries

    def residue(self) -> Element:
        spec = build(self.algebra)
        return parse_element(self.lhs, spec) - parse_element(self.rhs, spec)

    def to_json(self) -> dict:
        return {"id": self.id, "algebra": self.algebra, "lhs": self.lhs, "rhs": self.rhs, "anchor": self.anchor}


# Dq-expressions for the C and A generators, substituted textually
_C_IN_DQ = {"x1": "(a^2*E)", "y1": "(a^-1*c)", "x2": "(a^-2*F)", "y2": "(a*b)"}
_A_IN_DQ = {"E": "E", "w": "(q^-1*a^2*K^-1*c)", "t1": "(K*F)", "t2": "(q^3*a^-1*K^-1*b)"}

_C_RELATIONS = [
    ("x1y1", "x1*y1 - q^2*y1*x1", "K"),
    ("x2y2", "x2*y2 - q^-2*y2*x2", "q"),
    ("x2x1", "x2*x1", "q^2*x1*x2"),
    ("y2x1", "y2*x1", "q^-2*x1*y2"),
    ("x2y1", "x2*y1", "q^-2*y1*x2"),
    ("y2y1", "y2*y1", "q^2*y1*y2"),
]
_A_RELATIONS = [
    ("Ew", "E*w - q^2*w*E", "a"),
    ("t1t2", "t1*t2 - q^-2*t2*t1", "q"),
    ("t1E", "t1*E", "q^2*E*t1"),
    ("t2E", "t2*E", "q^-2*E*t2"),
    ("t1w", "t1*w", "q^-2*w*t1"),
    ("t2w", "t2*w", "q^2*w*t2"),
]
_UV_NORM = [
    ("x1u", "x1*u", "q^2*u*x1"), ("x2u", "x2*u", "u*x2"),
    ("y1u", "y1*u", "q^-2*u*y1"), ("y2u", "y2*u", "u*y2"),
    ("x1v", "x1*v", "v*x1"), ("x2v", "x2*v", "q^-2*v*x2"),
    ("y1v", "y1*v", "v*y1"), ("y2v", "y2*v", "q^2*v*y2"),
]
_A_FOR_C = {"x1": "E", "y1": "w", "x2": "t1", "y2": "t2", "K": "a"}

_PHIPSI_TABLE = [
    ("phiK", "phi*K", "q*K*phi"), ("phia", "phi*a", "a*phi"), ("phiE", "phi*E", "E*phi"),
    ("phib", "phi*b", "q^-1*b*phi"), ("phiF", "phi*F", "q*F*phi"), ("phic", "phi*c", "q*c*phi"),
    ("psiK", "psi*K", "q^-1*K*psi"), ("psia", "psi*a", "q^-1*a*psi"), ("psiE", "psi*E", "E*psi"),
    ("psib", "psi*b", "b*psi"), ("psiF", "psi*F", "q^-1*F*psi"), ("psic", "psi*c", "c*psi"),
]


def _subst(text: str, table: dict) -> str:
    return re.sub(r"[A-Za-z_][A-Za-z0-9_]*", lambda m: table.get(m.group(0), m.group(0)), text)


def identity_suite(indices: Sequence[int] = range(1, 7)) -> list[IdentityEntry]:
    from . import hopf

    out: list[IdentityEntry] = []
    add = lambda *a, **k: out.append(IdentityEntry(*a, **k))  # noqa: E731
    add("sanity.one", "Dq", "1*1", "1", "sanity row")
    D = build("Dq")
    for u in ("K", "E", "F"):
        for x in ("a", "b", "c"):
            add(f"cross.{u}{x}", "Dq", f"{u}*{x}", hopf.cross_relation(u, x).render(),
                "smash cross relation ux = sum (u1.x)u2")
    for i in indices:
        add(f"Fbi@i={i}", "Dq", f"F*b^{i}",
            f"q^-{i}*b^{i}*F + ((1-q^-{2 * i})/(1-q^-2))*a*b^{i - 1}", "F b^i straightening")
        add(f"Eci@i={i}", "Dq", f"E*c^{i}",
            f"c^{i}*E + ((1-q^-{2 * i})/(1-q^-2))*c^{i - 1}*a^-1*K", "E c^i straightening")
    for tag, lhs, rhs in _PHIPSI_TABLE:
        add(f"table.{tag}", "Dq", lhs, rhs, "phi/psi commutation table")
    add("phipsi", "Dq", "phi*psi", "q*psi*phi", "phi psi = q psi phi")
    add("phi.alt", "Dq", "phi", "F*b - q*b*F", "commutator form of phi, psi")
    add("psi.alt", "Dq", "psi", "E*c - q^-2*c*E", "commutator form of phi, psi")
    add("star.psi", "Dq", "psi", "q^-3*K*phi_star", "psi = q^-3 K phi*")
    add("star.phi", "Dq", "phi", "q^2*K^-1*psi_star", "phi = q^2 K^-1 psi*")
    add("ZUq.K", "Uq", "C*K", "K*C", "Z(Uq) = k[C]")
    add("ZUq.E", "Uq", "C*E", "E*C", "Z(Uq) = k[C]")
    add("ZUq.F", "Uq", "C*F", "F*C", "Z(Uq) = k[C]")
    add("Pi.plane", "Oq", "(a*b)*(c*a^-1)", "q^2*(c*a^-1)*(a*b)", "quantum plane inside Oq")
    for tag, lhs, rhs in _C_RELATIONS:
        add(f"C.rel.{tag}", "C", lhs, rhs, "defining relations of C")
        add(f"C.inDq.{tag}", "Dq", _subst(lhs, _C_IN_DQ), _subst(rhs, _C_IN_DQ), "C inside Dq")
    for tag, lhs, rhs in _A_RELATIONS:
        ctag = next(t for t, l, _ in _C_RELATIONS if _subst(l, _A_FOR_C) == lhs)
        add(f"A.rel.{tag}", "A", lhs, rhs, "defining relations of A", transport=f"C.rel.{ctag}")
        add(f"A.inDq.{tag}", "Dq", _subst(lhs, _A_IN_DQ), _subst(rhs, _A_IN_DQ), "A inside Dq")
    for tag, lhs, rhs in _UV_NORM:
        add(f"uvnorm.{tag}", "C", lhs, rhs, "u, v normal in C")
        add(f"A.uvnorm.{tag}", "A", _subst(lhs, _A_FOR_C), _subst(rhs, _A_FOR_C), "u, v normal in A",
            transport=f"uvnorm.{tag}")
    add("u.embed", "Dq", "a*psi", "(q^2-1)*(a^-1*c)*(a^2*E) + K", "u = a psi")
    add("v.embed", "Dq", "a^-1*phi", "(q^-3-q^-1)*(a*b)*(a^-2*F) + 1", "v = a^-1 phi")
    add("theta.embed", "Dq", "(a^-1*phi)*(a^2*E)", "a*phi*E", "theta = v x1 = a phi E")
    # omega = u x2 picks up q^2 against the shorter form a^-1 psi F
    add("omega.embed", "Dq", "(a*psi)*(a^-2*F)", "q^2*a^-1*psi*F", "omega = u x2")
    for i in indices:
        add(f"x1pow.y1@i={i}", "Cchi", f"x1^{i}*y1 - q^{2 * i}*y1*x1^{i}",
            f"chi*((1-q^{2 * i})/(1-q^2))*x1^{i - 1}", "x1^i y1 straightening")
        add(f"mod.x1y1@i={i}", "Cchi", f"x1*y1^{i}",
            f"q^{2 * i}*y1^{i}*x1 + chi*((1-q^{2 * i})/(1-q^2))*y1^{i - 1}", "module straightening")
        add(f"mod.y2x2@j={i}", "C", f"y2*x2^{i}",
            f"q^{2 * i}*x2^{i}*y2 - q^3*((1-q^{2 * i})/(1-q^2))*x2^{i - 1}", "module straightening")
    return sorted(out, key=lambda e: e.id)


def suite_json(entries: Sequence[IdentityEntry] | None = None) -> str:
    entries = entries if entries is not None else identity_suite()
    return json.dumps([e.to_json() for e in entries], indent=2)
