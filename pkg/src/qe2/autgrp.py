"""Automorphism families of O_q, U_q and D_q, the twists tau_a, tau_K and the isomorphism Phi."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .catalog import build, embedding
from .pbw import (AlgebraSpec, Element, MorphismSpec, PBWError, Report, apply_morphism, check_morphism,
                  compose as _compose)
from .scalar import Coercible, ScalarFraction

q = ScalarFraction.qpow
ONE = ScalarFraction.one()


class AutError(PBWError):
    pass


class ClassifyError(AutError):
    """The map is not a member of any catalog family; carries the residues."""

    def __init__(self, message: str, residues: Mapping[str, Element] | None = None):
        super().__init__(message)
        self.residues = dict(residues or {})


def _s(x) -> ScalarFraction:
    if isinstance(x, str):
        return ScalarFraction.parse(x)
    return ScalarFraction.coerce(x)


def _nonzero(**scalars) -> None:
    for k, v in scalars.items():
        if v.is_zero():
            raise AutError(f"scalar parameter {k} must be nonzero")


@dataclass
class RhoParams:
    lam: Coercible = 1
    mu: Coercible = 1
    gamma: Coercible = 1
    nu: Coercible = 1
    i: int = 1
    j: int = 0
    m: int = 0
    n: int = 1

    def __post_init__(self):
        for k in ("lam", "mu", "gamma", "nu"):
            setattr(self, k, _s(getattr(self, k)))
        _nonzero(lam=self.lam, mu=self.mu, gamma=self.gamma, nu=self.nu)
        if self.i * self.n - self.j * self.m != 1:
            raise AutError(f"matrix ({self.i} {self.j}; {self.m} {self.n}) has determinant "
                           f"{self.i * self.n - self.j * self.m}, expected 1")

    @property
    def matrix(self) -> tuple:
        return ((self.i, self.j), (self.m, self.n))

    def to_json(self) -> dict:
        return {"lambda": self.lam.render(), "mu": self.mu.render(), "gamma": self.gamma.render(),
                "nu": self.nu.render(), "matrix": [[self.i, self.j], [self.m, self.n]]}


FAMILIES = ("Oq.tau", "Oq.xi", "Oq.eta", "Oq.group", "Uq.sigma", "Uq.xi", "Uq.eta", "Uq.group",
            "Dq.rho", "C.tau_a", "A.tau_K", "A_to_C.Phi", "C_to_A.Phi_inv")


@dataclass
class AutTag:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise AutError(f"unknown family {self.family!r}")

    def to_json(self) -> dict:
        out = {}
        for k, v in self.params.items():
            if isinstance(v, RhoParams):
                out[k] = v.to_json()
            elif isinstance(v, ScalarFraction):
                out[k] = v.render()
            else:
                out[k] = v
        return {"family": self.family, "params": out}


def _mono(spec: AlgebraSpec, coef: Coercible, *word) -> Element:
    return Element.from_word(spec, [(g, e) for g, e in word if e], coef)


# exponents of q in the images of b and c ------------------------------------------

def printed_exponents(i: int, j: int, m: int, n: int) -> tuple[int, int]:
    return (i * j + 2 * m * n - 3 * i * n - 2 * j + 3 * n, i * n + 3 * m * n - j - n)


def _monomial_q_exponent(s: ScalarFraction) -> int | None:
    """k if s == q^k, else None."""
    if len(s.num.terms) != 1 or len(s.den.terms) != 1:
        return None
    (mn, cn), = s.num.terms.items()
    (md, cd), = s.den.terms.items()
    if cn != cd:
        return None
    e = dict(mn).get("q", 0) - dict(md).get("q", 0)
    return e if s == q(e) else None


def solved_exponents(i: int, j: int, m: int, n: int) -> tuple[int, int]:
    """Solve the q-exponents of rho(b), rho(c) from Fb = q^-1 bF + a and Ec = cE + a^-1 K."""
    D = build("Dq")
    imgs = _rho_images(D, RhoParams(1, 1, 1, 1, i, j, m, n), (0, 0))
    F, b, E, c, K, a = (imgs[g] for g in ("F", "b", "E", "c", "K", "a"))
    out = []
    for (x, y, s, target) in ((F, b, q(-1), a), (E, c, ONE, a.inverse() * K)):
        R = x * y - y * x * s
        mono, coef = target.leading()
        if mono not in R.terms:
            raise AutError("scalar constraint has no solution")
        ratio = coef / R.terms[mono]
        e = _monomial_q_exponent(ratio)
        if e is None or not (R * ratio - target).is_zero():
            raise AutError(f"no q-power solves the constraint (ratio {ratio.render()})")
        out.append(e)
    return tuple(out)


def _rho_images(D: AlgebraSpec, p: RhoParams, exps: tuple[int, int]) -> dict[str, Element]:
    i, j, m, n = p.i, p.j, p.m, p.n
    eb, ec = exps
    return {
        "K": _mono(D, p.lam, ("K", i), ("a", j)),
        "a": _mono(D, p.mu, ("K", m), ("a", n)),
        "F": _mono(D, p.gamma, ("K", -i + 2 * m + 1), ("a", -j + 2 * n - 2), ("F", 1)),
        "b": _mono(D, p.mu / p.gamma * q(eb), ("K", i - m - 1), ("a", j - n + 1), ("b", 1)),
        "E": _mono(D, p.nu, ("K", -2 * m), ("a", -2 * n + 2), ("E", 1)),
        "c": _mono(D, p.lam / (p.mu * p.nu) * q(ec), ("K", i + m - 1), ("a", j + n - 1), ("c", 1)),
    }


# constructors ---------------------------------------------------------------

TAU_A = {"K": -1, "x1": 0, "y1": -1, "x2": 1, "y2": -1}
TAU_K = {"a": 1, "E": -2, "w": 3, "t1": 2, "t2": -2}
PHI = {"a": "K", "E": "x1", "w": "y1", "t1": "x2", "t2": "y2"}


def _oq_images(O, alpha, beta, gamma, i, swap):
    b, c = ("c", "b") if swap else ("b", "c")
    return {"a": _mono(O, alpha, ("a", 1)), "b": _mono(O, beta, ("a", i), (b, 1)),
            "c": _mono(O, gamma, ("a", i), (c, 1))}


def _uq_images(U, alpha, beta, gamma, i, swap):
    if swap:
        return {"K": _mono(U, alpha, ("K", -1)), "E": _mono(U, beta, ("K", -i), ("F", 1)),
                "F": _mono(U, gamma, ("K", i), ("E", 1))}
    return {"K": _mono(U, alpha, ("K", 1)), "E": _mono(U, beta, ("K", i), ("E", 1)),
            "F": _mono(U, gamma, ("K", -i), ("F", 1))}


def _group_params(tag: AutTag) -> tuple:
    """(alpha, beta, gamma, i, swap) for the O_q / U_q families."""
    fam = tag.family.split(".")[1]
    p = tag.params
    if fam in ("tau", "sigma"):
        return ONE, ONE, ONE, 0, 1
    if fam == "xi":
        return ONE, ONE, ONE, int(p["i"]), 0
    if fam == "eta":
        return _s(p["alpha"]), _s(p["beta"]), _s(p["gamma"]), 0, 0
    return _s(p["alpha"]), _s(p["beta"]), _s(p["gamma"]), int(p.get("i", 0)), int(p.get("swap", 0))


def make(tag: AutTag | str, exponents: str = "printed", **params) -> MorphismSpec:
    """Build the morphism of a family member.

    For rho, ``exponents`` selects the q-exponents of the b and c images:
    "printed" uses the closed formula, "solved" derives them from the relations.
    """
    if isinstance(tag, str):
        tag = AutTag(tag, params)
    fam = tag.family
    if fam.startswith(("Oq.", "Uq.")):
        alg = fam[:2]
        alpha, beta, gamma, i, swap = _group_params(tag)
        _nonzero(alpha=alpha, beta=beta, gamma=gamma)
        spec = build(alg)
        imgs = (_oq_images if alg == "Oq" else _uq_images)(spec, alpha, beta, gamma, i, swap)
        return MorphismSpec(spec, spec, imgs, name=fam, tag=tag)
    if fam == "Dq.rho":
        p = tag.params.get("rho")
        if p is None:
            p = RhoParams(**tag.params)
            tag = AutTag(fam, {"rho": p})
        D = build("Dq")
        if exponents == "printed":
            exps = printed_exponents(p.i, p.j, p.m, p.n)
        elif exponents == "solved":
            exps = solved_exponents(p.i, p.j, p.m, p.n)
        else:
            raise ValueError(f"unknown exponent mode {exponents!r}")
        return MorphismSpec(D, D, _rho_images(D, p, exps), name="rho", tag=tag)
    if fam in ("C.tau_a", "A.tau_K"):
        spec = build(fam[0])
        table = TAU_A if fam == "C.tau_a" else TAU_K
        power = int(tag.params.get("power", 1))
        imgs = {g: Element.gen(spec, g) * q(e * power) for g, e in table.items()}
        return MorphismSpec(spec, spec, imgs, name=fam, tag=tag)
    if fam == "A_to_C.Phi":
        A, C = build("A"), build("C")
        return MorphismSpec(A, C, {s: Element.gen(C, t) for s, t in PHI.items()}, name="Phi", tag=tag)
    if fam == "C_to_A.Phi_inv":
        A, C = build("A"), build("C")
        return MorphismSpec(C, A, {t: Element.gen(A, s) for s, t in PHI.items()}, name="Phi^-1", tag=tag)
    raise AutError(f"cannot build family {fam}")


def rho(lam=1, mu=1, gamma=1, nu=1, matrix=((1, 0), (0, 1)), exponents: str = "printed") -> MorphismSpec:
    (i, j), (m, n) = matrix
    return make(AutTag("Dq.rho", {"rho": RhoParams(lam, mu, gamma, nu, i, j, m, n)}), exponents)


# classification -------------------------------------------------------------

def _single(img: Element, label: str) -> tuple[tuple, ScalarFraction]:
    if len(img.terms) != 1:
        raise ClassifyError(f"image of {label} is not a single term: {img.render()}")
    (mono, coef), = img.terms.items()
    return mono, coef


def _verify(h: MorphismSpec, tag: AutTag) -> AutTag:
    cand = make(tag)
    res = {}
    for k, g in enumerate(h.source.gens):
        r = h.images[k] - cand.images[k]
        if not r.is_zero():
            res[g] = r
    if res:
        raise ClassifyError(f"not in family {tag.family}", res)
    return tag


def _simplify(alg: str, alpha, beta, gamma, i, swap) -> AutTag:
    unit = alpha.is_one() and beta.is_one() and gamma.is_one()
    flip = "tau" if alg == "Oq" else "sigma"
    if unit and swap and i == 0:
        return AutTag(f"{alg}.{flip}")
    if unit and not swap:
        return AutTag(f"{alg}.xi", {"i": i})
    if not swap and i == 0:
        return AutTag(f"{alg}.eta", {"alpha": alpha, "beta": beta, "gamma": gamma})
    return AutTag(f"{alg}.group", {"alpha": alpha, "beta": beta, "gamma": gamma, "i": i, "swap": swap})


def classify(h: MorphismSpec) -> AutTag:
    """Read family parameters off the generator images, then confirm by rebuilding."""
    if h.anti:
        raise ClassifyError("anti-automorphisms are not in any family")
    src, tgt = h.source.name, h.target.name
    img = {g: h.images[k] for k, g in enumerate(h.source.gens)}
    if src == tgt == "Oq":
        ma, alpha = _single(img["a"], "a")
        mb, beta = _single(img["b"], "b")
        _, gamma = _single(img["c"], "c")
        swap = int(mb[2] == 1)
        return _verify(h, _simplify("Oq", alpha, beta, gamma, mb[0], swap))
    if src == tgt == "Uq":
        mK, alpha = _single(img["K"], "K")
        mE, beta = _single(img["E"], "E")
        _, gamma = _single(img["F"], "F")
        swap = int(mK[0] == -1)
        i = -mE[0] if swap else mE[0]
        return _verify(h, _simplify("Uq", alpha, beta, gamma, i, swap))
    if src == tgt == "Dq":
        D = h.source
        (mK, lam), (ma, mu) = _single(img["K"], "K"), _single(img["a"], "a")
        _, gamma = _single(img["F"], "F")
        _, nu = _single(img["E"], "E")
        iK, ia = D.index["K"], D.index["a"]
        if any(e for k, e in enumerate(mK) if k not in (iK, ia)) or any(e for k, e in enumerate(ma) if k not in (iK, ia)):
            raise ClassifyError("images of K, a are not units")
        try:
            p = RhoParams(lam, mu, gamma, nu, mK[iK], mK[ia], ma[iK], ma[ia])
        except AutError as exc:
            raise ClassifyError(str(exc)) from exc
        return _verify(h, AutTag("Dq.rho", {"rho": p}))
    if src == tgt and src in ("C", "A"):
        fam = "C.tau_a" if src == "C" else "A.tau_K"
        table = TAU_A if src == "C" else TAU_K
        g0 = next(g for g, e in table.items() if e)
        mono, coef = _single(img[g0], g0)
        k = _monomial_q_exponent(coef)
        if k is None or k % table[g0]:
            raise ClassifyError(f"not a power of {fam}")
        return _verify(h, AutTag(fam, {"power": k // table[g0]}))
    if (src, tgt) == ("A", "C"):
        return _verify(h, AutTag("A_to_C.Phi"))
    if (src, tgt) == ("C", "A"):
        return _verify(h, AutTag("C_to_A.Phi_inv"))
    raise ClassifyError(f"no family for maps {src} -> {tgt}")


def compose(f: MorphismSpec, g: MorphismSpec) -> MorphismSpec:
    """f after g, tagged with its family when it has one."""
    h = _compose(f, g, name=f"{f.name} o {g.name}")
    try:
        h.tag = classify(h)
    except ClassifyError:
        h.tag = None
    return h


def is_identity(f: MorphismSpec) -> bool:
    return f.source is f.target and not f.anti and all(
        (f.images[k] - Element.gen(f.source, g)).is_zero() for k, g in enumerate(f.source.gens))


def _diag_inverse(h: MorphismSpec) -> MorphismSpec:
    """Inverse of a map scaling every generator."""
    imgs = {}
    for k, g in enumerate(h.source.gens):
        mono, coef = _single(h.images[k], g)
        if mono != h.source.unit_mono(k):
            raise AutError(f"{g} is not scaled")
        imgs[g] = Element.gen(h.target, g) * coef.inverse()
    return MorphismSpec(h.target, h.source, imgs, name=f"{h.name}^-1")


def invert(f: MorphismSpec) -> MorphismSpec:
    tag = f.tag if isinstance(f.tag, AutTag) else classify(f)
    fam = tag.family
    if fam == "A_to_C.Phi":
        return make(AutTag("C_to_A.Phi_inv"))
    if fam == "C_to_A.Phi_inv":
        return make(AutTag("A_to_C.Phi"))
    if fam in ("C.tau_a", "A.tau_K"):
        return make(AutTag(fam, {"power": -int(tag.params.get("power", 1))}))
    if fam == "Dq.rho":
        p = tag.params["rho"]
        g = rho(matrix=((p.n, -p.j), (-p.m, p.i)))
    else:
        alg = fam[:2]
        _, _, _, i, swap = _group_params(tag)
        g = make(AutTag(f"{alg}.group", {"alpha": 1, "beta": 1, "gamma": 1, "i": -i, "swap": swap}))
    h = _compose(f, g)
    out = _compose(g, _diag_inverse(h), name=f"{f.name}^-1")
    if not is_identity(_compose(f, out)):
        raise AutError(f"failed to invert {fam}")
    try:
        out.tag = classify(out)
    except ClassifyError:
        out.tag = None
    return out


# action on the normal elements phi, psi --------------------------------------------

@dataclass
class NormalAction:
    name: str
    s: int
    t: int
    expected: tuple[int, int]
    scalar: ScalarFraction
    residue: Element

    @property
    def passed(self) -> bool:
        return self.residue.is_zero() and (self.s, self.t) == self.expected


def action_on_normals(f: MorphismSpec) -> list[NormalAction]:
    """rho(phi) = alpha K^s a^t phi and rho(psi) = alpha' K^u a^v psi, with the exponents read off."""
    tag = f.tag if isinstance(f.tag, AutTag) else classify(f)
    p: RhoParams = tag.params["rho"]
    D = f.source
    out = []
    expected = {"phi": (p.m, p.n - 1), "psi": (p.i - p.m - 1, p.j - p.n + 1)}
    for name in ("phi", "psi"):
        x = D.named[name]
        y = apply_morphism(f, x)
        mono, coef = y.leading()
        s, t = mono[D.index["K"]], mono[D.index["a"]]
        base = _mono(D, 1, ("K", s), ("a", t)) * x
        lead_mono, lead_coef = base.leading()
        alpha = coef / lead_coef if lead_mono == mono else ScalarFraction.zero()
        out.append(NormalAction(name, s, t, expected[name], alpha, y - base * alpha))
    return out


def normals_report(f: MorphismSpec) -> Report:
    rep = Report(f"action on normals {f.name}")
    for r in action_on_normals(f):
        rep.checked += 1
        if not r.passed:
            rep.failures.append((f"{r.name}: (s,t)=({r.s},{r.t}) expected {r.expected}", r.residue))
    return rep


# twists by conjugation --------------------------------------------------------

def conjugation_check(which: str) -> Report:
    """tau_a (resp. tau_K) against t -> a^-1 t a (resp. K^-1 t K) inside D_q."""
    src = "C" if which == "tau_a" else "A"
    f = make(AutTag("C.tau_a" if which == "tau_a" else "A.tau_K"))
    emb = embedding(src, "Dq")
    D = emb.target
    u = Element.gen(D, "a" if which == "tau_a" else "K")
    rep = Report(f"{which} by conjugation")
    for k, g in enumerate(f.source.gens):
        t = emb(Element.gen(f.source, g))
        rep.add(g, emb(f.images[k]) - u.inverse() * t * u)
    return rep


def phi_iso_report() -> Report:
    """Phi and its inverse are algebra maps and mutually inverse."""
    P, Pi = make(AutTag("A_to_C.Phi")), make(AutTag("C_to_A.Phi_inv"))
    rep = check_morphism(P)
    rep.name = "Phi isomorphism"
    other = check_morphism(Pi)
    rep.checked += other.checked
    rep.failures += other.failures
    for f, g in ((P, Pi), (Pi, P)):
        h = _compose(f, g)
        for k, name in enumerate(h.source.gens):
            rep.add(f"{f.name} o {g.name} on {name}", h.images[k] - Element.gen(h.source, name))
    return rep


def transport_report() -> Report:
    """Push every A identity entry through Phi and compare with its C counterpart."""
    from .catalog import identity_suite
    from .parser import parse_element

    P = make(AutTag("A_to_C.Phi"))
    entries = identity_suite()
    by_id = {e.id: e for e in entries}
    rep = Report("Phi transport of A identities")
    for e in entries:
        if e.transport is None:
            continue
        c = by_id[e.transport]
        lhs, rhs = (apply_morphism(P, parse_element(t, P.source)) for t in (e.lhs, e.rhs))
        rep.add(f"{e.id} residue", lhs - rhs)
        rep.add(f"{e.id} -> {c.id}", lhs - parse_element(c.lhs, P.target))
        rep.add(f"{c.id} residue", c.residue())
    return rep


# seeded samples ---------------------------------------------------------------------

def random_sl2(rng: random.Random, bound: int = 3) -> tuple:
    while True:
        i, j, m, n = (rng.randint(-bound, bound) for _ in range(4))
        if i * n - j * m == 1:
            return ((i, j), (m, n))


def random_unit_scalar(rng: random.Random) -> ScalarFraction:
    k = rng.randint(1, 4) * rng.choice((1, -1))
    return ScalarFraction.from_int(k) * q(rng.randint(-2, 2))


def random_rho(rng: random.Random, bound: int = 3) -> MorphismSpec:
    return rho(*(random_unit_scalar(rng) for _ in range(4)), matrix=random_sl2(rng, bound))


def random_family_member(alg: str, rng: random.Random) -> MorphismSpec:
    fam = rng.choice(("tau", "xi", "eta", "group") if alg == "Oq" else ("sigma", "xi", "eta", "group"))
    sc = lambda: random_unit_scalar(rng)  # noqa: E731
    params = {"xi": {"i": rng.randint(-3, 3)},
              "eta": {"alpha": sc(), "beta": sc(), "gamma": sc()},
              "group": {"alpha": sc(), "beta": sc(), "gamma": sc(), "i": rng.randint(-3, 3),
                        "swap": rng.randint(0, 1)}}.get(fam, {})
    return make(AutTag(f"{alg}.{fam}", params))


def matmul(A, B):
    return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(2)) for c in range(2)) for r in range(2))


__all__ = ["RhoParams", "AutTag", "AutError", "ClassifyError", "make", "rho", "classify", "compose", "invert",
           "action_on_normals", "normals_report", "conjugation_check", "phi_iso_report", "printed_exponents",
           "solved_exponents", "random_rho", "random_sl2", "random_family_member", "matmul", "is_identity"]
