"""Hopf structure on O_q and U_q, the pairing, the action, smash relations."""

from __future__ import annotations

from functools import lru_cache

from .catalog import build
from .pbw import (AlgebraSpec, Element, MorphismSpec, Report, apply_morphism, embed_copy,
                  tensor_split)
from .parser import parse_element
from .scalar import ScalarFraction, qbinom

q = ScalarFraction.qpow

# Coproducts as templates: {L}/{R} are the tensor-copy suffixes.
COPRODUCT = {
    "Oq": {"a": "a{L}*a{R}", "b": "b{L}*a{R}^-1 + a{L}*b{R}", "c": "c{L}*a{R} + a{L}^-1*c{R}"},
    "Uq": {"K": "K{L}*K{R}", "E": "E{L}*K{R} + E{R}", "F": "F{L} + K{L}^-1*F{R}"},
}
COUNIT = {"Oq": {"a": 1, "b": 0, "c": 0}, "Uq": {"K": 1, "E": 0, "F": 0}}
ANTIPODE = {
    "Oq": {"a": "a^-1", "b": "-q^-1*b", "c": "-q*c"},
    "Uq": {"K": "K^-1", "E": "-E*K^-1", "F": "-K*F"},
}

# Nonvanishing pairings <u, x> on generators and inverses.
PAIRING = {
    ("K", "a"): q(-1), ("K", "a^-1"): q(1),
    ("K^-1", "a"): q(1), ("K^-1", "a^-1"): q(-1),
    ("E", "c"): q(0), ("F", "b"): q(0),
    ("1", "a"): q(0), ("1", "a^-1"): q(0),
}


def pairing(u: str, x: str) -> ScalarFraction:
    return PAIRING.get((u, x), ScalarFraction.zero())


def ground_field() -> AlgebraSpec:
    k = AlgebraSpec("k", [])
    k.validate()
    return k


_K = ground_field()


def _fill(template: str, L: str, R: str) -> str:
    return template.replace("{L}", L).replace("{R}", R)


@lru_cache(maxsize=None)
def delta_map(which: str) -> MorphismSpec:
    H, T = build(which), build(which + "2")
    imgs = {g: parse_element(_fill(t, "_1", "_2"), T) for g, t in COPRODUCT[which].items()}
    return MorphismSpec(H, T, imgs, name=f"Delta[{which}]")


@lru_cache(maxsize=None)
def counit_map(which: str) -> MorphismSpec:
    return MorphismSpec(build(which), _K, {g: Element.scalar(_K, v) for g, v in COUNIT[which].items()},
                        name=f"eps[{which}]")


@lru_cache(maxsize=None)
def antipode_map(which: str) -> MorphismSpec:
    H = build(which)
    imgs = {g: parse_element(t, H) for g, t in ANTIPODE[which].items()}
    return MorphismSpec(H, H, imgs, anti=True, name=f"S[{which}]")


def coproduct(x: Element, which: str | None = None) -> Element:
    which = which or x.spec.name
    return apply_morphism(delta_map(which), x)


def counit(x: Element, which: str | None = None) -> ScalarFraction:
    which = which or x.spec.name
    return apply_morphism(counit_map(which), x).scalar_value()


def antipode(x: Element, which: str | None = None) -> Element:
    which = which or x.spec.name
    return apply_morphism(antipode_map(which), x)


@lru_cache(maxsize=None)
def _lift(which: str, kind: str) -> MorphismSpec:
    """Maps between tensor powers: Delta(x)id, id(x)Delta, eps(x)id, id(x)eps."""
    H = build(which)
    T2, T3 = build(which + "2"), build(which + "3")
    imgs = {}
    for g in H.gens:
        tpl = COPRODUCT[which][g]
        if kind == "delta_id":
            imgs[g + "_1"] = parse_element(_fill(tpl, "_1", "_2"), T3)
            imgs[g + "_2"] = parse_element(f"{g}_3", T3)
        elif kind == "id_delta":
            imgs[g + "_1"] = parse_element(f"{g}_1", T3)
            imgs[g + "_2"] = parse_element(_fill(tpl, "_2", "_3"), T3)
        elif kind == "eps_id":
            imgs[g + "_1"] = Element.scalar(H, COUNIT[which][g])
            imgs[g + "_2"] = Element.gen(H, g)
        elif kind == "id_eps":
            imgs[g + "_1"] = Element.gen(H, g)
            imgs[g + "_2"] = Element.scalar(H, COUNIT[which][g])
    target = T3 if kind.endswith("delta") or kind.startswith("delta") else H
    return MorphismSpec(T2, target, imgs, name=f"{kind}[{which}]")


def _mult_with(T: AlgebraSpec, x: Element, left, right) -> Element:
    """m o (left (x) right) applied to a tensor element; left/right map H -> H."""
    H = T.base_spec
    out = Element.zero(H)
    for m, c in x.terms.items():
        mL, mR = tensor_split(T, m)
        out = out + left(Element(H, {mL: c})) * right(Element(H, {mR: ScalarFraction.one()}))
    return out


def check_hopf_axioms(which: str) -> Report:
    H = build(which)
    rep = Report(f"hopf axioms {which}")
    ident = lambda e: e  # noqa: E731
    S = antipode_map(which)
    letters = [(g, 1) for g in H.gens] + [(g, -1) for g, inv in zip(H.gens, H.invertible) if inv]
    for g, e in letters:
        x = Element.gen(H, g, e)
        label = g if e == 1 else f"{g}^-1"
        d = coproduct(x, which)
        rep.add(f"coassoc {label}", apply_morphism(_lift(which, "delta_id"), d)
                - apply_morphism(_lift(which, "id_delta"), d))
        rep.add(f"counit-left {label}", apply_morphism(_lift(which, "eps_id"), d) - x)
        rep.add(f"counit-right {label}", apply_morphism(_lift(which, "id_eps"), d) - x)
        eps = Element.scalar(H, counit(x, which))
        T = d.spec
        rep.add(f"antipode-left {label}", _mult_with(T, d, lambda y: apply_morphism(S, y), ident) - eps)
        rep.add(f"antipode-right {label}", _mult_with(T, d, ident, lambda y: apply_morphism(S, y)) - eps)
    return rep


# action of U_q on O_q -------------------------------------------------------

# Delta on the letters used by the recursion; "Ki" is K^-1.
_U_DELTA = {
    "1": [("1", "1")],
    "K": [("K", "K")],
    "Ki": [("Ki", "Ki")],
    "E": [("E", "K"), ("1", "E")],
    "F": [("F", "1"), ("Ki", "F")],
}
_U_EPS = {"1": 1, "K": 1, "Ki": 1, "E": 0, "F": 0}
_PAIR_NAME = {"1": "1", "K": "K", "Ki": "K^-1", "E": "E", "F": "F"}
# Delta on O_q letters as (left letter, right letter) pairs
_O_DELTA = {
    ("a", 1): [(("a", 1), ("a", 1))],
    ("a", -1): [(("a", -1), ("a", -1))],
    ("b", 1): [(("b", 1), ("a", -1)), (("a", 1), ("b", 1))],
    ("c", 1): [(("c", 1), ("a", 1)), (("a", -1), ("c", 1))],
}


def _letter_name(letter) -> str:
    g, e = letter
    return g if e == 1 else f"{g}^{e}"


@lru_cache(maxsize=None)
def _act_word(u: str, word: tuple) -> Element:
    """u . (word) for a U_q letter u and a word of O_q letters."""
    O = build("Oq")
    if not word:
        return Element.scalar(O, _U_EPS[u])
    if len(word) == 1:
        out = Element.zero(O)
        for left, right in _O_DELTA[word[0]]:
            p = pairing(_PAIR_NAME[u], _letter_name(right))
            if not p.is_zero():
                out = out + Element.gen(O, left[0], left[1]) * p
        return out
    out = Element.zero(O)
    for u1, u2 in _U_DELTA[u]:
        a = _act_word(u1, word[:1])
        if a.is_zero():
            continue
        out = out + a * _act_word(u2, word[1:])
    return out


def _mono_letters(spec: AlgebraSpec, m) -> tuple:
    word = []
    for k, e in enumerate(m):
        step = 1 if e > 0 else -1
        word += [(spec.gens[k], step)] * abs(e)
    return tuple(word)


def _act_letter(u: str, x: Element) -> Element:
    out = Element.zero(x.spec)
    for m, c in x.terms.items():
        out = out + _act_word(u, _mono_letters(x.spec, m)) * c
    return out


def act(u: Element | str, x: Element) -> Element:
    """u . x for u in U_q (element or generator name, 'K^-1' allowed) and x in O_q."""
    if isinstance(u, str):
        u = parse_element(u, build("Uq"))
    U = build("Uq")
    out = Element.zero(x.spec)
    for m, c in u.terms.items():
        y = x
        # K^i E^j F^k acts right to left
        for letter in reversed(_mono_letters(U, m)):
            name = "Ki" if letter == ("K", -1) else letter[0]
            y = _act_letter(name, y)
        out = out + y * c
    return out


def act_word(u: str, word) -> Element:
    """Act on an unnormalized word of O_q letters (for well-definedness checks)."""
    name = {"K^-1": "Ki"}.get(u, u)
    return _act_word(name, tuple(word))


def module_algebra_residue(u: str, x: Element, y: Element) -> Element:
    """act(u, xy) - sum act(u1, x) act(u2, y)."""
    name = {"K^-1": "Ki"}.get(u, u)
    lhs = _act_letter(name, x * y)
    rhs = Element.zero(x.spec)
    for u1, u2 in _U_DELTA[name]:
        rhs = rhs + _act_letter(u1, x) * _act_letter(u2, y)
    return lhs - rhs


def cross_relation(u: str, x: str) -> Element:
    """u*x straightened as sum (u1 . x) u2, as an element of D_q."""
    D = build("Dq")
    name = {"K^-1": "Ki"}.get(u, u)
    out = Element.zero(D)
    uel = {"1": "1", "K": "K", "Ki": "K^-1", "E": "E", "F": "F"}
    for u1, u2 in _U_DELTA[name]:
        a = act_word(u1, [(x, 1)])
        img = Element.zero(D)
        for m, c in a.terms.items():
            img = img + Element.from_word(D, [(a.spec.gens[k], e) for k, e in enumerate(m) if e], c)
        out = out + img * parse_element(uel[u2], D)
    return out


# powers of the coproduct ------------------------------------------------------

DELTA_POWER_CAP = 8


def delta_power(m: int, n: int) -> tuple[bool, Element, Element]:
    """Direct Delta(x)^m Delta(y)^n versus the q^2-binomial double sum."""
    if m > DELTA_POWER_CAP or n > DELTA_POWER_CAP or m < 0 or n < 0:
        raise ValueError(f"delta_power needs 0 <= m, n <= {DELTA_POWER_CAP}")
    O = build("Oq")
    T = build("Oq2")
    x, y = O.named["x"], O.named["y"]
    direct = coproduct(x) ** m * coproduct(y) ** n
    q2 = q(2)
    closed = Element.zero(T)
    a = Element.gen(O, "a")
    for i in range(m + 1):
        for j in range(n + 1):
            coef = qbinom(m, i, q2) * qbinom(n, j, q2)
            left = x ** i * a ** (2 * m - 2 * (i + j)) * y ** (n - j)
            right = x ** (m - i) * y ** j
            closed = closed + embed_copy(T, left, 1) * embed_copy(T, right, 2) * coef
    return (direct - closed).is_zero(), direct, closed
