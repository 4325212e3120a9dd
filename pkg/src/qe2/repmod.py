"""Basis-indexed modules: QGWA torsion and torsionfree modules, the C(chi)-modules H, L, M, N,
induction to D_q, twisting, and window audits."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping

from .catalog import build
from .gwa import QgwaData, qgwa_build
from .pbw import AlgebraSpec, Element, MorphismSpec, apply_morphism
from .scalar import Coercible, ScalarFraction, geometric

q = ScalarFraction.qpow
ONE = ScalarFraction.one()

Index = Hashable
Combo = dict  # Index -> ScalarFraction
Action = Callable[[Index], Combo]


class ModuleError(ValueError):
    pass


def _sc(x: Coercible | str) -> ScalarFraction:
    if isinstance(x, str):
        return ScalarFraction.parse(x)
    return ScalarFraction.coerce(x)


class ModVector:
    """Finite combination of basis indices."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @staticmethod
    def basis(idx: Index, coef: Coercible = 1) -> "ModVector":
        return ModVector({idx: ScalarFraction.coerce(coef)})

    def __add__(self, other: "ModVector") -> "ModVector":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return ModVector(out)

    def __neg__(self) -> "ModVector":
        return ModVector({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "ModVector") -> "ModVector":
        return self + (-other)

    def scale(self, c: Coercible) -> "ModVector":
        c = ScalarFraction.coerce(c)
        return ModVector({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ModVector) and (self - other).is_zero()

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({v.render()})*{k}" for k, v in sorted(self.terms.items(), key=lambda kv: repr(kv[0])))

    def __repr__(self) -> str:
        return f"ModVector({self.render()})"


@dataclass
class ModuleSpec:
    """Module over ``algebra`` with actions given per generator on basis indices.

    ``inverse`` holds the actions of the inverses of invertible generators;
    ``window(n)`` lists the basis indices audited at size n.
    """

    name: str
    algebra: AlgebraSpec
    actions: dict
    inverse: dict
    valid: Callable[[Index], bool]
    window: Callable[[int], Iterable]
    generator: Index = 0
    meta: dict = field(default_factory=dict)

    def act_gen(self, g: str, v: ModVector, exp: int = 1) -> ModVector:
        table = self.actions if exp > 0 else self.inverse
        if g not in table:
            raise ModuleError(f"no action for {g}{'' if exp > 0 else '^-1'} on {self.name}")
        for _ in range(abs(exp)):
            out: dict = {}
            for idx, c in v.terms.items():
                for j, s in table[g](idx).items():
                    if not self.valid(j):
                        raise ModuleError(f"{g} maps {idx} outside the basis of {self.name}")
                    out[j] = out[j] + s * c if j in out else s * c
            v = ModVector(out)
        return v

    def act_word(self, word, v: ModVector) -> ModVector:
        """Act by a word of (generator, exponent) letters, rightmost first."""
        for g, e in reversed(list(word)):
            v = self.act_gen(g, v, e)
        return v

    def act(self, x: Element, v: ModVector | Index) -> ModVector:
        if not isinstance(v, ModVector):
            v = ModVector.basis(v)
        if x.spec is not self.algebra:
            raise ModuleError(f"element of {x.spec.name} acting on a {self.algebra.name}-module")
        out = ModVector()
        for m, c in x.terms.items():
            word = [(self.algebra.gens[k], e) for k, e in enumerate(m) if e]
            out = out + self.act_word(word, v).scale(c)
        return out

    def vec(self, idx: Index, coef: Coercible = 1) -> ModVector:
        if not self.valid(idx):
            raise ModuleError(f"{idx} is not a basis index of {self.name}")
        return ModVector.basis(idx, coef)


# QGWA modules ---------------------------------------------------------------------

def _eval_poly(coeffs: Mapping[int, ScalarFraction], h: ScalarFraction) -> ScalarFraction:
    out = ScalarFraction.zero()
    for e, c in coeffs.items():
        out = out + c * h ** e
    return out


def _is_int(k) -> bool:
    return isinstance(k, int)


def gwa_torsion_module(kind: str, d: QgwaData, gamma: Coercible | str = "gamma") -> ModuleSpec:
    """W(gamma) = A/A(h - gamma), W = A/A(h - zeta, x), W' = A/A(h - Q^-1 zeta, y) with Q = q^k.

    W(gamma) uses basis Z: k >= 0 is x^k 1, k < 0 is y^-k 1.  W and W' use N.
    """
    A = qgwa_build(d)
    Q = d.shift
    a = d.a_poly
    if kind == "W(gamma)":
        g = _sc(gamma)

        def h(k):
            return {k: Q ** (-k) * g}

        def x(k):
            if k >= 0:
                return {k + 1: ONE}
            return {k + 1: _eval_poly(a, Q ** (-k) * g)}

        def y(k):
            if k <= 0:
                return {k - 1: ONE}
            return {k - 1: _eval_poly(a, Q ** (-k + 1) * g)}

        return ModuleSpec("W(gamma)", A, {"h": h, "x": x, "y": y},
                          {"h": lambda k: {k: (Q ** k) * g.inverse()}}, _is_int,
                          lambda n: range(-n, n + 1), 0, {"gamma": g, "qgwa": d})
    zeta = d.root()
    if zeta is None:
        raise ModuleError(f"{kind} needs a(h) with a root zeta")
    nat = lambda k: isinstance(k, int) and k >= 0  # noqa: E731
    if kind == "W":
        acts = {"h": lambda k: {k: Q ** k * zeta},
                "y": lambda k: {k + 1: ONE},
                "x": lambda k: {} if k == 0 else {k - 1: _eval_poly(a, Q ** k * zeta)}}
        inv = {"h": lambda k: {k: (Q ** k * zeta).inverse()}}
    elif kind == "W'":
        acts = {"h": lambda k: {k: Q ** (-k - 1) * zeta},
                "x": lambda k: {k + 1: ONE},
                "y": lambda k: {} if k == 0 else {k - 1: _eval_poly(a, Q ** (-k) * zeta)}}
        inv = {"h": lambda k: {k: (Q ** (-k - 1) * zeta).inverse()}}
    else:
        raise ModuleError(f"unknown torsion module kind {kind!r}")
    return ModuleSpec(kind, A, acts, inv, nat, lambda n: range(0, n + 1), 0, {"zeta": zeta, "qgwa": d})


def gwa_torsionfree_module(kind: str, d: QgwaData, gamma: Coercible | str = "gamma",
                           basis: str = "rank-one") -> ModuleSpec:
    """X(gamma) = A/A(x - gamma) and Y(gamma) = A/A(y - gamma).

    In X(gamma), gamma*y1 = yx1 = a(h)1, so y1 already lies in k[h^+-1]1 and the
    quotient has basis h^j 1 (index j).  basis="graded" builds the action on the
    larger index set (i, j) ~ h^j y^i 1 instead; that table is not a module
    (relation_audit reports the yx rule) and is kept to exhibit this.
    """
    A = qgwa_build(d)
    Q = d.shift
    g = _sc(gamma)
    if g.is_zero():
        raise ModuleError("gamma must be nonzero")
    if kind not in ("X(gamma)", "Y(gamma)"):
        raise ModuleError(f"unknown torsionfree module kind {kind!r}")
    a = d.a_poly
    a_shift = d.shifted(1)
    gi = g.inverse()
    if basis == "rank-one":
        h = lambda j: {j + 1: ONE}  # noqa: E731
        h_inv = lambda j: {j - 1: ONE}  # noqa: E731
        if kind == "X(gamma)":
            x = lambda j: {j: Q ** j * g}  # noqa: E731
            y = lambda j: {j + e: Q ** (-j) * gi * c for e, c in a.items()}  # noqa: E731
        else:
            y = lambda j: {j: Q ** (-j) * g}  # noqa: E731
            x = lambda j: {j + e: Q ** j * gi * c for e, c in a_shift.items()}  # noqa: E731
        return ModuleSpec(kind, A, {"h": h, "x": x, "y": y}, {"h": h_inv}, _is_int,
                          lambda n: range(-n, n + 1), 0, {"gamma": g, "qgwa": d})
    if basis != "graded":
        raise ModuleError(f"unknown basis {basis!r}")
    valid = lambda ij: isinstance(ij, tuple) and len(ij) == 2 and ij[0] >= 0  # noqa: E731
    window = lambda n: [(i, j) for i in range(n + 1) for j in range(-n, n + 1)]  # noqa: E731
    h = lambda ij: {(ij[0], ij[1] + 1): ONE}  # noqa: E731
    h_inv = lambda ij: {(ij[0], ij[1] - 1): ONE}  # noqa: E731
    if kind == "X(gamma)":
        def y(ij):
            i, j = ij
            return {(i + 1, j): Q ** (-j)}

        def x(ij):
            i, j = ij
            if i == 0:
                return {(0, j): Q ** j * g}
            return {(i - 1, j + e): Q ** j * c for e, c in a_shift.items()}
    else:
        def x(ij):
            i, j = ij
            return {(i + 1, j): Q ** j}

        def y(ij):
            i, j = ij
            if i == 0:
                return {(0, j): Q ** (-j) * g}
            return {(i - 1, j + e): Q ** (-j) * c for e, c in a.items()}
    return ModuleSpec(f"{kind}[graded]", A, {"h": h, "x": x, "y": y}, {"h": h_inv}, valid, window, (0, 0),
                      {"gamma": g, "qgwa": d})


# C(chi)-modules H, L, M, N ------------------------------------------------------

def _G(r: ScalarFraction, n: int) -> ScalarFraction:
    return geometric(r, n)


# For each module: the basis words (first, second) and the action on (i, j).
CCHI_KINDS = {
    "H": ("y1", "x2", ("x1", "y2")),
    "L": ("x1", "y2", ("y1", "x2")),
    "M": ("y1", "y2", ("x1", "x2")),
    "N": ("x1", "x2", ("y1", "y2")),
}


def _cchi_actions(kind: str, chi: ScalarFraction) -> dict:
    q2, qm2 = q(2), q(-2)

    def step(di, dj, coef):
        return lambda ij: {} if coef(*ij).is_zero() else {(ij[0] + di, ij[1] + dj): coef(*ij)}

    if kind == "H":
        return {"y1": step(1, 0, lambda i, j: ONE),
                "x2": step(0, 1, lambda i, j: q(-2 * i)),
                "x1": step(-1, 0, lambda i, j: chi * _G(q2, i)),
                "y2": step(0, -1, lambda i, j: -q(2 * i + 3) * _G(q2, j))}
    if kind == "L":
        return {"x1": step(1, 0, lambda i, j: ONE),
                "y2": step(0, 1, lambda i, j: q(-2 * i)),
                "y1": step(-1, 0, lambda i, j: -chi * q(-2) * _G(qm2, i)),
                "x2": step(0, -1, lambda i, j: q(2 * i + 1) * _G(qm2, j))}
    if kind == "M":
        return {"y1": step(1, 0, lambda i, j: ONE),
                "y2": step(0, 1, lambda i, j: q(2 * i)),
                "x1": step(-1, 0, lambda i, j: chi * _G(q2, i)),
                "x2": step(0, -1, lambda i, j: q(-2 * i + 1) * _G(qm2, j))}
    if kind == "N":
        return {"x1": step(1, 0, lambda i, j: ONE),
                "x2": step(0, 1, lambda i, j: q(2 * i)),
                "y1": step(-1, 0, lambda i, j: -chi * q(-2) * _G(qm2, i)),
                "y2": step(0, -1, lambda i, j: -q(-2 * i + 3) * _G(q2, j))}
    raise ModuleError(f"unknown module kind {kind!r}")


def cchi_module(kind: str, chi: Coercible | str = "chi", algebra: str = "Cchi") -> ModuleSpec:
    """H, L, M, N as modules over C(chi) ("Cchi") or over C with K acting by chi ("C").

    Basis (i, j) stands for w1^i w2^j 1 with (w1, w2) from CCHI_KINDS.
    """
    if kind not in CCHI_KINDS:
        raise ModuleError(f"unknown module kind {kind!r}")
    c = _sc(chi)
    spec = build(algebra)
    if algebra == "Cchi" and not (c - ScalarFraction.var("chi")).is_zero():
        raise ModuleError("over Cchi the parameter must be chi itself; use algebra='C' for other values")
    acts = _cchi_actions(kind, c)
    inv = {}
    if algebra == "C":
        acts["K"] = lambda ij: {ij: c}
        inv["K"] = lambda ij: {ij: c.inverse()}
    elif algebra != "Cchi":
        raise ModuleError(f"cchi_module lives over C or Cchi, not {algebra}")
    valid = lambda ij: isinstance(ij, tuple) and len(ij) == 2 and ij[0] >= 0 and ij[1] >= 0  # noqa: E731
    window = lambda n: [(i, j) for i in range(n + 1) for j in range(n + 1)]  # noqa: E731
    w1, w2, killers = CCHI_KINDS[kind]
    return ModuleSpec(f"{kind}(chi)", spec, acts, inv, valid, window, (0, 0),
                      {"chi": c, "basis": (w1, w2), "annihilators": killers})


def achi_module(kind: str, chi: Coercible | str = "chi") -> ModuleSpec:
    """The analogues over A through Phi: a acts by chi, (E, w, t1, t2) as (x1, y1, x2, y2)."""
    C = cchi_module(kind, chi, "C")
    ren = {"a": "K", "E": "x1", "w": "y1", "t1": "x2", "t2": "y2"}
    return ModuleSpec(C.name.replace("(chi)", "_A(chi)"), build("A"), {s: C.actions[t] for s, t in ren.items()},
                      {"a": C.inverse["K"]}, C.valid, C.window, C.generator, dict(C.meta))


# twisting and induction ------------------------------------------------------------

def twist(M: ModuleSpec, f: MorphismSpec) -> ModuleSpec:
    """M^f: r . m = f(r) m."""
    if f.source is not M.algebra or f.target is not M.algebra:
        raise ModuleError("twist needs an endomorphism of the module's algebra")
    acts, inv = {}, {}
    for k, g in enumerate(M.algebra.gens):
        img = f.images[k]
        acts[g] = _element_action(M, img)
        if M.algebra.invertible[k]:
            inv[g] = _element_action(M, f.inv_images[k])
    return ModuleSpec(f"{M.name}^{f.name}", M.algebra, acts, inv, M.valid, M.window, M.generator, dict(M.meta))


def _element_action(M: ModuleSpec, x: Element) -> Action:
    return lambda idx: M.act(x, ModVector.basis(idx)).terms


# D_q generators as (shift, element of the subalgebra)
C_DECOMP = {"K": (0, "K"), "a": (1, "1"), "E": (-2, "x1"), "c": (1, "y1"), "F": (2, "x2"), "b": (-1, "y2")}
A_DECOMP = {"K": (1, "1"), "a": (0, "a"), "E": (0, "E"), "c": (1, "q*a^-2*w"), "F": (-1, "t1"),
            "b": (1, "q^-3*a*t2")}


def induce(M: ModuleSpec, over: str | None = None) -> ModuleSpec:
    """ind(M) = D_q (x) M = sum_i u^i (x) M with u = a (over C) or u = K (over A).

    A generator g = u^d t acts by g (i (x) m) = (i + d) (x) tau^i(t) m, with tau the twist by u.
    """
    from .autgrp import AutTag, make
    from .parser import parse_element

    over = over or M.algebra.name
    if over not in ("C", "A") or M.algebra is not build(over):
        raise ModuleError("induction needs a module over C or A")
    D = build("Dq")
    sub = M.algebra
    decomp = C_DECOMP if over == "C" else A_DECOMP
    fam = "C.tau_a" if over == "C" else "A.tau_K"
    parts = {g: (d, parse_element(t, sub)) for g, (d, t) in decomp.items()}

    @lru_cache(maxsize=None)
    def tw(i: int) -> MorphismSpec:
        return make(AutTag(fam, {"power": i}))

    def action(g):
        d, t = parts[g]

        def run(idx):
            i, m = idx
            y = M.act(apply_morphism(tw(i), t), ModVector.basis(m))
            return {(i + d, k): c for k, c in y.terms.items()}
        return run

    def inv_action(g):
        d, t = parts[g]
        t_inv = t.inverse()

        def run(idx):
            i, m = idx
            y = M.act(apply_morphism(tw(i - d), t_inv), ModVector.basis(m))
            return {(i - d, k): c for k, c in y.terms.items()}
        return run

    acts = {g: action(g) for g in D.gens}
    inv = {g: inv_action(g) for g, flag in zip(D.gens, D.invertible) if flag}
    valid = lambda idx: isinstance(idx, tuple) and len(idx) == 2 and isinstance(idx[0], int) and M.valid(idx[1])  # noqa: E731
    window = lambda n: [(i, m) for i in range(-n, n + 1) for m in M.window(n)]  # noqa: E731
    return ModuleSpec(f"ind({M.name})", D, acts, inv, valid, window, (0, M.generator),
                      {"over": over, "base": M})


# audits ------------------------------------------------------------------------------

@dataclass
class AuditReport:
    module: str
    checked: int = 0
    failures: list = field(default_factory=list)  # (rule_id, index, residue)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps({"module": self.module, "checked": self.checked, "passed": self.passed,
                           "failures": [{"rule_id": r, "index": repr(i), "residue": v.render()}
                                        for r, i, v in self.failures]})

    def summary(self) -> str:
        state = "pass" if self.passed else f"FAIL ({len(self.failures)} residues)"
        return f"relation audit {self.module}: {state} ({self.checked} checks)"


def relation_audit(M: ModuleSpec, window: int = 8) -> AuditReport:
    """Every defining rule and every inverse pair, applied to each basis vector in the window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    A = M.algebra
    rep = AuditReport(M.name)
    rules = []
    for (i, j), r in sorted(A.rules.items()):
        rhs = Element(A, A._finalize(r))
        rules.append((f"{A.gens[i]}*{A.gens[j]}", [(A.gens[i], 1), (A.gens[j], 1)], rhs))
    for k, g in enumerate(A.gens):
        if A.invertible[k]:
            one = Element.one(A)
            rules.append((f"{g}*{g}^-1", [(g, 1), (g, -1)], one))
            rules.append((f"{g}^-1*{g}", [(g, -1), (g, 1)], one))
    for idx in M.window(window):
        v = ModVector.basis(idx)
        for rid, word, rhs in rules:
            rep.checked += 1
            res = M.act_word(word, v) - M.act(rhs, v)
            if not res.is_zero():
                rep.failures.append((rid, idx, res))
    return rep


@dataclass
class ConnectivityReport:
    module: str
    nodes: int
    connected: bool
    note: str = "necessary signal only; simplicity is not asserted"

    @property
    def passed(self) -> bool:
        return self.connected

    def summary(self) -> str:
        return f"connectivity {self.module}: {'connected' if self.connected else 'disconnected'} on {self.nodes} vectors ({self.note})"


def connectivity_probe(M: ModuleSpec, window: int = 6) -> ConnectivityReport:
    """Strong connectivity of the generator graph restricted to the window."""
    if window < 2:
        raise ValueError("window must be >= 2")
    nodes = list(M.window(window))
    inside = set(nodes)
    fwd = {v: set() for v in nodes}
    bwd = {v: set() for v in nodes}
    tables = list(M.actions.values()) + list(M.inverse.values())
    for v in nodes:
        for act in tables:
            for w, c in act(v).items():
                if w in inside and w != v and not c.is_zero():
                    fwd[v].add(w)
                    bwd[w].add(v)

    def reach(graph):
        seen, stack = {nodes[0]}, [nodes[0]]
        while stack:
            for w in graph[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)

    return ConnectivityReport(M.name, len(nodes), bool(nodes) and reach(fwd) and reach(bwd))


def zero_module(algebra: AlgebraSpec) -> ModuleSpec:
    acts = {g: (lambda idx: {}) for g in algebra.gens}
    inv = {g: (lambda idx: {}) for g, f in zip(algebra.gens, algebra.invertible) if f}
    return ModuleSpec("0", algebra, acts, inv, lambda idx: False, lambda n: [], None)


def weight_support(M: ModuleSpec, window: int = 3) -> dict:
    """K-eigenvalue of each stratum of an induced module (over C)."""
    out = {}
    for i in range(-window, window + 1):
        v = ModVector.basis((i, M.meta["base"].generator))
        kv = M.act_gen("K", v)
        (idx, c), = kv.terms.items()
        out[i] = c
    return out


__all__ = ["ModVector", "ModuleSpec", "ModuleError", "gwa_torsion_module", "gwa_torsionfree_module",
           "cchi_module", "achi_module", "twist", "induce", "relation_audit", "connectivity_probe",
           "zero_module", "weight_support", "AuditReport", "ConnectivityReport"]
