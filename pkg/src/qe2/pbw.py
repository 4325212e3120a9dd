"""PBW rewriting engine.

An :class:`AlgebraSpec` lists generators in basis order and, for adjacent
letters ``x`` then ``y``, a rule ``x*y = s*(y*x) + correction``.  Rules are
required for every pair ``x > y`` (out of basis order); optional rules on
in-order pairs with ``s = 0`` cover generalized Weyl algebras, where
``x*y`` collapses into the base ring.

Products of basis monomials are computed by a memoized recursion that
peels off the last syllable of the left factor and the first syllable of
the right factor.  Pure skew rules (no correction) swap whole syllables in
one step, which also handles negative exponents.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .scalar import ParamRing, ScalarFraction, Coercible

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

ONE = ScalarFraction.one()
ZERO = ScalarFraction.zero()

Mono = tuple  # tuple[int, ...]
Terms = dict  # dict[Mono, ScalarFraction]
Word = Sequence[tuple[Union[str, int], int]]

STEP_CAP = 1_000_000


class PBWError(Exception):
    pass


class NonInvertibleError(PBWError):
    pass


class RewriteLimitError(PBWError):
    pass


@dataclass
class Rule:
    left: int
    right: int
    scalar: ScalarFraction
    correction: object  # raw list of (coef, word) until finalized, then Terms
    pure: bool = False
    rhs: Terms | None = None


class AlgebraSpec:
    """PBW presentation: ordered generators, invertibility flags, pair rules."""

    def __init__(self, name: str, generators: Sequence[tuple[str, bool]], params: Iterable[str] = ()):
        self.name = name
        self.gens = tuple(g for g, _ in generators)
        self.invertible = tuple(bool(inv) for _, inv in generators)
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("duplicate generator names")
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.n = len(self.gens)
        self.param_ring = ParamRing(params)
        self.rules: dict[tuple[int, int], Rule] = {}
        self.named: dict[str, "Element"] = {}
        self._mcache: dict = {}
        self._scache: dict = {}
        self._steps = 0
        self._depth = 0
        self._finalizing: set = set()

    # construction -------------------------------------------------------
    def set_rule(self, left: str, right: str, scalar: Coercible, correction: Iterable = ()) -> None:
        """Declare left*right = scalar*right*left + correction.

        ``correction`` is a list of ``(coef, word)`` pairs or an Element.
        """
        i, j = self.index[left], self.index[right]
        if i == j:
            raise ValueError("rule on a single generator")
        s = ScalarFraction.coerce(scalar)
        if i < j and not s.is_zero():
            raise ValueError(f"in-order pair {left}*{right} may only collapse (scalar 0)")
        if isinstance(correction, Element):
            corr = [(c, _mono_word(m)) for m, c in correction.terms.items()]
        else:
            corr = [(ScalarFraction.coerce(c), list(w)) for c, w in correction]
        pure = not corr and not s.is_zero()
        self.rules[(i, j)] = Rule(i, j, s, corr, pure)
        self._mcache.clear()
        self._scache.clear()

    def relate(self, left: str, right: str, scalar: Coercible, correction: Iterable = ()) -> None:
        """Record left*right = scalar*right*left + correction in either orientation."""
        i, j = self.index[left], self.index[right]
        if i > j:
            self.set_rule(left, right, scalar, correction)
            return
        s = ScalarFraction.coerce(scalar)
        inv = s.inverse()
        if isinstance(correction, Element):
            correction = [(c, _mono_word(m)) for m, c in correction.terms.items()]
        corr = [(-inv * ScalarFraction.coerce(c), w) for c, w in correction]
        self.set_rule(right, left, inv, corr)

    def commute_rest(self) -> None:
        """Make every still-unrelated out-of-order pair commute."""
        for i in range(self.n):
            for j in range(i):
                if (i, j) not in self.rules:
                    self.rules[(i, j)] = Rule(i, j, ONE, [], True)

    def validate(self) -> None:
        for i in range(self.n):
            for j in range(i):
                if (i, j) not in self.rules:
                    raise ValueError(f"missing rule for {self.gens[i]}*{self.gens[j]}")
        for r in list(self.rules.values()):
            self._finalize(r)

    def _finalize(self, r: Rule) -> Terms:
        if r.rhs is not None:
            return r.rhs
        key = (r.left, r.right)
        if key in self._finalizing:
            raise PBWError(f"cyclic correction dependency at {self.gens[r.left]}*{self.gens[r.right]}")
        self._finalizing.add(key)
        try:
            corr: Terms = {}
            for c, w in r.correction:
                _acc(corr, self._word_terms(w), c)
            r.correction = corr
            rhs = dict(corr)
            if not r.scalar.is_zero():
                m = [0] * self.n
                m[r.left] = 1
                m[r.right] = 1
                m = tuple(m)
                if r.left > r.right:
                    _acc(rhs, {m: ONE}, r.scalar)
                else:
                    raise PBWError("in-order rule with nonzero scalar")
            r.rhs = rhs
            return rhs
        finally:
            self._finalizing.discard(key)

    # elementary helpers -------------------------------------------------
    def unit_mono(self, i: int, e: int = 1) -> Mono:
        m = [0] * self.n
        m[i] = e
        return tuple(m)

    def one_mono(self) -> Mono:
        return (0,) * self.n

    def _tick(self) -> None:
        self._steps += 1
        if self._steps > STEP_CAP:
            raise RewriteLimitError(f"rewrite cap of {STEP_CAP} steps exceeded in {self.name}")

    def _word_terms(self, word: Word) -> Terms:
        acc: Terms = {self.one_mono(): ONE}
        for g, e in word:
            i = self.index[g] if isinstance(g, str) else g
            if e == 0:
                continue
            if e < 0 and not self.invertible[i]:
                raise NonInvertibleError(f"{self.gens[i]} is not invertible")
            acc = self._mul_terms(acc, {self.unit_mono(i, e): ONE})
        return acc

    # core multiplication -------------------------------------------------
    def _mul_terms(self, X: Terms, Y: Terms) -> Terms:
        out: Terms = {}
        for m1, c1 in X.items():
            for m2, c2 in Y.items():
                _acc(out, self._mul_mono(m1, m2), c1 * c2)
        return out

    def _mul_mono(self, A: Mono, B: Mono) -> Terms:
        key = (A, B)
        r = self._mcache.get(key)
        if r is not None:
            return r
        self._tick()
        n = self.n
        x = n - 1
        while x >= 0 and A[x] == 0:
            x -= 1
        y = 0
        while y < n and B[y] == 0:
            y += 1
        if x < 0:
            r = {B: ONE}
        elif y == n:
            r = {A: ONE}
        elif x < y and (x, y) not in self.rules:
            r = {tuple(a + b for a, b in zip(A, B)): ONE}
        elif x == y:
            e = A[x] + B[x]
            if e:
                r = {tuple(a + b for a, b in zip(A, B)): ONE}
            else:
                A2 = A[:x] + (0,) + A[x + 1:]
                B2 = B[:x] + (0,) + B[x + 1:]
                r = self._mul_mono(A2, B2)
        else:
            S = self._swap(x, A[x], y, B[y])
            A2 = A[:x] + (0,) + A[x + 1:]
            B2 = B[:y] + (0,) + B[y + 1:]
            r = {}
            for m, c in S.items():
                for m2, c2 in self._mul_mono(A2, m).items():
                    _acc(r, self._mul_mono(m2, B2), c * c2)
        self._mcache[key] = r
        return r

    def _swap(self, x: int, a: int, y: int, b: int) -> Terms:
        """Normal form of x^a * y^b for a rule pair (x, y)."""
        key = (x, a, y, b)
        r = self._scache.get(key)
        if r is not None:
            return r
        self._tick()
        rule = self.rules[(x, y)]
        if rule.pure:
            m = [0] * self.n
            m[x] = a
            m[y] = b
            r = {tuple(m): rule.scalar ** (a * b)}
        else:
            if a < 0 or b < 0:
                raise NonInvertibleError(
                    f"rule {self.gens[x]}*{self.gens[y]} has a correction term; "
                    "it cannot be applied to inverse powers")
            rhs = self._finalize(rule)
            r = rhs
            if b > 1:
                r = self._mul_terms(r, {self.unit_mono(y, b - 1): ONE})
            if a > 1:
                r = self._mul_terms({self.unit_mono(x, a - 1): ONE}, r)
        self._scache[key] = r
        return r

    def _guarded(self, fn, *args):
        top = self._depth == 0
        if top:
            self._steps = 0
        self._depth += 1
        try:
            return fn(*args)
        except RecursionError as exc:
            raise RewriteLimitError(f"rewriting did not terminate in {self.name}") from exc
        finally:
            self._depth -= 1

    def mul(self, X: Terms, Y: Terms) -> Terms:
        return self._guarded(self._mul_terms, X, Y)

    def word(self, word: Word) -> Terms:
        return self._guarded(self._word_terms, word)

    # misc -----------------------------------------------------------------
    def is_normal_mono(self, m: Mono) -> bool:
        for (i, j), r in self.rules.items():
            if i < j and m[i] and m[j] and not any(m[i + 1:j]):
                return False
        return all(e >= 0 or self.invertible[k] for k, e in enumerate(m))

    def random_mono(self, rng: random.Random, max_deg: int = 3, inv_range: int = 2) -> Mono:
        while True:
            m = [0] * self.n
            deg = rng.randint(0, max_deg)
            for _ in range(deg):
                k = rng.randrange(self.n)
                if self.invertible[k]:
                    m[k] += rng.choice([-1, 1])
                    m[k] = max(-inv_range, min(inv_range, m[k]))
                else:
                    m[k] += 1
            m = tuple(m)
            if self.is_normal_mono(m):
                return m

    def relations(self) -> list[tuple[str, "Element", "Element"]]:
        """Defining relations as (label, lhs word element, rhs element)."""
        out = []
        for (i, j) in sorted(self.rules):
            r = self.rules[(i, j)]
            rhs = Element(self, self._finalize(r))
            lhs_word = [(i, 1), (j, 1)]
            out.append((f"{self.gens[i]}*{self.gens[j]}", lhs_word, rhs))
        return out

    def __repr__(self) -> str:
        return f"AlgebraSpec({self.name}, gens={self.gens})"


def _acc(out: Terms, src: Terms, c: ScalarFraction) -> None:
    if c.is_zero():
        return
    one = c.is_one()
    for m, v in src.items():
        t = v if one else v * c
        old = out.get(m)
        if old is None:
            out[m] = t
        else:
            s = old + t
            if s.is_zero():
                del out[m]
            else:
                out[m] = s


def _mono_word(m: Mono) -> list:
    return [(i, e) for i, e in enumerate(m) if e]


def order_key(spec: AlgebraSpec, m: Mono):
    """Degree in the non-invertible generators, then lexicographic."""
    deg = sum(e for e, inv in zip(m, spec.invertible) if not inv)
    return (deg, m)


class Element:
    """Finite sum of PBW monomials with scalar coefficients."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebraSpec, terms: Terms | None = None):
        self.spec = spec
        self.terms = terms if terms is not None else {}

    # constructors
    @staticmethod
    def zero(spec: AlgebraSpec) -> "Element":
        return Element(spec, {})

    @staticmethod
    def scalar(spec: AlgebraSpec, s: Coercible) -> "Element":
        s = ScalarFraction.coerce(s)
        return Element(spec, {} if s.is_zero() else {spec.one_mono(): s})

    @staticmethod
    def one(spec: AlgebraSpec) -> "Element":
        return Element.scalar(spec, ONE)

    @staticmethod
    def gen(spec: AlgebraSpec, name: str, exp: int = 1) -> "Element":
        i = spec.index[name]
        if exp < 0 and not spec.invertible[i]:
            raise NonInvertibleError(f"{name} is not invertible")
        return Element(spec, {spec.unit_mono(i, exp): ONE})

    @staticmethod
    def from_word(spec: AlgebraSpec, word: Word, coef: Coercible = 1) -> "Element":
        return Element(spec, spec.word(word)) * ScalarFraction.coerce(coef)

    # arithmetic
    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.spec is not self.spec:
                raise PBWError(f"mixing elements of {self.spec.name} and {other.spec.name}")
            return other
        return Element.scalar(self.spec, other)

    def __add__(self, other) -> "Element":
        o = self._coerce(other)
        t = dict(self.terms)
        _acc(t, o.terms, ONE)
        return Element(self.spec, t)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Element":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Element":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Element":
        if isinstance(other, Element):
            o = self._coerce(other)
            return Element(self.spec, self.spec.mul(self.terms, o.terms))
        s = ScalarFraction.coerce(other)
        if s.is_zero():
            return Element(self.spec, {})
        return Element(self.spec, {m: c * s for m, c in self.terms.items()})

    def __rmul__(self, other) -> "Element":
        return self * other  # scalars are central

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            return self.inverse() ** (-k)
        out = Element.one(self.spec)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return (self - other).is_zero()
        try:
            return (self - Element.scalar(self.spec, other)).is_zero()
        except TypeError:
            return NotImplemented

    __hash__ = None

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.spec.one_mono() in self.terms)

    def scalar_value(self) -> ScalarFraction:
        if not self.is_scalar():
            raise PBWError("element is not a scalar")
        return self.terms.get(self.spec.one_mono(), ZERO)

    def is_unit(self) -> bool:
        if len(self.terms) != 1:
            return False
        (m, _), = self.terms.items()
        return all(e == 0 or self.spec.invertible[k] for k, e in enumerate(m))

    def inverse(self) -> "Element":
        if not self.is_unit():
            raise NonInvertibleError(f"{self.render()} is not a unit")
        (m, c), = self.terms.items()
        word = [(k, -e) for k, e in reversed(list(enumerate(m))) if e]
        return Element.from_word(self.spec, word, c.inverse())

    def leading(self) -> tuple[Mono, ScalarFraction]:
        m = max(self.terms, key=lambda t: order_key(self.spec, t))
        return m, self.terms[m]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def render(self) -> str:
        return render_terms(self.spec, self.terms)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"<{self.spec.name}: {self.render()}>"


def render_mono(spec: AlgebraSpec, m: Mono) -> str:
    parts = []
    for k, e in enumerate(m):
        if e == 1:
            parts.append(spec.gens[k])
        elif e:
            parts.append(f"{spec.gens[k]}^{e}")
    return "*".join(parts)


def render_terms(spec: AlgebraSpec, terms: Terms) -> str:
    if not terms:
        return "0"
    out = []
    for m, c in sorted(terms.items(), key=lambda t: t[0], reverse=True):
        body = render_mono(spec, m)
        if not body:
            r = c.render()
            out.append(r if c.is_polynomial() and "+" not in r and " - " not in r else f"({r})")
        elif c.is_one():
            out.append(body)
        else:
            out.append(f"({c.render()})*{body}")
    return " + ".join(out)


# public operations ----------------------------------------------------------

def normal_form(x: Union[Element, Word], spec: AlgebraSpec | None = None) -> Element:
    """Normal form of an Element or of a raw word [(generator, exponent), ...]."""
    if isinstance(x, Element):
        spec = x.spec
        out = Element.zero(spec)
        for m, c in x.terms.items():
            if spec.is_normal_mono(m):
                out = out + Element(spec, {m: c})
            else:
                out = out + Element.from_word(spec, _mono_word(m), c)
        return out
    if spec is None:
        raise ValueError("raw words need an algebra")
    return Element(spec, spec.word(x))


def multiply(x: Element, y: Element) -> Element:
    return x * y


def commutator_q(x: Element, y: Element, c: Coercible = 1) -> Element:
    """x*y - c*y*x."""
    return x * y - (y * x) * ScalarFraction.coerce(c)


def gens_elements(spec: AlgebraSpec) -> dict[str, Element]:
    return {g: Element.gen(spec, g) for g in spec.gens}


# morphisms ----------------------------------------------------------------

class MorphismSpec:
    """Generator images extended (anti-)multiplicatively."""

    def __init__(self, source: AlgebraSpec, target: AlgebraSpec, images: Mapping[str, Element],
                 anti: bool = False, name: str = "", tag: object = None):
        missing = [g for g in source.gens if g not in images]
        if missing:
            raise ValueError(f"no image for generators {missing}")
        self.source = source
        self.target = target
        self.anti = anti
        self.name = name
        self.tag = tag
        self.images: dict[int, Element] = {}
        self.inv_images: dict[int, Element] = {}
        for i, g in enumerate(source.gens):
            img = images[g]
            if not isinstance(img, Element):
                img = Element.scalar(target, img)
            if img.spec is not target:
                raise PBWError(f"image of {g} does not live in {target.name}")
            self.images[i] = img
            if source.invertible[i]:
                if not img.is_unit():
                    raise NonInvertibleError(
                        f"image of invertible generator {g} must be a unit monomial, got {img.render()}")
                self.inv_images[i] = img.inverse()
        self._pow_cache: dict = {}

    def image_power(self, i: int, e: int) -> Element:
        key = (i, e)
        r = self._pow_cache.get(key)
        if r is None:
            base = self.images[i] if e > 0 else self.inv_images[i]
            r = base ** abs(e)
            self._pow_cache[key] = r
        return r

    def apply_mono(self, m: Mono) -> Element:
        factors = [self.image_power(i, e) for i, e in enumerate(m) if e]
        if self.anti:
            factors.reverse()
        out = Element.one(self.target)
        for f in factors:
            out = out * f
        return out

    def __call__(self, x: Element) -> Element:
        return apply_morphism(self, x)

    def __repr__(self) -> str:
        return f"MorphismSpec({self.name or '?'}: {self.source.name} -> {self.target.name}{', anti' if self.anti else ''})"


def apply_morphism(f: MorphismSpec, x: Element) -> Element:
    if x.spec is not f.source:
        raise PBWError(f"element of {x.spec.name} passed to morphism from {f.source.name}")
    out = Element.zero(f.target)
    for m, c in x.terms.items():
        out = out + f.apply_mono(m) * c
    return out


def identity_morphism(spec: AlgebraSpec) -> MorphismSpec:
    return MorphismSpec(spec, spec, gens_elements(spec), name="id")


def compose(f: MorphismSpec, g: MorphismSpec, name: str = "", tag: object = None) -> MorphismSpec:
    """f after g."""
    if g.target is not f.source:
        raise PBWError("composition of mismatched morphisms")
    imgs = {gname: apply_morphism(f, g.images[i]) for i, gname in enumerate(g.source.gens)}
    return MorphismSpec(g.source, f.target, imgs, anti=(f.anti != g.anti), name=name, tag=tag)


@dataclass
class Report:
    """Pass/fail with a list of (label, residue) failures."""

    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def add(self, label: str, residue: Element) -> None:
        self.checked += 1
        if not residue.is_zero():
            self.failures.append((label, residue))

    def summary(self) -> str:
        if self.passed:
            return f"{self.name}: pass ({self.checked} checks)"
        lines = [f"{self.name}: FAIL ({len(self.failures)}/{self.checked})"]
        for label, res in self.failures[:10]:
            lines.append(f"  {label}: {res.render()}")
        return "\n".join(lines)


def check_morphism(f: MorphismSpec) -> Report:
    rep = Report(f"check_morphism {f.name or f.source.name + '->' + f.target.name}")
    src = f.source
    for (i, j) in sorted(src.rules):
        rule = src.rules[(i, j)]
        rhs = Element(src, src._finalize(rule))
        a, b = f.images[i], f.images[j]
        lhs = b * a if f.anti else a * b
        rep.add(f"{src.gens[i]}*{src.gens[j]}", lhs - apply_morphism(f, rhs))
    return rep


def diamond_check(spec: AlgebraSpec, degree_cap: int = 3, samples: int = 200, seed: int = 0) -> Report:
    """Associativity on all letter triples and on random monomial triples."""
    if degree_cap < 3:
        raise ValueError("degree_cap must be >= 3")
    rep = Report(f"diamond_check {spec.name}")
    letters = [spec.unit_mono(i, 1) for i in range(spec.n)]
    letters += [spec.unit_mono(i, -1) for i in range(spec.n) if spec.invertible[i]]

    def both(A: Mono, B: Mono, C: Mono) -> Element:
        ab = Element(spec, spec.mul({A: ONE}, {B: ONE}))
        bc = Element(spec, spec.mul({B: ONE}, {C: ONE}))
        left = Element(spec, spec.mul(ab.terms, {C: ONE}))
        right = Element(spec, spec.mul({A: ONE}, bc.terms))
        return left - right

    for A in letters:
        for B in letters:
            for C in letters:
                rep.add(f"({render_mono(spec, A)},{render_mono(spec, B)},{render_mono(spec, C)})", both(A, B, C))
    rng = random.Random(seed)
    for _ in range(samples):
        A, B, C = (spec.random_mono(rng, degree_cap) for _ in range(3))
        rep.add(f"({render_mono(spec, A)},{render_mono(spec, B)},{render_mono(spec, C)})", both(A, B, C))
    return rep


def random_element(spec: AlgebraSpec, rng: random.Random, nterms: int = 3, max_deg: int = 3) -> Element:
    terms: Terms = {}
    for _ in range(nterms):
        m = spec.random_mono(rng, max_deg)
        c = ScalarFraction.from_int(rng.choice([-3, -2, -1, 1, 2, 3])) * ScalarFraction.qpow(rng.randint(-2, 2))
        _acc(terms, {m: ONE}, c)
    return Element(spec, terms)


def tensor_power(spec: AlgebraSpec, k: int = 2, name: str | None = None) -> AlgebraSpec:
    """k copies of spec, copies commuting with each other; names get suffix _1.._k."""
    gens = []
    for c in range(1, k + 1):
        gens += [(f"{g}_{c}", inv) for g, inv in zip(spec.gens, spec.invertible)]
    T = AlgebraSpec(name or f"{spec.name}^{k}", gens, params=spec.param_ring.params[1:])
    spec.validate()
    for c in range(1, k + 1):
        for (i, j), r in spec.rules.items():
            T.set_rule(f"{spec.gens[i]}_{c}", f"{spec.gens[j]}_{c}", r.scalar, _strip_swap(spec, r, c))
    T.commute_rest()
    T.validate()
    T.base_spec = spec
    T.copies = k
    return T


def _strip_swap(spec: AlgebraSpec, r: Rule, c: int) -> list:
    return [(v, [(f"{spec.gens[p]}_{c}", e) for p, e in _mono_word(m)]) for m, v in r.correction.items()]


def tensor_split(T: AlgebraSpec, m: Mono) -> list[Mono]:
    """Split a tensor-power monomial into its per-copy monomials."""
    n = T.base_spec.n
    return [m[c * n:(c + 1) * n] for c in range(T.copies)]


def tensor_join(T: AlgebraSpec, parts: Sequence[Mono]) -> Mono:
    out: tuple = ()
    for p in parts:
        out += tuple(p)
    return out


def embed_copy(T: AlgebraSpec, x: Element, copy: int) -> Element:
    """Place an element of the base spec into tensor copy ``copy`` (1-based)."""
    n = T.base_spec.n
    out = {}
    for m, c in x.terms.items():
        full = [0] * T.n
        full[(copy - 1) * n:copy * n] = m
        out[tuple(full)] = c
    return Element(T, out)


def render_tensor(T: AlgebraSpec, x: Element) -> str:
    if x.is_zero():
        return "0"
    base = T.base_spec
    out = []
    for m, c in sorted(x.terms.items(), key=lambda t: t[0], reverse=True):
        body = " ⊗ ".join(render_mono(base, p) or "1" for p in tensor_split(T, m))
        out.append(body if c.is_one() else f"({c.render()})*{body}")
    return " + ".join(out)
