"""Exact rational functions in q and formal parameters.

Polynomials are Laurent polynomials with integer coefficients, stored as a
dict from sparse monomials to ints.  A monomial is a tuple of ``(name, exp)``
pairs sorted by name, so parameters never have to be declared up front for
arithmetic to work; :class:`ParamRing` records which names an algebra
accepts when parsing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONO: Monomial = ()


@lru_cache(maxsize=200_000)
def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        n1, e1 = m1[i]
        n2, e2 = m2[j]
        if n1 == n2:
            if e1 + e2:
                out.append((n1, e1 + e2))
            i += 1
            j += 1
        elif n1 < n2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((n, e * k) for n, e in m)


def mono_inv(m: Monomial) -> Monomial:
    return tuple((n, -e) for n, e in m)


def _mono_sort_key(m: Monomial):
    d = dict(m)
    return (d.get("q", 0), tuple((n, e) for n, e in m if n != "q"))


class Poly:
    """Laurent polynomial with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @staticmethod
    def _raw(terms: dict) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = terms
        return p

    @staticmethod
    def const(c: int) -> "Poly":
        return Poly._raw({(): c} if c else {})

    @staticmethod
    def var(name: str, exp: int = 1) -> "Poly":
        return Poly._raw({((name, exp),) if exp else (): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Poly._raw(t)

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly._raw({})
        if len(other.terms) == 1:
            (m2, c2), = other.terms.items()
            return Poly._raw({mono_mul(m, m2): c * c2 for m, c in self.terms.items()})
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    def scale(self, c: int) -> "Poly":
        if c == 0:
            return Poly._raw({})
        return Poly._raw({m: v * c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("only monomials have Laurent inverses")
            (m, c), = self.terms.items()
            if abs(c) != 1:
                raise ZeroDivisionError("non-unit integer coefficient")
            return Poly._raw({mono_pow(m, k): c ** (-k)})
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set:
        return {n for m in self.terms for n, _ in m}

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def min_monomial(self) -> Monomial:
        """Monomial of componentwise minimal exponents (the largest monomial factor)."""
        mins: dict = {}
        names = self.variables()
        for n in names:
            mins[n] = min(dict(m).get(n, 0) for m in self.terms)
        return tuple(sorted((n, e) for n, e in mins.items() if e))

    def shift(self, m: Monomial) -> "Poly":
        return Poly._raw({mono_mul(k, m): c for k, c in self.terms.items()})

    def leading(self):
        m = max(self.terms, key=_mono_sort_key)
        return m, self.terms[m]

    def substitute(self, values: Mapping[str, "ScalarFraction"]) -> "ScalarFraction":
        out = ScalarFraction.zero()
        for m, c in self.terms.items():
            term = ScalarFraction.from_int(c)
            rest = []
            for n, e in m:
                if n in values:
                    term = term * values[n] ** e
                else:
                    rest.append((n, e))
            out = out + term * ScalarFraction(Poly._raw({tuple(rest): 1}))
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


# univariate helpers (coefficient lists, lowest degree first)

def _to_upoly(p: Poly, var: str) -> list:
    """Dense coefficient list of a polynomial in one variable (exponents >= 0)."""
    deg = 0
    items = []
    for m, c in p.terms.items():
        e = m[0][1] if m else 0
        items.append((e, c))
        deg = max(deg, e)
    out = [0] * (deg + 1)
    for e, c in items:
        out[e] += c
    return out


def _from_upoly(coeffs: list, var: str) -> Poly:
    t = {}
    for e, c in enumerate(coeffs):
        if c:
            t[((var, e),) if e else ()] = int(c)
    return Poly._raw(t)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _primitive(a: list) -> list:
    a = _trim(list(a))
    if not a:
        return a
    den = 1
    for c in a:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _upoly_rem(a: list, b: list) -> list:
    a = [Fraction(c) for c in a]
    b = _trim([Fraction(c) for c in b])
    while len(_trim(a)) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[k + shift] -= f * c
        a.pop()
    return a


def upoly_gcd(a: list, b: list) -> list:
    """Primitive gcd of two integer polynomials given as coefficient lists."""
    a, b = _primitive(a), _primitive(b)
    while b:
        r = _primitive(_upoly_rem(a, b))
        a, b = b, r
    return a


def _upoly_divexact(a: list, b: list) -> list:
    a = [Fraction(c) for c in _trim(list(a))]
    b = _trim([Fraction(c) for c in b])
    if not a:
        return []
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(_trim(a)) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for k, c in enumerate(b):
            a[k + shift] -= f * c
        a.pop()
    if any(_trim(a)):
        raise ArithmeticError("inexact division")
    return q


def poly_divexact(a: Poly, b: Poly) -> Poly | None:
    """Exact quotient a/b in the Laurent ring, or None when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError
    if a.is_zero():
        return a
    sb = b.min_monomial()
    sa = a.min_monomial()
    bb = b.shift(mono_inv(sb))
    aa = a.shift(mono_inv(sa))
    quot: dict = {}
    lm_b, lc_b = bb.leading()
    lb = dict(lm_b)
    rem = aa
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > 10_000:
            return None
        lm, lc = rem.leading()
        if lc % lc_b:
            return None
        la = dict(lm)
        qm = []
        for n in set(la) | set(lb):
            e = la.get(n, 0) - lb.get(n, 0)
            if e < 0:
                return None
            if e:
                qm.append((n, e))
        qm = tuple(sorted(qm))
        qc = lc // lc_b
        quot[qm] = quot.get(qm, 0) + qc
        rem = rem - bb * Poly._raw({qm: qc})
    return Poly(quot).shift(mono_mul(sa, mono_inv(sb)))


# evaluation point used for hashing: equal fractions hash equal
_HASH_P = (1 << 61) - 1
_HASH_PT = {"q": 1_000_003}


def _hash_value(name: str) -> int:
    v = _HASH_PT.get(name)
    if v is None:
        v = (hash(name) % 1_000_000) + 7_919
        _HASH_PT[name] = v
    return v


def _poly_mod(p: Poly) -> int:
    s = 0
    for m, c in p.terms.items():
        t = c % _HASH_P
        for n, e in m:
            t = t * pow(_hash_value(n), e, _HASH_P) % _HASH_P
        s = (s + t) % _HASH_P
    return s


Coercible = Union["ScalarFraction", int, Fraction, Poly]


class ScalarFraction:
    """Immutable quotient num/den of Laurent polynomials, kept normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, _norm: bool = True):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if _norm and not den.is_one():
            num, den = _normalize(num, den)
        elif num.is_zero():
            den = Poly.const(1)
        self.num = num
        self.den = den

    # constructors
    @staticmethod
    def zero() -> "ScalarFraction":
        return _ZERO

    @staticmethod
    def one() -> "ScalarFraction":
        return _ONE

    @staticmethod
    def from_int(c: int | Fraction) -> "ScalarFraction":
        if isinstance(c, Fraction):
            return ScalarFraction(Poly.const(c.numerator), Poly.const(c.denominator))
        return ScalarFraction(Poly.const(c), _norm=False)

    @staticmethod
    def var(name: str, exp: int = 1) -> "ScalarFraction":
        return ScalarFraction(Poly.var(name, exp), _norm=False)

    @staticmethod
    def qpow(k: int) -> "ScalarFraction":
        return _qpow(k)

    @staticmethod
    def coerce(x: Coercible) -> "ScalarFraction":
        if isinstance(x, ScalarFraction):
            return x
        if isinstance(x, (int, Fraction)):
            return ScalarFraction.from_int(x)
        if isinstance(x, Poly):
            return ScalarFraction(x, _norm=False)
        raise TypeError(f"cannot coerce {type(x).__name__} to a scalar")

    @staticmethod
    def parse(text: str) -> "ScalarFraction":
        from .parser import parse_scalar

        return parse_scalar(text)

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    # arithmetic
    def __add__(self, other: Coercible) -> "ScalarFraction":
        o = ScalarFraction.coerce(other)
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_one():
                return ScalarFraction(self.num + o.num, _norm=False)
            return ScalarFraction(self.num + o.num, self.den)
        return ScalarFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "ScalarFraction":
        return ScalarFraction(-self.num, self.den, _norm=False)

    def __sub__(self, other: Coercible) -> "ScalarFraction":
        return self + (-ScalarFraction.coerce(other))

    def __rsub__(self, other: Coercible) -> "ScalarFraction":
        return ScalarFraction.coerce(other) - self

    def __mul__(self, other: Coercible) -> "ScalarFraction":
        o = ScalarFraction.coerce(other)
        if self.num.is_zero() or o.num.is_zero():
            return _ZERO
        if self.den.is_one() and o.den.is_one():
            return ScalarFraction(self.num * o.num, _norm=False)
        return ScalarFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarFraction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.num.is_monomial():
            (m, c), = self.num.terms.items()
            if abs(c) == 1:
                return ScalarFraction(self.den * Poly._raw({mono_inv(m): c}), _norm=False)
        return ScalarFraction(self.den, self.num)

    def __truediv__(self, other: Coercible) -> "ScalarFraction":
        return self * ScalarFraction.coerce(other).inverse()

    def __rtruediv__(self, other: Coercible) -> "ScalarFraction":
        return ScalarFraction.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "ScalarFraction":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return _ONE
        if self.den.is_one():
            return ScalarFraction(self.num ** k, _norm=False)
        return ScalarFraction(self.num ** k, self.den ** k, _norm=False)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = ScalarFraction.coerce(other)
        if not isinstance(other, ScalarFraction):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self) -> int:
        d = _poly_mod(self.den)
        if d == 0:
            return 0
        return _poly_mod(self.num) * pow(d, -1, _HASH_P) % _HASH_P

    def specialize(self, values: Mapping[str, Coercible]) -> "ScalarFraction":
        """Substitute parameters by scalars; the only route to numeric values."""
        vals = {k: ScalarFraction.coerce(v) for k, v in values.items()}
        return self.num.substitute(vals) / self.den.substitute(vals)

    def render(self) -> str:
        if self.den.is_one():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ScalarFraction({self.render()})"


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(1)
    # monomial factors of the denominator are units
    sm = den.min_monomial()
    if sm:
        den = den.shift(mono_inv(sm))
        num = num.shift(mono_inv(sm))
    g = gcd(num.content(), den.content())
    if den.leading()[1] < 0:
        g = -g
    if g != 1:
        num = Poly._raw({m: c // g for m, c in num.terms.items()})
        den = Poly._raw({m: c // g for m, c in den.terms.items()})
    if len(den.terms) == 1:
        return num, den
    dvars = den.variables()
    if dvars == {"q"}:
        num, den = _reduce_q(num, den)
    else:
        qt = poly_divexact(num, den)
        if qt is not None:
            return qt, Poly.const(1)
    return num, den


def _reduce_q(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Cancel the full gcd when the denominator involves q only."""
    # group numerator by non-q part: num = sum_r r * f_r(q)
    groups: dict = {}
    for m, c in num.terms.items():
        qe = 0
        rest = []
        for n, e in m:
            if n == "q":
                qe = e
            else:
                rest.append((n, e))
        groups.setdefault(tuple(rest), {})[qe] = c
    g = _to_upoly(den, "q")
    for coeffs in groups.values():
        lo = min(coeffs)
        dense = [0] * (max(coeffs) - lo + 1)
        for e, c in coeffs.items():
            dense[e - lo] = c
        g = upoly_gcd(g, dense)
        if len(g) <= 1:
            return num, den
    gp = _from_upoly(g, "q")
    new_den = poly_divexact(den, gp)
    new_num = poly_divexact(num, gp)
    if new_den is None or new_num is None:
        return num, den
    c = gcd(new_num.content(), new_den.content())
    if new_den.leading()[1] < 0:
        c = -c
    if c != 1:
        new_num = Poly._raw({m: v // c for m, v in new_num.terms.items()})
        new_den = Poly._raw({m: v // c for m, v in new_den.terms.items()})
    return new_num, new_den


_ZERO = ScalarFraction(Poly({}), _norm=False)
_ONE = ScalarFraction(Poly.const(1), _norm=False)


@lru_cache(maxsize=4096)
def _qpow(k: int) -> ScalarFraction:
    return ScalarFraction(Poly.var("q", k), _norm=False)


def S(x: Coercible | str) -> ScalarFraction:
    """Shorthand coercion; strings go through the scalar parser."""
    if isinstance(x, str):
        return ScalarFraction.parse(x)
    return ScalarFraction.coerce(x)


def geometric(ratio: ScalarFraction, n: int) -> ScalarFraction:
    """1 + r + ... + r^(n-1)."""
    out = _ZERO
    p = _ONE
    for _ in range(n):
        out = out + p
        p = p * ratio
    return out


def qbinom(n: int, m: int, base: ScalarFraction | None = None) -> ScalarFraction:
    """Gaussian binomial [n, m] at the given base (default q), expanded."""
    if m < 0 or m > n:
        raise ValueError(f"qbinom needs 0 <= m <= n, got n={n}, m={m}")
    t = base if base is not None else _qpow(1)

    def qfact(i: int) -> ScalarFraction:
        out = _ONE
        for k in range(1, i + 1):
            out = out * (_ONE - t ** k)
        return out

    return qfact(n) / (qfact(m) * qfact(n - m))


class ParamRing:
    """Ordered parameter names; q is always first."""

    def __init__(self, params: Iterable[str] = ()):
        names = ["q"] + [p for p in params if p != "q"]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")
        self.params = tuple(names)

    def __contains__(self, name: str) -> bool:
        return name in self.params

    def union(self, other: "ParamRing") -> "ParamRing":
        return ParamRing(list(self.params) + [p for p in other.params if p not in self.params])

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamRing) and self.params == other.params

    def __hash__(self) -> int:
        return hash(self.params)

    def __repr__(self) -> str:
        return f"ParamRing{self.params}"
