import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qe2.catalog import build
from qe2.parser import ParseError, Sym, parse, parse_element
from qe2.pbw import random_element


def walk(node):
    yield node
    for name in ("base", "arg"):
        if hasattr(node, name):
            yield from walk(getattr(node, name))
    for name in ("items", "factors"):
        for _, sub in getattr(node, name, ()):
            yield from walk(sub)


def test_grammar_cases():
    D = build("Dq")
    assert parse("E*c^3 - c^3*E", D) is not None
    ast = parse("(1-q^2)^-1 * (psi - a^-1*K)", D)
    assert any(isinstance(n, Sym) and n.name == "psi" for n in walk(ast))


def test_whitespace_insignificant():
    D = build("Dq")
    assert parse_element("F * b  -  q^-1 * b*F", D) == parse_element("F*b-q^-1*b*F", D)


@pytest.mark.parametrize("text, message, col", [
    ("b^q", "exponent must be an integer literal", 3),
    ("(E*c", "unbalanced parentheses", 5),
    ("E*zz", "unknown symbol", 3),
    ("E*c)", "unbalanced parentheses", 4),
])
def test_errors_are_positioned(text, message, col):
    with pytest.raises(ParseError) as info:
        parse_element(text, build("Dq"))
    assert message in info.value.message
    assert info.value.col == col
    assert info.value.line == 1


def test_empty_text_rejected():
    with pytest.raises(ParseError):
        parse_element("   ", build("Dq"))


def test_q_is_reserved():
    # q is a scalar everywhere, never a generator
    assert parse_element("q*a", build("Dq")) == parse_element("a*q", build("Dq"))


@pytest.mark.parametrize("alg", ["Dq", "Oq", "Uq", "C", "Cchi", "A", "torus:56"])
def test_render_parse_round_trip(alg, rng):
    A = build(alg)
    for _ in range(40):
        x = random_element(A, rng)
        assert parse_element(x.render(), A) == x
        assert parse_element(x.render(), A).render() == x.render()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["K", "a", "E", "c", "F", "b"]), st.integers(-2, 3)), max_size=5))
def test_word_round_trip(word):
    D = build("Dq")
    word = [(g, e if g in ("K", "a") else abs(e)) for g, e in word]
    text = "*".join(f"{g}^{e}" for g, e in word) or "1"
    x = parse_element(text, D)
    assert parse_element(x.render(), D) == x
