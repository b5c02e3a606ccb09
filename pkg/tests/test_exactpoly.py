from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_chow.exactpoly import (
    ExponentOverflow,
    Poly,
    PolyError,
    divide,
    evaluate,
    exact_quotient,
    make_ring_spec,
    parse_poly,
    poly_arith,
    render,
    substitute,
)

from strategies import SPEC, polys


@settings(max_examples=1000, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    zero, one = Poly.zero(SPEC), Poly.constant(SPEC, 1)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a - a == zero
    assert (a * zero).is_zero()


@settings(max_examples=300, deadline=None)
@given(polys(max_terms=6))
def test_render_parse_roundtrip(p):
    text = render(p)
    assert parse_poly(text, SPEC) == p
    assert render(parse_poly(text, SPEC)) == text


@settings(max_examples=200, deadline=None)
@given(polys(), st.integers(0, 3))
def test_power_is_repeated_product(p, n):
    q = Poly.constant(SPEC, 1)
    for _ in range(n):
        q = q * p
    assert p ** n == q
    assert poly_arith("pow", p, exponent=n) == q


@settings(max_examples=200, deadline=None)
@given(polys(), polys(max_terms=2))
def test_division_identity(p, d):
    if d.is_zero():
        return
    (q,), r = divide(p, [d])
    assert q * d + r == p
    # no term of the remainder is divisible by the leading monomial
    lm = d.leading_monomial()
    assert all(any(e < f for e, f in zip(m, lm)) for m in r.terms)


def test_exact_quotient():
    x = Poly.var(SPEC, "x")
    y = Poly.var(SPEC, "y")
    assert exact_quotient(x * x - y * y, x - y) == x + y
    with pytest.raises(PolyError):
        exact_quotient(x * x + y, x)


def test_term_grammar():
    p = parse_poly("7/2*x*z", SPEC)
    assert p.terms == {(1, 0, 1): Fraction(7, 2)}
    assert parse_poly("-x^2 + 3*y - 1/3*z", SPEC) == evaluate("-(x^2) + 3*y - z/3", SPEC)
    assert render(parse_poly("y - x + x", SPEC)) == "y"
    assert render(Poly.zero(SPEC)) == "0"


@pytest.mark.parametrize("bad", ["", "x +", "2**x", "w", "x^-1", "x^"])
def test_parse_errors(bad):
    with pytest.raises(PolyError):
        parse_poly(bad, SPEC)


def test_weighted_order_and_degree():
    p = parse_poly("x^3 + z*x + y^2", SPEC)
    assert p.degree() == 3
    assert not p.is_homogeneous()
    # the weight-2 variable counts twice
    assert parse_poly("z*x + x^3", SPEC).is_homogeneous()
    assert render(parse_poly("y^3 + x^3 + x*z", SPEC)).startswith("x^3")


def test_substitute_is_a_ring_map():
    target = make_ring_spec([("s", 1), ("t", 1)])
    s, t = Poly.var(target, "s"), Poly.var(target, "t")
    images = {"x": s + t, "y": s - t, "z": s * t}
    f = parse_poly("x*y - z + 2", SPEC)
    g = parse_poly("z^2 - x^4", SPEC)
    lhs = substitute(f * g, images, target)
    assert lhs == substitute(f, images, target) * substitute(g, images, target)
    assert substitute(f, images, target) == s * s - t * t - s * t + 2


def test_spec_validation():
    with pytest.raises(PolyError):
        make_ring_spec([("x", 1), ("x", 2)])
    with pytest.raises(PolyError):
        make_ring_spec([("x", 0)])
    with pytest.raises(PolyError):
        make_ring_spec([("x", 1)], eliminate=["q"])


def test_exponent_cap():
    spec = make_ring_spec([("x", 1)])
    x = Poly.var(spec, "x")
    with pytest.raises(ExponentOverflow):
        x ** (spec.exponent_cap + 1)


def test_mixed_specs_rejected():
    other = make_ring_spec([("x", 1)])
    with pytest.raises(PolyError):
        Poly.var(SPEC, "x") + Poly.var(other, "x")
