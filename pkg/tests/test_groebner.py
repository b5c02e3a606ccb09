import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_chow.exactpoly import make_ring_spec, parse_poly
from quartic_chow.groebner import (
    Ideal,
    ResourceExhausted,
    SeriesError,
    buchberger_criterion,
    eliminate,
    full_series,
    groebner_basis,
    hilbert_series,
    ideal_equal,
    is_reduced,
    morphism_kernel,
    standard_monomials,
)

from oracles import SPEC3, macaulay_dimension, random_homogeneous, random_ideal


def test_hilbert_function_matches_macaulay_oracle():
    rng = random.Random(20240611)
    checked = 0
    for _ in range(120):
        ideal = random_ideal(rng, SPEC3)
        if not ideal.generators:
            continue
        gb = groebner_basis(ideal)
        assert buchberger_criterion(gb)
        for d in range(6):
            assert len(standard_monomials(gb, d)) == macaulay_dimension(ideal, d)
        checked += 1
    assert checked >= 100


def test_weighted_hilbert_series():
    spec = make_ring_spec([("a", 1), ("b", 2)])
    ideal = groebner_basis(Ideal(spec, [parse_poly("a^4", spec), parse_poly("b^2", spec)]))
    # (1 + t + t^2 + t^3)(1 + t^2)
    assert tuple(full_series(ideal)) == (1, 1, 2, 2, 1, 1)
    assert tuple(hilbert_series(ideal, 7)) == (1, 1, 2, 2, 1, 1, 0, 0)
    with pytest.raises(SeriesError):
        hilbert_series(ideal, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_bases_are_reduced_and_closed(seed):
    rng = random.Random(seed)
    ideal = random_ideal(rng, SPEC3)
    if not ideal.generators:
        return
    gb = groebner_basis(ideal)
    assert is_reduced(gb)
    assert buchberger_criterion(gb)
    for g in ideal.generators:
        assert gb.contains(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_normal_form_idempotent_and_ideal_invariant(seed):
    rng = random.Random(seed)
    ideal = random_ideal(rng, SPEC3)
    if not ideal.generators:
        return
    gb = groebner_basis(ideal)
    p = random_homogeneous(rng, SPEC3, 3, terms=5)
    nf = gb.normal_form(p)
    assert gb.normal_form(nf) == nf
    shift = ideal.generators[0] * random_homogeneous(rng, SPEC3, 1)
    assert gb.normal_form(p + shift) == nf
    for m in nf.terms:
        assert gb.is_standard(m)


def test_generator_order_does_not_matter():
    rng = random.Random(7)
    for _ in range(20):
        ideal = random_ideal(rng, SPEC3)
        if not ideal.generators:
            continue
        flipped = Ideal(SPEC3, list(reversed(ideal.generators)))
        assert groebner_basis(ideal).basis == groebner_basis(flipped).basis
        assert ideal_equal(ideal, flipped)


def test_twisted_cubic_by_elimination():
    spec = make_ring_spec([("s", 1), ("t", 1), ("a", 3), ("b", 3), ("c", 3), ("d", 3)])
    graph = Ideal(spec, [parse_poly(t, spec) for t in ("a - s^3", "b - s^2*t", "c - s*t^2", "d - t^3")])
    out = eliminate(graph, ["s", "t"])
    target = make_ring_spec([("a", 3), ("b", 3), ("c", 3), ("d", 3)])
    cubic = Ideal(target, [parse_poly(t, target) for t in ("a*c - b^2", "b*d - c^2", "a*d - b*c")])
    assert ideal_equal(out, cubic)
    assert len(out.basis) == 3


def test_morphism_kernel_of_veronese_into_quotient():
    # P^1 embedded by conics: Q[u,v,w] -> Q[s,t], kernel generated by u*w - v^2
    tspec = make_ring_spec([("s", 1), ("t", 1)])
    target = Ideal(tspec, [])
    images = [parse_poly(t, tspec) for t in ("s^2", "s*t", "t^2")]
    sspec = make_ring_spec([("u", 2), ("v", 2), ("w", 2)])
    ker = morphism_kernel(sspec, images, target)
    assert ideal_equal(ker, Ideal(sspec, [parse_poly("u*w - v^2", sspec)]))


def test_budget_raises():
    rng = random.Random(3)
    gens = [random_homogeneous(rng, SPEC3, 3, terms=6) for _ in range(4)]
    with pytest.raises(ResourceExhausted):
        groebner_basis(Ideal(SPEC3, gens), budget=1)


def test_unit_ideal():
    ideal = groebner_basis(Ideal(SPEC3, [parse_poly("x + 1", SPEC3), parse_poly("x", SPEC3)]))
    assert ideal.is_unit()
    assert ideal.normal_form(parse_poly("y^3 + 2", SPEC3)).is_zero()
