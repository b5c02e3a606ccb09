"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from quartic_chow.exactpoly import Poly, make_ring_spec

SPEC = make_ring_spec([("x", 1), ("y", 1), ("z", 2)])

coefficients = st.builds(
    Fraction, st.integers(-6, 6), st.integers(1, 4)
)
monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))


def polys(spec=SPEC, max_terms=4):
    return st.dictionaries(monomials, coefficients, max_size=max_terms).map(lambda t: Poly(spec, t))
