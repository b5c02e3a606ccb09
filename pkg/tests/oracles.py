"""Independent reference computations used by several test files."""

from fractions import Fraction

from quartic_chow.exactpoly import Poly, make_ring_spec
from quartic_chow.groebner import Ideal, monomials_of_degree
from quartic_chow.linalg import rank

SPEC3 = make_ring_spec([("x", 1), ("y", 1), ("z", 1)])


def random_homogeneous(rng, spec, degree, terms=3):
    mons = monomials_of_degree(spec, degree)
    picked = rng.sample(mons, min(terms, len(mons)))
    return Poly(spec, {m: Fraction(rng.randint(-3, 3)) for m in picked})


def random_ideal(rng, spec):
    gens = [random_homogeneous(rng, spec, rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
    return Ideal(spec, [g for g in gens if g])


def macaulay_dimension(ideal, d):
    """dim of the degree-d piece of the quotient by the rank of the Macaulay matrix."""
    mons = monomials_of_degree(ideal.spec, d)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    for g in ideal.generators:
        shift = d - g.degree()
        if shift < 0:
            continue
        for m in monomials_of_degree(ideal.spec, shift):
            h = g.mul_monomial(m)
            row = [Fraction(0)] * len(mons)
            for mono, c in h.terms.items():
                row[index[mono]] = c
            rows.append(row)
    return len(mons) - (rank(rows) if rows else 0)
