"""Antisymmetrization over S3 x S2 and the anti-invariants defining A*(N)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..exactpoly import Poly, PolyError, RingSpec, exact_quotient, make_ring_spec

BETAS = ("beta1", "beta2", "beta3")
DELTAS = ("delta1", "delta2")


def _perm_sign(p: tuple[int, ...]) -> int:
    sign = 1
    for i, j in itertools.combinations(range(len(p)), 2):
        if p[i] > p[j]:
            sign = -sign
    return sign


@dataclass(frozen=True)
class WeylData:
    spec: RingSpec
    delta: Poly
    group: tuple  # (beta permutation, delta permutation, sign)
    target: RingSpec

    def var(self, name: str) -> Poly:
        return Poly.var(self.spec, name)

    def act(self, element, p: Poly) -> Poly:
        bp, dp, _ = element
        perm = list(range(5))
        for i in range(3):
            perm[i] = bp[i]
        for i in range(2):
            perm[3 + i] = 3 + dp[i]
        terms = {}
        for m, c in p.terms.items():
            new = [0] * 5
            for i, e in enumerate(m):
                new[perm[i]] = e
            terms[tuple(new)] = c
        return Poly._raw(self.spec, terms)


def weyl_data() -> WeylData:
    spec = make_ring_spec([(n, 1) for n in BETAS + DELTAS])
    b = [Poly.var(spec, n) for n in BETAS]
    d = [Poly.var(spec, n) for n in DELTAS]
    delta = (b[0] - b[1]) * (b[0] - b[2]) * (b[1] - b[2]) * (d[0] - d[1])
    group = []
    for bp in itertools.permutations(range(3)):
        for dp in itertools.permutations(range(2)):
            group.append((bp, dp, _perm_sign(bp) * _perm_sign(dp)))
    target = make_ring_spec([("b1", 1), ("b2", 2), ("b3", 3), ("d1", 1), ("d2", 2)])
    return WeylData(spec, delta, tuple(group), target)


def anti_invariants(w: WeylData) -> list[Poly]:
    """The seven anti-invariant elements of the relation ideal, in order."""
    b = [w.var(n) for n in BETAS]
    d1, d2 = (w.var(n) for n in DELTAS)

    def bb(i):
        return b[i % 3]

    def cyc(f):
        out = Poly.zero(w.spec)
        for i in range(3):
            out = out + f(i)
        return out

    def cube_pair(i, j, dk):
        return (bb(i) - dk) ** 3 * (bb(j) - dk) ** 3

    gens = [w.delta * (b[0] + b[1] + b[2] - d1 - d2)]
    gens.append(
        cyc(lambda i: (bb(i) - bb(i + 1)) * cube_pair(i, i + 1, d1))
        - cyc(lambda i: (bb(i) - bb(i + 1)) * cube_pair(i, i + 1, d2))
    )
    gens.append(
        cyc(lambda i: d1 * (bb(i) - bb(i + 1)) * cube_pair(i, i + 1, d1))
        - cyc(lambda i: d2 * (bb(i) - bb(i + 1)) * cube_pair(i, i + 1, d2))
    )
    gens.append(
        cyc(lambda i: (bb(i) ** 2 - bb(i + 1) ** 2) * cube_pair(i, i + 1, d1))
        - cyc(lambda i: (bb(i) ** 2 - bb(i + 1) ** 2) * cube_pair(i, i + 1, d2))
    )
    gens.append(
        cyc(lambda i: d1 * (bb(i) ** 2 - bb(i + 1) ** 2) * cube_pair(i, i + 1, d1))
        - cyc(lambda i: d2 * (bb(i) ** 2 - bb(i + 1) ** 2) * cube_pair(i, i + 1, d2))
    )
    gens.append(
        cyc(
            lambda i: (bb(i) - bb(i + 1))
            * (bb(i + 2) - d1) ** 3
            * (bb(i + 2) - d2) ** 3
            * (d1 - d2)
        )
    )
    vandermonde = (b[0] - b[1]) * (b[1] - b[2]) * (b[2] - b[0])
    gens.append(
        vandermonde
        * (cyc(lambda i: cube_pair(i, i + 1, d1)) - cyc(lambda i: cube_pair(i, i + 1, d2)))
    )
    return gens


def _lex_leading(p: Poly):
    return max(p.terms)


def symmetric_rewrite(p: Poly, w: WeylData) -> Poly:
    """Write a polynomial symmetric in the betas and in the deltas in b1..d2."""
    t = w.target
    e = [Poly.var(t, n) for n in ("b1", "b2", "b3", "d1", "d2")]
    bvars = [w.var(n) for n in BETAS]
    dvars = [w.var(n) for n in DELTAS]
    el = [
        bvars[0] + bvars[1] + bvars[2],
        bvars[0] * bvars[1] + bvars[0] * bvars[2] + bvars[1] * bvars[2],
        bvars[0] * bvars[1] * bvars[2],
        dvars[0] + dvars[1],
        dvars[0] * dvars[1],
    ]
    rest = p
    out = Poly.zero(t)
    while rest:
        m = _lex_leading(rest)
        c = rest.terms[m]
        a1, a2, a3, c1, c2 = m
        if not (a1 >= a2 >= a3 and c1 >= c2):
            raise PolyError("polynomial is not symmetric")
        exps = (a1 - a2, a2 - a3, a3, c1 - c2, c2)
        sym = Poly.constant(w.spec, c)
        img = Poly.constant(t, c)
        for k, x in enumerate(exps):
            if x:
                sym = sym * el[k] ** x
                img = img * e[k] ** x
        rest = rest - sym
        out = out + img
    return out


def antisymmetrize_phi(r: Poly, w: WeylData | None = None) -> Poly:
    """``(sum sign(w) w(r)) / Delta / |W|`` written in b1, b2, b3, d1, d2."""
    w = w or weyl_data()
    total = Poly.zero(w.spec)
    for g in w.group:
        img = w.act(g, r)
        total = total + (img if g[2] > 0 else -img)
    quotient = exact_quotient(total, w.delta)
    return symmetric_rewrite(quotient / Fraction(len(w.group)), w)
