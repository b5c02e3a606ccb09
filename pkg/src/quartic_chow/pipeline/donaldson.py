"""Euler characteristics of line bundles by Hirzebruch-Riemann-Roch.

On ``M`` the Todd class is computed once and all degree-17 moments
``integral alpha^a beta^b td_{17-a-b}`` are cached, so each table cell is a
short exact polynomial evaluation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from ..chow import ChowRing
from ..sheafcalc import BundleClass, hrr_euler, projective_space, todd


class NonIntegralError(ArithmeticError):
    """HRR produced a non-integral Euler characteristic."""


@dataclass(frozen=True)
class DonaldsonQuery:
    k: int
    m: int
    chi: int

    @property
    def vanishing(self) -> bool:
        """Whether Kawamata-Viehweg vanishing applies (a black table cell)."""
        return self.k >= 1 and self.m >= 6 * self.k - 12 or self.k <= 0 and self.m >= 3 * self.k

    @property
    def bogomolov(self) -> bool:
        """Whether the dual moduli space can be nonempty (``8m >= 5k``)."""
        return 8 * self.m >= 5 * self.k


class DonaldsonCalculator:
    """``chi(M, p alpha + q beta)`` for a ring presented on ``alpha, beta, ...``."""

    def __init__(self, ring: ChowRing, tangent: BundleClass, a: str = "alpha", b: str = "beta"):
        self.ring = ring
        self.td = todd(tangent).total()
        n = ring.top_degree
        tdp = [self.td.part(d) for d in range(n + 1)]
        alpha, beta = ring.gen(a), ring.gen(b)
        apow = [ring.one()]
        for _ in range(n):
            apow.append(apow[-1] * alpha)
        self.moments: dict[tuple[int, int], Fraction] = {}
        bpow = ring.one()
        for j in range(n + 1):
            for i in range(n + 1 - j):
                v = ring.integrate(apow[i] * bpow * tdp[n - i - j])
                if v:
                    self.moments[(i, j)] = v / (factorial(i) * factorial(j))
            bpow = bpow * beta

    def chi(self, p: int, q: int) -> int:
        total = sum((c * Fraction(p) ** i * Fraction(q) ** j for (i, j), c in self.moments.items()), Fraction(0))
        if total.denominator != 1:
            raise NonIntegralError(f"chi({p} alpha + {q} beta) = {total} is not an integer")
        return total.numerator

    def euler(self, k: int, m: int) -> int:
        """``chi`` of the determinant bundle of the class ``(-4k, k, -k/2 + m)``."""
        return self.chi(m - 3 * k, -k)

    def query(self, k: int, m: int) -> DonaldsonQuery:
        return DonaldsonQuery(k, m, self.euler(k, m))


def donaldson_table(
    calc: DonaldsonCalculator, k_range, m_range, threads: int = 1
) -> list[DonaldsonQuery]:
    """All cells, ordered by ``(m, k)``."""
    cells = [(k, m) for m in m_range for k in k_range]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda km: calc.query(*km), cells))
    return [calc.query(k, m) for k, m in cells]


def table_against_fixture(calc: DonaldsonCalculator, fx, rep, threads: int = 1) -> None:
    grid = fx.grid()
    ks = sorted({k for k, _ in grid})
    ms = sorted({m for _, m in grid})
    computed = {(q.k, q.m): q for q in donaldson_table(calc, ks, ms, threads)}
    for (k, m), want in sorted(grid.items(), key=lambda t: (t[0][1], t[0][0])):
        rep.check(f"chi at k={k}, m={m}", want, computed[(k, m)].chi)
    grey = {km for km in grid if not computed[km].vanishing}
    rep.check("cells outside the vanishing range match the grey cells", sorted(fx.grey_cells()), sorted(grey))


def binomial_law(calc: DonaldsonCalculator, rep, m_max: int = 17) -> None:
    for m in range(m_max + 1):
        rep.check(f"chi(M, {m} alpha) = C({m + 11}, {m})", comb(m + 11, m), calc.chi(m, 0))


def conjecture_values(pipeline, d: int, m_max: int) -> list[tuple[int, int, int]]:
    """``(m, computed chi, binomial)`` for the plane-curve moduli of degree ``d``."""
    if d in (1, 2):
        n = d * (d + 3) // 2
        ring, tangent = projective_space(n, "H", f"P{n}")
        td = todd(tangent).total()
        div = ring.gen("H")
    elif d == 3:
        pipeline.run("curve3")
        ring = pipeline.rings["C3"]
        tangent = pipeline.data["TC3"]
        td = todd(tangent).total()
        div = ring.gen("eta")
    elif d == 4:
        calc = pipeline.donaldson()
        return [(m, calc.chi(m, 0), comb(m + 3 * d - 1, m)) for m in range(m_max + 1)]
    else:
        raise ValueError("only degrees 1 to 4 are available")
    out = []
    for m in range(m_max + 1):
        v = hrr_euler(ring, tangent, div * m, td)
        if v.denominator != 1:
            raise NonIntegralError(f"chi = {v} is not an integer")
        out.append((m, v.numerator, comb(m + 3 * d - 1, m)))
    return out


def conjecture_check(pipeline, d_max: int, m_max: int, rep) -> None:
    for d in range(1, d_max + 1):
        r = d * (d + 3) // 2
        genus = (d - 1) * (d - 2) // 2
        rep.check(f"d={d}: dim |O(d)| - g = 3d - 1", 3 * d - 1, r - genus)
        for m, got, want in conjecture_values(pipeline, d, m_max):
            rep.check(f"d={d}, m={m}: chi = C({m + 3 * d - 1}, {m})", want, got)
    if d_max >= 3:
        C3 = pipeline.rings["C3"]
        rep.check("d=3: -K = 9 eta", C3("9*eta"), pipeline.data["TC3"].c(1))


def euler_P2(m: int) -> Fraction:
    ring, tangent = projective_space(2, "k", "P2")
    return hrr_euler(ring, tangent, ring.gen("k") * m)
