"""Chern classes, Chern characters, Todd classes and the bundle/blow-up constructors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .chow import ChowClass, ChowError, ChowRing, DivisorPush, RingMorphism, build_quotient
from .exactpoly import Poly, change_spec, make_ring_spec


@dataclass(frozen=True)
class BundleClass:
    """Rank and total Chern class of a (possibly virtual) bundle."""

    rank: int
    total: ChowClass

    def __post_init__(self):
        if self.total.constant_term() != 1:
            raise ChowError("total Chern class must start with 1")

    @property
    def ring(self) -> ChowRing:
        return self.total.ring

    def c(self, i: int) -> ChowClass:
        return self.total.part(i)

    def chern_classes(self) -> list[ChowClass]:
        return [self.c(i) for i in range(self.ring.top_degree + 1)]

    def __mul__(self, other: "BundleClass") -> "BundleClass":
        # direct sum
        return BundleClass(self.rank + other.rank, self.total * other.total)

    @classmethod
    def trivial(cls, ring: ChowRing, rank: int) -> "BundleClass":
        return cls(rank, ring.one())

    @classmethod
    def line(cls, c1: ChowClass) -> "BundleClass":
        return cls(1, c1.ring.one() + c1)


@dataclass(frozen=True)
class CharSeries:
    """Graded pieces of a Chern character or Todd class, degrees 0..top."""

    components: tuple
    kind: str

    def total(self) -> ChowClass:
        out = self.components[0]
        for c in self.components[1:]:
            out = out + c
        return out

    def __getitem__(self, d: int) -> ChowClass:
        return self.components[d]


def inverse_series(c: ChowClass) -> ChowClass:
    """``1/c`` for a class with constant term 1, truncated at the top degree."""
    c0 = c.constant_term()
    if c0 != 1:
        raise ChowError("can only invert classes with constant term 1")
    x = c - 1
    out = c.ring.one()
    term = c.ring.one()
    for _ in range(c.ring.top_degree):
        term = -(term * x)
        if not term:
            break
        out = out + term
    return out


def whitney_quotient(
    numerators: Sequence, denominators: Sequence = (), ring: ChowRing | None = None
) -> BundleClass:
    """Product of the numerators divided by the product of the denominators.

    Each entry is a :class:`BundleClass` or a pair ``(BundleClass, power)``.
    """

    def unpack(entry):
        return entry if isinstance(entry, tuple) else (entry, 1)

    entries = [unpack(e) for e in numerators] + [unpack(e) for e in denominators]
    if ring is None:
        if not entries:
            raise ChowError("need a ring for an empty quotient")
        ring = entries[0][0].ring
    num = ring.one()
    rk = 0
    for b, k in map(unpack, numerators):
        num = num * b.total ** k
        rk += b.rank * k
    den = ring.one()
    for b, k in map(unpack, denominators):
        den = den * b.total ** k
        rk -= b.rank * k
    return BundleClass(rk, num * inverse_series(den))


def _binom(n: int, k: int) -> int:
    """``n choose k`` for any integer ``n`` and ``k >= 0``."""
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


def twist_by_line(b: BundleClass, t: ChowClass) -> BundleClass:
    """Chern class of ``b`` tensored with a line bundle of first Chern class ``t``."""
    r = b.rank
    ring = b.ring
    out = ring.zero()
    cs = b.chern_classes()
    tpow = [ring.one()]
    for _ in range(ring.top_degree):
        tpow.append(tpow[-1] * t)
    # generalized binomials keep the formula valid for virtual bundles
    for i in range(ring.top_degree + 1):
        for j in range(i + 1):
            coef = _binom(r - j, i - j)
            if coef and cs[j]:
                out = out + cs[j] * tpow[i - j] * coef
    return BundleClass(r, out)


def power_sums(b: BundleClass) -> list[ChowClass]:
    """Chern-root power sums ``p_0..p_top`` via Newton's identities."""
    ring = b.ring
    top = ring.top_degree
    e = b.chern_classes()
    p = [ring.one() * b.rank]
    for k in range(1, top + 1):
        acc = e[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            if e[i] and p[k - i]:
                acc = acc + e[i] * p[k - i] * (-1) ** (i - 1)
        p.append(acc)
    return p


def chern_to_ch(b: BundleClass) -> CharSeries:
    p = power_sums(b)
    comps = [p[0]] + [p[k] / factorial(k) for k in range(1, len(p))]
    return CharSeries(tuple(comps), "chern-character")


def ch_to_chern(s: CharSeries | Sequence[ChowClass], rank: int | None = None) -> BundleClass:
    comps = s.components if isinstance(s, CharSeries) else tuple(s)
    ring = comps[0].ring
    if rank is None:
        rank = comps[0].constant_term()
        if rank.denominator != 1:
            raise ChowError("rank of a Chern character must be an integer")
        rank = int(rank)
    p = [None] + [comps[k] * factorial(k) for k in range(1, len(comps))]
    e = [ring.one()]
    for k in range(1, len(comps)):
        acc = ring.zero()
        for i in range(1, k + 1):
            if e[k - i] and p[i]:
                acc = acc + e[k - i] * p[i] * (-1) ** (i - 1)
        e.append(acc / k)
    total = e[0]
    for x in e[1:]:
        total = total + x
    return BundleClass(rank, total)


def character_of_sum(terms: Sequence[tuple[int, ChowClass]], ring: ChowRing) -> CharSeries:
    """``sum n_i exp(x_i)`` graded, for integers ``n_i`` and degree-1 classes ``x_i``."""
    top = ring.top_degree
    comps = [ring.zero() for _ in range(top + 1)]
    for n, x in terms:
        xp = ring.one()
        for k in range(top + 1):
            if k:
                xp = xp * x
            comps[k] = comps[k] + xp * Fraction(n, factorial(k))
    return CharSeries(tuple(comps), "chern-character")


def exp_class(x: ChowClass) -> ChowClass:
    """Truncated exponential of a class without constant term."""
    if x.constant_term():
        raise ChowError("exp needs a class with zero constant term")
    out = x.ring.one()
    term = x.ring.one()
    for k in range(1, x.ring.top_degree + 1):
        term = term * x / k
        if not term:
            break
        out = out + term
    return out


def _series_mul(a: list, b: list, n: int) -> list:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def todd_log_coefficients(n: int) -> tuple[Fraction, ...]:
    """Coefficients ``a_0..a_n`` of ``log(x / (1 - exp(-x)))``."""
    # (1 - e^{-x})/x = sum (-1)^k x^k/(k+1)!
    g = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    # f = 1/g
    f = [Fraction(0)] * (n + 1)
    f[0] = Fraction(1)
    for k in range(1, n + 1):
        f[k] = -sum(g[i] * f[k - i] for i in range(1, k + 1))
    u = f[:]
    u[0] = Fraction(0)
    log = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for j in range(1, n + 1):
        power = _series_mul(power, u, n)
        for k in range(n + 1):
            log[k] += Fraction((-1) ** (j + 1), j) * power[k]
    return tuple(log)


def todd(b: BundleClass) -> CharSeries:
    ring = b.ring
    top = ring.top_degree
    a = todd_log_coefficients(top)
    p = power_sums(b)
    s = ring.zero()
    for k in range(1, top + 1):
        if a[k] and p[k]:
            s = s + p[k] * a[k]
    t = exp_class(s)
    return CharSeries(tuple(t.part(d) for d in range(top + 1)), "todd")


def hrr_euler(ring: ChowRing, tangent: BundleClass, divisor: ChowClass, td: ChowClass | None = None) -> Fraction:
    """``integral of exp(divisor) * td(tangent)``."""
    if ring.point is None:
        raise ChowError("HRR needs a point class")
    if td is None:
        td = todd(tangent).total()
    return ring.integrate(exp_class(divisor) * td)


def projective_bundle(
    base: ChowRing, u: BundleClass, var: str, name: str = ""
) -> tuple[ChowRing, ChowClass, RingMorphism]:
    """Chow ring of the bundle of lines in ``u`` over ``base``.

    Returns the ring, the tautological class ``c_1(O(1))`` and the pullback
    from the base.  The new variable is placed first so that its pure power
    leads the added relation.
    """
    r = u.rank
    if r < 1:
        raise ChowError("projective bundle needs rank at least 1")
    spec = make_ring_spec([(var, 1)] + list(zip(base.spec.names, base.spec.weights)))
    rho = Poly.var(spec, var)
    rel = Poly.zero(spec)
    for i in range(r + 1):
        ci = u.c(i) if i <= base.top_degree else None
        if ci:
            rel = rel + change_spec(ci.value, spec) * rho ** (r - i)
    relations = [change_spec(g, spec) for g in base.ideal.basis] + [rel]
    point = None
    if base.point is not None:
        point = change_spec(base.point.value, spec) * rho ** (r - 1)
    ring = build_quotient(spec, relations, base.top_degree + r - 1, point, name)
    ring.ideal.generators = tuple(
        [change_spec(g, spec) for g in base.ideal.generators if g] + [rel]
    )
    pull = RingMorphism(base, ring, {n: ring.gen(n) for n in base.spec.names})
    return ring, ring.gen(var), pull


def lift_classes(restriction: RingMorphism, classes: Sequence[ChowClass]) -> list[ChowClass]:
    return [restriction.preimage(c) for c in classes]


def blowup_ring(
    ambient: ChowRing,
    restriction: RingMorphism,
    kernel_gens: Sequence[ChowClass],
    normal: BundleClass,
    center_class: ChowClass,
    var: str,
    name: str = "",
    budget: int | None = None,
) -> tuple[ChowRing, RingMorphism]:
    """Chow ring of the blow-up of ``ambient`` along a center.

    ``restriction`` is the (surjective) pullback to the center, ``normal`` the
    normal bundle on the center.  The kernel generators are checked against
    the center by comparing Hilbert series.  Returns the ring and the pullback
    from ``ambient``.
    """
    center = restriction.target
    for g in kernel_gens:
        if restriction(g):
            raise ChowError(f"{g} does not restrict to zero on the center")
    quotient = build_quotient(
        ambient.spec,
        [g for g in ambient.ideal.basis] + [g.value for g in kernel_gens],
        ambient.top_degree,
    )
    if _trim(quotient.series()) != _trim(center.series()):
        raise ChowError("kernel generators do not cut out the center's ring")
    codim = normal.rank
    lifts = lift_classes(restriction, [normal.c(j) for j in range(codim)])
    spec = make_ring_spec([(var, 1)] + list(zip(ambient.spec.names, ambient.spec.weights)))
    t = Poly.var(spec, var)
    rels = [change_spec(g, spec) for g in ambient.ideal.generators if g]
    rels += [t * change_spec(g.value, spec) for g in kernel_gens]
    key = t ** codim
    for j in range(1, codim):
        if lifts[j]:
            key = key + change_spec(lifts[j].value, spec) * t ** (codim - j)
    key = key + change_spec(center_class.value, spec)
    rels.append(key)
    point = change_spec(ambient.point.value, spec) if ambient.point is not None else None
    ring = build_quotient(spec, rels, ambient.top_degree, point, name, budget)
    pull = RingMorphism(ambient, ring, {n: ring.gen(n) for n in ambient.spec.names})
    return ring, pull


def _trim(series) -> tuple:
    dims = list(series)
    while len(dims) > 1 and dims[-1] == 0:
        dims.pop()
    return tuple(dims)


def blowup_alpha(zeta: ChowClass, normal_on_divisor: BundleClass) -> ChowClass:
    """``sum_j sum_k (C(d-j,k) - C(d-j,k+1)) zeta^k c_j(N)`` for the blow-up correction."""
    d = normal_on_divisor.rank
    ring = zeta.ring
    out = ring.zero()
    zp = [ring.one()]
    for _ in range(d):
        zp.append(zp[-1] * zeta)
    for j in range(d + 1):
        cj = normal_on_divisor.c(j)
        if not cj:
            continue
        for k in range(d - j + 1):
            coef = comb(d - j, k) - comb(d - j, k + 1)
            if coef:
                out = out + zp[k] * cj * coef
    return out


def blowup_chern(
    ambient_tangent: BundleClass,
    center_tangent: ChowClass,
    normal_on_divisor: BundleClass,
    push: DivisorPush,
    zeta: ChowClass,
) -> BundleClass:
    """Total Chern class of the blow-up's tangent bundle.

    ``ambient_tangent`` is already pulled back to the blow-up ring;
    ``center_tangent`` and ``normal_on_divisor`` live on the exceptional
    divisor.
    """
    alpha = blowup_alpha(zeta, normal_on_divisor)
    correction = push(center_tangent * alpha)
    return BundleClass(ambient_tangent.rank, ambient_tangent.total + correction)


def pull_bundle(m: RingMorphism, b: BundleClass) -> BundleClass:
    return BundleClass(b.rank, m(b.total))


def projective_space(n: int, var: str = "H", name: str = "") -> tuple[ChowRing, BundleClass]:
    """``A*(P^n)`` with its point class and tangent bundle."""
    ring = build_quotient([(var, 1)], [f"{var}^{n + 1}"], n, f"{var}^{n}" if n else "1", name or f"P{n}")
    h = ring.gen(var)
    return ring, BundleClass(n, (ring.one() + h) ** (n + 1))
