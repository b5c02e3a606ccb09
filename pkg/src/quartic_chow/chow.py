"""Graded quotient rings used as Chow rings of smooth projective varieties."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactpoly import (
    Poly,
    PolyError,
    RingSpec,
    graded_components,
    make_ring_spec,
    parse_poly,
    render,
)
from .groebner import (
    Ideal,
    SeriesVector,
    all_standard_monomials,
    groebner_basis,
    monomials_of_degree,
)
from .linalg import InconsistentSystem, rank, solve


class ChowError(ValueError):
    """A ring, class or morphism failed one of its defining checks."""


class ChowRing:
    """``Q[vars]/relations`` with a top degree and, optionally, a point class."""

    def __init__(
        self,
        spec: RingSpec,
        relations: Ideal,
        top_degree: int,
        point: Poly | None = None,
        name: str = "",
    ):
        self.spec = spec
        self.ideal = groebner_basis(relations)
        self.top_degree = top_degree
        self.name = name
        mons = all_standard_monomials(self.ideal)
        self._basis: dict[int, list] = {}
        for m in mons:
            d = spec.degree(m)
            if d > top_degree:
                raise ChowError(f"{name or 'ring'} has a nonzero piece in degree {d} > {top_degree}")
            self._basis.setdefault(d, []).append(m)
        for d in self._basis:
            self._basis[d].sort(key=spec._key, reverse=True)
        self._index = {d: {m: i for i, m in enumerate(ms)} for d, ms in self._basis.items()}
        self._point_value: Fraction | None = None
        self.point: ChowClass | None = None
        if point is not None:
            self._install_point(point)

    # construction helpers -------------------------------------------------
    def _install_point(self, point: Poly) -> None:
        top = self.graded_monomials(self.top_degree)
        if len(top) != 1:
            raise ChowError(
                f"top piece of {self.name or 'ring'} has dimension {len(top)}, not 1"
            )
        p = self.reduce(point)
        if not p.is_homogeneous() or (p and p.degree() != self.top_degree) or not p:
            raise ChowError("point class must be a nonzero class of top degree")
        self._point_value = p.terms[top[0]]
        self.point = ChowClass(self, p)

    def with_point(self, point: "ChowClass | Poly") -> "ChowRing":
        """Copy of this ring with ``point`` as its point class."""
        value = point.value if isinstance(point, ChowClass) else point
        clone = object.__new__(ChowRing)
        clone.__dict__.update(self.__dict__)
        clone.point = None
        clone._point_value = None
        clone._install_point(change_spec_if_needed(value, self.spec))
        return clone

    def __repr__(self) -> str:
        return f"ChowRing({self.name or '?'}: {', '.join(self.spec.names)}; top {self.top_degree})"

    # basic elements --------------------------------------------------------
    def reduce(self, p: Poly) -> Poly:
        return self.ideal.normal_form(p, max_degree=self.top_degree)

    def element(self, p: "Poly | str | int | Fraction") -> "ChowClass":
        if isinstance(p, str):
            p = parse_poly(p, self.spec)
        elif not isinstance(p, Poly):
            p = Poly.constant(self.spec, p)
        elif p.spec != self.spec:
            raise PolyError("polynomial is over a different ring spec")
        return ChowClass(self, self.reduce(p))

    def __call__(self, p) -> "ChowClass":
        return self.element(p)

    def gen(self, name: str) -> "ChowClass":
        return self.element(Poly.var(self.spec, name))

    def gens(self) -> dict[str, "ChowClass"]:
        return {n: self.gen(n) for n in self.spec.names}

    def one(self) -> "ChowClass":
        return self.element(1)

    def zero(self) -> "ChowClass":
        return ChowClass(self, Poly.zero(self.spec))

    # graded structure ------------------------------------------------------
    def graded_monomials(self, d: int) -> list:
        return list(self._basis.get(d, []))

    def graded_basis(self, d: int) -> list["ChowClass"]:
        return [ChowClass(self, Poly.monomial(self.spec, m)) for m in self._basis.get(d, [])]

    def series(self) -> SeriesVector:
        return SeriesVector(tuple(len(self._basis.get(d, [])) for d in range(self.top_degree + 1)))

    def coordinates(self, c: "ChowClass", d: int) -> list[Fraction]:
        """Coefficients of the degree-``d`` part of ``c`` in the graded basis."""
        vec = [Fraction(0)] * len(self._basis.get(d, []))
        idx = self._index.get(d, {})
        for m, coef in c.value.terms.items():
            if self.spec.degree(m) == d:
                vec[idx[m]] = coef
        return vec

    def from_coordinates(self, vec: Sequence, d: int) -> "ChowClass":
        terms = {m: Fraction(v) for m, v in zip(self._basis.get(d, []), vec) if v}
        return ChowClass(self, Poly._raw(self.spec, terms))

    # integration -----------------------------------------------------------
    def integrate(self, c: "ChowClass") -> Fraction:
        if self.point is None:
            raise ChowError(f"{self.name or 'ring'} has no point class")
        top = self._basis[self.top_degree][0]
        return c.value.terms.get(top, Fraction(0)) / self._point_value

    # exchange format -------------------------------------------------------
    def export(self) -> dict:
        return {
            "vars": [{"name": n, "weight": w} for n, w in zip(self.spec.names, self.spec.weights)],
            "relations": [render(g) for g in self.ideal.generators],
            "topDegree": self.top_degree,
            "pointClass": render(self.point.value) if self.point is not None else None,
            "series": list(self.series()),
        }


def change_spec_if_needed(p: Poly, spec: RingSpec) -> Poly:
    from .exactpoly import change_spec

    return p if p.spec == spec else change_spec(p, spec)


def build_quotient(
    variables: Sequence[tuple[str, int]] | RingSpec,
    relations: Iterable["Poly | str"],
    top_degree: int,
    point: "Poly | str | None" = None,
    name: str = "",
    budget: int | None = None,
) -> ChowRing:
    """Build a Chow ring from a presentation.

    Relations may be given as polynomials or as text; they must be homogeneous.
    """
    spec = variables if isinstance(variables, RingSpec) else make_ring_spec(variables)
    rels = []
    for r in relations:
        p = parse_poly(r, spec) if isinstance(r, str) else r
        if p and not p.is_homogeneous():
            raise ChowError(f"relation {render(p)} is not homogeneous")
        rels.append(p)
    ideal = groebner_basis(Ideal(spec, [r for r in rels if r]), budget)
    ideal.generators = tuple(rels)
    if isinstance(point, str):
        point = parse_poly(point, spec)
    return ChowRing(spec, ideal, top_degree, point, name)


class ChowClass:
    """An element of a :class:`ChowRing`, always kept in normal form."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: ChowRing, value: Poly):
        self.ring = ring
        self.value = value

    def _other(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            if other.ring is not self.ring and other.ring.spec != self.ring.spec:
                raise ChowError("classes live in different rings")
            return other
        return self.ring.element(other)

    def __add__(self, other):
        o = self._other(other)
        return ChowClass(self.ring, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return ChowClass(self.ring, self.value - o.value)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return ChowClass(self.ring, -self.value)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.ring, self.value.scale(other))
        o = self._other(other)
        return ChowClass(self.ring, _mul_reduced(self.ring, self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return ChowClass(self.ring, self.value / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, ChowClass):
            return self.ring.spec == other.ring.spec and self.value == other.value
        if isinstance(other, (int, Fraction, str, Poly)):
            return self.value == self.ring.element(other).value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return bool(self.value)

    def is_zero(self) -> bool:
        return not self.value

    def part(self, d: int) -> "ChowClass":
        return ChowClass(self.ring, self.value.homogeneous_part(d))

    def components(self) -> dict[int, "ChowClass"]:
        return {d: ChowClass(self.ring, p) for d, p in graded_components(self.value).items()}

    def constant_term(self) -> Fraction:
        return self.value.constant_term()

    def degree(self) -> int:
        return self.value.degree()

    def __repr__(self) -> str:
        return f"ChowClass({render(self.value)})"

    def __str__(self) -> str:
        return render(self.value)


def _mul_reduced(ring: ChowRing, a: Poly, b: Poly) -> Poly:
    """Product of two normal forms, reduced, skipping degrees above the top."""
    spec = ring.spec
    top = ring.top_degree
    deg = spec.degree
    ideal = ring.ideal
    da = {m: deg(m) for m in a.terms}
    db = {m: deg(m) for m in b.terms}
    raw: dict = {}
    for ma, ca in a.terms.items():
        dma = da[ma]
        for mb, cb in b.terms.items():
            if dma + db[mb] > top:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            v = raw.get(m, 0) + ca * cb
            if v:
                raw[m] = v
            else:
                raw.pop(m, None)
    out: dict = {}
    is_std = ring._index
    for m, c in raw.items():
        d = deg(m)
        if m in is_std.get(d, ()):
            v = out.get(m, 0) + c
        else:
            for nm, nc in ideal.normal_form_monomial(m).items():
                v2 = out.get(nm, 0) + c * nc
                if v2:
                    out[nm] = v2
                else:
                    out.pop(nm, None)
            continue
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return Poly._raw(spec, out)


def graded_basis(ring: ChowRing, d: int) -> list[ChowClass]:
    return ring.graded_basis(d)


def integrate(ring: ChowRing, c: ChowClass) -> Fraction:
    return ring.integrate(c)


def gauss_bonnet_point(ring: ChowRing, c_top: ChowClass, euler_number: int) -> ChowRing:
    """Install ``c_top / euler_number`` as the point class (returns a new ring)."""
    if euler_number == 0:
        raise ChowError("Euler number must be nonzero")
    top = c_top.part(ring.top_degree)
    if not top:
        raise ChowError("top Chern class reduces to zero")
    return ring.with_point(top.value / euler_number)


class RingMorphism:
    """A graded ring map given by images of the source generators.

    Checked at construction: degrees match and every source relation maps to
    zero.
    """

    def __init__(self, source: ChowRing, target: ChowRing, images: Mapping[str, "ChowClass | str"], name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        imgs = {}
        for n in source.spec.names:
            if n not in images:
                raise ChowError(f"no image given for {n}")
            img = images[n]
            img = target.element(img) if not isinstance(img, ChowClass) else img
            if img.ring.spec != target.spec:
                raise ChowError(f"image of {n} is not in the target ring")
            if img and (not img.value.is_homogeneous() or img.degree() != source.spec.weight_of(n)):
                raise ChowError(f"image of {n} has the wrong degree")
            imgs[n] = img
        self.images = imgs
        self._mono_cache: dict = {source.spec.one(): target.one()}
        for g in source.ideal.basis:
            if self.apply_poly(g):
                raise ChowError(
                    f"morphism {name or ''} is not well defined: {render(g)} does not map to 0"
                )

    def _image_of_monomial(self, m) -> ChowClass:
        cached = self._mono_cache.get(m)
        if cached is not None:
            return cached
        # peel one variable off the last nonzero slot
        i = max(j for j, e in enumerate(m) if e)
        smaller = m[:i] + (m[i] - 1,) + m[i + 1 :]
        val = self._image_of_monomial(smaller) * self.images[self.source.spec.names[i]]
        self._mono_cache[m] = val
        return val

    def apply_poly(self, p: Poly) -> ChowClass:
        acc: dict = {}
        for m, c in p.terms.items():
            for tm, tc in self._image_of_monomial(m).value.terms.items():
                v = acc.get(tm, 0) + c * tc
                if v:
                    acc[tm] = v
                else:
                    acc.pop(tm, None)
        return ChowClass(self.target, Poly._raw(self.target.spec, acc))

    def __call__(self, c: "ChowClass | str") -> ChowClass:
        return pullback(self, c)

    def matrix(self, d: int) -> list[list[Fraction]]:
        """Matrix of the map in degree ``d`` (columns = source basis)."""
        cols = [self.target.coordinates(self.apply_poly(b.value), d) for b in self.source.graded_basis(d)]
        nrows = len(self.target.graded_monomials(d))
        return [[col[r] for col in cols] for r in range(nrows)]

    def is_surjective(self, d: int) -> bool:
        return rank(self.matrix(d)) == len(self.target.graded_monomials(d))

    def is_injective(self, d: int) -> bool:
        return rank(self.matrix(d)) == len(self.source.graded_monomials(d))

    def kernel(self, d: int) -> list[ChowClass]:
        from .linalg import nullspace

        mat = self.matrix(d)
        n = len(self.source.graded_monomials(d))
        return [self.source.from_coordinates(v, d) for v in nullspace(mat, n)]

    def kernel_generators(self, seeds: Sequence[ChowClass] = ()) -> list[ChowClass]:
        """Generators of the kernel ideal, starting from ``seeds``.

        Works upward in degree, adding kernel basis vectors that the ideal
        generated so far does not reach.
        """
        gens = list(seeds)
        for g in gens:
            if self(g):
                raise ChowError(f"{g} is not in the kernel")
        for d in range(1, self.source.top_degree + 1):
            ker = self.kernel(d)
            if not ker:
                continue
            span = []
            for g in gens:
                e = g.degree()
                if e <= d:
                    span.extend(self.source.coordinates(g * b, d) for b in self.source.graded_basis(d - e))
            r = rank(span) if span else 0
            for k in ker:
                trial = span + [self.source.coordinates(k, d)]
                if rank(trial) > r:
                    gens.append(k)
                    span, r = trial, r + 1
        return gens

    def preimage(self, c: ChowClass) -> ChowClass:
        """Some class mapping to ``c`` (solved degree by degree)."""
        out = self.source.zero()
        for d, part in c.components().items():
            if not part:
                continue
            mat = self.matrix(d)
            rhs = self.target.coordinates(part, d)
            if not mat or not mat[0]:
                raise ChowError(f"class is not in the image (degree {d})")
            try:
                x, _ = solve(mat, rhs)
            except InconsistentSystem:
                raise ChowError(f"class is not in the image (degree {d})") from None
            out = out + self.source.from_coordinates(x, d)
        return out


def pullback(m: RingMorphism, c: "ChowClass | str") -> ChowClass:
    if isinstance(c, str):
        c = m.source.element(c)
    if c.ring.spec != m.source.spec:
        raise ChowError("class is not in the source ring")
    return m.apply_poly(c.value)


def compose(first: RingMorphism, second: RingMorphism) -> RingMorphism:
    """The map ``second . first`` (apply ``first``, then ``second``)."""
    if first.target.spec != second.source.spec:
        raise ChowError("morphisms are not composable")
    return RingMorphism(
        first.source,
        second.target,
        {n: second(img) for n, img in first.images.items()},
    )


@dataclass
class DivisorPush:
    """Pushforward from an exceptional divisor via the projection formula.

    ``restriction`` is the (surjective) pullback to the divisor's ring and
    ``exceptional`` the divisor class in the ambient ring.
    """

    restriction: RingMorphism
    exceptional: ChowClass
    _checked: set = field(default_factory=set)

    def _check_degree(self, d: int) -> None:
        if d in self._checked:
            return
        r = self.restriction
        if not r.is_surjective(d):
            raise ChowError(f"restriction is not surjective in degree {d}")
        for k in r.kernel(d):
            if k * self.exceptional:
                raise ChowError(f"pushforward depends on the chosen preimage in degree {d}")
        self._checked.add(d)

    def preimage(self, delta: ChowClass) -> ChowClass:
        for d, part in delta.components().items():
            if part:
                self._check_degree(d)
        return self.restriction.preimage(delta)

    def __call__(self, delta: ChowClass) -> ChowClass:
        return pushforward_divisor(self, delta)


def pushforward_divisor(p: DivisorPush, delta: ChowClass) -> ChowClass:
    return p.preimage(delta) * p.exceptional


def monomials_in_generators(weights: Sequence[int], d: int) -> list[tuple[int, ...]]:
    spec = make_ring_spec([(f"g{i}", w) for i, w in enumerate(weights)])
    return monomials_of_degree(spec, d)


def express_in_subring(
    c: ChowClass, gens: Mapping[str, ChowClass], weights: Mapping[str, int] | None = None
) -> Poly:
    """A polynomial ``P`` in the named generators with ``P(gens) = c``.

    Solved degree by degree; any solution is returned (they differ by the
    relations among the generators).
    """
    names = list(gens)
    wts = [weights[n] if weights else gens[n].degree() for n in names]
    abstract = make_ring_spec(list(zip(names, wts)))
    ring = c.ring
    result: dict = {}
    powers: dict = {}

    def value(mono):
        v = powers.get(mono)
        if v is None:
            v = ring.one()
            for n, e in zip(names, mono):
                if e:
                    v = v * gens[n] ** e
            powers[mono] = v
        return v

    for d, part in sorted(c.components().items()):
        if not part:
            continue
        monos = monomials_of_degree(abstract, d)
        cols = [ring.coordinates(value(m), d) for m in monos]
        rhs = ring.coordinates(part, d)
        mat = [[col[r] for col in cols] for r in range(len(rhs))]
        try:
            x, _ = solve(mat, rhs)
        except InconsistentSystem:
            raise ChowError(f"class is not in the subring (degree {d})") from None
        for m, v in zip(monos, x):
            if v:
                result[m] = v
    return Poly._raw(abstract, result)


@dataclass
class DescentSolution:
    """Affine family ``particular + span(directions)`` of descended classes."""

    particular: ChowClass
    directions: list[ChowClass]
    # rows (constant, coefficient list): constant + sum coeff_i c_i = 0
    equations: list[tuple[Fraction, list[Fraction]]]
    coefficients: list[Fraction]

    def member(self, *t) -> ChowClass:
        out = self.particular
        for s, v in zip(t, self.directions):
            out = out + v * s
        return out


def perpendicular_descent(
    gamma: ChowClass,
    kernel_gens: Sequence[ChowClass],
    divisor_ring: ChowRing,
    restriction: RingMorphism,
    corrections: Sequence[ChowClass],
) -> DescentSolution:
    """Find corrections making ``gamma`` pair to zero with the kernel classes.

    For every kernel class ``delta`` of complementary degree the condition is
    ``integral over the divisor of restriction(gamma + sum c_i corr_i) * delta = 0``.
    """
    if divisor_ring.point is None:
        raise ChowError("divisor ring needs a point class")
    d = gamma.degree() if gamma else (corrections[0].degree() if corrections else 0)
    top = divisor_ring.top_degree
    deltas = [k for k in kernel_gens if k and k.degree() == top - d]
    base = restriction(gamma)
    imgs = [restriction(c) for c in corrections]
    equations = []
    for delta in deltas:
        const = divisor_ring.integrate(base * delta)
        coeffs = [divisor_ring.integrate(im * delta) for im in imgs]
        equations.append((const, coeffs))
    n = len(corrections)
    if equations:
        a = [row for _, row in equations]
        b = [-const for const, _ in equations]
        if n == 0:
            if any(b):
                raise ChowError("class does not descend and no corrections were allowed")
            x, null = [], []
        else:
            try:
                x, null = solve(a, b)
            except InconsistentSystem:
                raise ChowError("class does not descend with the given corrections") from None
    else:
        x, null = [Fraction(0)] * n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    particular = gamma
    for c, v in zip(x, corrections):
        if c:
            particular = particular + v * c
    directions = []
    for vec in null:
        acc = gamma.ring.zero()
        for c, v in zip(vec, corrections):
            if c:
                acc = acc + v * c
        directions.append(acc)
    return DescentSolution(particular, directions, equations, list(x))
