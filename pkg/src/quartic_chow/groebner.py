"""Reduced Groebner bases over Q and what they buy us.

Buchberger's algorithm with the Gebauer-Moeller criteria and the normal
selection strategy.  Everything here is deterministic: the pair queue is
ordered by (lcm, leading monomials, insertion index), so repeated runs give
the same basis byte for byte.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactpoly import (
    Poly,
    PolyError,
    RingSpec,
    change_spec,
    make_ring_spec,
    mono_div,
    mono_divides,
    mono_lcm,
)


class ResourceExhausted(RuntimeError):
    """A Groebner computation ran past its step budget."""


class SeriesError(ValueError):
    """The quotient is not finite-dimensional where it was claimed to be."""


def _monic(p: Poly) -> Poly:
    lc = p.leading_coefficient()
    return p if lc == 1 else p.scale(1 / lc)


def _reduce_terms(terms: dict, basis: Sequence[Poly], key, full: bool = True) -> dict:
    """Reduce a term dict against ``basis`` (leading coefficients 1)."""
    work = dict(terms)
    out: dict = {}
    lms = [g.leading_monomial() for g in basis]
    tails = [[(m, c) for m, c in g.terms.items() if m != lm] for g, lm in zip(basis, lms)]
    heap = [(_neg(key(m)), m) for m in work]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for lm, tail in zip(lms, tails):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for tm, tc in tail:
                    t = tuple(x + y for x, y in zip(tm, q))
                    v = work.get(t)
                    if v is None:
                        work[t] = -c * tc
                        heapq.heappush(heap, (_neg(key(t)), t))
                    else:
                        v -= c * tc
                        if v:
                            work[t] = v
                        else:
                            del work[t]
                break
        else:
            out[m] = c
            if not full:
                out.update(work)
                return out
    return out


def _neg(k):
    # flip a nested key so that heapq's min-heap pops the largest monomial
    return tuple(-x if isinstance(x, int) else _neg(x) for x in k)


def reduce_poly(p: Poly, basis: Sequence[Poly]) -> Poly:
    """Full reduction of ``p`` modulo ``basis`` (whose elements must be monic)."""
    return Poly._raw(p.spec, _reduce_terms(p.terms, basis, p.spec._key))


def s_polynomial(f: Poly, g: Poly) -> Poly:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    a = f.mul_monomial(mono_div(lcm, lf), 1 / f.leading_coefficient())
    b = g.mul_monomial(mono_div(lcm, lg), 1 / g.leading_coefficient())
    return a - b


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def buchberger(
    generators: Sequence[Poly], spec: RingSpec, budget: int | None = None
) -> list[Poly]:
    """Reduced Groebner basis of the ideal spanned by ``generators``."""
    key = spec._key
    polys: list[Poly] = []
    lms: list = []
    G: list[int] = []
    pairs: list = []  # heap of (sort key, i, j, lcm)
    steps = 0

    def update(h: int) -> None:
        nonlocal G, pairs
        lh = lms[h]
        cand = [(g, mono_lcm(lh, lms[g])) for g in G]
        keep = []
        for idx, (g, l) in enumerate(cand):
            if _coprime(lh, lms[g]):
                keep.append((g, l))
                continue
            others = cand[idx + 1 :] + keep
            if any(mono_divides(l2, l) for _, l2 in others):
                continue
            keep.append((g, l))
        new_pairs = [(g, l) for g, l in keep if not _coprime(lh, lms[g])]
        survivors = []
        for entry in pairs:
            _, i, j, l = entry
            if (
                mono_divides(lh, l)
                and mono_lcm(lms[i], lh) != l
                and mono_lcm(lms[j], lh) != l
            ):
                continue
            survivors.append(entry)
        for g, l in new_pairs:
            i, j = (g, h) if g < h else (h, g)
            survivors.append(((key(l), key(lms[i]), key(lms[j]), i, j), i, j, l))
        heapq.heapify(survivors)
        pairs = survivors
        G = [g for g in G if not mono_divides(lh, lms[g])] + [h]

    def add(p: Poly) -> None:
        p = _monic(p)
        polys.append(p)
        lms.append(p.leading_monomial())
        update(len(polys) - 1)

    start = [g for g in generators if g]
    start.sort(key=lambda g: key(g.leading_monomial()))
    for g in start:
        basis_now = [polys[i] for i in G]
        r = reduce_poly(g, basis_now) if basis_now else g
        if r:
            add(r)
    while pairs:
        _, i, j, _ = heapq.heappop(pairs)
        steps += 1
        if budget is not None and steps > budget:
            raise ResourceExhausted(f"Groebner basis exceeded budget of {budget} pair reductions")
        h = reduce_poly(s_polynomial(polys[i], polys[j]), [polys[g] for g in G])
        if h:
            add(h)
    return interreduce([polys[g] for g in G], spec)


def interreduce(basis: Sequence[Poly], spec: RingSpec) -> list[Poly]:
    """Turn a Groebner basis into the reduced one, sorted by leading monomial."""
    key = spec._key
    basis = [_monic(g) for g in basis if g]
    basis.sort(key=lambda g: key(g.leading_monomial()))
    minimal = []
    for g in basis:
        lm = g.leading_monomial()
        if any(mono_divides(h.leading_monomial(), lm) for h in minimal):
            continue
        minimal = [h for h in minimal if not mono_divides(lm, h.leading_monomial())]
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        lm = g.leading_monomial()
        tail = Poly._raw(spec, {m: c for m, c in g.terms.items() if m != lm})
        r = reduce_poly(tail, others) if others else tail
        terms = dict(r.terms)
        terms[lm] = Fraction(1)
        reduced.append(Poly._raw(spec, terms))
    reduced.sort(key=lambda g: key(g.leading_monomial()))
    return reduced


@dataclass(frozen=True)
class SeriesVector:
    """Graded dimensions of a finite-dimensional quotient, degrees 0..top."""

    dimensions: tuple[int, ...]

    @property
    def top_degree(self) -> int:
        return len(self.dimensions) - 1

    def total(self) -> int:
        return sum(self.dimensions)

    def __getitem__(self, d: int) -> int:
        return self.dimensions[d] if 0 <= d < len(self.dimensions) else 0

    def __iter__(self):
        return iter(self.dimensions)

    def __len__(self) -> int:
        return len(self.dimensions)

    def as_text(self, var: str = "t") -> str:
        parts = []
        for d, c in enumerate(self.dimensions):
            if not c:
                continue
            mono = "1" if d == 0 else (var if d == 1 else f"{var}^{d}")
            if d == 0:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts) or "0"


class Ideal:
    """A homogeneous or general ideal, optionally with a cached reduced basis."""

    def __init__(
        self,
        spec: RingSpec,
        generators: Iterable[Poly],
        basis: Sequence[Poly] | None = None,
    ):
        self.spec = spec
        self.generators = tuple(generators)
        for g in self.generators:
            if g.spec != spec:
                raise PolyError("generator is over a different ring spec")
        self.basis = tuple(basis) if basis is not None else None
        self._lms = None
        self._nf_cache: dict = {}

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generators, basis={'yes' if self.basis else 'no'})"

    @property
    def leading_monomials(self) -> list:
        self._require_basis()
        if self._lms is None:
            self._lms = [g.leading_monomial() for g in self.basis]
        return self._lms

    def _require_basis(self) -> None:
        if self.basis is None:
            raise ValueError("ideal has no cached Groebner basis; call groebner_basis first")

    def is_standard(self, mono) -> bool:
        return not any(mono_divides(lm, mono) for lm in self.leading_monomials)

    def is_unit(self) -> bool:
        self._require_basis()
        return any(not any(g.leading_monomial()) for g in self.basis)

    def normal_form_monomial(self, mono) -> dict:
        """Normal form of a single monomial as a term dict (memoised)."""
        cached = self._nf_cache.get(mono)
        if cached is None:
            cached = _reduce_terms({mono: Fraction(1)}, self.basis, self.spec._key)
            self._nf_cache[mono] = cached
        return cached

    def normal_form(self, p: Poly, max_degree: int | None = None) -> Poly:
        self._require_basis()
        if p.spec != self.spec:
            raise PolyError("polynomial is over a different ring spec")
        deg = self.spec.degree
        out: dict = {}
        for m, c in p.terms.items():
            if max_degree is not None and deg(m) > max_degree:
                continue
            for nm, nc in self.normal_form_monomial(m).items():
                v = out.get(nm, 0) + c * nc
                if v:
                    out[nm] = v
                else:
                    out.pop(nm, None)
        return Poly._raw(self.spec, out)

    def contains(self, p: Poly) -> bool:
        return not self.normal_form(p)


def groebner_basis(ideal: Ideal, budget: int | None = None) -> Ideal:
    """Return ``ideal`` with its reduced Groebner basis cached."""
    if ideal.basis is not None:
        return ideal
    basis = buchberger(ideal.generators, ideal.spec, budget)
    return Ideal(ideal.spec, ideal.generators, basis)


def normal_form(p: Poly, ideal: Ideal) -> Poly:
    return ideal.normal_form(p)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    """True iff the two generator lists span the same ideal."""
    if a.spec != b.spec:
        raise PolyError("ideals live over different specs")
    a, b = groebner_basis(a), groebner_basis(b)
    return all(b.contains(g) for g in a.generators) and all(a.contains(g) for g in b.generators)


def buchberger_criterion(ideal: Ideal) -> bool:
    """Every S-polynomial of the cached basis reduces to zero."""
    ideal._require_basis()
    basis = list(ideal.basis)
    for f, g in itertools.combinations(basis, 2):
        if reduce_poly(s_polynomial(f, g), basis):
            return False
    return True


def is_reduced(ideal: Ideal) -> bool:
    ideal._require_basis()
    lms = ideal.leading_monomials
    for g, lm in zip(ideal.basis, lms):
        if g.leading_coefficient() != 1:
            return False
        for m in g.terms:
            for other in lms:
                if other is not lm and other != lm and mono_divides(other, m):
                    return False
    return True


def monomials_of_degree(spec: RingSpec, d: int) -> list:
    """All monomials of weighted degree ``d``, in descending monomial order."""
    out = []
    n = spec.nvars
    w = spec.weights

    def rec(i, remaining, prefix):
        if i == n - 1:
            if remaining % w[i] == 0:
                out.append(tuple(prefix + [remaining // w[i]]))
            return
        for e in range(remaining // w[i], -1, -1):
            rec(i + 1, remaining - e * w[i], prefix + [e])

    if n == 0:
        return [()] if d == 0 else []
    if d >= 0:
        rec(0, d, [])
    out.sort(key=spec._key, reverse=True)
    return out


def standard_monomials(ideal: Ideal, d: int) -> list:
    return [m for m in monomials_of_degree(ideal.spec, d) if ideal.is_standard(m)]


def is_artinian(ideal: Ideal) -> bool:
    """Every variable has a pure power among the leading monomials."""
    lms = ideal.leading_monomials
    for i in range(ideal.spec.nvars):
        if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in lms):
            return False
    return True


def all_standard_monomials(ideal: Ideal, limit: int = 1_000_000) -> list:
    """Every standard monomial of an artinian quotient.

    Divisors of a standard monomial are standard, so a breadth-first walk from
    1 (multiplying only by variables at or after the last one used) reaches
    each of them exactly once.
    """
    ideal = groebner_basis(ideal)
    if ideal.is_unit():
        return []
    if not is_artinian(ideal):
        raise SeriesError("quotient ring is not finite-dimensional")
    n = ideal.spec.nvars
    out = [ideal.spec.one()]
    frontier = [(ideal.spec.one(), 0)]
    while frontier:
        nxt = []
        for m, first in frontier:
            for i in range(first, n):
                t = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if ideal.is_standard(t):
                    out.append(t)
                    nxt.append((t, i))
        if len(out) > limit:
            raise SeriesError(f"more than {limit} standard monomials")
        frontier = nxt
    return out


def full_series(ideal: Ideal) -> SeriesVector:
    """Series of an artinian quotient without knowing its top degree."""
    ideal = groebner_basis(ideal)
    mons = all_standard_monomials(ideal)
    if not mons:
        return SeriesVector((0,))
    top = max(ideal.spec.degree(m) for m in mons)
    dims = [0] * (top + 1)
    for m in mons:
        dims[ideal.spec.degree(m)] += 1
    return SeriesVector(tuple(dims))


def hilbert_series(ideal: Ideal, top_degree: int) -> SeriesVector:
    """Count standard monomials in each weighted degree up to ``top_degree``.

    Raises :class:`SeriesError` if the quotient is not finite-dimensional or
    has nonzero pieces above ``top_degree``.
    """
    full = full_series(ideal)
    if full.top_degree > top_degree and any(full.dimensions[top_degree + 1 :]):
        raise SeriesError(f"quotient has nonzero pieces above degree {top_degree}")
    return SeriesVector(tuple(full[d] for d in range(top_degree + 1)))


def eliminate(ideal: Ideal, drop: Iterable[str], budget: int | None = None) -> Ideal:
    """Generators of the ideal intersected with the subring on the other variables."""
    drop = list(drop)
    spec = ideal.spec
    elim_spec = make_ring_spec(list(zip(spec.names, spec.weights)), eliminate=drop)
    gens = [change_spec(g, elim_spec) for g in ideal.generators]
    basis = buchberger(gens, elim_spec, budget)
    keep = [(n, w) for n, w in zip(spec.names, spec.weights) if n not in drop]
    reduced_spec = make_ring_spec(keep)
    nb = elim_spec.block
    out = [g for g in basis if all(not any(m[:nb]) for m in g.terms)]
    out = [change_spec(g, reduced_spec) for g in out]
    # restricted to the rest, the product order is the rest's weighted revlex
    out.sort(key=lambda g: reduced_spec._key(g.leading_monomial()))
    return Ideal(reduced_spec, out, out)


def morphism_kernel(
    source: RingSpec,
    images: Sequence[Poly],
    target: Ideal,
    budget: int | None = None,
) -> Ideal:
    """Kernel of ``Q[source] -> target ring`` given by ``images``.

    Computed from the graph ideal ``target relations + <u_i - image_i>`` by
    eliminating the target variables.
    """
    if len(images) != source.nvars:
        raise ValueError("one image per source variable is required")
    clash = set(source.names) & set(target.spec.names)
    if clash:
        raise PolyError(f"source and target share variable names {sorted(clash)}")
    for name, w, img in zip(source.names, source.weights, images):
        if img.spec != target.spec:
            raise PolyError(f"image of {name} is not in the target ring")
        if img and (not img.is_homogeneous() or img.degree() != w):
            raise PolyError(f"image of {name} is not homogeneous of degree {w}")
    joint = make_ring_spec(
        list(zip(target.spec.names, target.spec.weights)) + list(zip(source.names, source.weights))
    )
    rels = list(target.basis if target.basis is not None else target.generators)
    gens = [change_spec(r, joint) for r in rels]
    for name, img in zip(source.names, images):
        gens.append(Poly.var(joint, name) - change_spec(img, joint))
    graph = Ideal(joint, gens)
    kernel = eliminate(graph, target.spec.names, budget)
    return Ideal(source, [change_spec(g, source) for g in kernel.generators],
                 [change_spec(g, source) for g in kernel.basis])
