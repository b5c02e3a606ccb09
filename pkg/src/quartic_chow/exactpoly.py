"""Exact sparse multivariate polynomials over the rationals.

Polynomials live over a :class:`RingSpec`, an ordered list of weighted
variables together with a monomial order.  Monomials are plain tuples of
exponents aligned with the variable list; coefficients are
:class:`fractions.Fraction` and never anything inexact.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Scalar = Fraction
Monomial = tuple  # tuple[int, ...], aligned with RingSpec.names

WDEGREVLEX = "wdegrevlex"
ELIMINATION = "elim"

DEFAULT_EXPONENT_CAP = 64


class PolyError(ValueError):
    """Malformed polynomial input or incompatible operands."""


class ExponentOverflow(PolyError):
    pass


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class RingSpec:
    """Weighted variables plus a monomial order.

    ``order`` is ``"wdegrevlex"`` (weighted degree, ties broken by reverse
    lexicographic order on the given variable list) or ``"elim"``, a product
    order in which the first ``block`` variables are eliminated: monomials are
    compared by their block part first (weighted degrevlex) and then by the
    rest.
    """

    names: tuple[str, ...]
    weights: tuple[int, ...]
    order: str = WDEGREVLEX
    block: int = 0
    exponent_cap: int = DEFAULT_EXPONENT_CAP
    _index: dict = field(default=None, compare=False, hash=False, repr=False)
    _key: Callable = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.names) != len(self.weights):
            raise PolyError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise PolyError(f"duplicate variable name in {self.names}")
        for n in self.names:
            if not _NAME_RE.match(n):
                raise PolyError(f"invalid variable name {n!r}")
        for w in self.weights:
            if not isinstance(w, int) or w < 1:
                raise PolyError(f"variable weights must be positive integers, got {w!r}")
        if self.order not in (WDEGREVLEX, ELIMINATION):
            raise PolyError(f"unknown monomial order {self.order!r}")
        if self.order == ELIMINATION and not 0 < self.block <= len(self.names):
            raise PolyError("elimination order needs a non-empty block")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})
        object.__setattr__(self, "_key", _make_key(self.weights, self.order, self.block))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def weight_of(self, name: str) -> int:
        return self.weights[self.index(name)]

    def degree(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def key(self, mono: Monomial):
        """Sort key: larger key means larger monomial."""
        return self._key(mono)

    def one(self) -> Monomial:
        return (0,) * len(self.names)

    def var_monomial(self, name: str) -> Monomial:
        i = self.index(name)
        return tuple(1 if j == i else 0 for j in range(len(self.names)))

    def with_order(self, order: str, block: int = 0) -> "RingSpec":
        return RingSpec(self.names, self.weights, order, block, self.exponent_cap)


def _make_key(weights, order, block):
    if order == WDEGREVLEX:
        if all(w == 1 for w in weights):
            def key(m):
                return (sum(m), tuple(-e for e in reversed(m)))
        else:
            def key(m):
                return (sum(e * w for e, w in zip(m, weights)), tuple(-e for e in reversed(m)))
        return key
    wb, wr = weights[:block], weights[block:]

    def key(m):
        mb, mr = m[:block], m[block:]
        return (
            sum(e * w for e, w in zip(mb, wb)),
            tuple(-e for e in reversed(mb)),
            sum(e * w for e, w in zip(mr, wr)),
            tuple(-e for e in reversed(mr)),
        )

    return key


def make_ring_spec(
    variables: Sequence[tuple[str, int]],
    order: str = WDEGREVLEX,
    eliminate: Iterable[str] | None = None,
) -> RingSpec:
    """Build a :class:`RingSpec` from ``(name, weight)`` pairs.

    With ``eliminate`` given, those variables are moved to the front (keeping
    their relative order) and an elimination order is used.
    """
    names = [n for n, _ in variables]
    weights = [w for _, w in variables]
    if eliminate is not None:
        drop = list(eliminate)
        unknown = set(drop) - set(names)
        if unknown:
            raise PolyError(f"unknown variables to eliminate: {sorted(unknown)}")
        front = [n for n in names if n in drop]
        back = [n for n in names if n not in drop]
        wmap = dict(variables)
        names = front + back
        weights = [wmap[n] for n in names]
        return RingSpec(tuple(names), tuple(weights), ELIMINATION, len(front))
    return RingSpec(tuple(names), tuple(weights), order)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise PolyError(f"not an exact scalar: {c!r}")


class Poly:
    """Immutable sparse polynomial ``{monomial: coefficient}`` over a spec."""

    __slots__ = ("spec", "terms", "_lm")

    def __init__(self, spec: RingSpec, terms: Mapping[Monomial, Fraction] | None = None):
        self.spec = spec
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._lm = None

    @classmethod
    def _raw(cls, spec, terms):
        p = cls.__new__(cls)
        p.spec = spec
        p.terms = terms
        p._lm = None
        return p

    # construction helpers
    @classmethod
    def zero(cls, spec: RingSpec) -> "Poly":
        return cls._raw(spec, {})

    @classmethod
    def constant(cls, spec: RingSpec, c) -> "Poly":
        c = _scalar(c)
        return cls._raw(spec, {spec.one(): c} if c else {})

    @classmethod
    def var(cls, spec: RingSpec, name: str) -> "Poly":
        return cls._raw(spec, {spec.var_monomial(name): Fraction(1)})

    @classmethod
    def monomial(cls, spec: RingSpec, mono: Monomial, c=1) -> "Poly":
        c = _scalar(c)
        return cls._raw(spec, {tuple(mono): c} if c else {})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def leading_monomial(self) -> Monomial:
        if self._lm is None:
            if not self.terms:
                raise PolyError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.spec._key)
        return self._lm

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: self.spec._key(t[0]), reverse=True)

    def degree(self) -> int:
        """Largest weighted degree of a term (-1 for zero)."""
        if not self.terms:
            return -1
        return max(self.spec.degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({self.spec.degree(m) for m in self.terms}) <= 1

    def constant_term(self) -> Fraction:
        return self.terms.get(self.spec.one(), Fraction(0))

    def variables_used(self) -> set[str]:
        used = set()
        for m in self.terms:
            for n, e in zip(self.spec.names, m):
                if e:
                    used.add(n)
        return used

    # arithmetic
    def _check(self, other: "Poly") -> None:
        if other.spec is not self.spec and other.spec != self.spec:
            raise PolyError("ring spec mismatch")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = c
            else:
                v += c
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return Poly._raw(self.spec, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        get = terms.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                terms[m] = get(m, 0) + c1 * c2
        return Poly._raw(self.spec, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _scalar(c)
        if not c:
            return Poly.zero(self.spec)
        return Poly._raw(self.spec, {m: c * v for m, v in self.terms.items()})

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(1 / _scalar(c))
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a non-negative integer")
        if len(self.terms) == 1:
            ((m, c),) = self.terms.items()
            mono = tuple(e * n for e in m)
            if mono and max(mono) > self.spec.exponent_cap:
                raise ExponentOverflow(f"exponent exceeds cap {self.spec.exponent_cap}")
            return Poly._raw(self.spec, {mono: c**n})
        result = Poly.constant(self.spec, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono: Monomial, c=Fraction(1)) -> "Poly":
        return Poly._raw(
            self.spec, {tuple(x + y for x, y in zip(m, mono)): c * v for m, v in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.spec, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.spec.names, frozenset(self.terms.items())))

    # structure
    def homogeneous_part(self, d: int) -> "Poly":
        deg = self.spec.degree
        return Poly._raw(self.spec, {m: c for m, c in self.terms.items() if deg(m) == d})

    def truncate(self, top: int) -> "Poly":
        deg = self.spec.degree
        return Poly._raw(self.spec, {m: c for m, c in self.terms.items() if deg(m) <= top})

    def map_coefficients(self, f) -> "Poly":
        return Poly(self.spec, {m: f(c) for m, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"Poly({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


def graded_components(p: Poly) -> dict[int, Poly]:
    """Split ``p`` into homogeneous pieces keyed by weighted degree."""
    parts: dict[int, dict] = {}
    for m, c in p.terms.items():
        parts.setdefault(p.spec.degree(m), {})[m] = c
    return {d: Poly._raw(p.spec, parts[d]) for d in sorted(parts)}


def poly_arith(op: str, *operands, exponent: int | None = None, factor=None) -> Poly:
    """Dispatch helper for the arithmetic operations by name."""
    if op == "add":
        result = operands[0]
        for q in operands[1:]:
            result = result + q
        return result
    if op == "sub":
        a, b = operands
        return a - b
    if op == "mul":
        result = operands[0]
        for q in operands[1:]:
            result = result * q
        return result
    if op == "pow":
        (a,) = operands
        return a ** exponent
    if op == "scale":
        (a,) = operands
        return a.scale(factor)
    raise PolyError(f"unknown operation {op!r}")


def substitute(p: Poly, images: Mapping[str, Poly], target: RingSpec | None = None) -> Poly:
    """Apply the ring map sending each variable of ``p`` to its image."""
    if target is None:
        specs = {q.spec for q in images.values()}
        if len(specs) > 1:
            raise PolyError("images live in different ring specs")
        if not specs:
            if p.variables_used():
                raise PolyError("missing images")
            return Poly.constant(p.spec, p.constant_term())
        (target,) = specs
    imgs = []
    for name in p.spec.names:
        img = images.get(name)
        if img is not None and img.spec != target:
            raise PolyError(f"image of {name} is not in the target spec")
        imgs.append(img)
    powers: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            if imgs[i] is None:
                raise PolyError(f"no image given for variable {p.spec.names[i]!r}")
            powers[key] = imgs[i] ** e if e > 1 else imgs[i]
        return powers[key]

    result: dict = {}
    for m, c in p.terms.items():
        term = Poly.constant(target, c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        for tm, tc in term.terms.items():
            result[tm] = result.get(tm, 0) + tc
    return Poly(target, result)


def change_spec(p: Poly, target: RingSpec) -> Poly:
    """Re-express ``p`` over ``target``, matching variables by name."""
    idx = []
    for n in p.spec.names:
        idx.append(target._index.get(n))
    terms = {}
    for m, c in p.terms.items():
        new = [0] * target.nvars
        for i, e in enumerate(m):
            if e:
                j = idx[i]
                if j is None:
                    raise PolyError(f"variable {p.spec.names[i]!r} missing in target spec")
                new[j] = e
        terms[tuple(new)] = c
    return Poly._raw(target, terms)


def divide(p: Poly, divisors: Sequence[Poly]) -> tuple[list[Poly], Poly]:
    """Multivariate division; returns quotients and remainder."""
    quotients = [dict() for _ in divisors]
    lms = [(d.leading_monomial(), d.leading_coefficient()) for d in divisors]
    rem: dict = {}
    work = dict(p.terms)
    key = p.spec._key
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for i, (lm, lc) in enumerate(lms):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                f = c / lc
                quotients[i][q] = quotients[i].get(q, 0) + f
                for dm, dc in divisors[i].terms.items():
                    if dm == lm:
                        continue
                    t = mono_mul(dm, q)
                    v = work.get(t, 0) - f * dc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
    return [Poly(p.spec, q) for q in quotients], Poly(p.spec, rem)


def exact_quotient(p: Poly, d: Poly) -> Poly:
    """``p / d``, raising if the division leaves a remainder."""
    (q,), r = divide(p, [d])
    if r:
        raise PolyError("division is not exact")
    return q


# ---------------------------------------------------------------------------
# text form


def _render_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(p: Poly) -> str:
    """Canonical text: descending terms, coefficient 1 and exponent 1 omitted."""
    if not p.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        factors = []
        for n, e in zip(p.spec.names, m):
            if e == 1:
                factors.append(n)
            elif e > 1:
                factors.append(f"{n}^{e}")
        a = abs(c)
        if factors:
            body = "*".join(factors) if a == 1 else _render_scalar(a) + "*" + "*".join(factors)
        else:
            body = _render_scalar(a)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif name is not None:
            tokens.append(("name", name))
        elif sym is not None:
            if sym not in "+-*/^":
                raise PolyError(f"unexpected character {sym!r}")
            tokens.append(("sym", sym))
        pos = m.end()
    return tokens


def parse_poly(text: str, spec: RingSpec) -> Poly:
    """Parse the flat sum-of-terms grammar used by :func:`render`."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolyError("empty polynomial text")
    pos = 0
    terms: dict = {}

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    first = True
    while pos < len(tokens):
        sign = 1
        kind, val = peek()
        if kind == "sym" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            raise PolyError(f"expected '+' or '-' near token {val!r}")
        first = False
        coeff = Fraction(1)
        mono = [0] * spec.nvars
        kind, val = peek()
        need_factor = False
        if kind == "int":
            num = int(val)
            pos += 1
            if peek() == ("sym", "/"):
                pos += 1
                kind, den = peek()
                if kind != "int" or int(den) == 0:
                    raise PolyError("malformed fraction")
                pos += 1
                coeff = Fraction(num, int(den))
            else:
                coeff = Fraction(num)
            if peek() == ("sym", "*"):
                pos += 1
                need_factor = True
        else:
            need_factor = True
        while need_factor:
            kind, val = peek()
            if kind != "name":
                raise PolyError(f"expected a variable near {val!r}")
            pos += 1
            i = spec.index(val)
            e = 1
            if peek() == ("sym", "^"):
                pos += 1
                kind, ev = peek()
                if kind != "int" or int(ev) < 1:
                    raise PolyError("exponent must be a positive integer")
                pos += 1
                e = int(ev)
            mono[i] += e
            if mono[i] > spec.exponent_cap:
                raise ExponentOverflow(f"exponent exceeds cap {spec.exponent_cap}")
            need_factor = peek() == ("sym", "*")
            if need_factor:
                pos += 1
        m = tuple(mono)
        terms[m] = terms.get(m, 0) + sign * coeff
    return Poly(spec, terms)


def evaluate(text: str, spec: RingSpec) -> Poly:
    """Evaluate a general arithmetic expression (parentheses, ``**``, ``/``).

    Only numbers, variable names of ``spec`` and the operators
    ``+ - * / ** ^`` are accepted.  Used to author fixtures from factored
    expressions; :func:`parse_poly` is the strict canonical reader.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.constant(spec, node.value)
        if isinstance(node, ast.Name):
            return Poly.var(spec, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.variables_used() or not b:
                    raise PolyError("can only divide by a nonzero constant")
                return a.scale(1 / b.constant_term())
            if isinstance(node.op, ast.Pow):
                if b.variables_used():
                    raise PolyError("exponent must be a constant")
                e = b.constant_term()
                if e.denominator != 1 or e < 0:
                    raise PolyError("exponent must be a non-negative integer")
                return a ** int(e)
        raise PolyError(f"unsupported expression element {ast.dump(node)}")

    return ev(tree)
