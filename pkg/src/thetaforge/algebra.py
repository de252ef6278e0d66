"""Exact arithmetic kernel: polynomials and rational functions over Q.

Polynomials live in a :class:`PolyRing`, a fixed ordered tuple of variable
names.  Arithmetic between elements of different rings is refused; callers
move values between rings with :meth:`MultiPoly.align` /
:meth:`RatFunc.align`.  Terms iterate in graded-lexicographic order.

The heavy lifting is delegated to FLINT's sparse multivariate polynomials
(``python-flint``).  Rational functions are stored gcd-reduced with a monic
denominator, so the stored pair is canonical, but equality is still decided
by cross-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

import flint

from .errors import ArithmeticOverflowError, DegenerateFactorError, PoleError

MAX_EXPONENT = 2**31 - 1

__all__ = [
    "PolyRing", "MultiPoly", "RatFunc", "FactoredQT", "QT", "QTB",
    "poly_arith", "ratfunc_eq", "specialize", "truncate_degree",
    "factored_to_ratfunc", "qt_poch", "MAX_EXPONENT",
]


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, Rational):
        return flint.fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class PolyRing:
    """Q[v1, ..., vk] for an ordered tuple of variable names.

    Rings are interned: ``PolyRing.of("q", "t") is PolyRing.of("q", "t")``.
    """

    _interned: dict[tuple[str, ...], "PolyRing"] = {}

    def __init__(self, names: tuple[str, ...]):
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._index = {n: i for i, n in enumerate(names)}
        self._one = self.ctx.from_dict({(0,) * len(names): 1})
        self._zero = self.ctx.from_dict({})

    @classmethod
    def of(cls, *names: str) -> "PolyRing":
        key = tuple(names)
        ring = cls._interned.get(key)
        if ring is None:
            ring = cls._interned[key] = cls(key)
        return ring

    def __repr__(self):
        return f"PolyRing{self.names}"

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in {self}") from None

    def gen(self, name: str) -> "MultiPoly":
        return MultiPoly._wrap(self, self.ctx.gens()[self.index(name)])

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(MultiPoly._wrap(self, g) for g in self.ctx.gens())

    def var(self, name: str) -> "RatFunc":
        return RatFunc._raw(self, self.ctx.gens()[self.index(name)], self._one)

    def monomial(self, exps: Mapping[str, int], coeff=1):
        """``coeff * prod(v**e)`` as a RatFunc; negative exponents allowed."""
        num = [0] * len(self.names)
        den = [0] * len(self.names)
        for name, e in exps.items():
            if e >= 0:
                num[self.index(name)] += e
            else:
                den[self.index(name)] -= e
        return RatFunc._raw(self, self.ctx.from_dict({tuple(num): _to_fmpq(coeff)}),
                            self.ctx.from_dict({tuple(den): 1}))

    def one(self) -> "RatFunc":
        return RatFunc._raw(self, self._one, self._one)

    def zero(self) -> "RatFunc":
        return RatFunc._raw(self, self._zero, self._one)

    def _const(self, c):
        return self.ctx.from_dict({(0,) * len(self.names): _to_fmpq(c)}) if c else self._zero

    def _coerce_raw(self, value):
        """Return a flint polynomial of this ring, for polynomial-like inputs."""
        if isinstance(value, MultiPoly):
            if value.ring is not self:
                raise ValueError(f"ring mismatch: {value.ring} vs {self}; align first")
            return value._p
        if isinstance(value, (int, Rational, flint.fmpq)):
            return self._const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def embed_raw(self, raw, source: "PolyRing"):
        """Map a flint polynomial of ``source`` into this ring by variable name."""
        if source is self:
            return raw
        images = []
        for name in source.names:
            if name in self._index:
                images.append(self.ctx.gens()[self._index[name]])
            elif raw.degrees()[source.index(name)] > 0:
                raise ValueError(f"variable {name!r} is used but absent from {self}")
            else:
                images.append(self._zero)
        return raw.compose(*images, ctx=self.ctx)


QT = PolyRing.of("q", "t")
QTB = PolyRing.of("q", "t", "b")


def _check_exponents(ring: PolyRing, degs: Iterable[int]):
    for name, d in zip(ring.names, degs):
        if d > MAX_EXPONENT:
            raise ArithmeticOverflowError(f"exponent of {name} would be {d} > 2**31-1")


class MultiPoly:
    """Immutable sparse polynomial with exact rational coefficients.

    >>> q, t = QT.gens()
    >>> (1 - q) * (1 + q)
    MultiPoly(-q^2 + 1)
    """

    __slots__ = ("ring", "_p")

    def __init__(self, variables, terms: Mapping[tuple[int, ...], object] | None = None):
        ring = variables if isinstance(variables, PolyRing) else PolyRing.of(*variables)
        data = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(ring.names):
                raise ValueError(f"exponent vector {exps} has wrong length for {ring}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            _check_exponents(ring, exps)
            c = _to_fmpq(c)
            if c:
                data[exps] = data.get(exps, 0) + c
        self.ring = ring
        self._p = ring.ctx.from_dict({e: c for e, c in data.items() if c})

    @classmethod
    def _wrap(cls, ring: PolyRing, raw) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._p = raw
        return obj

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.names

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        """Exponent vector -> coefficient, in descending graded-lex order."""
        return {tuple(int(x) for x in m): _to_fraction(c) for m, c in self._p.terms()}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def degree(self, name: str) -> int:
        return max(int(self._p.degrees()[self.ring.index(name)]), 0)

    def total_degree(self, names: Iterable[str] | None = None) -> int:
        """Largest total degree of a term, counted over ``names`` only (default all)."""
        if self._p.is_zero():
            return -1
        if names is None:
            return int(self._p.total_degree())
        idx = [self.ring.index(n) for n in names]
        return int(max(sum(m[i] for i in idx) for m in self._p.monoms()))

    def align(self, ring: PolyRing) -> "MultiPoly":
        return MultiPoly._wrap(ring, ring.embed_raw(self._p, self.ring))

    def _other(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}; align first")
            return other._p
        return self.ring._coerce_raw(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return MultiPoly._wrap(self.ring, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return MultiPoly._wrap(self.ring, self._p - o)

    def __rsub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return MultiPoly._wrap(self.ring, o - self._p)

    def __neg__(self):
        return MultiPoly._wrap(self.ring, -self._p)

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        if not (self._p.is_zero() or o.is_zero()):
            _check_exponents(self.ring, (a + b for a, b in zip(self._p.degrees(), o.degrees())))
        return MultiPoly._wrap(self.ring, self._p * o)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        if e and not self._p.is_zero():
            _check_exponents(self.ring, (d * e for d in self._p.degrees()))
        return MultiPoly._wrap(self.ring, self._p**e)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return other.ring is self.ring and self._p == other._p
        try:
            return self._p == self.ring._coerce_raw(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, tuple(self._p.to_dict().items())))

    def __str__(self):
        return str(self._p) if not self._p.is_zero() else "0"

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_arith(op: str, f: MultiPoly, g: MultiPoly | None = None) -> MultiPoly:
    """Dispatch ``add``/``mul``/``neg``; operands must share a ring."""
    if g is not None and f.ring is not g.ring:
        raise ValueError("operands live in different rings; align variable lists first")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "neg":
        return -f
    raise ValueError(f"unknown polynomial operation {op!r}")


def truncate_degree(f: MultiPoly, names: Iterable[str], degree: int) -> MultiPoly:
    """Drop every term whose total degree in ``names`` exceeds ``degree``."""
    idx = [f.ring.index(n) for n in names]
    if not idx:
        return f
    kept = {m: c for m, c in f._p.terms() if sum(m[i] for i in idx) <= degree}
    return MultiPoly._wrap(f.ring, f.ring.ctx.from_dict(kept))


class RatFunc:
    """Element of Q(v1, ..., vk), kept as a reduced fraction with monic denominator."""

    __slots__ = ("ring", "_n", "_d")

    def __init__(self, num, den=1, ring: PolyRing | None = None):
        if ring is None:
            ring = next((x.ring for x in (num, den) if isinstance(x, (MultiPoly, RatFunc))), QT)
        n = RatFunc.lift(num, ring)
        d = RatFunc.lift(den, ring)
        res = n / d
        self.ring, self._n, self._d = ring, res._n, res._d

    @classmethod
    def _raw(cls, ring, n, d, reduce=True) -> "RatFunc":
        if d.is_zero():
            raise PoleError("zero denominator")
        if reduce and not d.is_one():
            if n.is_zero():
                d = ring._one
            else:
                g = n.gcd(d)
                if not g.is_one():
                    n = n / g
                    d = d / g
            lc = d.leading_coefficient()
            if lc != 1:
                n = n / lc
                d = d / lc
        obj = cls.__new__(cls)
        obj.ring, obj._n, obj._d = ring, n, d
        return obj

    @staticmethod
    def lift(value, ring: PolyRing) -> "RatFunc":
        if isinstance(value, RatFunc):
            if value.ring is not ring:
                raise ValueError(f"ring mismatch: {value.ring} vs {ring}; align first")
            return value
        if isinstance(value, MultiPoly):
            if value.ring is not ring:
                raise ValueError(f"ring mismatch: {value.ring} vs {ring}; align first")
            return RatFunc._raw(ring, value._p, ring._one, reduce=False)
        return RatFunc._raw(ring, ring._coerce_raw(value), ring._one, reduce=False)

    @property
    def num(self) -> MultiPoly:
        return MultiPoly._wrap(self.ring, self._n)

    @property
    def den(self) -> MultiPoly:
        return MultiPoly._wrap(self.ring, self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_one(self) -> bool:
        return self._n == self._d

    def align(self, ring: PolyRing) -> "RatFunc":
        if ring is self.ring:
            return self
        return RatFunc._raw(ring, ring.embed_raw(self._n, self.ring),
                            ring.embed_raw(self._d, self.ring), reduce=False)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}; align first")
            return other
        return RatFunc.lift(other, self.ring)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o._n.is_zero():
            return self
        if self._n.is_zero():
            return o
        if self._d == o._d:
            return RatFunc._raw(self.ring, self._n + o._n, self._d)
        # Henrici: with g = gcd(b, d), gcd of the new numerator and denominator divides g
        g = self._d.gcd(o._d)
        if g.is_one():
            return RatFunc._raw(self.ring, self._n * o._d + o._n * self._d, self._d * o._d,
                                reduce=False)
        b_g, d_g = self._d / g, o._d / g
        num = self._n * d_g + o._n * b_g
        if num.is_zero():
            return self.ring.zero()
        h = num.gcd(g)
        if not h.is_one():
            num = num / h
            den = b_g * (o._d / h)
        else:
            den = b_g * o._d
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc._raw(self.ring, num, den, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(self.ring, -self._n, self._d, reduce=False)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            if other == 0:
                return self.ring.zero()
            c = _to_fmpq(other)
            return RatFunc._raw(self.ring, self._n * c, self._d, reduce=False)
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self._n.is_zero() or o._n.is_zero():
            return self.ring.zero()
        # cross-cancel before multiplying keeps intermediate sizes down
        g1 = self._n.gcd(o._d)
        g2 = o._n.gcd(self._d)
        n1, d2 = (self._n / g1, o._d / g1) if not g1.is_one() else (self._n, o._d)
        n2, d1 = (o._n / g2, self._d / g2) if not g2.is_one() else (o._n, self._d)
        d = d1 * d2
        lc = d.leading_coefficient()
        n = n1 * n2
        if lc != 1:
            n, d = n / lc, d / lc
        return RatFunc._raw(self.ring, n, d, reduce=False)

    __rmul__ = __mul__

    def reciprocal(self) -> "RatFunc":
        if self._n.is_zero():
            raise PoleError("reciprocal of zero")
        return RatFunc._raw(self.ring, self._d, self._n)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.reciprocal() ** (-e)
        for raw in (self._n, self._d):
            if e and not raw.is_zero():
                _check_exponents(self.ring, (d * e for d in raw.degrees()))
        return RatFunc._raw(self.ring, self._n**e, self._d**e, reduce=False)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self._n * o._d - o._n * self._d).is_zero()

    def __hash__(self):
        # canonical (reduced, monic-denominator) form makes this consistent with __eq__
        return hash((self.ring.names, tuple(self._n.to_dict().items()),
                     tuple(self._d.to_dict().items())))

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value with every variable bound (complex, float or Fraction)."""
        def ev(raw):
            total = 0
            for m, c in raw.terms():
                term = _to_fraction(c)
                for name, e in zip(self.ring.names, m):
                    if e:
                        term = term * values[name] ** int(e)
                total = total + term
            return total
        d = ev(self._d)
        if d == 0:
            raise PoleError("denominator vanishes at evaluation point")
        return ev(self._n) / d

    def __str__(self):
        if self._d.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def ratfunc_eq(f: RatFunc, g: RatFunc) -> bool:
    """True iff f.num * g.den - g.num * f.den is the zero polynomial."""
    if f.ring is not g.ring:
        raise ValueError("operands live in different rings; align variable lists first")
    return (f._n * g._d - g._n * f._d).is_zero()


def _binding_pair(ring: PolyRing, value):
    r = RatFunc.lift(value, ring) if not isinstance(value, RatFunc) else value
    if r.ring is not ring:
        r = r.align(ring)
    return r._n, r._d


def specialize(f: RatFunc | MultiPoly, bindings: Mapping[str, object]) -> RatFunc:
    """Substitute ``bindings`` (name -> number, polynomial or rational function).

    Raises :class:`PoleError` when the denominator vanishes identically.
    """
    if isinstance(f, MultiPoly):
        f = RatFunc.lift(f, f.ring)
    ring = f.ring
    pairs = {ring.index(name): _binding_pair(ring, v) for name, v in bindings.items()}
    if not pairs:
        return f
    if all(b.is_one() for _, b in pairs.values()):
        gens = ring.ctx.gens()
        images = [pairs[i][0] if i in pairs else gens[i] for i in range(len(gens))]
        n = f._n.compose(*images, ctx=ring.ctx)
        d = f._d.compose(*images, ctx=ring.ctx)
    else:
        n, d = _homogeneous_subs(ring, f._n, f._d, pairs)
    if d.is_zero():
        raise PoleError(f"denominator vanishes under {dict(bindings)}")
    return RatFunc._raw(ring, n, d)


def _homogeneous_subs(ring, num, den, pairs):
    # x_i -> A_i/B_i; multiply both parts by prod B_i^{deg_i} to stay polynomial
    degs = {i: max(num.degrees()[i], den.degrees()[i], 0) for i in pairs}
    gens = ring.ctx.gens()
    powers: dict[tuple[int, int, int], object] = {}

    def pw(i, which, e):
        key = (i, which, e)
        if key not in powers:
            powers[key] = pairs[i][which] ** e
        return powers[key]

    def sub(raw):
        total = ring._zero
        for m, c in raw.terms():
            term = ring._const(c)
            for i, e in enumerate(m):
                if i in pairs:
                    term = term * pw(i, 0, e) * pw(i, 1, degs[i] - e)
                elif e:
                    term = term * gens[i] ** e
            total = total + term
        return total

    return sub(num), sub(den)


# ---------------------------------------------------------------------------
# Factored products of binomials in q and t
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _binomial_raw(ring: PolyRing, eps: int, a: int, b: int):
    """``1 - eps q^a t^b`` for b >= 0, and ``t^-b - eps q^a`` for b < 0."""
    iq, it = ring.index("q"), ring.index("t")
    exps = [0] * len(ring.names)
    lead = [0] * len(ring.names)
    if b >= 0:
        exps[iq], exps[it] = a, b
    else:
        exps[iq] = a
        lead[it] = -b
    return ring.ctx.from_dict({tuple(lead): 1}) - ring.ctx.from_dict({tuple(exps): eps})


@dataclass(frozen=True)
class FactoredQT:
    """``coef * q^qexp * t^texp * prod (1 - eps q^a t^b)^e``.

    Factors are canonicalised so that (a, b) is lexicographically positive;
    a factor with negative (a, b) is rewritten through
    ``1 - eps*z = -eps*z*(1 - eps/z)``.  The zero factor ``1 - q^0 t^0`` is
    rejected with :class:`DegenerateFactorError`.
    """

    factors: tuple[tuple[int, int, int, int], ...] = ()
    coef: Fraction = Fraction(1)
    qexp: int = 0
    texp: int = 0

    def __post_init__(self):
        merged: dict[tuple[int, int, int], int] = {}
        coef, qe, te = Fraction(self.coef), self.qexp, self.texp
        for eps, a, b, e in self.factors:
            if eps not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {eps}")
            if e == 0:
                continue
            if a == 0 and b == 0:
                if eps == 1:
                    raise DegenerateFactorError("factor 1 - q^0 t^0 is identically zero")
                coef *= Fraction(2) ** e
                continue
            if a < 0 or (a == 0 and b < 0):
                coef *= (-eps) ** e if e > 0 else Fraction(1, (-eps) ** (-e))
                qe += a * e
                te += b * e
                a, b = -a, -b
            merged[(eps, a, b)] = merged.get((eps, a, b), 0) + e
        object.__setattr__(self, "factors",
                           tuple(sorted((k[0], k[1], k[2], e) for k, e in merged.items() if e)))
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "qexp", qe)
        object.__setattr__(self, "texp", te)

    @classmethod
    def binomial(cls, eps: int, a: int, b: int, e: int = 1) -> "FactoredQT":
        return cls(((eps, a, b, e),))

    @classmethod
    def monomial(cls, coef=1, qexp: int = 0, texp: int = 0) -> "FactoredQT":
        return cls((), Fraction(coef), qexp, texp)

    def is_zero(self) -> bool:
        return self.coef == 0

    def __mul__(self, other: "FactoredQT") -> "FactoredQT":
        if not isinstance(other, FactoredQT):
            if isinstance(other, (int, Rational)):
                return FactoredQT(self.factors, self.coef * other, self.qexp, self.texp)
            return NotImplemented
        return FactoredQT(self.factors + other.factors, self.coef * other.coef,
                          self.qexp + other.qexp, self.texp + other.texp)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredQT":
        if self.coef == 0:
            raise PoleError("inverse of zero product")
        return FactoredQT(tuple((s, a, b, -e) for s, a, b, e in self.factors),
                          1 / self.coef, -self.qexp, -self.texp)

    def __truediv__(self, other: "FactoredQT") -> "FactoredQT":
        if isinstance(other, (int, Rational)):
            return FactoredQT(self.factors, self.coef / Fraction(other), self.qexp, self.texp)
        return self * other.inverse()

    def __pow__(self, e: int) -> "FactoredQT":
        if e < 0:
            return self.inverse() ** (-e)
        return FactoredQT(tuple((s, a, b, k * e) for s, a, b, k in self.factors),
                          self.coef**e, self.qexp * e, self.texp * e)

    def subs_monomial(self, q: tuple[int, int], t: tuple[int, int]) -> "FactoredQT":
        """Substitute q -> q^q[0] t^q[1] and t -> q^t[0] t^t[1]."""
        def img(a, b):
            return a * q[0] + b * t[0], a * q[1] + b * t[1]
        qe, te = img(self.qexp, self.texp)
        return FactoredQT(tuple((s, *img(a, b), e) for s, a, b, e in self.factors),
                          self.coef, qe, te)

    def swap(self) -> "FactoredQT":
        """Interchange q and t."""
        return self.subs_monomial((0, 1), (1, 0))

    def square_params(self) -> "FactoredQT":
        """q -> q^2, t -> t^2."""
        return self.subs_monomial((2, 0), (0, 2))

    def evaluate(self, q, t):
        val = self.coef * q**self.qexp * t**self.texp
        for s, a, b, e in self.factors:
            val = val * (1 - s * q**a * t**b) ** e
        return val

    def to_ratfunc(self, ring: PolyRing = QT) -> RatFunc:
        if self.coef == 0:
            return ring.zero()
        iq, it = ring.index("q"), ring.index("t")
        qe, te = self.qexp, self.texp
        polys = []
        for s, a, b, e in self.factors:
            if b < 0:
                # 1 - s q^a t^b = t^b (t^-b - s q^a); a > 0 here
                te += b * e
            polys.append((_binomial_raw(ring, s, a, b), e))
        nexp = [0] * len(ring.names)
        dexp = [0] * len(ring.names)
        for i, e in ((iq, qe), (it, te)):
            if e >= 0:
                nexp[i] = e
            else:
                dexp[i] = -e
        n = ring.ctx.from_dict({tuple(nexp): _to_fmpq(self.coef)})
        d = ring.ctx.from_dict({tuple(dexp): 1})
        for f, e in polys:
            if e > 0:
                n = n * f**e
            else:
                d = d * f ** (-e)
        return RatFunc._raw(ring, n, d)


def factored_to_ratfunc(f: FactoredQT, ring: PolyRing = QT) -> RatFunc:
    return f.to_ratfunc(ring)


def qt_poch(eps: int, a: int, b: int, k: int, step: tuple[int, int] = (1, 0)) -> FactoredQT:
    """The q-shifted factorial ``(eps q^a t^b; q^s t^u)_k`` as a factored product.

    ``step = (s, u)`` is the base ``q^s t^u``.  Negative ``k`` follows
    ``(z)_{-k} = 1 / prod_{j=1..k} (1 - z base^{-j})``.
    """
    s, u = step
    if k >= 0:
        return FactoredQT(tuple((eps, a + j * s, b + j * u, 1) for j in range(k)))
    return FactoredQT(tuple((eps, a - j * s, b - j * u, -1) for j in range(1, -k + 1)))
