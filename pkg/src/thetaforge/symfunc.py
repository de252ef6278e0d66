"""Truncated symmetric series in the monomial basis, and plain x-power series.

A :class:`SymSeries` is a finite map ``Partition -> RatFunc`` giving
coordinates in the monomial basis m_lambda of symmetric polynomials in
``nvars`` variables, truncated at total degree ``maxdeg``.  An
:class:`XSeries` is an ordinary truncated power series in x_1..x_n with
rational-function coefficients; it is the workspace for expanding infinite
products before collecting them back into monomial coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Mapping

from .algebra import QT, PolyRing, RatFunc, specialize
from .errors import PreconditionError, SymmetryError
from .partitions import Partition, partitions_of


@lru_cache(maxsize=None)
def distinct_permutations(parts: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(set(permutations(parts)), reverse=True))


def _pad(lam: Partition, n: int) -> tuple[int, ...]:
    return tuple(lam) + (0,) * (n - len(lam))


class SymSeries:
    """Symmetric polynomial in ``nvars`` variables, truncated at degree ``maxdeg``."""

    __slots__ = ("nvars", "maxdeg", "ring", "coeffs")

    def __init__(self, nvars: int, maxdeg: int, coeffs: Mapping[Partition, object] | None = None,
                 ring: PolyRing = QT):
        self.nvars = nvars
        self.maxdeg = maxdeg
        self.ring = ring
        clean = {}
        for lam, c in (coeffs or {}).items():
            lam = Partition(lam)
            if len(lam) > nvars or sum(lam) > maxdeg:
                continue
            c = RatFunc.lift(c, ring) if not isinstance(c, RatFunc) else c
            if not c.is_zero():
                clean[lam] = c
        self.coeffs = clean

    @classmethod
    def one(cls, nvars: int, maxdeg: int, ring: PolyRing = QT) -> "SymSeries":
        return cls(nvars, maxdeg, {Partition(): 1}, ring)

    @classmethod
    def monomial(cls, lam, nvars: int, maxdeg: int, ring: PolyRing = QT) -> "SymSeries":
        return cls(nvars, maxdeg, {Partition(lam): 1}, ring)

    def __getitem__(self, lam) -> RatFunc:
        return self.coeffs.get(Partition(lam), self.ring.zero())

    def __iter__(self):
        return iter(sorted(self.coeffs, key=lambda p: (sum(p), p)))

    def items(self):
        return [(lam, self.coeffs[lam]) for lam in self]

    def _check(self, other: "SymSeries"):
        if self.nvars != other.nvars:
            raise PreconditionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        if self.ring is not other.ring:
            raise PreconditionError("coefficient rings differ; align first")

    def __add__(self, other: "SymSeries") -> "SymSeries":
        self._check(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out[lam] + c if lam in out else c
        return SymSeries(self.nvars, min(self.maxdeg, other.maxdeg), out, self.ring)

    def __neg__(self):
        return SymSeries(self.nvars, self.maxdeg, {k: -v for k, v in self.coeffs.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymSeries":
        return SymSeries(self.nvars, self.maxdeg, {k: v * c for k, v in self.coeffs.items()}, self.ring)

    def __mul__(self, other):
        if isinstance(other, SymSeries):
            return msym_product(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def map_coeffs(self, fn: Callable[[RatFunc], RatFunc], ring: PolyRing | None = None) -> "SymSeries":
        return SymSeries(self.nvars, self.maxdeg, {k: fn(v) for k, v in self.coeffs.items()},
                         ring or self.ring)

    def specialize(self, bindings: Mapping[str, object]) -> "SymSeries":
        return self.map_coeffs(lambda c: specialize(c, bindings))

    def align(self, ring: PolyRing) -> "SymSeries":
        return self.map_coeffs(lambda c: c.align(ring), ring)

    def restrict(self, nvars: int | None = None, maxdeg: int | None = None) -> "SymSeries":
        """Set x_{k} = 0 for k > nvars and/or drop terms above ``maxdeg``."""
        return SymSeries(self.nvars if nvars is None else nvars,
                         self.maxdeg if maxdeg is None else maxdeg, self.coeffs, self.ring)

    def to_xseries(self) -> "XSeries":
        terms = {}
        for lam, c in self.coeffs.items():
            for alpha in distinct_permutations(_pad(lam, self.nvars)):
                terms[alpha] = c
        return XSeries(self.nvars, self.maxdeg, terms, self.ring)

    def differences(self, other: "SymSeries") -> list[Partition]:
        """Partitions whose coefficients differ (cross-multiplication test)."""
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return sorted((k for k in keys if not (self[k] == other[k])), key=lambda p: (sum(p), p))

    def __eq__(self, other):
        if not isinstance(other, SymSeries):
            return NotImplemented
        return (self.nvars == other.nvars and self.ring is other.ring
                and not self.differences(other))

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*m{list(lam)}" for lam, c in self.items()) or "0"
        return f"SymSeries(n={self.nvars}, D={self.maxdeg}: {body})"


class XSeries:
    """Truncated power series in x_1..x_n with rational-function coefficients."""

    __slots__ = ("n", "maxdeg", "ring", "terms")

    def __init__(self, n: int, maxdeg: int, terms: Mapping[tuple[int, ...], RatFunc] | None = None,
                 ring: PolyRing = QT):
        self.n = n
        self.maxdeg = maxdeg
        self.ring = ring
        self.terms = {}
        for alpha, c in (terms or {}).items():
            if len(alpha) != n:
                raise ValueError(f"exponent {alpha} does not have {n} entries")
            if sum(alpha) <= maxdeg:
                c = c if isinstance(c, RatFunc) else RatFunc.lift(c, ring)
                if not c.is_zero():
                    self.terms[tuple(alpha)] = c

    @classmethod
    def one(cls, n, maxdeg, ring=QT):
        return cls(n, maxdeg, {(0,) * n: ring.one()}, ring)

    @classmethod
    def univariate(cls, n: int, maxdeg: int, exps: tuple[int, ...],
                   coeff: Callable[[int], RatFunc], ring=QT) -> "XSeries":
        """sum_k coeff(k) * x^(k*exps), truncated; ``exps`` is the monomial stepped through."""
        step = sum(exps)
        terms = {}
        k = 0
        while k * step <= maxdeg:
            terms[tuple(k * e for e in exps)] = coeff(k)
            k += 1
            if step == 0:
                break
        return cls(n, maxdeg, terms, ring)

    def __mul__(self, other: "XSeries") -> "XSeries":
        if self.n != other.n or self.ring is not other.ring:
            raise PreconditionError("XSeries operands must share n and ring")
        D = min(self.maxdeg, other.maxdeg)
        out: dict[tuple[int, ...], RatFunc] = {}
        for a, ca in self.terms.items():
            da = sum(a)
            for b, cb in other.terms.items():
                if da + sum(b) > D:
                    continue
                key = tuple(x + y for x, y in zip(a, b))
                prod = ca * cb
                out[key] = out[key] + prod if key in out else prod
        return XSeries(self.n, D, out, self.ring)

    def __add__(self, other: "XSeries") -> "XSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return XSeries(self.n, min(self.maxdeg, other.maxdeg), out, self.ring)

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = self.ring.zero()
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    __hash__ = None

    def collect(self) -> SymSeries:
        """Monomial-basis coordinates; raises SymmetryError if not symmetric."""
        coeffs = {}
        zero = self.ring.zero()
        for alpha, c in self.terms.items():
            lam = Partition(sorted(alpha, reverse=True))
            if lam in coeffs:
                continue
            for beta in distinct_permutations(tuple(sorted(alpha, reverse=True))):
                if not (self.terms.get(beta, zero) == c):
                    raise SymmetryError(f"coefficient of x^{beta} differs from x^{alpha}")
            coeffs[lam] = c
        return SymSeries(self.n, self.maxdeg, coeffs, self.ring)


@lru_cache(maxsize=None)
def monomial_structure(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Coefficient of m_nu in m_lam * m_mu (variable-count independent once n >= l(nu))."""
    n = len(nu)
    if len(lam) > n or len(mu) > n:
        return 0
    target = _pad(nu, n)
    mu_sorted = _pad(mu, n)
    count = 0
    for alpha in distinct_permutations(_pad(lam, n)):
        rest = tuple(a - b for a, b in zip(target, alpha))
        if any(x < 0 for x in rest):
            continue
        if tuple(sorted(rest, reverse=True)) == mu_sorted:
            count += 1
    return count


@lru_cache(maxsize=None)
def _product_support(lam: Partition, mu: Partition, nvars: int) -> tuple[tuple[Partition, int], ...]:
    d = sum(lam) + sum(mu)
    out = []
    for nu in partitions_of(d, max_len=min(nvars, len(lam) + len(mu))):
        c = monomial_structure(lam, mu, nu)
        if c:
            out.append((nu, c))
    return tuple(out)


def msym_product(f: SymSeries, g: SymSeries) -> SymSeries:
    """Product in the monomial basis, truncated at min(f.maxdeg, g.maxdeg)."""
    f._check(g)
    D = min(f.maxdeg, g.maxdeg)
    out: dict[Partition, RatFunc] = {}
    for lam, a in f.coeffs.items():
        for mu, b in g.coeffs.items():
            if sum(lam) + sum(mu) > D:
                continue
            ab = a * b
            for nu, c in _product_support(lam, mu, f.nvars):
                term = ab * c
                out[nu] = out[nu] + term if nu in out else term
    return SymSeries(f.nvars, D, out, f.ring)


# ---------------------------------------------------------------------------
# Power sums and the (q,t) scalar product
# ---------------------------------------------------------------------------

def z_lambda(lam: Partition) -> int:
    out = 1
    for i in set(lam):
        m = lam.multiplicity(i)
        out *= factorial(m) * i**m
    return out


@lru_cache(maxsize=None)
def _power_to_monomial_coeff(rho: tuple[int, ...], target: tuple[int, ...]) -> int:
    # number of ways to drop the parts of rho into boxes with the given sums
    if not rho:
        return int(not any(target))
    first, rest = rho[0], rho[1:]
    total = 0
    for i, v in enumerate(target):
        if v >= first and (i == 0 or target[i] != target[i - 1]):
            reduced = list(target)
            reduced[i] -= first
            mult = sum(1 for w in target if w == v)
            total += mult * _power_to_monomial_coeff(rest, tuple(sorted(reduced, reverse=True)))
    return total


@lru_cache(maxsize=None)
def power_to_monomial(d: int) -> tuple[tuple[Partition, ...], tuple[tuple[int, ...], ...]]:
    """Integer matrix L with p_rho = sum_lam L[rho][lam] m_lam, rows/cols over partitions of d."""
    parts = tuple(partitions_of(d))
    mat = tuple(tuple(_power_to_monomial_coeff(tuple(rho), tuple(lam)) for lam in parts)
                for rho in parts)
    return parts, mat


@lru_cache(maxsize=None)
def monomial_to_power(d: int) -> dict[Partition, dict[Partition, Fraction]]:
    """m_lam = sum_rho M[lam][rho] p_rho, exact."""
    parts, L = power_to_monomial(d)
    k = len(parts)
    # invert L^T row by row: solve sum_rho M[lam][rho] L[rho][mu] = delta
    A = [[Fraction(L[r][c]) for r in range(k)] + [Fraction(int(c == j)) for j in range(k)]
         for c in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(k):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    # A now holds (L^T)^{-1}: row mu, column lam -> coefficient with L^T x = e_lam
    out = {}
    for j, lam in enumerate(parts):
        out[lam] = {rho: A[i][k + j] for i, rho in enumerate(parts) if A[i][k + j] != 0}
    return out


def power_weight(rho: Partition, q: RatFunc, t: RatFunc) -> RatFunc:
    """<p_rho, p_rho>_{q,t} = z_rho prod (1 - q^rho_i)/(1 - t^rho_i)."""
    w = q.ring.one() * z_lambda(rho)
    for part in rho:
        w = w * (1 - q**part) / (1 - t**part)
    return w


def to_power_basis(f: SymSeries) -> dict[Partition, RatFunc]:
    """Power-sum coordinates of the symmetric function whose m-coordinates are f's."""
    out: dict[Partition, RatFunc] = {}
    for lam, c in f.coeffs.items():
        for rho, x in monomial_to_power(sum(lam))[lam].items():
            term = c * x
            out[rho] = out[rho] + term if rho in out else term
    return out


def scalar_product(f: SymSeries, g: SymSeries, q: RatFunc | None = None,
                   t: RatFunc | None = None) -> RatFunc:
    """Macdonald scalar product <f, g>_{q,t}, via the power-sum basis.

    The m-coordinates are read as coordinates of symmetric functions (the
    lift to infinitely many variables), which is what orthogonality is
    defined against.
    """
    ring = f.ring
    q = ring.var("q") if q is None else q
    t = ring.var("t") if t is None else t
    F, G = to_power_basis(f), to_power_basis(g)
    total = ring.zero()
    for rho, a in F.items():
        b = G.get(rho)
        if b is not None:
            total = total + a * b * power_weight(rho, q, t)
    return total
