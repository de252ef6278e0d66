"""Double-precision theta functions, theta shifted factorials and q-Pochhammers.

The normalised theta function is the truncated product

    theta(x; p) = prod_{k<K} (1 - x p^k)(1 - p^{k+1}/x)

with K chosen so that |p|^K < 1e-37 (never fewer than 20 factors).  At p = 0
it is exactly ``1 - x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContextError, DivergenceError, DomainError, PoleError

PMAX = 0.9
#: |theta| below this counts as a vanishing denominator factor
POLE_EPS = 1e-13


def truncation_order(p: complex) -> int:
    ap = abs(p)
    if ap == 0:
        return 1
    return max(20, math.ceil(-37 / math.log10(ap)))


@dataclass(frozen=True)
class ThetaContext:
    """Nome ``p`` plus the truncation policy for the infinite products."""

    p: complex = 0j
    K: int | None = None
    tol: float = 2.0**-53
    pmax: float = PMAX
    _powers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = complex(self.p)
        if not abs(p) < self.pmax:
            raise ContextError(f"|p| = {abs(p):.3g} must be below pmax = {self.pmax}")
        object.__setattr__(self, "p", p)
        K = self.K if self.K is not None else truncation_order(p)
        if K < 1:
            raise ContextError("truncation order must be positive")
        if p != 0 and K < math.ceil(math.log(self.tol) / math.log(abs(p))):
            raise ContextError(f"K = {K} too small for tolerance {self.tol} at |p| = {abs(p)}")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "_powers", p ** np.arange(K, dtype=complex))

    @cached_property
    def _shifted(self) -> np.ndarray:
        return self._powers * self.p

    @cached_property
    def _powers_ext(self) -> np.ndarray:
        steps = np.full(self.K, np.clongdouble(self.p))
        steps[0] = 1
        return np.cumprod(steps)

    @cached_property
    def _shifted_ext(self) -> np.ndarray:
        return self._powers_ext * np.clongdouble(self.p)


def _finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite {what}: {z}")
    return z


def theta(x: complex, ctx: ThetaContext) -> complex:
    """theta(x; p) for x != 0."""
    x = complex(x)
    if x == 0:
        raise DomainError("theta(x; p) is undefined at x = 0")
    _finite(x, "argument")
    if ctx.p == 0:
        return 1 - x
    val = np.prod(1 - x * ctx._powers) * np.prod(1 - ctx._shifted / x)
    return _finite(complex(val), "theta value")


def theta_ext(x, ctx: ThetaContext) -> np.clongdouble:
    """theta(x; p) carried in the platform's extended precision.

    Heavily cancelling sums lose a few ulps per factor in double precision;
    evaluating the terms here keeps their rounding below the cancellation.
    """
    x = np.clongdouble(x)
    if x == 0:
        raise DomainError("theta(x; p) is undefined at x = 0")
    _finite(complex(x), "argument")
    if ctx.p == 0:
        return 1 - x
    return np.prod(1 - x * ctx._powers_ext) * np.prod(1 - ctx._shifted_ext / x)


def theta_poch(a: complex, q: complex, n: int, ctx: ThetaContext) -> complex:
    """Theta shifted factorial (a; q, p)_n, including negative n.

    For n < 0 this is ``1 / prod_{k=1..-n} theta(a q^{-k}; p)``.
    """
    a, q = complex(a), complex(q)
    if n >= 0:
        val = 1 + 0j
        for k in range(n):
            val *= theta(a * q**k, ctx)
        return val
    den = 1 + 0j
    for k in range(1, -n + 1):
        f = theta(a * q**-k, ctx)
        if abs(f) < POLE_EPS:
            raise PoleError(f"theta(a q^-{k}) vanishes in (a; q, p)_{n}")
        den *= f
    return 1 / den


def qpoch(a: complex, q: complex, k: int | float | None = None, tol: float = 2.0**-53) -> complex:
    """q-Pochhammer (a; q)_k; ``k=None`` or ``math.inf`` gives (a; q)_inf.

    Negative k uses (a; q)_k = (a; q)_inf / (a q^k; q)_inf, i.e.
    ``1 / prod_{j=1..-k} (1 - a q^{-j})``.
    """
    a, q = complex(a), complex(q)
    if k is None or k == math.inf:
        if not abs(q) < 1:
            raise DivergenceError(f"(a; q)_inf diverges for |q| = {abs(q)}")
        val = 1 + 0j
        term = a
        while abs(term) >= tol:
            val *= 1 - term
            term *= q
        return val
    k = int(k)
    if k >= 0:
        val = 1 + 0j
        for j in range(k):
            val *= 1 - a * q**j
        return val
    den = 1 + 0j
    for j in range(1, -k + 1):
        f = 1 - a * q**-j
        if abs(f) < POLE_EPS:
            raise PoleError(f"1 - a q^-{j} vanishes in (a; q)_{k}")
        den *= f
    return 1 / den


def residual(lhs: complex, rhs: complex) -> float:
    """|L - R| / (1 + max(|L|, |R|))."""
    return abs(lhs - rhs) / (1 + max(abs(lhs), abs(rhs)))
