"""Evaluators for theta-function identities and their exact p = 0 companions.

Numeric evaluators take complex parameters and a :class:`ThetaContext`.
Each identity is registered as an :class:`IdentityDescriptor` binding its
parameter schema, side-condition solver, pole data and two evaluators;
:func:`verify_numeric` samples pole-free points and reports the worst
residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .algebra import QT, FactoredQT, RatFunc, qt_poch
from .errors import ConstraintError, DegenerateFactorError, PreconditionError
from .partitions import Partition
from .thetanum import ThetaContext, residual, theta, theta_ext, theta_poch


def _tp(ctx: ThetaContext, q: complex, n: int, *args: complex) -> complex:
    out = 1 + 0j
    for a in args:
        out *= theta_poch(a, q, n, ctx)
    return out


def _subsets(n: int, r: int):
    return combinations(range(n), r)


# ---------------------------------------------------------------------------
# The (n, r) subset-sum identity and its two reformulations
# ---------------------------------------------------------------------------

def thmrn_L(x: Sequence[complex], v, w, q, t, ctx: ThetaContext) -> complex:
    th = lambda z: theta(z, ctx)
    n = len(x)
    total = 0j
    for r in range(n + 1):
        pref = _tp(ctx, q, r, v, w) / _tp(ctx, q, r, q * v / t, q * w / t)
        qr = q**-r
        inner = 0j
        for I in _subsets(n, r):
            term = 1 + 0j
            J = [j for j in range(n) if j not in I]
            for i in I:
                xi = x[i]
                term *= (q * th(v * xi / (t * w)) * th(t * qr * xi / (q * w))
                         / (t * th(v * xi / (q * w)) * th(qr * xi / w)))
            for j in J:
                xj = x[j]
                term *= (th(xj / q) * th(qr * xj / (t * w))
                         / (th(xj / t) * th(qr * xj / (q * w))))
            for i in I:
                for j in J:
                    z = x[i] / x[j]
                    term *= th(t * z / q) * th(q * z) / (th(z) * th(t * z))
            inner += term
        total += pref * inner
    return total


def thmrn_R(x: Sequence[complex], v, w, q, t, ctx: ThetaContext) -> complex:
    th = lambda z: theta(z, ctx)
    n = len(x)
    total = 0j
    for r in range(n + 1):
        pref = _tp(ctx, q, r, v, w) / _tp(ctx, q, r, q * v / t, q * w / t)
        qr = q**r
        inner = 0j
        for I in _subsets(n, r):
            term = 1 + 0j
            J = [j for j in range(n) if j not in I]
            for i in I:
                xi = x[i]
                term *= (q * th(xi / q) * th(qr * v * xi / t**2)
                         / (t * th(xi / t) * th(qr * v * xi / (t * q))))
            for j in J:
                xj = x[j]
                term *= (th(v * xj / (t * w)) * th(qr * v * xj / q)
                         / (th(v * xj / (q * w)) * th(qr * v * xj / t)))
            for i in I:
                for j in J:
                    z = x[j] / x[i]
                    term *= th(t * z / q) * th(q * z) / (th(z) * th(t * z))
            inner += term
        total += pref * inner
    return total


def eval_thmrn_side(side: str, x, v, w, q, t, ctx: ThetaContext) -> complex:
    if side == "L":
        return thmrn_L(x, v, w, q, t, ctx)
    if side == "R":
        return thmrn_R(x, v, w, q, t, ctx)
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def thmrn_pole_args(x, v, w, q, t) -> list[complex]:
    """Arguments of every theta function that appears in a denominator."""
    n = len(x)
    out = []
    for k in range(n):
        out += [q * v / t * q**k, q * w / t * q**k]
    for r in range(n + 1):
        for xi in x:
            out += [v * xi / (q * w), q**-r * xi / w, xi / t, q**-r * xi / (q * w),
                    q**r * v * xi / (t * q), v * xi / (q * w), q**r * v * xi / t]
    for i, a in enumerate(x):
        for j, b in enumerate(x):
            if i != j:
                out += [a / b, t * a / b]
    return out


def thmrn_symm_point(x, v, w, q, t):
    s = v / (q * t * w)
    return [s * xi for xi in x], 1 / v, 1 / w, 1 / q, 1 / t


def thmrn_shift_factor(n, v, w, q, t, ctx) -> complex:
    return (_tp(ctx, q, n, v, w) / _tp(ctx, q, n, q * v / t, q * w / t)) * (q / t) ** n


def thmrn_shift_point(x, v, w, q, t):
    n = len(x)
    return x, q**-n * t / w, q**-n * t / v, q, t


# ---------------------------------------------------------------------------
# Classical identities
# ---------------------------------------------------------------------------

def ww_sum(x, y, ctx) -> complex:
    th = lambda z: theta(z, ctx)
    n = len(x)
    total = 0j
    for i in range(n):
        num = 1 + 0j
        for j in range(n):
            num *= th(x[i] / y[j])
        den = 1 + 0j
        for j in range(n):
            if j != i:
                den *= th(x[i] / x[j])
        total += num / den
    return total


def ww_solve(x, y_free) -> list[complex]:
    """Complete y so that prod x = prod y."""
    px = math.prod(x)
    py = math.prod(y_free) if y_free else 1
    if px == 0 or py == 0:
        raise ConstraintError("product constraint needs nonzero entries")
    return list(y_free) + [px / py]


def gu_sum(x, y, ctx) -> complex:
    th = lambda z: theta(z, ctx)
    n = len(x)
    if n < 2 or len(y) != n - 2:
        raise PreconditionError("need n >= 2 and n - 2 auxiliary parameters")
    total = 0j
    for i in range(n):
        num = x[i]
        for yj in y:
            num *= th(x[i] / yj) * th(x[i] * yj)
        den = 1 + 0j
        for j in range(n):
            if j != i:
                den *= th(x[i] / x[j]) * th(x[i] * x[j])
        total += num / den
    return total


def kn_side(x, y, q, r: int, ctx) -> complex:
    """One side of the rank-exchanging identity at fixed subset size r."""
    return sum(kn_terms(x, y, q, r, ctx), 0j)


def rr_sides(x, y, z, w, ctx) -> tuple[complex, complex]:
    th = lambda u: theta(u, ctx)
    lhs = (th(x * z) * th(x / z) * th(y * w) * th(y / w)
           - th(x * w) * th(x / w) * th(y * z) * th(y / z))
    rhs = (y / z) * th(x * y) * th(x / y) * th(z * w) * th(z / w)
    return lhs, rhs


def nis1_terms(t, v, w, x, ctx) -> tuple[complex, complex, complex, complex]:
    """The four six-theta products (A, B, C, D) with A + B = C + D."""
    th = lambda u: theta(u, ctx)
    A = th(v) * th(t * x) * th(t * w) * th(w * x) * th(t * v * x) * th(t * t * v * w * x)
    B = th(w) * th(x) * th(t * v) * th(t * v * x) * th(t * t * w * x) * th(t * v * w * x)
    C = th(v) * th(x) * th(t * w) * th(t * w * x) * th(t * t * v * x) * th(t * v * w * x)
    D = th(w) * th(t * x) * th(t * v) * th(v * x) * th(t * w * x) * th(t * t * v * w * x)
    return A, B, C, D


def nis1_sides(t, v, w, x, ctx) -> tuple[complex, complex]:
    A, B, C, D = nis1_terms(t, v, w, x, ctx)
    return A + B, C + D


def thmrn_n1_terms(x, v, w, q, t, ctx) -> tuple[complex, complex, complex, complex]:
    """(L_0, L_1, R_0, R_1): the r = 0 and r = 1 terms of both sides at n = 1."""
    th = lambda z: theta(z, ctx)
    pref = _tp(ctx, q, 1, v, w) / _tp(ctx, q, 1, q * v / t, q * w / t)
    L0 = th(x / q) * th(x / (t * w)) / (th(x / t) * th(x / (q * w)))
    L1 = pref * q * th(v * x / (t * w)) * th(t * x / (q * q * w)) / (
        t * th(v * x / (q * w)) * th(x / (q * w)))
    R0 = th(v * x / (t * w)) * th(v * x / q) / (th(v * x / (q * w)) * th(v * x / t))
    R1 = pref * q * th(x / q) * th(q * v * x / t**2) / (t * th(x / t) * th(v * x / t))
    return L0, L1, R0, R1


def kn_terms(x, y, q, r: int, ctx) -> list[complex]:
    """Individual subset terms of :func:`kn_side`, in lexicographic subset order."""
    th = lambda z: theta(z, ctx)
    n = len(x)
    out = []
    for I in _subsets(n, r):
        term = 1 + 0j
        for i in I:
            for yj in y:
                term *= th(x[i] * yj) / th(q * x[i] * yj)
            for j in range(n):
                if j not in I:
                    z = x[i] / x[j]
                    term *= th(q * z) / th(z)
        out.append(term)
    return out


def nis1_term_ratios(route: str, t, v, w, x, aux, ctx) -> list[complex]:
    """Ratios (A, B, C, D) / (terms of the source identity) after substitution.

    ``route="thmrn"`` uses the n = 1 subset identity at
    (t, v, w, x) -> (tq, tv, 1/w, qtx) with ``aux = q``; ``route="kn"`` uses
    the n = 2, r = 1 exchange identity with x = (x1, twx x1),
    y = (v/x1, 1/(tx x1)) and nome t, where ``aux = x1``.  Clearing
    denominators sends one identity to the other exactly when the four
    ratios coincide.
    """
    if route == "thmrn":
        q = aux
        src = thmrn_n1_terms(q * t * x, t * v, 1 / w, q, t * q, ctx)
    elif route == "kn":
        x1 = aux
        X, Y = [x1, t * w * x * x1], [v / x1, 1 / (t * x * x1)]
        src = kn_terms(X, Y, t, 1, ctx) + kn_terms(Y, X, t, 1, ctx)
    else:
        raise ValueError(f"unknown route {route!r}")
    return [a / b for a, b in zip(nis1_terms(t, v, w, x, ctx), src)]


def rosengren_sides(x, v, w, y, q, ctx) -> tuple[complex, complex]:
    """Both sides of the balanced subset-sum identity with z solved from vw = q^{n-1} y z.

    The subset terms can exceed the sum by ten orders of magnitude, so they are
    formed and accumulated in extended precision.
    """
    E = np.clongdouble
    th = lambda u: theta_ext(u, ctx)

    def tp(a, r):
        out = E(1)
        for k in range(r):
            out *= th(a * q**k)
        return out

    n = len(x)
    x = [E(c) for c in x]
    v, w, y, q = E(v), E(w), E(y), E(q)
    z = E(rosengren_solve(n, v, w, y, q))
    lhs = E(0)
    for r in range(n + 1):
        pref = (-1) ** r * q ** (r * (r + 1) // 2 - n * r) * (
            tp(v, r) * tp(w, r) / (tp(y, r) * tp(z, r)))
        inner = E(0)
        for I in _subsets(n, r):
            term = E(1)
            J = [j for j in range(n) if j not in I]
            for i in I:
                term *= th(y * x[i]) * th(z * x[i]) / th(q ** (1 - r) * x[i])
            for j in J:
                term *= th(v * x[j]) * th(w * x[j]) / th(q**-r * x[j])
            for i in I:
                for j in J:
                    term *= th(q * x[i] / x[j]) / th(x[i] / x[j])
            inner += term
        lhs += pref * inner
    rhs = tp(y / v, n) * tp(y / w, n) / (tp(y, n) * tp(y / (v * w), n))
    for xi in x:
        rhs *= th(v * w * xi)
    return complex(lhs), complex(rhs)


def rosengren_solve(n, v, w, y, q) -> complex:
    if y == 0:
        raise ConstraintError("y must be nonzero")
    return v * w / (q ** (n - 1) * y)


def rosengren_pole_args(x, v, w, y, q) -> list[complex]:
    n = len(x)
    z = rosengren_solve(n, v, w, y, q)
    out = []
    for k in range(n):
        out += [y * q**k, z * q**k, y / (v * w) * q**k]
    for r in range(n + 1):
        for xi in x:
            out += [q ** (1 - r) * xi, q**-r * xi]
    for i, a in enumerate(x):
        for j, b in enumerate(x):
            if i != j:
                out.append(a / b)
    return out


# ---------------------------------------------------------------------------
# p = 0 degenerations in exact arithmetic
# ---------------------------------------------------------------------------

def _qpoch_exact(a: Fraction, q: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= 1 - a * q**j
    return out


def thmrn_t_infinity(x: Sequence[Fraction], v, w, q) -> tuple[Fraction, Fraction]:
    """The p = 0 identity as t -> infinity, after rescaling x -> w q x.

    Left: sum_r (v, w; q)_r sum_I prod_{i in I} -q^{1-r} x_i / ((1 - v x_i)(1 - q^{1-r} x_i))
          prod_{j not in I} (1 - w x_j)/(1 - q^{-r} x_j) prod_{i,j} q^{-1}(1 - q x_i/x_j)/(1 - x_i/x_j).
    Right: prod_j (1 - v w x_j)/(1 - v x_j).
    """
    n = len(x)
    lhs = Fraction(0)
    for r in range(n + 1):
        pref = _qpoch_exact(v, q, r) * _qpoch_exact(w, q, r)
        for I in _subsets(n, r):
            J = [j for j in range(n) if j not in I]
            term = pref
            for i in I:
                term *= -q ** (1 - r) * x[i] / ((1 - v * x[i]) * (1 - q ** (1 - r) * x[i]))
            for j in J:
                term *= (1 - w * x[j]) / (1 - q**-r * x[j])
            for i in I:
                for j in J:
                    term *= (1 - q * x[i] / x[j]) / (q * (1 - x[i] / x[j]))
            lhs += term
    rhs = Fraction(1)
    for xj in x:
        rhs *= (1 - v * w * xj) / (1 - v * xj)
    return lhs, rhs


def rosengren_yz_limit(x: Sequence[Fraction], v, w, q) -> tuple[Fraction, Fraction]:
    """The p = 0 balanced identity as (y, z) -> (0, infinity) with y z fixed by balancing."""
    n = len(x)
    lhs = Fraction(0)
    for r in range(n + 1):
        pref = (-1) ** r * q ** (r - n * r) * _qpoch_exact(v, q, r) * _qpoch_exact(w, q, r)
        for I in _subsets(n, r):
            J = [j for j in range(n) if j not in I]
            term = pref
            for i in I:
                term *= x[i] / (1 - q ** (1 - r) * x[i])
            for j in J:
                term *= (1 - v * x[j]) * (1 - w * x[j]) / (1 - q**-r * x[j])
            for i in I:
                for j in J:
                    term *= (1 - q * x[i] / x[j]) / (1 - x[i] / x[j])
            lhs += term
    rhs = Fraction(1)
    for xj in x:
        rhs *= 1 - v * w * xj
    return lhs, rhs


def thmrn_p0(x, v, w, q, t) -> tuple[complex, complex]:
    """Both sides at p = 0 (used to approach the t -> infinity limit numerically)."""
    ctx = ThetaContext(0)
    return thmrn_L(x, v, w, q, t, ctx), thmrn_R(x, v, w, q, t, ctx)


# ---------------------------------------------------------------------------
# The exact subset-sum identity behind the Pieri step
# ---------------------------------------------------------------------------

class _Term:
    """Product of (1 - eps q^a t^b)^e factors that tolerates 1 - q^0 t^0 pairs.

    A zero factor in the numerator cancelled by one in the denominator is a
    removable singularity of the padded sums; any net excess is reported.
    """

    def __init__(self):
        self.factors: dict[tuple[int, int, int], int] = {}

    def mul(self, eps, a, b, e=1):
        key = (eps, a, b)
        self.factors[key] = self.factors.get(key, 0) + e
        return self

    def result(self, head: FactoredQT) -> FactoredQT | None:
        zero = self.factors.pop((1, 0, 0), 0)
        if zero > 0:
            return None
        if zero < 0:
            raise DegenerateFactorError("denominator factor 1 - q^0 t^0 does not cancel")
        return head * FactoredQT(tuple((s, a, b, e) for (s, a, b), e in self.factors.items()))


def _qbin_weight(s: int) -> FactoredQT:
    """(-t; q)_s / (q; q)_s."""
    return qt_poch(-1, 0, 1, s) / qt_poch(1, 1, 0, s)


def final_terms(mu, n: int, r: int, side: str) -> list[FactoredQT]:
    """Nonzero summands of one side of the exact subset-sum identity, as factored products."""
    mu = Partition(mu)
    if n < len(mu):
        raise PreconditionError(f"need n >= l(mu) = {len(mu)}")
    m = [mu.part(i) for i in range(1, n + 1)]
    out = []
    for s in range(r + 1):
        k = r - s
        if k > n:
            continue
        head = _qbin_weight(s)
        for I0 in _subsets(n, k):
            I = [i + 1 for i in I0]
            J = [j for j in range(1, n + 1) if j not in I]
            T = _Term()
            if side == "L":
                for i in I:
                    mi = m[i - 1]
                    T.mul(1, n - i, mi).mul(-1, n - i + 1, mi - 1, -1)
                for i in I:
                    for j in J:
                        d = m[i - 1] - m[j - 1]
                        T.mul(-1, j - i + 1, d - 1).mul(1, j - i - 1, d)
                        T.mul(1, j - i, d, -1).mul(-1, j - i, d - 1, -1)
            elif side == "R":
                for i in I:
                    mi = m[i - 1]
                    T.mul(-1, n - i + s, mi + 1).mul(1, n - i + s + 1, mi, -1)
                for j in J:
                    mj = m[j - 1]
                    T.mul(-1, n - j + s + 1, mj - 1).mul(1, n - j, mj)
                    T.mul(1, n - j + s, mj, -1).mul(-1, n - j + 1, mj - 1, -1)
                for i in I:
                    for j in J:
                        d = m[i - 1] - m[j - 1]
                        T.mul(-1, j - i - 1, d + 1).mul(1, j - i + 1, d)
                        T.mul(1, j - i, d, -1).mul(-1, j - i, d + 1, -1)
            else:
                raise ValueError(f"side must be 'L' or 'R', got {side!r}")
            term = T.result(head)
            if term is not None:
                out.append(term)
    return out


def final_sides(mu, n: int, r: int) -> tuple[RatFunc, RatFunc]:
    sides = []
    for side in ("L", "R"):
        total = QT.zero()
        for term in final_terms(mu, n, r, side):
            total = total + term.to_ratfunc()
        sides.append(total)
    return sides[0], sides[1]


def verify_final_exact(mu, n: int, r: int) -> bool:
    """Exact equality of both sides in Q(q,t); ``n > l(mu)`` pads mu with zeros."""
    lhs, rhs = final_sides(mu, n, r)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamSpec:
    """A sampled parameter: a scalar, or a vector whose length depends on n."""

    name: str
    length: Callable[[int], int] | None = None


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    summary: str
    params: tuple[ParamSpec, ...]
    evaluate: Callable[[dict, ThetaContext], tuple]
    pole_args: Callable[[dict], list]
    solve: Callable[[dict], dict] = lambda P: P
    constraint_residual: Callable[[dict], float] = lambda P: 0.0
    n_range: tuple[int, int] = (0, 0)
    default_n: int = 0
    extra: dict = field(default_factory=dict)
    probe: Callable[[dict, ThetaContext], object] | None = None


def _vec(k):
    return lambda n: k(n)


def _thmrn_eval(P, ctx):
    return (thmrn_L(P["x"], P["v"], P["w"], P["q"], P["t"], ctx),
            thmrn_R(P["x"], P["v"], P["w"], P["q"], P["t"], ctx))


def _thmrn_poles(P):
    return thmrn_pole_args(P["x"], P["v"], P["w"], P["q"], P["t"])


def _symm_eval(P, ctx):
    args = (P["x"], P["v"], P["w"], P["q"], P["t"])
    return thmrn_L(*args, ctx), thmrn_L(*thmrn_symm_point(*args), ctx)


def _symm_poles(P):
    args = (P["x"], P["v"], P["w"], P["q"], P["t"])
    return thmrn_pole_args(*args) + thmrn_pole_args(*thmrn_symm_point(*args))


def _shift_eval(P, ctx):
    args = (P["x"], P["v"], P["w"], P["q"], P["t"])
    n = len(P["x"])
    fac = thmrn_shift_factor(n, P["v"], P["w"], P["q"], P["t"], ctx)
    return thmrn_L(*args, ctx), thmrn_L(*thmrn_shift_point(*args), ctx) * fac


def _shift_poles(P):
    args = (P["x"], P["v"], P["w"], P["q"], P["t"])
    return thmrn_pole_args(*args) + thmrn_pole_args(*thmrn_shift_point(*args))


def _ww_solve(P):
    P = dict(P)
    P["y"] = ww_solve(P["x"], P["y"][:-1])
    return P


def _pairs(x):
    return [(a, b) for i, a in enumerate(x) for j, b in enumerate(x) if i != j]


def _ww_poles(P):
    return [a / b for a, b in _pairs(P["x"])]


def _gu_poles(P):
    x = P["x"]
    out = [a / b for a, b in _pairs(x)]
    out += [a * b for a, b in _pairs(x)]
    return out


def _kn_eval(P, ctx):
    n = len(P["x"])
    rs = range(n + 1) if P.get("r") is None else [int(P["r"])]
    lhs = tuple(kn_side(P["x"], P["y"], P["q"], r, ctx) for r in rs)
    rhs = tuple(kn_side(P["y"], P["x"], P["q"], r, ctx) for r in rs)
    return lhs, rhs


def _kn_poles(P):
    x, y, q = P["x"], P["y"], P["q"]
    out = [q * a * b for a in x for b in y]
    out += [a / b for a, b in _pairs(x)]
    out += [a / b for a, b in _pairs(y)]
    return out


def _rosengren_eval(P, ctx):
    return rosengren_sides(P["x"], P["v"], P["w"], P["y"], P["q"], ctx)


def _rosengren_poles(P):
    return rosengren_pole_args(P["x"], P["v"], P["w"], P["y"], P["q"])


def _rosengren_constraint(P):
    n = len(P["x"])
    z = rosengren_solve(n, P["v"], P["w"], P["y"], P["q"])
    lhs, rhs = P["v"] * P["w"], P["q"] ** (n - 1) * P["y"] * z
    return abs(lhs - rhs) / max(abs(lhs), 1e-300)


def _ww_constraint(P):
    px, py = math.prod(P["x"]), math.prod(P["y"])
    return abs(px - py) / max(abs(px), 1e-300)


_X = ParamSpec("x", lambda n: n)
_THMRN_PARAMS = (_X, ParamSpec("v"), ParamSpec("w"), ParamSpec("q"), ParamSpec("t"))

REGISTRY: dict[str, IdentityDescriptor] = {}


def _register(d: IdentityDescriptor):
    REGISTRY[d.id] = d
    return d


_register(IdentityDescriptor(
    "thmrn", "subset-sum theta identity in x_1..x_n with parameters v, w, q, t",
    _THMRN_PARAMS, _thmrn_eval, _thmrn_poles, n_range=(0, 6), default_n=3))
_register(IdentityDescriptor(
    "thmrn-symm", "left side invariant under (x, v, w, q, t) -> (vx/qtw, 1/v, 1/w, 1/q, 1/t)",
    _THMRN_PARAMS, _symm_eval, _symm_poles, n_range=(0, 6), default_n=3))
_register(IdentityDescriptor(
    "thmrn-shift", "left side under (v, w) -> (q^-n t/w, q^-n t/v) with theta-factorial prefactor",
    _THMRN_PARAMS, _shift_eval, _shift_poles, n_range=(0, 6), default_n=3))
_register(IdentityDescriptor(
    "ww", "sum_i prod_j theta(x_i/y_j) / prod_{j!=i} theta(x_i/x_j) = 0 when prod x = prod y",
    (_X, ParamSpec("y", lambda n: n)),
    lambda P, ctx: (ww_sum(P["x"], P["y"], ctx), 0j), _ww_poles,
    solve=_ww_solve, constraint_residual=_ww_constraint, n_range=(1, 8), default_n=3))
_register(IdentityDescriptor(
    "gu", "sum_i x_i prod_j theta(x_i/y_j) theta(x_i y_j) / prod theta(x_i/x_j) theta(x_i x_j) = 0",
    (_X, ParamSpec("y", lambda n: n - 2)),
    lambda P, ctx: (gu_sum(P["x"], P["y"], ctx), 0j), _gu_poles,
    n_range=(2, 8), default_n=3))
_register(IdentityDescriptor(
    "kn", "fixed-size subset sums exchanging the roles of x and y",
    (_X, ParamSpec("y", lambda n: n), ParamSpec("q")), _kn_eval, _kn_poles,
    n_range=(1, 6), default_n=3))
_register(IdentityDescriptor(
    "rr", "three-term Riemann relation",
    (ParamSpec("x"), ParamSpec("y"), ParamSpec("z"), ParamSpec("w")),
    lambda P, ctx: rr_sides(P["x"], P["y"], P["z"], P["w"], ctx), lambda P: []))
_register(IdentityDescriptor(
    "nis1", "four-term identity of six-theta products",
    (ParamSpec("t"), ParamSpec("v"), ParamSpec("w"), ParamSpec("x")),
    lambda P, ctx: nis1_sides(P["t"], P["v"], P["w"], P["x"], ctx), lambda P: []))
_register(IdentityDescriptor(
    "rosengren", "balanced subset-sum identity, z fixed by v w = q^(n-1) y z",
    (_X, ParamSpec("v"), ParamSpec("w"), ParamSpec("y"), ParamSpec("q")),
    _rosengren_eval, _rosengren_poles, constraint_residual=_rosengren_constraint,
    n_range=(0, 6), default_n=3))


def eval_identity(id_: str | IdentityDescriptor, point: dict, ctx: ThetaContext) -> tuple:
    d = REGISTRY[id_] if isinstance(id_, str) else id_
    P = d.solve(point)
    if d.constraint_residual(P) >= 1e-12:
        raise ConstraintError(f"side condition violated for {d.id}")
    return d.evaluate(P, ctx)


def point_residual(lhs, rhs) -> float:
    """Residual of scalar sides, or the worst residual over paired tuples."""
    if isinstance(lhs, tuple):
        return max((residual(a, b) for a, b in zip(lhs, rhs)), default=0.0)
    return residual(lhs, rhs)


def verify_numeric(id_: str, trials: int, seed: int, tol: float, n: int | None = None,
                   extra: dict | None = None) -> dict:
    """Sample pole-free points and report the worst residual; see the CLI sampler."""
    from .cli.sampler import sample_identity_point
    d = REGISTRY[id_] if isinstance(id_, str) else id_
    n = d.default_n if n is None else n
    worst, worst_point = -1.0, None
    for k in range(trials):
        P, ctx = sample_identity_point(d, n, seed, k, extra=extra)
        lhs, rhs = d.evaluate(P, ctx)
        res = point_residual(lhs, rhs)
        if res != res:
            res = math.inf
        if res > worst:
            worst, worst_point = res, {"trial": k, **_jsonable(P), "p": _c(ctx.p)}
    worst = max(worst, 0.0)
    return {"id": d.id, "n": n, "trials": trials, "seed": seed, "tol": tol,
            "max_residual": worst, "worst_point": worst_point, "pass": worst < tol}


def _c(z: complex):
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(P: dict) -> dict:
    out = {}
    for k, v in P.items():
        if isinstance(v, (list, tuple)):
            out[k] = [_c(a) for a in v]
        elif isinstance(v, complex) or isinstance(v, float):
            out[k] = _c(v)
        else:
            out[k] = v
    return out
