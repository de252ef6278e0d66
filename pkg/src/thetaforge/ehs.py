"""Multiple elliptic hypergeometric series and their p = 0 companions.

Every evaluator takes an :class:`Ops` object that fixes the base ``q`` and the
arithmetic: ``Ops.elliptic(q, ctx)`` works with complex theta functions,
``Ops.exact(q)`` with :class:`fractions.Fraction` and ``theta(x) = 1 - x``.
Denominator factors go through a guard so that near-poles raise
:class:`PoleError` instead of producing garbage.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import PoleError, PreconditionError, VandermondeError
from .thetanum import ThetaContext, residual, theta

#: elliptic-mode floor for any single denominator theta factor
GUARD = 1e-6


class Ops:
    """Arithmetic for one of the two evaluation modes."""

    def __init__(self, q, ctx: ThetaContext | None, exact: bool, guard: float = GUARD):
        self.q = q
        self.ctx = ctx
        self.exact = exact
        self.guard = guard

    @classmethod
    def elliptic(cls, q: complex, ctx: ThetaContext, guard: float = GUARD) -> "Ops":
        return cls(complex(q), ctx, False, guard)

    @classmethod
    def exact_mode(cls, q) -> "Ops":
        return cls(Fraction(q), None, True)

    @property
    def one(self):
        return Fraction(1) if self.exact else 1 + 0j

    def th(self, x):
        if self.exact:
            return 1 - x
        return theta(x, self.ctx)

    def _check(self, val, what):
        if (val == 0) if self.exact else (abs(val) < self.guard):
            raise PoleError(f"vanishing denominator factor {what}")
        return val

    def thd(self, x):
        """theta(x) destined for a denominator."""
        return self._check(self.th(x), f"theta({x})")

    def pf(self, a, k: int):
        """(a; q, p)_k in a numerator."""
        q = self.q
        if k >= 0:
            val = self.one
            for j in range(k):
                val *= self.th(a * q**j)
            return val
        den = self.one
        for j in range(1, -k + 1):
            den *= self._check(self.th(a * q**-j), f"theta({a} q^-{j})")
        return 1 / den

    def pd(self, a, k: int):
        """(a; q, p)_k in a denominator; every theta factor is guarded."""
        q = self.q
        if k >= 0:
            val = self.one
            for j in range(k):
                val *= self._check(self.th(a * q**j), f"theta({a} q^{j})")
            return val
        # (a)_k = 1 / prod_{j=1..-k} theta(a q^-j); it sits in a denominator,
        # so only a vanishing product is a problem
        den = self.one
        for j in range(1, -k + 1):
            den *= self.th(a * q**-j)
        if den == 0:
            raise PoleError(f"({a}; q)_{k} is infinite")
        return 1 / den

    def ratio(self, nums: Sequence, dens: Sequence, k: int):
        val = self.one
        for a in nums:
            val *= self.pf(a, k)
        for a in dens:
            val /= self.pd(a, k)
        return val


def _box(m):
    return product(*(range(mi + 1) for mi in m))


def _simplex(N: int, n: int):
    return (k for k in product(range(n + 1), repeat=N) if sum(k) <= n)


# ---------------------------------------------------------------------------
# V_m and the transformation
# ---------------------------------------------------------------------------

def vm_term(a, b, c, d, t, m, k, ops: Ops):
    q = ops.q
    N = len(t)
    K = sum(k)
    term = (q / b) ** ((N + 1) * K) * ops.ratio((c, d), (c * q / b, d * q / b), K)
    for i in range(N):
        ati = a * t[i]
        term *= ops.th(ati * q ** (k[i] + K)) / ops.thd(ati)
        term *= ops.ratio((ati * b / c, ati * b / d), (ati * q / c, ati * q / d), k[i])
        term *= ops.ratio((ati, ati * b * q ** m[i]), (ati * q / b, ati * q ** (m[i] + 1)), K)
        term *= ops.pf(ati * q / b, k[i] + K) / ops.pd(ati * b, k[i] + K)
        for j in range(N):
            u = t[i] / t[j]
            term *= ops.ratio((q ** -m[j] * u, b * u), (q ** (1 - m[j]) * u / b, q * u), k[i])
            term *= ops.pf(q * u, k[i] - k[j]) / ops.pd(b * u, k[i] - k[j])
    return term


def eval_Vm(a, b, c, d, t: Sequence, m: Sequence[int], ops: Ops):
    """Hyper-rectangle sum over 0 <= k_i <= m_i."""
    if len(t) != len(m) or any(mi < 0 for mi in m):
        raise PreconditionError("t and m must have equal length and m >= 0")
    return sum((vm_term(a, b, c, d, t, m, k, ops) for k in _box(m)), ops.one * 0)


def vm_succinct_term(a, b, c, d, t, m, k, ops: Ops):
    q = ops.q
    N = len(t)
    T = list(t) + [1 / a]
    kk = list(k) + [-sum(k)]
    tN = T[N]
    term = ops.one
    for i in range(N + 1):
        u = T[i] / tN
        term *= ops.ratio((b * u / c, b * u / d), (q * u / c, q * u / d), kk[i])
        for j in range(N):
            v = T[i] / T[j]
            term *= ops.ratio((q ** -m[j] * v, b * v), (q ** (1 - m[j]) * v / b, q * v), kk[i])
        for j in range(N + 1):
            v = T[i] / T[j]
            term *= ops.pf(q * v, kk[i] - kk[j]) / ops.pd(b * v, kk[i] - kk[j])
    return term


def eval_Vm_succinct(a, b, c, d, t, m, ops: Ops):
    """The same series written with t_{N+1} = 1/a and k_{N+1} = -|k|."""
    return sum((vm_succinct_term(a, b, c, d, t, m, k, ops) for k in _box(m)), ops.one * 0)


def thmvst_dual(a, b, c, d, t, m, q):
    """(a_hat, s) with a_hat = cd/ab and s_i t_i = q^{-m_i}."""
    return c * d / (a * b), [q ** -mi / ti for ti, mi in zip(t, m)]


def thmvst_sides(a, b, c, d, t, m, ops: Ops):
    q = ops.q
    ah, s = thmvst_dual(a, b, c, d, t, m, q)
    lhs = eval_Vm(a, b, c, d, t, m, ops)
    rhs = eval_Vm(ah, b, c, d, s, m, ops)
    for ti, si, mi in zip(t, s, m):
        rhs *= ops.ratio((a * q * ti, ah * q * si / c, ah * q * si / d, a * q * ti / (c * d)),
                         (ah * q * si, a * q * ti / c, a * q * ti / d, ah * q * si / (c * d)), mi)
    return lhs, rhs


def verify_thmVst(a, b, c, d, t, m, ops: Ops):
    """Residual (elliptic) or exact equality (p = 0) of the transformation."""
    lhs, rhs = thmvst_sides(a, b, c, d, t, m, ops)
    return lhs == rhs if ops.exact else residual(lhs, rhs)


# ---------------------------------------------------------------------------
# One-dimensional transformation and its Jackson degeneration
# ---------------------------------------------------------------------------

def new_sum(a, b, c, d, n: int, ops: Ops):
    q = ops.q
    total = ops.one * 0
    for k in range(n + 1):
        term = ops.th(a * q ** (2 * k)) / ops.thd(a)
        term *= ops.ratio((a, b, c, d, a * b / c, a * b / d, a * b * q**n, q**-n),
                          (q, a * q / b, a * q / c, a * q / d, c * q / b, d * q / b,
                           q ** (1 - n) / b, a * q ** (n + 1)), k)
        term *= ops.pf(a * q / b, 2 * k) / ops.pd(a * b, 2 * k) * (q / b) ** (2 * k)
        total += term
    return total


def new_sides(a, b, c, d, n: int, ops: Ops):
    q = ops.q
    ah = q**-n * c * d / (a * b)
    lhs = new_sum(a, b, c, d, n, ops)
    rhs = new_sum(ah, b, c, d, n, ops) * ops.ratio(
        (a * q, ah * q / c, ah * q / d, a * q / (c * d)),
        (ah * q, a * q / c, a * q / d, ah * q / (c * d)), n)
    return lhs, rhs


def verify_new(a, b, c, d, n: int, ops: Ops):
    lhs, rhs = new_sides(a, b, c, d, n, ops)
    return lhs == rhs if ops.exact else residual(lhs, rhs)


def jackson_6w5(a, c, d, n: int, q) -> tuple[Fraction, Fraction]:
    """Terminating very-well-poised 6phi5 sum and its closed product."""
    ops = Ops.exact_mode(q)
    q = ops.q
    lhs = Fraction(0)
    for k in range(n + 1):
        lhs += ((1 - a * q ** (2 * k)) / ops._check(1 - a, "1 - a")
                * ops.ratio((a, c, d, q**-n), (q, a * q / c, a * q / d, a * q ** (n + 1)), k)
                * (a * q ** (n + 1) / (c * d)) ** k)
    rhs = ops.ratio((a * q, a * q / (c * d)), (a * q / c, a * q / d), n)
    return lhs, rhs


def vandermonde_ratio(t, k, q):
    """Delta(t q^k) / Delta(t)."""
    val = Fraction(1) if isinstance(q, Fraction) else 1
    N = len(t)
    for i in range(N):
        for j in range(i + 1, N):
            den = t[i] - t[j]
            if den == 0:
                raise VandermondeError(f"t_{i + 1} = t_{j + 1}")
            val *= (t[i] * q ** k[i] - t[j] * q ** k[j]) / den
    return val


def cornew_sides(a, c, d, t, m, q):
    """Exact multi-sum and product of the multivariable Jackson summation."""
    ops = Ops.exact_mode(q)
    q = ops.q
    a, c, d = map(Fraction, (a, c, d))
    t = [Fraction(x) for x in t]
    N, M = len(t), sum(m)
    lhs = Fraction(0)
    for k in _box(m):
        K = sum(k)
        e2 = sum(k[i] * k[j] for i in range(N) for j in range(i + 1, N))
        term = vandermonde_ratio(t, k, q) * ops.ratio((c, d), (), K) * q ** -e2
        for i in range(N):
            ati = a * t[i]
            term *= (1 - ati * q ** (k[i] + K)) / ops._check(1 - ati, "1 - a t_i")
            term /= ops.pd(ati * q / c, k[i]) * ops.pd(ati * q / d, k[i])
            term *= ops.pf(ati, K) / ops.pd(ati * q ** (m[i] + 1), K)
            for j in range(N):
                term *= ops.pf(q ** -m[j] * t[i] / t[j], k[i]) / ops.pd(q * t[i] / t[j], k[i])
            term *= (ati * q ** (M + 1) / (c * d)) ** k[i]
        lhs += term
    rhs = Fraction(1)
    for i in range(N):
        ati = a * t[i]
        rhs *= ops.ratio((ati * q, ati * q / (c * d)), (ati * q / c, ati * q / d), m[i])
    return lhs, rhs


def verify_cornew(a, c, d, q, t, m) -> bool:
    lhs, rhs = cornew_sides(a, c, d, t, m, q)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Simplex form
# ---------------------------------------------------------------------------

def wn_sum(a, b, c, d, s, t, n: int, ops: Ops):
    q = ops.q
    N = len(t)
    total = ops.one * 0
    for k in _simplex(N, n):
        K = sum(k)
        term = ops.ratio((c, q**-n), (c * q / b, q ** (1 - n) / b), K) * (q / b) ** ((N + 1) * K)
        for i in range(N):
            ati = a * t[i]
            term *= ops.th(ati * q ** (k[i] + K)) / ops.thd(ati)
            term *= ops.ratio((ati * b / c, ati * b * q**n), (ati * q / c, ati * q ** (n + 1)), k[i])
            term *= ops.ratio((ati, a * b / (d * s[i])), (ati * q / b, a * q / (d * s[i])), K)
            term *= ops.pf(ati * q / b, k[i] + K) / ops.pd(ati * b, k[i] + K)
            for j in range(N):
                u = t[i] / t[j]
                term *= ops.ratio((d * t[i] * s[j], b * u), (d * q * t[i] * s[j] / b, q * u), k[i])
                term *= ops.pf(q * u, k[i] - k[j]) / ops.pd(b * u, k[i] - k[j])
        total += term
    return total


def wn_sides(a, b, c, d, s, t, n: int, ops: Ops):
    q = ops.q
    ah = c * d * q**-n / (a * b)
    lhs = wn_sum(a, b, c, d, s, t, n, ops)
    rhs = wn_sum(ah, b, c, d, t, s, n, ops)
    for si, ti in zip(s, t):
        rhs *= ops.ratio((a * q * ti, ah * q / (d * ti), ah * q * si / c, a * q / (c * d * si)),
                         (ah * q * si, a * q / (d * si), a * q * ti / c, ah * q / (c * d * ti)), n)
    return lhs, rhs


def verify_Wn(a, b, c, d, s, t, n: int, ops: Ops):
    lhs, rhs = wn_sides(a, b, c, d, s, t, n, ops)
    return lhs == rhs if ops.exact else residual(lhs, rhs)


# ---------------------------------------------------------------------------
# The triangular matrix pair and the double multi-sum (p = 0 only)
# ---------------------------------------------------------------------------

def det(rows: list[list]):
    """Cofactor expansion along the first row; intended for N <= 3."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det(minor)
    return total


def _det_block(a, b, t, e, M, m, q, ops):
    """det[(t_i q^{e_i})^{N-j} (1 - b^{N-j+1} (1 - a t_i q^{e_i+M})/(1 - a b t_i q^{e_i+M})
    prod_r (t_i q^{e_i} - t_r q^{m_r})/(b t_i q^{e_i} - t_r q^{m_r}))]."""
    N = len(t)
    rows = []
    for i in range(N):
        x = t[i] * q ** e[i]
        g = (1 - a * x * q**M) / ops._check(1 - a * b * x * q**M, "1 - a b t q^(k+|m|)")
        for r in range(N):
            g *= (x - t[r] * q ** m[r]) / ops._check(b * x - t[r] * q ** m[r], "b t q^k - t q^m")
        rows.append([x ** (N - j) * (1 - b ** (N - j + 1) * g) for j in range(1, N + 1)])
    return det(rows)


def _exact_setup(q, *vals):
    ops = Ops.exact_mode(q)
    return (ops, *[[Fraction(x) for x in v] if isinstance(v, (list, tuple)) else Fraction(v)
                   for v in vals])


def f_k(k, a, b, c, d, t, q):
    ops, a, b, c, d, t = _exact_setup(q, a, b, c, d, list(t))
    q = ops.q
    N, K = len(t), sum(k)
    val = q ** (N * K) * b ** (-(N + 1) * K) * ops.ratio((c, d), (c * q / b, d * q / b), K)
    for i in range(N):
        ati = a * t[i]
        val *= ops.ratio((ati * b / c, ati * b / d), (ati * q / c, ati * q / d), k[i])
        val *= ops.pf(ati, K) / ops.pd(ati * q / b, K)
        val *= ops.pf(ati * q / b, k[i] + K) / ops.pd(ati * b, k[i] + K)
        for j in range(N):
            u = t[i] / t[j]
            val *= ops.pf(b * u, k[i]) / ops.pd(q * u, k[i])
            val *= ops.pf(q * u, k[i] - k[j]) / ops.pd(b * u, k[i] - k[j])
    return val


def M_entry(m, k, a, b, c, d, t, q):
    ops, a, b, c, d, t = _exact_setup(q, a, b, c, d, list(t))
    q = ops.q
    N, K = len(t), sum(k)
    val = q**K
    for i in range(N):
        ati = a * t[i]
        val *= (1 - ati * q ** (k[i] + K)) / ops._check(1 - ati, "1 - a t_i")
        val *= ops.pf(ati * b * q ** m[i], K) / ops.pd(ati * q ** (1 + m[i]), K)
        val *= ops.ratio((ati * q / c, ati * q / d), (ati * q, ati * q / (c * d)), m[i])
        for j in range(N):
            u = t[i] / t[j]
            val *= ops.pf(q ** -m[j] * u, k[i]) / ops.pd(q ** (1 - m[j]) * u / b, k[i])
    return val


def Minv_entry(m, k, a, b, c, d, t, q):
    ops, a, b, c, d, t = _exact_setup(q, a, b, c, d, list(t))
    q = ops.q
    N, K, Mm = len(t), sum(k), sum(m)
    dt = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            if t[i] == t[j]:
                raise VandermondeError(f"t_{i + 1} = t_{j + 1}")
            dt *= t[i] - t[j]
    dtm = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            dtm *= t[i] * q ** m[i] - t[j] * q ** m[j]
    val = dtm / dt**2 * q ** (K - Mm)
    for i in range(N):
        ati = a * t[i]
        val *= ops.pf(ati, k[i] + Mm) / ops.pd(ati * b, k[i] + Mm)
        val *= ops.ratio((ati * b, ati * q / (c * d)), (ati * q / c, ati * q / d), k[i])
        for j in range(N):
            u = t[i] / t[j]
            val *= ops.ratio((q ** -m[j] * u, b * u), (q * u, q ** -m[j] * b * u), k[i])
            val *= ops.pf(q * u / b, m[i]) / ops.pd(q * u, m[i])
    return val * _det_block(a, b, t, k, Mm, m, q, ops)


def matrix_pair(which: str, m, k, a, b, c, d, t, q):
    """One entry of f_k, M_{mk} or its inverse, exactly; entries with k not <= m are 0."""
    if which == "f_k":
        return f_k(k, a, b, c, d, t, q)
    if len(m) != len(k):
        raise PreconditionError("m and k must have equal length")
    if any(ki > mi for ki, mi in zip(k, m)):
        return Fraction(0)
    if which == "M":
        return M_entry(m, k, a, b, c, d, t, q)
    if which == "Minv":
        return Minv_entry(m, k, a, b, c, d, t, q)
    raise ValueError(f"unknown matrix {which!r}")


def _interval(k, m):
    return product(*(range(ki, mi + 1) for ki, mi in zip(k, m)))


def matrix_inverse_defect(m, k, a, b, c, d, t, q) -> Fraction:
    """sum_{k <= l <= m} M_{ml} Minv_{lk} - delta_{mk}."""
    total = Fraction(0)
    for l in _interval(k, m):
        total += M_entry(m, l, a, b, c, d, t, q) * Minv_entry(l, k, a, b, c, d, t, q)
    return total - (1 if tuple(m) == tuple(k) else 0)


def mf_sum(m, a, b, c, d, t, q) -> Fraction:
    """sum_k M_{mk} f_k, the matrix form of the p = 0 transformation."""
    return sum((M_entry(m, k, a, b, c, d, t, q) * f_k(k, a, b, c, d, t, q) for k in _box(m)),
               Fraction(0))


def cordmsum_lhs(a, b, c, d, t, m, q) -> Fraction:
    ops, a, b, c, d, t = _exact_setup(q, a, b, c, d, list(t))
    q = ops.q
    N, Mm = len(t), sum(m)
    total = Fraction(0)
    ranges = [[(l, k) for l in range(mi + 1) for k in range(mi + 1 - l)] for mi in m]
    for lk in product(*ranges):
        l = [x[0] for x in lk]
        k = [x[1] for x in lk]
        K, L = sum(k), sum(l)
        term = ops.ratio((c, d), (c * q / b, d * q / b), K) * q ** (L + N * K) * b ** ((1 - N) * K)
        for i in range(N):
            ati = a * t[i]
            e = l[i] + k[i]
            term *= ops.pf(ati * q**Mm, e) / ops.pd(ati * b * q**Mm, e)
            term *= ops.pf(ati * q / (c * d), e - K) / ops.pd(ati * b / (c * d), e - K)
            term *= ops.ratio((ati * b / c, ati * b / d), (ati * q / c, ati * q / d), l[i])
            term *= (ati * b - c * d * q ** (K - l[i])) / ops._check(
                ati * b - c * d * q ** (K - e), "a b t - c d q^(|k|-l-k)")
            term *= ops.pf(c * d / ati, K) / ops.pd(c * d * q / (ati * b), K)
            term *= (ops.pf(c * d * q ** (1 - l[i] + K - k[i]) / (ati * b * b), k[i])
                     / ops.pd(c * d * q ** (-l[i] + K - k[i]) / ati, k[i]))
            for j in range(N):
                u = t[i] / t[j]
                term *= ops.pf(q ** -m[j] * u, e) / ops.pd(q ** -m[j] * b * u, e)
                term *= ops.pf(b * u, l[i]) / ops.pd(q * u, l[i])
                term *= ops.pf(q ** (l[i] - l[j]) * b * u, k[i]) / ops.pd(q ** (1 + l[i] - l[j]) * u, k[i])
        dt = Fraction(1)
        for i in range(N):
            for j in range(i + 1, N):
                if t[i] == t[j]:
                    raise VandermondeError(f"t_{i + 1} = t_{j + 1}")
                dt *= t[i] - t[j]
        e = [l[i] + k[i] for i in range(N)]
        total += term / dt * _det_block(a, b, t, e, Mm, m, q, ops)
    return total


def cordmsum_rhs(a, b, c, d, t, m, q, pair_range: str = "i<j<N",
                 b_power: str = "|m|") -> Fraction:
    """Closed form of the double multi-sum.

    ``pair_range`` chooses the range of the (q t_i / b t_j)_{m_i - m_j} product
    (``"i<j<N"`` or ``"i<j<=N"``); ``b_power`` chooses the overall power of b,
    ``b^(-2|m|)`` for ``"|m|"`` or ``b^(-2 sum_i i m_i)`` for ``"weighted"``.
    """
    ops, a, b, c, d, t = _exact_setup(q, a, b, c, d, list(t))
    q = ops.q
    N, Mm = len(t), sum(m)
    jmax = {"i<j<N": N - 1, "i<j<=N": N}[pair_range]
    bexp = {"|m|": Mm, "weighted": sum((i + 1) * m[i] for i in range(N))}[b_power]
    val = q ** sum((i + 2) * m[i] for i in range(N)) * b ** (-2 * bexp)
    for i in range(N):
        for j in range(N):
            u = t[i] / t[j]
            val *= ops.pf(b * u, m[i]) / ops.pd(q * u / b, m[i])
    for i in range(N):
        for j in range(i + 1, jmax):
            u = t[i] / t[j]
            val *= ops.pf(q * u / b, m[i] - m[j]) / ops.pd(b * u, m[i] - m[j])
    val *= ops.ratio((c, d), (c * q / b, d * q / b), Mm)
    for i in range(N):
        ati = a * t[i]
        val *= ops.ratio((ati * b / c, ati * b / d), (ati * q / c, ati * q / d), m[i])
        val *= ops.pf(ati * b, Mm) / ops.pd(ati * q / b, Mm)
        val *= ops.pf(ati * q / b, m[i] + Mm) / ops.pd(ati * b, m[i] + Mm)
    return val


def verify_cordmsum(a, b, c, d, t, m, q, pair_range: str = "i<j<=N",
                    b_power: str = "weighted") -> bool:
    """Exact check; the defaults are the reading that holds for every N."""
    lhs = cordmsum_lhs(a, b, c, d, t, m, q)
    return lhs == cordmsum_rhs(a, b, c, d, t, m, q, pair_range, b_power)


# ---------------------------------------------------------------------------
# N = 1 elliptic double sum
# ---------------------------------------------------------------------------

def elliptic_ext_n1_sides(a, b, c, d, m: int, ops: Ops):
    q = ops.q
    lhs = ops.one * 0
    for l in range(m + 1):
        for k in range(m + 1 - l):
            term = ops.th(a * b * q ** (2 * l + 2 * k)) / ops.thd(a * b)
            term *= ops.ratio((a * q**m, q**-m), (b * q ** (1 - m), a * b * q ** (m + 1)), l + k)
            term *= ops.ratio((b, a * b / c, a * b / d, a * q / (c * d)),
                              (q, a * q / c, a * q / d, a * b / (c * d)), l) * q**l
            term *= ops.th(c * d * q ** (k - l) / (a * b)) / ops.thd(c * d * q**-l / (a * b))
            term *= ops.pf(c * d * q ** (1 - l) / (a * b * b), k) / ops.pd(c * d * q**-l / a, k)
            term *= ops.ratio((b, c, d, c * d / a), (q, c * q / b, d * q / b, c * d * q / (a * b)), k) * q**k
            lhs += term
    rhs = ops.pf(a * q / b, 2 * m) / ops.pd(a * b, 2 * m)
    rhs *= ops.ratio((a * b * q, b, c, d, a * b / c, a * b / d),
                     (1 / b, a * q / b, a * q / c, a * q / d, c * q / b, d * q / b), m)
    rhs *= (q / (b * b)) ** m
    return lhs, rhs


def verify_elliptic_ext_N1(a, b, c, d, m: int, ops: Ops):
    lhs, rhs = elliptic_ext_n1_sides(a, b, c, d, m, ops)
    return lhs == rhs if ops.exact else residual(lhs, rhs)


# ---------------------------------------------------------------------------
# Principal specialisation of the subset identity
# ---------------------------------------------------------------------------

def principal_ladder(t: Sequence, m: Sequence[int], q) -> list:
    """(t_1, t_1 q, ..., t_1 q^{m_1-1}, ..., t_N q^{m_N-1})."""
    return [ti * q**j for ti, mi in zip(t, m) for j in range(mi)]


def principal_specialize_sides(a, b, c, d, t, m, ops: Ops):
    """Subset-identity sides at the ladder against the matching V_m expressions.

    Returns ``((R_spec, R_series), (L_spec, L_series))``.  The ladder is
    built on abq t_i / c and the subset identity is taken at (v, w, t) =
    (c, d, b).
    """
    from .thetaids import thmrn_L, thmrn_R
    q = ops.q
    if sum(m) > 6:
        raise PreconditionError("|m| <= 6")
    x = principal_ladder([a * b * q * ti / c for ti in t], m, q)
    R_spec = thmrn_R(x, c, d, q, b, ops.ctx)
    L_spec = thmrn_L(x, c, d, q, b, ops.ctx)
    KR = ops.one
    for ti, mi in zip(t, m):
        KR *= ops.ratio((a * q * ti / d, a * b * ti), (a * q * ti, a * b * ti / d), mi)
    R_series = eval_Vm(a, b, c, d, t, m, ops) * KR
    lhs, rhs = thmvst_sides(a, b, c, d, t, m, ops)
    L_series = rhs * KR
    return (R_spec, R_series), (L_spec, L_series)


def principal_specialize_check(a, b, c, d, t, m, ops: Ops) -> float:
    (r1, r2), (l1, l2) = principal_specialize_sides(a, b, c, d, t, m, ops)
    return max(residual(r1, r2), residual(l1, l2))


# ---------------------------------------------------------------------------
# Exchange of two horizontal strips against the p = 0 transformation
# ---------------------------------------------------------------------------

def pppp_substitution(mu, r: int, s: int, tau, q, t):
    """(a, b, c, d, t_vec, m) for the strip-exchange instance, N = l(mu)."""
    mu = list(mu)
    N = len(mu)
    tau = list(tau) + [0] * (N + 2 - len(tau))
    a = q**-r
    c = q ** (tau[N] - r) * t
    d = q ** (sum(mu) + s - sum(tau[: N + 1]))
    tv = [q ** mu[i] * t ** (N - i) for i in range(N)]
    m = [tau[i] - mu[i] for i in range(N)]
    return a, t, c, d, tv, m


def pppp_correspondence(mu, r: int, s: int, tau, q, t) -> dict:
    """Match both strip-exchange sums to the p = 0 transformation, term by term.

    Left terms (lambda - mu a horizontal r-strip) pair with the V_m(a; t)
    summand at k_i = lambda_i - mu_i; right terms (lambda - mu an s-strip)
    pair with the V_m(a_hat; s) summand at k_i = tau_i - lambda_i.  Each side
    must be a single constant multiple of its series, summands with no
    matching lambda must vanish, and the two constants must differ by the
    transformation's product.  Raises :class:`PoleError` at degenerate points.
    """
    from .macdonald import phi_factored
    from .partitions import HORIZONTAL, Partition, add_strips, strip_test

    q, t = Fraction(q), Fraction(t)
    mu_p, tau_p = Partition(mu), Partition(tau)
    N = len(mu_p)
    a, b, c, d, tv, m = pppp_substitution(list(mu_p), r, s, list(tau_p), q, t)
    if any(mi < 0 for mi in m):
        raise PreconditionError("tau must contain mu in the first l(mu) rows")
    ops = Ops.exact_mode(q)
    ah, sv = thmvst_dual(a, b, c, d, tv, m, q)

    def strip_terms(x, y):
        out = {}
        for lam in add_strips(mu_p, x, HORIZONTAL):
            if strip_test(tau_p, lam, HORIZONTAL) == y:
                out[lam] = (phi_factored(tau_p, lam) * phi_factored(lam, mu_p)).evaluate(q, t)
        return out

    def match(terms, series, index):
        ratios, seen = set(), set()
        for lam, val in terms.items():
            k = index(lam)
            if k not in series or series[k] == 0:
                return False, None
            seen.add(k)
            ratios.add(val / series[k])
        stray = any(v != 0 for k, v in series.items() if k not in seen)
        if len(ratios) != 1 or stray:
            return False, None
        return True, ratios.pop()

    box = list(_box(m))
    left = {k: vm_term(a, b, c, d, tv, m, k, ops) for k in box}
    right = {k: vm_term(ah, b, c, d, sv, m, k, ops) for k in box}
    ok_l, C_l = match(strip_terms(r, s), left,
                      lambda lam: tuple(lam.part(i + 1) - mu_p.part(i + 1) for i in range(N)))
    ok_r, C_r = match(strip_terms(s, r), right,
                      lambda lam: tuple(tau_p.part(i + 1) - lam.part(i + 1) for i in range(N)))
    lhs, rhs = thmvst_sides(a, b, c, d, tv, m, ops)
    factor = rhs / sum(right.values()) if sum(right.values()) != 0 else None
    consistent = ok_l and ok_r and factor is not None and C_r == C_l * factor
    return {"left_termwise": ok_l, "right_termwise": ok_r, "constants_consistent": consistent,
            "transformation": lhs == rhs, "pass": ok_l and ok_r and consistent and lhs == rhs}
