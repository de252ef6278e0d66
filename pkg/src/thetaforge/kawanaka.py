"""Truncated exact checks of the quadratic Macdonald identity and its relatives.

Every identity here is a formal power series identity in x_1..x_n.  It is
checked coefficient by coefficient in the monomial basis, up to a total
x-degree ``D``, with coefficients in Q(q,t) (or Q(q,t,b) for the pair
with a grading parameter).

The main identity states

    sum_lambda b^-_lambda(q,t) P_lambda(x; q^2, t^2)
        = prod_i (-t x_i; q)_inf / (x_i; q)_inf
          * prod_{i<j} (t^2 x_i x_j; q^2)_inf / (x_i x_j; q^2)_inf.

It reduces, through a one-variable recursion, to a Pieri-coefficient
identity (``pieri_sides``).  Its conjugate form (``pieri_prime_sides``) is
the one the subset-sum identity of :mod:`thetaids` reproduces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .algebra import QT, QTB, FactoredQT, MultiPoly, PolyRing, RatFunc, qt_poch, specialize
from .errors import PreconditionError
from .macdonald import (
    b_factored,
    default_engine,
    phi_factored,
    psi_factored,
    psi_prime_factored,
)
from .partitions import (
    HORIZONTAL,
    VERTICAL,
    Partition,
    add_strips,
    arm_leg_hook,
    conjugate,
    odd_columns,
    odd_rows,
    partitions_up_to,
    sub_strips,
)
from .symfunc import SymSeries, XSeries

__all__ = [
    "TruncationSpec", "kawanaka_lhs", "kawanaka_rhs", "verify_kawanaka",
    "pieri_sides", "pieri_prime_sides", "verify_proppieri", "pieri_forms_agree",
    "pieri_prime_matches_final", "recursion_sides", "verify_recursion",
    "md_sides", "verify_MD", "schur_sides", "hall_littlewood_sides",
    "schur_polynomial", "hall_littlewood_P", "verify_specialized",
]


@dataclass(frozen=True)
class TruncationSpec:
    """n variables, total x-degree at most D."""

    n: int
    D: int

    def __post_init__(self):
        if self.n < 0 or self.D < 0:
            raise PreconditionError(f"need n >= 0 and D >= 0, got n={self.n}, D={self.D}")

    def partitions(self) -> list[Partition]:
        return partitions_up_to(self.D, max_len=self.n)


def _spec(T, D=None) -> TruncationSpec:
    if isinstance(T, TruncationSpec):
        return T
    if D is not None:
        return TruncationSpec(T, D)
    return TruncationSpec(*T)


# ---------------------------------------------------------------------------
# Coefficient helpers
# ---------------------------------------------------------------------------

def _qbin_factored(k: int) -> FactoredQT | None:
    """(-t;q)_k / (q;q)_k, or None when k < 0 (1/(q;q)_k vanishes)."""
    if k < 0:
        return None
    return qt_poch(-1, 0, 1, k) / qt_poch(1, 1, 0, k)


def _ratio(eps_num, eps_den, num_ab, den_ab, base, k, ring=QT) -> RatFunc:
    """(eps_num q^a t^b; base)_k / (eps_den q^c t^d; base)_k as a RatFunc."""
    return (qt_poch(eps_num, *num_ab, k, base) / qt_poch(eps_den, *den_ab, k, base)).to_ratfunc(ring)


def _sum_factored(terms, ring=QT) -> RatFunc:
    total = ring.zero()
    for f in terms:
        total = total + f.to_ratfunc(ring)
    return total


def _product_series(n: int, D: int, single, pair, ring=QT) -> XSeries:
    """prod_i single(x_i) * prod_{i<j} pair(x_i x_j), each given as k -> coefficient.

    ``single`` is a list of (step, coeff) factors so that a variable factor may
    itself be a product of series in x_i^step.
    """
    out = XSeries.one(n, D, ring)
    for i in range(n):
        for step, coeff in single:
            exps = tuple(step if j == i else 0 for j in range(n))
            out = out * XSeries.univariate(n, D, exps, coeff, ring)
    for i in range(n):
        for j in range(i + 1, n):
            exps = tuple(1 if m in (i, j) else 0 for m in range(n))
            out = out * XSeries.univariate(n, D, exps, pair, ring)
    return out


_SQUARE = None


def _square_bindings():
    global _SQUARE
    if _SQUARE is None:
        q, t = QT.var("q"), QT.var("t")
        _SQUARE = {"q": q * q, "t": t * t}
    return _SQUARE


@lru_cache(maxsize=None)
def _P_squared(lam: Partition) -> dict[Partition, RatFunc]:
    """Monomial coordinates of P_lambda(x; q^2, t^2)."""
    full = default_engine().full(lam)
    sq = _square_bindings()
    return {mu: specialize(c, sq) for mu, c in full.items()}


# ---------------------------------------------------------------------------
# The main identity
# ---------------------------------------------------------------------------

def kawanaka_lhs(T, D: int | None = None) -> SymSeries:
    """sum over |lambda| <= D, l(lambda) <= n of b^-_lambda(q,t) P_lambda(x; q^2, t^2)."""
    T = _spec(T, D)
    total = SymSeries(T.n, T.D)
    for lam in T.partitions():
        coeff = b_factored(lam, -1).to_ratfunc()
        total = total + SymSeries(T.n, T.D, _P_squared(lam)).scale(coeff)
    return total


def kawanaka_rhs(T, D: int | None = None) -> SymSeries:
    """The product side, expanded and collected (SymmetryError if not symmetric)."""
    T = _spec(T, D)
    single = [(1, lambda k: _ratio(-1, 1, (0, 1), (1, 0), (1, 0), k))]
    pair = lambda k: _ratio(1, 1, (0, 2), (2, 0), (2, 0), k)
    return _product_series(T.n, T.D, single, pair).collect()


def kawanaka_differences(T, D: int | None = None) -> list[Partition]:
    T = _spec(T, D)
    return kawanaka_lhs(T).differences(kawanaka_rhs(T))


def verify_kawanaka(T, D: int | None = None) -> bool:
    return not kawanaka_differences(T, D)


# ---------------------------------------------------------------------------
# Pieri-coefficient form and its conjugate
# ---------------------------------------------------------------------------

def _sq(f: FactoredQT) -> FactoredQT:
    return f.square_params()


def pieri_sides(mu, r: int) -> tuple[RatFunc, RatFunc]:
    """Both sides of the horizontal-strip identity for b^-, at (mu, r)."""
    mu = Partition(mu)
    left = []
    for k in range(min(r, sum(mu)) + 1):
        w = _qbin_factored(r - k)
        for nu in sub_strips(mu, k, HORIZONTAL):
            left.append(w * b_factored(nu, -1) * _sq(phi_factored(mu, nu)))
    right = [b_factored(lam, -1) * _sq(psi_factored(lam, mu))
             for lam in add_strips(mu, r, HORIZONTAL)]
    return _sum_factored(left), _sum_factored(right)


def pieri_prime_sides(mu, r: int) -> tuple[RatFunc, RatFunc]:
    """Both sides of the vertical-strip (conjugate) form, at (mu, r)."""
    mu = Partition(mu)
    bmu_tq = b_factored(mu, -1).swap()
    bmu_conj = b_factored(conjugate(mu), -1)
    left = []
    for k in range(min(r, sum(mu)) + 1):
        w = _qbin_factored(r - k)
        for nu in sub_strips(mu, k, VERTICAL):
            left.append(w * b_factored(nu, -1).swap() / bmu_tq
                        * psi_prime_factored(mu, nu).swap().square_params())
    right = [b_factored(conjugate(lam), -1) / bmu_conj
             * psi_prime_factored(lam, mu).swap().square_params()
             for lam in add_strips(mu, r, VERTICAL)]
    return _sum_factored(left), _sum_factored(right)


def verify_proppieri(mu, r: int, form: str = "horizontal") -> bool:
    """Exact check of the horizontal-strip form or its conjugate, the vertical-strip form."""
    if form == "horizontal":
        lhs, rhs = pieri_sides(mu, r)
    elif form == "vertical":
        lhs, rhs = pieri_prime_sides(mu, r)
    else:
        raise ValueError(f"unknown form {form!r}")
    return lhs == rhs


def pieri_forms_agree(mu, r: int) -> bool:
    """The vertical form at mu equals the horizontal form at mu' divided by b^-_{mu'}.

    Checked side by side, not only as an identity.
    """
    mu = Partition(mu)
    h_l, h_r = pieri_sides(conjugate(mu), r)
    v_l, v_r = pieri_prime_sides(mu, r)
    b = b_factored(conjugate(mu), -1).to_ratfunc()
    return h_l / b == v_l and h_r / b == v_r


def pieri_prime_matches_final(mu, r: int) -> bool:
    """The subset-sum identity with n = l(mu) reproduces both vertical-form sides."""
    from .thetaids import final_sides

    mu = Partition(mu)
    f_l, f_r = final_sides(mu, len(mu), r)
    v_l, v_r = pieri_prime_sides(mu, r)
    return f_l == v_l and f_r == v_r


# ---------------------------------------------------------------------------
# Adding one variable
# ---------------------------------------------------------------------------

def _embed(xs: XSeries, n_new: int) -> XSeries:
    pad = (0,) * (n_new - xs.n)
    return XSeries(n_new, xs.maxdeg, {a + pad: c for a, c in xs.terms.items()}, xs.ring)


def _y_monomial(coeffs: SymSeries, r: int, n: int, D: int) -> XSeries:
    """coeffs(x_1..x_n) * y^r as a series in n+1 variables."""
    xs = coeffs.to_xseries()
    return XSeries(n + 1, D, {a + (r,): c for a, c in xs.terms.items()}, coeffs.ring)


def recursion_sides(n: int, D: int) -> dict[str, XSeries]:
    """The four series in n+1 variables (x, y) that the recursion compares.

    ``lhs``: the b^- sum in n+1 variables.  ``rhs``: the b^- sum in n
    variables times the y-dependent products.  ``lhs_pieri`` and
    ``rhs_pieri``: both sides regrouped as sum_{mu, r} c_{mu, r} P_mu(x) y^r with
    c from the two sides of the horizontal Pieri-coefficient identity.
    """
    if n < 0 or D < 0:
        raise PreconditionError("need n >= 0 and D >= 0")
    N = n + 1
    lhs = kawanaka_lhs(TruncationSpec(N, D)).to_xseries()
    phi = _embed(kawanaka_lhs(TruncationSpec(n, D)).to_xseries(), N)
    y_exps = (0,) * n + (1,)
    factor = XSeries.univariate(N, D, y_exps, lambda k: _ratio(-1, 1, (0, 1), (1, 0), (1, 0), k))
    for i in range(n):
        exps = tuple(1 if j in (i, n) else 0 for j in range(N))
        factor = factor * XSeries.univariate(N, D, exps,
                                             lambda k: _ratio(1, 1, (0, 2), (2, 0), (2, 0), k))
    rhs = phi * factor
    lhs_p = XSeries(N, D)
    rhs_p = XSeries(N, D)
    for r in range(D + 1):
        for mu in partitions_up_to(D - r, max_len=n):
            c_l, c_r = pieri_sides(mu, r)
            P = SymSeries(n, D - r, _P_squared(mu))
            # lemma for the product side pairs with the nu-sum; the b^- sum pairs with lambda
            rhs_p = rhs_p + _y_monomial(P.scale(c_l), r, n, D)
            lhs_p = lhs_p + _y_monomial(P.scale(c_r), r, n, D)
    return {"lhs": lhs, "rhs": rhs, "lhs_pieri": lhs_p, "rhs_pieri": rhs_p}


def verify_recursion(n: int, D: int) -> bool:
    s = recursion_sides(n, D)
    return s["lhs"] == s["rhs"] and s["lhs"] == s["lhs_pieri"] and s["rhs"] == s["rhs_pieri"]


# ---------------------------------------------------------------------------
# The pair graded by odd columns / odd rows
# ---------------------------------------------------------------------------

def _md_weight(lam: Partition, variant: str) -> RatFunc:
    if variant in ("a", "columns-even-legs"):
        power = odd_columns(lam)
        keep = lambda a, leg: leg % 2 == 0
    elif variant in ("b", "rows-odd-arms"):
        power = odd_rows(lam)
        keep = lambda a, leg: a % 2 == 1
    else:
        raise ValueError(f"unknown variant {variant!r}")
    factors = []
    for cell in lam.cells():
        a, leg, _ = arm_leg_hook(lam, cell)
        if keep(a, leg):
            factors += [(1, a, leg + 1, 1), (1, a + 1, leg, -1)]
    return FactoredQT(tuple(factors)).to_ratfunc(QTB) * QTB.monomial({"b": power})


def md_sides(variant: str, n: int, D: int) -> tuple[SymSeries, SymSeries]:
    """(LHS, RHS) of one member of the pair, over Q(q,t,b)."""
    T = TruncationSpec(n, D)
    eng = default_engine()
    lhs = SymSeries(n, D, ring=QTB)
    for lam in T.partitions():
        P = SymSeries(n, D, eng.full(lam)).align(QTB)
        lhs = lhs + P.scale(_md_weight(lam, variant))
    b = QTB.var("b")
    pair = lambda k: _ratio(1, 1, (0, 1), (1, 0), (1, 0), k, QTB)
    if variant in ("a", "columns-even-legs"):
        single = [(1, lambda k: _ratio(1, 1, (0, 1), (1, 0), (1, 0), k, QTB) * b**k)]
    else:
        single = [(1, lambda k: b if k == 1 else (QTB.one() if k == 0 else QTB.zero())),
                  (2, lambda k: _ratio(1, 1, (1, 1), (2, 0), (2, 0), k, QTB))]
    rhs = _product_series(n, D, single, pair, QTB).collect()
    return lhs, rhs


def verify_MD(variant: str, n: int, D: int, b=None) -> bool:
    """Truncated check; ``b`` (0, 1, ...) specialises the grading parameter."""
    lhs, rhs = md_sides(variant, n, D)
    if b is not None:
        lhs, rhs = lhs.specialize({"b": b}), rhs.specialize({"b": b})
    return lhs == rhs


# ---------------------------------------------------------------------------
# Specialisations q = t and q = 0, built from alternant formulas
# ---------------------------------------------------------------------------

def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _xring(n: int) -> PolyRing:
    return PolyRing.of("t", *(f"x{i}" for i in range(1, n + 1)))


def _collect_x(f: RatFunc, n: int) -> dict[Partition, RatFunc]:
    """Monomial coordinates of a symmetric polynomial living in the ring t, x_1..x_n."""
    if f.den.total_degree([f"x{i}" for i in range(1, n + 1)]) != 0:
        raise ArithmeticError("alternant quotient is not a polynomial in x")
    den_t = {e[0]: c for e, c in f.den.terms.items()}
    den = sum((QT.monomial({"t": e}, c) for e, c in den_t.items()), QT.zero())
    out: dict[Partition, RatFunc] = {}
    for e, c in f.num.terms.items():
        alpha = e[1:]
        if list(alpha) != sorted(alpha, reverse=True):
            continue
        mu = Partition(alpha)
        out[mu] = out.get(mu, QT.zero()) + QT.monomial({"t": e[0]}, c)
    return {mu: c / den for mu, c in out.items()}


def _antisymmetrize(ring: PolyRing, n: int, poly: MultiPoly) -> MultiPoly:
    total = MultiPoly(ring)
    for p in permutations(range(n)):
        terms = {}
        for e, c in poly.terms.items():
            new = [e[0]] + [0] * n
            for i in range(n):
                new[1 + p[i]] = e[1 + i]
            terms[tuple(new)] = c
        piece = MultiPoly(ring, terms)
        total = total + piece if _perm_sign(p) > 0 else total - piece
    return total


@lru_cache(maxsize=None)
def schur_polynomial(lam: Partition, n: int) -> dict[Partition, int]:
    """s_lambda(x_1..x_n) in the monomial basis, as the ratio of alternants."""
    lam = Partition(lam)
    if len(lam) > n:
        return {}
    ring = _xring(n)
    mono = lambda ex: MultiPoly(ring, {(0,) + tuple(ex): 1})
    delta = tuple(n - 1 - i for i in range(n))
    padded = tuple(lam) + (0,) * (n - len(lam))
    num = _antisymmetrize(ring, n, mono(tuple(a + d for a, d in zip(padded, delta))))
    den = _antisymmetrize(ring, n, mono(delta))
    return _collect_x(RatFunc(num, den, ring), n)


def _v_factor(m: int, tt: int) -> FactoredQT:
    """prod_{j=1..m} (1 - t^{tt j}) / (1 - t^tt)."""
    return FactoredQT(tuple((1, 0, tt * j, 1) for j in range(1, m + 1))
                      + ((1, 0, tt, -m),))


@lru_cache(maxsize=None)
def hall_littlewood_P(lam: Partition, n: int, tpow: int = 1) -> dict[Partition, RatFunc]:
    """P_lambda(x_1..x_n; t^tpow) from the symmetrisation formula."""
    lam = Partition(lam)
    if len(lam) > n:
        return {}
    ring = _xring(n)
    tt = MultiPoly(ring, {(tpow,) + (0,) * n: 1})
    gens = ring.gens()[1:]
    padded = tuple(lam) + (0,) * (n - len(lam))
    seed = MultiPoly(ring, {(0,) + padded: 1})
    for i in range(n):
        for j in range(i + 1, n):
            seed = seed * (gens[i] - tt * gens[j])
    num = _antisymmetrize(ring, n, seed)
    vand = MultiPoly(ring, {(0,) * (n + 1): 1})
    for i in range(n):
        for j in range(i + 1, n):
            vand = vand * (gens[i] - gens[j])
    mult: dict[int, int] = {}
    for p in padded:
        mult[p] = mult.get(p, 0) + 1
    v = FactoredQT()
    for m in mult.values():
        v = v * _v_factor(m, tpow)
    coords = _collect_x(RatFunc(num, vand, ring), n)
    vr = v.to_ratfunc()
    return {mu: c / vr for mu, c in coords.items()}


def schur_sides(n: int, D: int) -> tuple[SymSeries, SymSeries]:
    """Hook-product sum of Schur polynomials, and its product side (variable q)."""
    lhs = SymSeries(n, D)
    for lam in partitions_up_to(D, max_len=n):
        factors = []
        for cell in lam.cells():
            h = arm_leg_hook(lam, cell)[2]
            factors += [(-1, h, 0, 1), (1, h, 0, -1)]
        w = FactoredQT(tuple(factors)).to_ratfunc()
        lhs = lhs + SymSeries(n, D, schur_polynomial(lam, n)).scale(w)
    single = [(1, lambda k: _ratio(-1, 1, (1, 0), (1, 0), (1, 0), k))]
    rhs = _product_series(n, D, single, lambda k: QT.one()).collect()
    return lhs, rhs


def hall_littlewood_sides(n: int, D: int, base: int = 1) -> tuple[SymSeries, SymSeries]:
    """Multiplicity-product sum of P_lambda(x; t^2), and its product side.

    The weight is prod_i (-t; t^base)_{m_i(lambda)}.  At q = 0 the b^- weight
    keeps only the last cell of each row, which gives base 1; base 2 is the
    variant that fails from n = 2 on (coefficient of m_(1,1)).
    """
    lhs = SymSeries(n, D)
    for lam in partitions_up_to(D, max_len=n):
        w = FactoredQT()
        mult: dict[int, int] = {}
        for p in lam:
            mult[p] = mult.get(p, 0) + 1
        for m in mult.values():
            w = w * qt_poch(-1, 0, 1, m, (0, base))
        lhs = lhs + SymSeries(n, D, hall_littlewood_P(lam, n, 2)).scale(w.to_ratfunc())
    t = QT.var("t")
    single = [(1, lambda k: QT.one() if k == 0 else 1 + t)]
    pair = lambda k: QT.one() if k == 0 else 1 - t * t
    rhs = _product_series(n, D, single, pair).collect()
    return lhs, rhs


def verify_specialized(case: str, n: int, D: int) -> bool:
    """The directly built identity holds, and equals the specialised main identity."""
    T = TruncationSpec(n, D)
    q = QT.var("q")
    if case in ("schur", "schur-qt", "q=t"):
        lhs, rhs = schur_sides(n, D)
        binding = {"t": q}
    elif case in ("hall-littlewood", "hl", "q=0"):
        lhs, rhs = hall_littlewood_sides(n, D)
        binding = {"q": 0}
    else:
        raise ValueError(f"unknown case {case!r}")
    main_l = kawanaka_lhs(T).specialize(binding)
    main_r = kawanaka_rhs(T).specialize(binding)
    return lhs == rhs and main_l == lhs and main_r == rhs
