"""Macdonald polynomials, b-functions, Pieri coefficients and q,t-LR coefficients.

P_lambda is built by Gram-Schmidt on the monomial basis in the full ring of
symmetric functions (degree by degree, partitions processed upward in a
linear extension of dominance) and restricted to n variables by dropping
m_mu with l(mu) > n.  Pieri coefficients have closed product forms built as
:class:`FactoredQT` values; :func:`pieri_extract` recovers them from the
polynomials themselves and serves as their oracle.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from itertools import combinations

from .algebra import QT, FactoredQT, RatFunc, qt_poch
from .errors import PreconditionError, StripError
from .partitions import (HORIZONTAL, VERTICAL, Partition, add_strips, arm_leg_hook, conjugate,
                         dominance_leq, partitions_of, partitions_up_to, strip_test)
from .symfunc import (SymSeries, XSeries, distinct_permutations, monomial_to_power,
                      msym_product, power_weight)


class MacdonaldEngine:
    """Gram-Schmidt constructor and cache for P_lambda(x; q, t).

    ``q`` and ``t`` may be any elements of the coefficient field (the
    default is the generic pair).  The cache holds, per partition, the
    monomial coordinates u_{lambda mu} of the full symmetric function.
    Filling is idempotent and guarded by a lock, so concurrent readers see
    either nothing or a complete degree.
    """

    def __init__(self, q: RatFunc | None = None, t: RatFunc | None = None, ring=QT):
        self.ring = ring
        self.q = ring.var("q") if q is None else q
        self.t = ring.var("t") if t is None else t
        self._P: dict[Partition, dict[Partition, RatFunc]] = {}
        self._norm: dict[Partition, RatFunc] = {}
        self._lock = threading.Lock()

    def _fill_degree(self, d: int):
        with self._lock:
            if d == 0:
                self._P.setdefault(Partition(), {Partition(): self.ring.one()})
                self._norm.setdefault(Partition(), self.ring.one())
                return
            parts = list(reversed(partitions_of(d)))
            if all(p in self._P for p in parts):
                return
            minv = monomial_to_power(d)
            weights = {rho: power_weight(rho, self.q, self.t) for rho in parts}
            zero = self.ring.zero()
            mono: dict[Partition, dict[Partition, RatFunc]] = {}
            power: dict[Partition, dict[Partition, RatFunc]] = {}
            weighted: dict[Partition, dict[Partition, RatFunc]] = {}
            norm: dict[Partition, RatFunc] = {}
            for lam in parts:
                m_coords = {lam: self.ring.one()}
                p_coords = {rho: zero + c for rho, c in minv[lam].items()}
                for mu in parts:
                    if mu == lam:
                        break
                    if not dominance_leq(mu, lam):
                        continue
                    # <m_lam, P_mu> / <P_mu, P_mu>
                    ip = zero
                    for rho, c in minv[lam].items():
                        v = weighted[mu].get(rho)
                        if v is not None:
                            ip = ip + v * c
                    if ip.is_zero():
                        continue
                    coef = ip / norm[mu]
                    for nu, u in mono[mu].items():
                        term = u * coef
                        m_coords[nu] = m_coords[nu] - term if nu in m_coords else -term
                    for rho, u in power[mu].items():
                        term = u * coef
                        p_coords[rho] = p_coords[rho] - term if rho in p_coords else -term
                m_coords = {k: v for k, v in m_coords.items() if not v.is_zero()}
                p_coords = {k: v for k, v in p_coords.items() if not v.is_zero()}
                mono[lam], power[lam] = m_coords, p_coords
                weighted[lam] = {rho: v * weights[rho] for rho, v in p_coords.items()}
                nrm = zero
                for rho, c in minv[lam].items():
                    v = weighted[lam].get(rho)
                    if v is not None:
                        nrm = nrm + v * c
                if nrm.is_zero():
                    raise ArithmeticError(f"Gram-Schmidt breakdown at {lam}")
                norm[lam] = nrm
            for lam in parts:
                self._P.setdefault(lam, mono[lam])
                self._norm.setdefault(lam, norm[lam])

    def full(self, lam) -> dict[Partition, RatFunc]:
        """Monomial coordinates of P_lambda as a symmetric function."""
        lam = Partition(lam)
        if lam not in self._P:
            self._fill_degree(sum(lam))
        return self._P[lam]

    def norm(self, lam) -> RatFunc:
        """<P_lambda, P_lambda>_{q,t}."""
        lam = Partition(lam)
        self.full(lam)
        return self._norm[lam]

    def P(self, lam, n: int, maxdeg: int | None = None) -> SymSeries:
        lam = Partition(lam)
        D = sum(lam) if maxdeg is None else maxdeg
        if len(lam) > n:
            return SymSeries(n, D, {}, self.ring)
        return SymSeries(n, D, self.full(lam), self.ring)


_ENGINE = MacdonaldEngine()


def default_engine() -> MacdonaldEngine:
    return _ENGINE


def macdonald_P(lam, n: int, maxdeg: int | None = None,
                engine: MacdonaldEngine | None = None) -> SymSeries:
    """P_lambda(x_1..x_n; q, t) in the monomial basis (zero when l(lambda) > n)."""
    return (engine or _ENGINE).P(lam, n, maxdeg)


def macdonald_Q(lam, n: int, maxdeg: int | None = None,
                engine: MacdonaldEngine | None = None) -> SymSeries:
    """Q_lambda = b_lambda P_lambda."""
    return macdonald_P(lam, n, maxdeg, engine).scale(b_pm(lam, +1))


# ---------------------------------------------------------------------------
# b-functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def b_factored(lam: Partition, sign: int) -> FactoredQT:
    """prod over cells of (1 - sign q^a t^{l+1}) / (1 - q^{a+1} t^l)."""
    lam = Partition(lam)
    factors = []
    for cell in lam.cells():
        a, leg, _ = arm_leg_hook(lam, cell)
        factors.append((sign, a, leg + 1, 1))
        factors.append((1, a + 1, leg, -1))
    return FactoredQT(tuple(factors))


def b_pm(lam, sign: int = 1) -> RatFunc:
    """b^+_lambda (sign=+1, the classical b_lambda) or b^-_lambda (sign=-1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return b_factored(Partition(lam), sign).to_ratfunc()


def b_iexp_factored(lam, n: int, sign: int = -1) -> FactoredQT:
    """b^{+-}_lambda through the n-dependent Pochhammer product."""
    lam = Partition(lam)
    if n < len(lam):
        raise PreconditionError(f"need n >= l(lambda) = {len(lam)}, got {n}")
    part = lam.part
    out = FactoredQT()
    for i in range(1, n + 1):
        out = out * qt_poch(sign, 0, n - i + 1, part(i)) / qt_poch(1, 1, n - i, part(i))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            k = part(i) - part(j)
            out = (out * qt_poch(sign, 0, j - i, k) * qt_poch(1, 1, j - i, k)
                   / (qt_poch(sign, 0, j - i + 1, k) * qt_poch(1, 1, j - i - 1, k)))
    return out


def b_minus_conj_factored(lam, n: int) -> FactoredQT:
    """b^-_{lambda'}(q, t) through the base-t Pochhammer product in lambda's parts."""
    lam = Partition(lam)
    if n < len(lam):
        raise PreconditionError(f"need n >= l(lambda) = {len(lam)}, got {n}")
    part = lam.part
    T = (0, 1)
    out = FactoredQT()
    for i in range(1, n + 1):
        out = out * qt_poch(-1, n - i, 1, part(i), T) / qt_poch(1, n - i + 1, 0, part(i), T)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            k = part(i) - part(j)
            out = (out * qt_poch(1, j - i + 1, 0, k, T) * qt_poch(-1, j - i - 1, 1, k, T)
                   / (qt_poch(1, j - i, 0, k, T) * qt_poch(-1, j - i, 1, k, T)))
    return out


def b_minus_conj_via_swap(lam) -> FactoredQT:
    """b^-_{lambda'}(q,t) = b^-_lambda(t,q) / b_lambda(t^2,q^2)."""
    lam = Partition(lam)
    return b_factored(lam, -1).swap() / b_factored(lam, 1).swap().square_params()


def b_minus_forms(lam, n: int) -> tuple[RatFunc, RatFunc]:
    """(b^-_lambda via the Pochhammer form, b^-_{lambda'} via the base-t form)."""
    return b_iexp_factored(lam, n, -1).to_ratfunc(), b_minus_conj_factored(lam, n).to_ratfunc()


# ---------------------------------------------------------------------------
# g_r and elementary functions
# ---------------------------------------------------------------------------

def g_r(r: int, n: int, D: int | None = None) -> SymSeries:
    """Coefficient of y^r in prod_i (t x_i y; q)_inf / (x_i y; q)_inf."""
    D = r if D is None else D
    if r > D:
        raise PreconditionError("r must not exceed the truncation degree")
    coeffs = [qt_poch(1, 0, 1, k).to_ratfunc() / qt_poch(1, 1, 0, k).to_ratfunc()
              for k in range(r + 1)]
    acc = XSeries.one(n, r)
    for i in range(n):
        e = tuple(int(j == i) for j in range(n))
        acc = acc * XSeries.univariate(n, r, e, lambda k: coeffs[k])
    top = XSeries(n, r, {a: c for a, c in acc.terms.items() if sum(a) == r})
    return top.collect().restrict(maxdeg=D)


def e_r(r: int, n: int, D: int | None = None) -> SymSeries:
    return SymSeries(n, r if D is None else D, {Partition([1] * r): 1})


# ---------------------------------------------------------------------------
# Pieri coefficients in closed form
# ---------------------------------------------------------------------------

def _require_strip(lam: Partition, mu: Partition, kind: str) -> int:
    r = strip_test(lam, mu, kind)
    if r is None:
        raise StripError(f"{lam} - {mu} is not a {kind} strip")
    return r


@lru_cache(maxsize=None)
def psi_prime_factored(lam: Partition, mu: Partition) -> FactoredQT:
    """psi'_{lambda/mu}(q,t) for a vertical strip."""
    lam, mu = Partition(lam), Partition(mu)
    _require_strip(lam, mu, VERTICAL)
    L, M = lam.part, mu.part
    factors = []
    for i in range(1, len(lam) + 1):
        if L(i) != M(i):
            continue
        for j in range(i + 1, len(lam) + 1):
            if L(j) != M(j) + 1:
                continue
            dm, dl = M(i) - M(j), L(i) - L(j)
            factors += [(1, dm, j - i - 1, 1), (1, dl, j - i + 1, 1),
                        (1, dm, j - i, -1), (1, dl, j - i, -1)]
    return FactoredQT(tuple(factors))


@lru_cache(maxsize=None)
def phi_factored(lam: Partition, mu: Partition) -> FactoredQT:
    """phi_{lambda/mu}(q,t) for a horizontal strip, from the f-ratio product.

    With f(u) = (tu;q)_inf/(qu;q)_inf the product runs over 1 <= i <= j <= l(lambda);
    each ratio f(u)/f(u q^k) collapses to (tu;q)_k/(qu;q)_k.
    """
    lam, mu = Partition(lam), Partition(mu)
    _require_strip(lam, mu, HORIZONTAL)
    L, M = lam.part, mu.part
    out = FactoredQT()
    for i in range(1, len(lam) + 1):
        for j in range(i, len(lam) + 1):
            d = j - i
            # f(q^{L_i-L_j} t^d) / f(q^{L_i-M_j} t^d), shift k = L_j - M_j
            a, k = L(i) - L(j), L(j) - M(j)
            out = out * qt_poch(1, a, d + 1, k) / qt_poch(1, a + 1, d, k)
            # f(q^{M_i-M_{j+1}} t^d) / f(q^{M_i-L_{j+1}} t^d), shift k' = L_{j+1} - M_{j+1}
            b, k2 = M(i) - L(j + 1), L(j + 1) - M(j + 1)
            out = out * qt_poch(1, b + 1, d, k2) / qt_poch(1, b, d + 1, k2)
    return out


@lru_cache(maxsize=None)
def phi_via_b_factored(lam: Partition, mu: Partition) -> FactoredQT:
    """phi_{lambda/mu}(q,t) = b_lambda(q,t)/b_mu(q,t) * psi'_{lambda'/mu'}(t,q)."""
    lam, mu = Partition(lam), Partition(mu)
    _require_strip(lam, mu, HORIZONTAL)
    return (b_factored(lam, 1) / b_factored(mu, 1)
            * psi_prime_factored(conjugate(lam), conjugate(mu)).swap())


@lru_cache(maxsize=None)
def psi_factored(lam: Partition, mu: Partition) -> FactoredQT:
    """psi_{lambda/mu}(q,t) = psi'_{lambda'/mu'}(t,q)."""
    lam, mu = Partition(lam), Partition(mu)
    _require_strip(lam, mu, HORIZONTAL)
    return psi_prime_factored(conjugate(lam), conjugate(mu)).swap()


def pieri_psi_prime(lam, mu) -> RatFunc:
    return psi_prime_factored(Partition(lam), Partition(mu)).to_ratfunc()


def pieri_phi_psi(lam, mu, which: str = "phi", route: str = "f") -> RatFunc:
    """phi (``route`` 'f' for the f-ratio product, 'b' for the b-ratio form) or psi."""
    lam, mu = Partition(lam), Partition(mu)
    if which == "phi":
        f = phi_factored(lam, mu) if route == "f" else phi_via_b_factored(lam, mu)
    elif which == "psi":
        f = psi_factored(lam, mu)
    else:
        raise ValueError(f"which must be 'phi' or 'psi', got {which!r}")
    return f.to_ratfunc()


# ---------------------------------------------------------------------------
# Expansion in the P basis
# ---------------------------------------------------------------------------

def expand_in_P(f: SymSeries, engine: MacdonaldEngine | None = None) -> dict[Partition, RatFunc]:
    """Coefficients c with f = sum c_lambda P_lambda (n variables), by triangular solve."""
    engine = engine or _ENGINE
    rest = dict(f.coeffs)
    out: dict[Partition, RatFunc] = {}
    while rest:
        # a dominance-maximal remaining partition: largest in reverse-lex among top degree
        lam = max(rest, key=lambda p: (sum(p), tuple(p)))
        c = rest.pop(lam)
        out[lam] = c
        for nu, u in engine.full(lam).items():
            if nu == lam or len(nu) > f.nvars:
                continue
            term = u * c
            v = rest[nu] - term if nu in rest else -term
            if v.is_zero():
                rest.pop(nu, None)
            else:
                rest[nu] = v
    return out


def pieri_extract(nu, r: int, n: int, which: str,
                  engine: MacdonaldEngine | None = None) -> dict[Partition, RatFunc]:
    """Pieri coefficients read off from the polynomials.

    which='phi':  P_nu g_r = sum phi_{lam/nu} P_lam
    which='psi':  Q_nu g_r = sum psi_{lam/nu} Q_lam
    which='psi_prime': P_nu e_r = sum psi'_{lam/nu} P_lam
    """
    nu = Partition(nu)
    if n < len(nu) + r:
        raise PreconditionError(f"need n >= l(nu) + r = {len(nu) + r}")
    D = sum(nu) + r
    P_nu = macdonald_P(nu, n, D, engine)
    if which in ("phi", "psi"):
        prod = msym_product(P_nu, g_r(r, n, D))
    elif which == "psi_prime":
        prod = msym_product(P_nu, e_r(r, n, D))
    else:
        raise ValueError(f"unknown Pieri coefficient {which!r}")
    coeffs = expand_in_P(prod, engine)
    if which == "psi":
        bnu = b_pm(nu, 1)
        coeffs = {lam: c * bnu / b_pm(lam, 1) for lam, c in coeffs.items()}
    return coeffs


def qt_LR(mu, nu, n: int | None = None,
          engine: MacdonaldEngine | None = None) -> dict[Partition, RatFunc]:
    """f^lambda_{mu nu}(q,t) from P_mu P_nu = sum f^lambda_{mu nu} P_lambda."""
    mu, nu = Partition(mu), Partition(nu)
    if n is None:
        n = len(mu) + len(nu)
    if n < len(mu) + len(nu):
        raise PreconditionError(f"need n >= l(mu) + l(nu) = {len(mu) + len(nu)}")
    return _lr_cached(mu, nu, n, engine or _ENGINE)


@lru_cache(maxsize=None)
def _lr_cached(mu, nu, n, engine):
    D = sum(mu) + sum(nu)
    prod = msym_product(macdonald_P(mu, n, D, engine), macdonald_P(nu, n, D, engine))
    return expand_in_P(prod, engine)


def _factored_sum(terms) -> RatFunc:
    total = QT.zero()
    for t in terms:
        total = total + t.to_ratfunc()
    return total


def pppp_sides(mu, r: int, s: int, tau) -> tuple[RatFunc, RatFunc]:
    """Both sides of the exchanged double-Pieri identity for phi."""
    mu, tau = Partition(mu), Partition(tau)

    def side(a, b):
        terms = []
        for lam in add_strips(mu, a, HORIZONTAL):
            if strip_test(tau, lam, HORIZONTAL) == b:
                terms.append(phi_factored(tau, lam) * phi_factored(lam, mu))
        return _factored_sum(terms)

    return side(r, s), side(s, r)


def verify_lr_symmetries(bound: int, pppp_box=(3, 3), pppp_rs: int = 3,
                         engine: MacdonaldEngine | None = None) -> dict:
    """Exact check of the associativity exchange for f^lambda_{mu nu} and its Pieri case.

    Returns a report ``{"ffff": {...}, "pppp": {...}, "pass": bool}``; failures
    are listed, never raised.
    """
    engine = engine or _ENGINE
    parts = partitions_up_to(bound)
    ffff_fail, ffff_checked = [], 0
    for mu in parts:
        for a, nu in enumerate(parts):
            for rho in parts[a + 1:]:
                lhs = _compose_lr(mu, nu, rho, engine)
                rhs = _compose_lr(mu, rho, nu, engine)
                for tau in set(lhs) | set(rhs):
                    ffff_checked += 1
                    if not (lhs.get(tau, QT.zero()) == rhs.get(tau, QT.zero())):
                        ffff_fail.append((mu, nu, rho, tau))
    pppp_fail, pppp_checked = [], 0
    R, C = pppp_box
    box = [Partition([a, b]) for a in range(C + 1) for b in range(a + 1) if R >= 2 or b == 0]
    for mu in box:
        for r in range(pppp_rs + 1):
            for s in range(r, pppp_rs + 1):
                taus = {tau for lam in add_strips(mu, r, HORIZONTAL)
                        for tau in add_strips(lam, s, HORIZONTAL)}
                taus |= {tau for lam in add_strips(mu, s, HORIZONTAL)
                         for tau in add_strips(lam, r, HORIZONTAL)}
                for tau in taus:
                    pppp_checked += 1
                    lhs, rhs = pppp_sides(mu, r, s, tau)
                    if not (lhs == rhs):
                        pppp_fail.append((mu, r, s, tau))
    return {
        "ffff": {"checked": ffff_checked, "failures": ffff_fail},
        "pppp": {"checked": pppp_checked, "failures": pppp_fail},
        "pass": not ffff_fail and not pppp_fail,
    }


def _compose_lr(mu, nu, rho, engine) -> dict[Partition, RatFunc]:
    """sum_lambda f^lambda_{mu nu} f^tau_{lambda rho}, keyed by tau."""
    out: dict[Partition, RatFunc] = {}
    for lam, c in qt_LR(mu, nu, engine=engine).items():
        for tau, d in qt_LR(lam, rho, engine=engine).items():
            term = c * d
            out[tau] = out[tau] + term if tau in out else term
    return out


# ---------------------------------------------------------------------------
# Independent eigenfunction check
# ---------------------------------------------------------------------------

def _vandermonde_terms(n: int) -> dict[tuple[int, ...], int]:
    """prod_{i<j} (x_i - x_j) as exponent -> integer coefficient."""
    poly = {(0,) * n: 1}
    for i, j in combinations(range(n), 2):
        nxt: dict[tuple[int, ...], int] = {}
        for a, c in poly.items():
            for k, s in ((i, 1), (j, -1)):
                b = list(a)
                b[k] += 1
                b = tuple(b)
                nxt[b] = nxt.get(b, 0) + s * c
        poly = {k: v for k, v in nxt.items() if v}
    return poly


def macdonald_operator_residual(lam, n: int, engine: MacdonaldEngine | None = None) -> XSeries:
    """sum_i (T_{t,x_i} Delta)(T_{q,x_i} P) - (sum_i q^{lam_i} t^{n-i}) Delta P.

    Zero exactly when the restricted P_lambda is an eigenfunction of the
    first Macdonald operator in n variables.
    """
    engine = engine or _ENGINE
    lam = Partition(lam)
    if len(lam) > n:
        raise PreconditionError("l(lambda) must not exceed n")
    q, t = engine.q, engine.t
    P = macdonald_P(lam, n, engine=engine)
    P_terms = {}
    for mu, c in P.coeffs.items():
        for a in distinct_permutations(tuple(mu) + (0,) * (n - len(mu))):
            P_terms[a] = c
    delta = _vandermonde_terms(n)
    D = sum(lam) + n * (n - 1) // 2
    ring = engine.ring
    acc: dict[tuple[int, ...], RatFunc] = {}

    def add(key, val):
        acc[key] = acc[key] + val if key in acc else val

    for i in range(n):
        for a, c in delta.items():
            ca = t ** a[i] * c
            for b, d in P_terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                add(key, ca * d * q ** b[i])
    eig = ring.zero()
    for i in range(n):
        eig = eig + q ** lam.part(i + 1) * t ** (n - i - 1)
    for a, c in delta.items():
        for b, d in P_terms.items():
            key = tuple(x + y for x, y in zip(a, b))
            add(key, -(eig * d * c))
    return XSeries(n, D, acc, ring)
