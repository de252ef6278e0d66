"""Every identity the command line can run, by id.

An entry has a numeric runner (sampled complex points, worst residual), an
exact runner (rational points or symbolic q, t; a boolean), or both.
Runners take the resolved parameter dict, a seed and a trial count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .. import ehs, kawanaka, thetaids
from ..errors import ConfigError, DegenerateFactorError, PoleError, SamplerExhaustedError
from ..ehs import Ops
from ..partitions import partitions_up_to
from ..thetaids import IdentityDescriptor, ParamSpec
from .rng import SplitMix64
from .sampler import MAX_ATTEMPTS

NUMERIC, EXACT = "numeric", "exact"


@dataclass(frozen=True)
class Entry:
    id: str
    summary: str
    defaults: dict = field(default_factory=dict)
    numeric: Callable[[dict, int, int], dict] | None = None
    exact: Callable[[dict, int, int], dict] | None = None

    @property
    def modes(self) -> tuple[str, ...]:
        return tuple(m for m, f in ((NUMERIC, self.numeric), (EXACT, self.exact)) if f)


ENTRIES: dict[str, Entry] = {}

_SUMMARY = {
    "vm": "V_m series: direct form against the form with an extra index",
    "thm-vst": "V_m(a; t) transformed to V_m(cd/ab; s) with s_i t_i = q^-m_i",
    "new": "one-variable transformation with a_hat = q^-n cd/ab",
    "wn": "simplex series W_n with s and t interchanged",
    "elliptic-ext-n1": "one-dimensional elliptic double sum evaluated in closed form",
    "mps-consistency": "subset identity at a geometric ladder against V_m",
    "cornew": "multivariable Jackson summation (p = 0)",
    "cordmsum": "double multi-sum with determinant summand (p = 0)",
    "matrix-inverse": "sum_l M_ml Minv_lk = delta_mk (p = 0)",
}


def _add(entry: Entry):
    ENTRIES[entry.id] = entry


def get(id_: str) -> Entry:
    try:
        return ENTRIES[id_]
    except KeyError:
        raise ConfigError(f"unknown identity id {id_!r}") from None


# ---------------------------------------------------------------------------
# Numeric runners
# ---------------------------------------------------------------------------

def _numeric_from(descriptor_for: Callable[[dict], tuple[IdentityDescriptor, int]]):
    def run(params: dict, seed: int, trials: int) -> dict:
        d, n = descriptor_for(params)
        extra = {k: params[k] for k in ("r", "overrides", "p") if k in params}
        rep = thetaids.verify_numeric(d, trials, seed, 0.0, n=n, extra=extra)
        return {"max_residual": rep["max_residual"], "worst_point": rep["worst_point"]}
    return run


def _theta_descriptor(id_):
    def build(params):
        d = thetaids.REGISTRY[id_]
        n = int(params.get("n", d.default_n))
        lo, hi = d.n_range
        if d.n_range != (0, 0) and not lo <= n <= hi:
            raise ConfigError(f"{id_}: n = {n} outside [{lo}, {hi}]")
        return d, n
    return build


_ABCDQ = tuple(ParamSpec(s) for s in "abcdq")


def _ehs_descriptor(id_: str, sides, vectors=("t",), size_key="N"):
    """Descriptor whose probe is the guarded evaluation itself."""
    def build(params):
        N = int(params[size_key])
        schema = _ABCDQ + tuple(ParamSpec(v, lambda k: k) for v in vectors)

        def evaluate(P, ctx):
            return sides(P, params, Ops.elliptic(P["q"], ctx))

        d = IdentityDescriptor(id_, _SUMMARY.get(id_, id_), schema, evaluate,
                               lambda P: [], probe=evaluate)
        return d, N
    return build


def _vec_m(params, N=None) -> list[int]:
    m = params["m"]
    m = [int(m)] * (N or 1) if isinstance(m, int) else [int(v) for v in m]
    return m


# ---------------------------------------------------------------------------
# Exact runners over random rationals
# ---------------------------------------------------------------------------

def sample_rational(rng: SplitMix64, lo: int = -9, hi: int = 9) -> Fraction:
    """Nonzero p/s with |p| <= 9 and 1 <= s <= 9, not +-1."""
    while True:
        num = rng.randint(lo, hi)
        den = rng.randint(1, hi)
        f = Fraction(num, den)
        if f not in (0, 1, -1):
            return f


def _exact_random(id_: str, check: Callable[[dict, SplitMix64], tuple[bool, dict]]):
    """Run ``check`` on ``trials`` rational parameter sets; degenerate draws are redrawn."""
    def run(params: dict, seed: int, trials: int) -> dict:
        worst = None
        ok_all = True
        for trial in range(trials):
            rng = SplitMix64.substream(seed, id_, trial)
            for _ in range(MAX_ATTEMPTS):
                try:
                    ok, point = check(params, rng)
                    break
                except (PoleError, ZeroDivisionError, DegenerateFactorError):
                    continue
            else:
                raise SamplerExhaustedError(f"{id_}: no pole-free rational point")
            if not ok and ok_all:
                ok_all, worst = False, {"trial": trial, **point}
        return {"exact_pass": ok_all, "worst_point": worst}
    return run


def _jsonq(x):
    if isinstance(x, (list, tuple)):
        return [_jsonq(v) for v in x]
    return str(x)


def _rats(rng, names, vecs=(), N=0):
    P = {k: sample_rational(rng) for k in names}
    for v in vecs:
        P[v] = [sample_rational(rng) for _ in range(N)]
    return P


def _exact_deterministic(check: Callable[[dict], tuple[bool, dict | None]]):
    def run(params: dict, seed: int, trials: int) -> dict:
        ok, worst = check(params)
        return {"exact_pass": ok, "worst_point": worst}
    return run


def _all_cases(cases, fn):
    for case in cases:
        if not fn(*case):
            return False, {"case": _jsonq(case)}
    return True, None


# ---------------------------------------------------------------------------
# Theta identities
# ---------------------------------------------------------------------------

for _id, _desc in thetaids.REGISTRY.items():
    _add(Entry(_id, _desc.summary, {"n": _desc.default_n} if _desc.n_range != (0, 0) else {},
               numeric=_numeric_from(_theta_descriptor(_id))))


def _final_check(params):
    box = [int(v) for v in params.get("box", [3, 3, 3])]
    r_max = int(params.get("r", 4))
    n_opt = params.get("n", len(box))
    cases = []
    for mu in partitions_up_to(sum(box), max_len=len(box)):
        if all(mu.part(i + 1) <= box[i] for i in range(len(box))):
            n = len(mu) if n_opt == "length" else int(n_opt)
            cases += [(mu, n, r) for r in range(r_max + 1)]
    return _all_cases(cases, thetaids.verify_final_exact)


_add(Entry("final", "exact subset-sum identity over Q(q,t) indexed by a partition mu",
           {"box": [3, 3, 3], "n": 3, "r": 4}, exact=_exact_deterministic(_final_check)))


# ---------------------------------------------------------------------------
# Elliptic hypergeometric series
# ---------------------------------------------------------------------------

def _vm_sides(P, params, ops):
    m = _vec_m(params, int(params["N"]))
    args = (P["a"], P["b"], P["c"], P["d"], P["t"], m, ops)
    return ehs.eval_Vm(*args), ehs.eval_Vm_succinct(*args)


def _vst_sides(P, params, ops):
    m = _vec_m(params, int(params["N"]))
    return ehs.thmvst_sides(P["a"], P["b"], P["c"], P["d"], P["t"], m, ops)


def _new_sides(P, params, ops):
    return ehs.new_sides(P["a"], P["b"], P["c"], P["d"], int(params["n"]), ops)


def _wn_sides(P, params, ops):
    return ehs.wn_sides(P["a"], P["b"], P["c"], P["d"], P["s"], P["t"], int(params["n"]), ops)


def _ext_sides(P, params, ops):
    return ehs.elliptic_ext_n1_sides(P["a"], P["b"], P["c"], P["d"], int(params["m"]), ops)


def _mps_sides(P, params, ops):
    m = _vec_m(params, int(params["N"]))
    (r1, r2), (l1, l2) = ehs.principal_specialize_sides(P["a"], P["b"], P["c"], P["d"], P["t"], m, ops)
    return (r1, l1), (r2, l2)


def _exact_sides(sides, vecs=("t",), size_key="N"):
    def check(params, rng):
        N = int(params.get(size_key, 1))
        P = _rats(rng, "abcdq", vecs, N)
        lhs, rhs = sides(P, params, Ops.exact_mode(P["q"]))
        return lhs == rhs, {k: _jsonq(v) for k, v in P.items()}
    return check


def _ehs_entry(id_, defaults, sides, vecs=("t",), size_key="N", exact=True):
    numeric = _numeric_from(_ehs_descriptor(id_, sides, vecs, size_key))
    ex = _exact_random(id_, _exact_sides(sides, vecs, size_key)) if exact else None
    _add(Entry(id_, _SUMMARY[id_], defaults, numeric=numeric, exact=ex))


_ehs_entry("vm", {"N": 2, "m": [2, 1]}, _vm_sides)
_ehs_entry("thm-vst", {"N": 2, "m": [2, 1]}, _vst_sides)
_ehs_entry("new", {"n": 3}, _new_sides, vecs=(), size_key="n")
_ehs_entry("wn", {"N": 2, "n": 2}, _wn_sides, vecs=("s", "t"))
_ehs_entry("elliptic-ext-n1", {"m": 3}, _ext_sides, vecs=(), size_key="m")
_ehs_entry("mps-consistency", {"N": 2, "m": [1, 1]}, _mps_sides, exact=False)


def _cornew_check(params, rng):
    m = _vec_m(params)
    P = _rats(rng, "acdq", ("t",), len(m))
    ok = ehs.verify_cornew(P["a"], P["c"], P["d"], P["q"], P["t"], m)
    if len(m) == 1:
        # with t = (1) the sum is the terminating very-well-poised 6phi5
        j = ehs.jackson_6w5(P["a"], P["c"], P["d"], m[0], P["q"])
        c = ehs.cornew_sides(P["a"], P["c"], P["d"], [1], m, P["q"])
        ok = ok and j == c and j[0] == j[1]
    return ok, {k: _jsonq(v) for k, v in P.items()}


def _cordmsum_check(params, rng):
    m = _vec_m(params)
    P = _rats(rng, "abcdq", ("t",), len(m))
    ok = ehs.verify_cordmsum(P["a"], P["b"], P["c"], P["d"], P["t"], m, P["q"])
    return ok, {k: _jsonq(v) for k, v in P.items()}


def _minv_check(params, rng):
    m = _vec_m(params)
    P = _rats(rng, "abcdq", ("t",), len(m))
    ok = True
    for mm in product(*(range(v + 1) for v in m)):
        for k in product(*(range(v + 1) for v in mm)):
            if ehs.matrix_inverse_defect(list(mm), list(k), P["a"], P["b"], P["c"], P["d"],
                                         P["t"], P["q"]) != 0:
                ok = False
    return ok, {k: _jsonq(v) for k, v in P.items()}


_add(Entry("cornew", _SUMMARY["cornew"], {"m": [2, 2]},
           exact=_exact_random("cornew", _cornew_check)))
_add(Entry("cordmsum", _SUMMARY["cordmsum"], {"m": [2, 2]},
           exact=_exact_random("cordmsum", _cordmsum_check)))
_add(Entry("matrix-inverse", _SUMMARY["matrix-inverse"], {"m": [2, 2]},
           exact=_exact_random("matrix-inverse", _minv_check)))


# ---------------------------------------------------------------------------
# Quadratic Macdonald identity and relatives (exact in Q(q,t))
# ---------------------------------------------------------------------------

def _nd(params):
    return int(params["n"]), int(params["D"])


def _pieri_cases(params):
    size, length, r_max = int(params["size"]), int(params["length"]), int(params["r"])
    return [(mu, r) for mu in partitions_up_to(size, max_len=length) for r in range(r_max + 1)]


def _proppieri(params):
    return _all_cases(_pieri_cases(params), lambda mu, r: (
        kawanaka.verify_proppieri(mu, r, "horizontal") and kawanaka.pieri_forms_agree(mu, r)))


def _proppieri_prime(params):
    return _all_cases(_pieri_cases(params), lambda mu, r: (
        kawanaka.verify_proppieri(mu, r, "vertical") and kawanaka.pieri_prime_matches_final(mu, r)))


def _md(variant):
    def check(params):
        n, D = _nd(params)
        ok = all(kawanaka.verify_MD(variant, n, D, b) for b in (None, 0, 1))
        return ok, None if ok else {"n": n, "D": D}
    return check


def _nd_check(fn):
    def check(params):
        n, D = _nd(params)
        ok = fn(n, D)
        return ok, None if ok else {"n": n, "D": D}
    return check


_K = [
    ("kawanaka", "sum of b^- P_lambda(x; q^2, t^2) against its product form", {"n": 3, "D": 5},
     _nd_check(kawanaka.verify_kawanaka)),
    ("proppieri", "horizontal-strip Pieri identity for b^-, and its conjugate agreement",
     {"size": 5, "length": 4, "r": 4}, _proppieri),
    ("proppieri-prime", "vertical-strip Pieri identity, and the subset-sum identity reproducing it",
     {"size": 5, "length": 4, "r": 4}, _proppieri_prime),
    ("rec", "adding one variable to the b^- sum", {"n": 2, "D": 3},
     _nd_check(kawanaka.verify_recursion)),
    ("md-a", "odd-column graded sum over Q(q,t,b)", {"n": 2, "D": 3}, _md("a")),
    ("md-b", "odd-row graded sum over Q(q,t,b)", {"n": 2, "D": 3}, _md("b")),
    ("schur-qt", "q = t case: hook products times Schur polynomials", {"n": 2, "D": 3},
     _nd_check(lambda n, D: kawanaka.verify_specialized("schur", n, D))),
    ("hall-littlewood", "q = 0 case: multiplicity products times P_lambda(x; t^2)", {"n": 2, "D": 3},
     _nd_check(lambda n, D: kawanaka.verify_specialized("hall-littlewood", n, D))),
]
for _id, _summary, _defaults, _check in _K:
    _add(Entry(_id, _summary, _defaults, exact=_exact_deterministic(_check)))


def resolve_params(entry: Entry, params: dict) -> dict:
    """Defaults overlaid with ``params``; unknown keys are a config error."""
    allowed = set(entry.defaults) | {"overrides", "p", "r"}
    bad = set(params) - allowed
    if bad:
        raise ConfigError(f"{entry.id}: unknown parameter(s) {sorted(bad)}")
    out = dict(entry.defaults)
    out.update(params)
    if "m" in out and "N" in out and not isinstance(out["m"], int) and len(out["m"]) != int(out["N"]):
        raise ConfigError(f"{entry.id}: m has {len(out['m'])} entries but N = {out['N']}")
    return out


def describe() -> list[dict]:
    return [{"id": e.id, "modes": list(e.modes), "summary": e.summary, "defaults": e.defaults}
            for e in ENTRIES.values()]

