"""Pole-avoiding parameter sampler.

Every sampled nonzero complex has modulus log-uniform in [0.6, 1.6] and
argument uniform in [0, 2 pi); the nome has modulus uniform in
[0.05, 0.5] and uniform argument.  A candidate is rejected when any
denominator theta factor has modulus below 1e-6.
"""

from __future__ import annotations

import cmath
import math
import re

from ..errors import ConfigError, ConstraintError, DomainError, PoleError, SamplerExhaustedError
from ..thetanum import ThetaContext, theta
from .rng import SplitMix64

MOD_RANGE = (0.6, 1.6)
P_RANGE = (0.05, 0.5)
POLE_THRESHOLD = 1e-6
MAX_ATTEMPTS = 1000

_INDEXED = re.compile(r"^([A-Za-z]\w*?)_(\d+)$")


def sample_complex(rng: SplitMix64) -> complex:
    lo, hi = map(math.log, MOD_RANGE)
    r = math.exp(rng.uniform(lo, hi))
    return cmath.rect(r, rng.uniform(0.0, 2 * math.pi))


def sample_nome(rng: SplitMix64) -> complex:
    return cmath.rect(rng.uniform(*P_RANGE), rng.uniform(0.0, 2 * math.pi))


def _apply_overrides(P: dict, overrides: dict) -> dict:
    """Overrides map a name (``v`` or ``x_2``) to a value or to another name."""
    def lookup(name):
        m = _INDEXED.match(name)
        if m and m.group(1) in P and isinstance(P[m.group(1)], list):
            return P[m.group(1)][int(m.group(2)) - 1]
        if name in P:
            return P[name]
        raise ConfigError(f"unknown parameter {name!r}")

    for name, value in overrides.items():
        if isinstance(value, str):
            value = lookup(value)
        m = _INDEXED.match(name)
        if m and m.group(1) in P and isinstance(P[m.group(1)], list):
            k = int(m.group(2)) - 1
            if not 0 <= k < len(P[m.group(1)]):
                raise ConfigError(f"index out of range in {name!r}")
            P[m.group(1)][k] = complex(value)
        elif name in P:
            P[name] = [complex(a) for a in value] if isinstance(value, (list, tuple)) else complex(value)
        else:
            raise ConfigError(f"unknown parameter {name!r}")
    return P


def sample_point(schema, n: int, rng: SplitMix64, pole_args, solve=lambda P: P,
                 overrides: dict | None = None, fixed_p: complex | None = None, probe=None):
    """Draw until every denominator theta factor clears the threshold.

    ``schema`` is a sequence of objects with ``name`` and ``length``
    (``None`` for scalars).  ``probe(P, ctx)``, when given, evaluates the
    candidate with guarded denominators; a PoleError there also rejects it.
    Returns ``(params, ThetaContext)``.
    """
    for _ in range(MAX_ATTEMPTS):
        P: dict = {}
        for spec in schema:
            if spec.length is None:
                P[spec.name] = sample_complex(rng)
            else:
                P[spec.name] = [sample_complex(rng) for _ in range(spec.length(n))]
        p = sample_nome(rng) if fixed_p is None else fixed_p
        if overrides:
            P = _apply_overrides(P, dict(overrides))
        try:
            P = solve(P)
            ctx = ThetaContext(p)
            if all(abs(theta(a, ctx)) >= POLE_THRESHOLD for a in pole_args(P)):
                if probe is not None:
                    probe(P, ctx)
                return P, ctx
        except (PoleError, DomainError, ConstraintError, ZeroDivisionError):
            pass
    raise SamplerExhaustedError(f"no pole-free point after {MAX_ATTEMPTS} attempts")


def sample_identity_point(descriptor, n: int, seed: int, trial: int, extra: dict | None = None):
    """Sample for one trial of a registered identity from its own substream."""
    extra = dict(extra or {})
    rng = SplitMix64.substream(seed, descriptor.id, trial)
    P, ctx = sample_point(descriptor.params, n, rng, descriptor.pole_args, descriptor.solve,
                          overrides=extra.get("overrides"), fixed_p=extra.get("p"),
                          probe=getattr(descriptor, "probe", None))
    for k in ("r",):
        if k in extra:
            P[k] = extra[k]
    return P, ctx
