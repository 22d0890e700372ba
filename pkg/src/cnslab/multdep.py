"""
Exact multiplicative dependence of two imaginary quadratic integers.

Norms reduce the question to rational integers: if alpha**p == beta**q then
N(alpha)**p == N(beta)**q, so (p, q) is a multiple of the minimal norm pair (u, v), and
alpha**u / beta**v is a root of unity of K, killed by the exponent omega(K).
"""
from __future__ import annotations

import logging
from math import gcd
from typing import Optional

from pydantic import BaseModel
from sympy import factorint, integer_nthroot, isprime

from .errors import FactorizationIncomplete, UnitInput
from .ring import QuadInt, format_quadint, norm, power

logger = logging.getLogger(__name__)

TRIAL_DIVISION_BOUND = 2**32


class MultDepVerdict(BaseModel):
    dependent: bool
    u: Optional[int] = None
    v: Optional[int] = None
    w: Optional[int] = None
    alpha: str = ""
    beta: str = ""


def prime_exponents(n: int) -> dict[int, int]:
    """
    Prime factorisation by trial division up to 2**32 plus sympy's cofactor methods.

    A prime factor above 2**32 is certified by isprime and accepted rather than rejected;
    only a composite cofactor raises FactorizationIncomplete.
    """
    factors = factorint(n, limit=TRIAL_DIVISION_BOUND)
    for p in factors:
        if not isprime(p):
            raise FactorizationIncomplete(f"Composite cofactor {p} of {n} left after trial division", cofactor=p)
    return factors


def int_mult_dep(m: int, n: int) -> tuple[bool, Optional[int], Optional[int]]:
    """(dependent, u, v) with m**u == n**v for the minimal positive (u, v); (False, None, None) otherwise."""
    if m < 2 or n < 2:
        raise ValueError(f"int_mult_dep needs m, n >= 2, got {m}, {n}")
    fm, fn = prime_exponents(m), prime_exponents(n)
    if fm.keys() != fn.keys():
        return False, None, None
    p0 = min(fm)
    g = gcd(fm[p0], fn[p0])
    u, v = fn[p0] // g, fm[p0] // g
    if any(u * fm[p] != v * fn[p] for p in fm):
        return False, None, None
    return True, u, v


def mult_dep(alpha: QuadInt, beta: QuadInt) -> MultDepVerdict:
    alpha._check(beta)
    if norm(alpha) < 2 or norm(beta) < 2:
        raise UnitInput(f"mult_dep needs norms >= 2: {format_quadint(alpha)}, {format_quadint(beta)}")
    names = dict(alpha=format_quadint(alpha), beta=format_quadint(beta))
    candidate, u, v = int_mult_dep(norm(alpha), norm(beta))
    if not candidate:
        return MultDepVerdict(dependent=False, **names)
    w = alpha.field.omega_K
    if power(alpha, u * w) == power(beta, v * w):
        return MultDepVerdict(dependent=True, u=u, v=v, w=w, **names)
    return MultDepVerdict(dependent=False, u=u, v=v, **names)


def brute_force_dependent(alpha: QuadInt, beta: QuadInt, max_exponent: int = 24) -> bool:
    """Search alpha**p == beta**q over 1 <= p, q <= max_exponent."""
    alpha_powers = {}
    x = alpha
    for p in range(1, max_exponent + 1):
        alpha_powers[(x.a, x.b)] = p
        x = x * alpha
    y = beta
    for _ in range(max_exponent):
        if (y.a, y.b) in alpha_powers:
            return True
        y = y * beta
    return False


def qi_scan(a_max: int) -> list[tuple[QuadInt, QuadInt]]:
    """Dependent unordered pairs among the Gaussian CNS bases -a +- i, 1 <= a <= a_max."""
    from .ring import make_field

    gaussian = make_field(1)
    bases = [QuadInt(gaussian, -a, s) for a in range(1, a_max + 1) for s in (1, -1)]
    pairs = []
    for i, alpha in enumerate(bases):
        for beta in bases[i + 1 :]:
            if mult_dep(alpha, beta).dependent:
                pairs.append((alpha, beta))
    pairs.sort(key=lambda ab: (ab[0].a, -ab[0].b, ab[1].a, -ab[1].b))
    return pairs


def lebesgue_scan(a_max: int) -> list[tuple[int, int, int]]:
    """All (a, x, v) with a**2 + 1 == x**v, v >= 3, x >= 2, 1 <= a <= a_max."""
    hits = []
    for a in range(1, a_max + 1):
        n = a * a + 1
        for v in range(3, n.bit_length()):
            x, exact = integer_nthroot(n, v)
            if exact and x >= 2:
                hits.append((a, int(x), v))
    if hits:
        logger.warning(f"lebesgue_scan found perfect powers: {hits}")
    return hits
