"""
Canonical number systems over imaginary quadratic rings: base validation, digit steps,
alpha-adic expansion and evaluation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from pydantic import BaseModel

from . import ring
from .errors import (
    AmbiguousDigit,
    DigitOutOfRange,
    NoDigit,
    NonTerminating,
    NotCns,
    NotQuadratic,
    ParseError,
    RingMismatch,
)
from .ring import FieldSpec, QuadInt, format_quadint, norm

logger = logging.getLogger(__name__)

GUARD_SLACK = 64


class CnsCheck(BaseModel):
    criterion_ok: bool
    ring_match: bool
    E: Optional[int] = None
    F: Optional[int] = None


class ExhaustiveReport(BaseModel):
    base: str
    n_max: int
    count: int
    all_roundtrip: bool
    max_length: int
    failures: list[str] = []

    def merge(self, other: "ExhaustiveReport") -> "ExhaustiveReport":
        return ExhaustiveReport(
            base=self.base,
            n_max=max(self.n_max, other.n_max),
            count=self.count + other.count,
            all_roundtrip=self.all_roundtrip and other.all_roundtrip,
            max_length=max(self.max_length, other.max_length),
            failures=sorted(self.failures + other.failures)[:20],
        )


@dataclass(frozen=True, slots=True)
class CnsBase:
    alpha: QuadInt
    E: int
    F: int
    mod_alpha: float
    log_mod_alpha: float
    criterion_ok: bool = True

    @property
    def field(self) -> FieldSpec:
        return self.alpha.field

    @property
    def digit_max(self) -> int:
        return self.F - 1

    @property
    def eps_a(self) -> int:
        return self.F - 1

    def __str__(self) -> str:
        return format_quadint(self.alpha)


@dataclass(frozen=True, slots=True)
class DigitString:
    """Digits of an alpha-adic expansion; index i is the coefficient of alpha**i."""

    base: CnsBase
    digits: tuple[int, ...] = field(default=(0,))

    @property
    def L(self) -> int:
        return len(self.digits) - 1

    @property
    def Z(self) -> int:
        return sum(1 for e in self.digits if e)

    @property
    def S(self) -> int:
        return sum(self.digits)

    def nonzero_terms(self) -> list[tuple[int, int]]:
        """(exponent, digit) pairs for nonzero digits, highest exponent first."""
        return [(i, e) for i, e in reversed(list(enumerate(self.digits))) if e]

    def to_json(self) -> dict:
        return {
            "base": format_quadint(self.base.alpha),
            "d": self.base.field.d,
            "digits": list(self.digits),
        }

    def __str__(self) -> str:
        return f"({' '.join(str(e) for e in reversed(self.digits))})_{format_quadint(self.base.alpha)}"


def minimal_poly(alpha: QuadInt) -> tuple[int, int]:
    """(E, F) with x^2 + E x + F the minimal polynomial of alpha."""
    if alpha.is_rational():
        raise NotQuadratic(f"{format_quadint(alpha)} is a rational integer")
    return -ring.trace(alpha), norm(alpha)


def is_cns(alpha: QuadInt) -> CnsCheck:
    if alpha.is_rational():
        return CnsCheck(criterion_ok=False, ring_match=False)
    E, F = minimal_poly(alpha)
    return CnsCheck(
        criterion_ok=F >= 2 and -1 <= E <= F,
        ring_match=E * E - 4 * F == alpha.field.disc,
        E=E,
        F=F,
    )


def make_base(alpha: QuadInt, *, check_criterion: bool = True) -> CnsBase:
    """Validate alpha as a CNS base.

    With check_criterion=False only the ring match and F >= 2 are enforced; such bases are
    used to test the criterion against brute force and may fail to expand.
    """
    check = is_cns(alpha)
    if alpha.is_rational():
        raise NotQuadratic(f"{format_quadint(alpha)} is a rational integer")
    if check.F < 2 or (check_criterion and not check.criterion_ok):
        raise NotCns(f"{format_quadint(alpha)} fails F >= 2 and -1 <= E <= F (E={check.E}, F={check.F})")
    if not check.ring_match:
        raise RingMismatch(
            f"{format_quadint(alpha)}: E^2-4F = {check.E**2 - 4 * check.F} != disc {alpha.field.disc}"
        )
    mod_alpha = math.sqrt(check.F)
    return CnsBase(
        alpha=alpha,
        E=check.E,
        F=check.F,
        mod_alpha=mod_alpha,
        log_mod_alpha=math.log(mod_alpha),
        criterion_ok=check.criterion_ok,
    )


def digit_step(gamma: QuadInt, base: CnsBase) -> tuple[int, QuadInt]:
    """The unique digit e with alpha | gamma - e, and the quotient (gamma - e)/alpha."""
    found = [e for e in range(base.F) if ring.divides(base.alpha, gamma - e)]
    if not found:
        raise NoDigit(f"No digit for {format_quadint(gamma)} in base {base}")
    if len(found) > 1:
        raise AmbiguousDigit(f"Digits {found} all work for {format_quadint(gamma)} in base {base}")
    digit = found[0]
    return digit, ring.exact_div(gamma - digit, base.alpha)


def step_guard(gamma: QuadInt, base: CnsBase) -> int:
    n = norm(gamma)
    log1p_mod = math.log1p(math.sqrt(n)) if n < 1 << 1000 else 0.5 * math.log(n)
    return math.ceil(2 * log1p_mod / base.log_mod_alpha) + GUARD_SLACK


def expand(gamma: QuadInt, base: CnsBase) -> DigitString:
    """alpha-adic expansion of gamma.

    Runs the digit recurrence in the basis {1, alpha}: for gamma = u + v*alpha the digit is
    u mod F and the quotient is (v - E*q) - q*alpha with q = (u - digit)/F.
    """
    if not gamma:
        return DigitString(base, (0,))
    u, v = ring.to_alpha_coordinates(gamma, base.alpha)
    F, E = base.F, base.E
    guard = step_guard(gamma, base)
    digits = []
    while u or v:
        if len(digits) > guard:
            raise NonTerminating(
                f"Expansion of {format_quadint(gamma)} in base {base} exceeded {guard} steps",
                gamma=gamma,
                steps=len(digits),
            )
        q, e = divmod(u, F)
        digits.append(e)
        u, v = v - E * q, -q
    return DigitString(base, tuple(digits))


def expand_by_steps(gamma: QuadInt, base: CnsBase) -> DigitString:
    """Reference expansion that iterates digit_step; slow, used to cross-check expand."""
    if not gamma:
        return DigitString(base, (0,))
    guard = step_guard(gamma, base)
    digits = []
    while gamma:
        if len(digits) > guard:
            raise NonTerminating(f"Expansion exceeded {guard} steps", gamma=gamma, steps=len(digits))
        e, gamma = digit_step(gamma, base)
        digits.append(e)
    return DigitString(base, tuple(digits))


def evaluate(ds: DigitString) -> QuadInt:
    """Horner evaluation of sum digits[i] * alpha**i."""
    base = ds.base
    acc = base.field.zero()
    for e in reversed(ds.digits):
        if not 0 <= e < base.F:
            raise DigitOutOfRange(f"Digit {e} outside 0..{base.F - 1}")
        acc = acc * base.alpha + e
    return acc


def digit_string(base: CnsBase, digits) -> DigitString:
    digits = tuple(int(e) for e in digits)
    if not digits:
        raise ParseError("Empty digit list")
    for e in digits:
        if not 0 <= e < base.F:
            raise DigitOutOfRange(f"Digit {e} outside 0..{base.F - 1}")
    return DigitString(base, digits)


def digit_string_from_json(data: dict) -> DigitString:
    try:
        alpha = ring.parse_quadint(data["base"], data.get("d"))
        digits = data["digits"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed DigitString JSON: {e}") from e
    return digit_string(make_base(alpha), digits)


def _check_roundtrip(gamma: QuadInt, base: CnsBase) -> tuple[bool, int]:
    ds = expand(gamma, base)
    in_range = all(0 <= e < base.F for e in ds.digits)
    leading_ok = ds.L == 0 or ds.digits[-1] != 0
    return in_range and leading_ok and evaluate(ds) == gamma, ds.L


def verify_band(base: CnsBase, lo: int, hi: int) -> ExhaustiveReport:
    """Exhaustive round-trip check over lo < norm <= hi (plus zero when lo == 0)."""
    gammas = ring.enumerate_norm_band(base.field, lo, hi)
    if lo <= 0:
        gammas.insert(0, base.field.zero())
    ok = True
    max_length = 0
    failures = []
    for gamma in gammas:
        good, L = _check_roundtrip(gamma, base)
        max_length = max(max_length, L)
        if not good:
            ok = False
            failures.append(format_quadint(gamma))
    return ExhaustiveReport(
        base=str(base),
        n_max=hi,
        count=len(gammas),
        all_roundtrip=ok,
        max_length=max_length,
        failures=failures[:20],
    )


def verify_exhaustive(base: CnsBase, n_max: int, workers: Optional[int] = None) -> ExhaustiveReport:
    """Expand and re-evaluate every gamma with norm <= n_max; NonTerminating propagates."""
    from .parallel import map_bands

    reports = map_bands(verify_band, base, n_max=n_max, workers=workers)
    report = reports[0]
    for other in reports[1:]:
        report = report.merge(other)
    logger.info(f"verify_exhaustive {base} n_max={n_max}: {report.count} elements, ok={report.all_roundtrip}")
    return report


def brute_force_is_cns(alpha: QuadInt, n_max: int) -> bool:
    """CNS verdict by exhaustive expansion; alpha must match the ring discriminant."""
    base = make_base(alpha, check_criterion=False)
    try:
        return verify_exhaustive(base, n_max, workers=1).all_roundtrip
    except NonTerminating as e:
        logger.debug(f"{alpha} is not a CNS base: {e}")
        return False


def criterion_matches_brute_force(alpha: QuadInt, n_max: int) -> bool:
    return is_cns(alpha).criterion_ok == brute_force_is_cns(alpha, n_max)


def katai_szabo_scan(a_max: int) -> list[CnsBase]:
    """All CNS bases u + v*i of Z[i] with |u|, |v| <= a_max, by the criterion."""
    gaussian = ring.make_field(1)
    bases = []
    for u in range(-a_max, a_max + 1):
        for v in range(-a_max, a_max + 1):
            alpha = QuadInt(gaussian, u, v)
            if not alpha or alpha.is_rational():
                continue
            check = is_cns(alpha)
            if check.criterion_ok and check.ring_match:
                bases.append(make_base(alpha))
    bases.sort(key=lambda b: (b.F, b.alpha.a, b.alpha.b))
    return bases
