"""
Exact arithmetic in the ring of integers of an imaginary quadratic field K = Q(sqrt(-d)).

Elements are stored as coordinate pairs (a, b) over the integral basis {1, w}, where
w = sqrt(-d) when d is not 3 mod 4 and w = (1 + sqrt(-d))/2 otherwise. Every equality
decision in the package is made on these integers; floats only appear in moduli and logs.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from sympy import factorint

from .errors import FieldMismatch, NotDivisible, NotPositive, NotSquarefree, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class FieldSpec:
    d: int
    disc: int
    half_basis: bool
    omega_K: int

    @property
    def name(self) -> str:
        return f"Q(sqrt(-{self.d}))"

    @property
    def w_sq_const(self) -> int:
        """The c in w^2 = w - c (half basis) or w^2 = -c (plain basis)."""
        return (1 + self.d) // 4 if self.half_basis else self.d

    def zero(self) -> "QuadInt":
        return QuadInt(self, 0, 0)

    def one(self) -> "QuadInt":
        return QuadInt(self, 1, 0)

    def w(self) -> "QuadInt":
        return QuadInt(self, 0, 1)

    def __call__(self, a: int, b: int = 0) -> "QuadInt":
        return QuadInt(self, a, b)

    def __repr__(self) -> str:
        return f"FieldSpec(d={self.d})"


@lru_cache(maxsize=None)
def make_field(d: int) -> FieldSpec:
    """Build the FieldSpec for Q(sqrt(-d)); d must be a squarefree positive integer."""
    if d <= 0:
        raise NotPositive(f"d must be positive, got {d}")
    if d > 1 and any(e > 1 for e in factorint(d).values()):
        raise NotSquarefree(f"{d} has a square factor")
    half_basis = d % 4 == 3
    disc = -d if half_basis else -4 * d
    omega_K = 4 if d == 1 else 6 if d == 3 else 2
    return FieldSpec(d=d, disc=disc, half_basis=half_basis, omega_K=omega_K)


@dataclass(frozen=True, slots=True)
class QuadInt:
    field: FieldSpec
    a: int
    b: int

    def _check(self, other: "QuadInt") -> None:
        if self.field is not other.field and self.field.d != other.field.d:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.field, other, 0)
        self._check(other)
        return other

    def __add__(self, other) -> "QuadInt":
        if not isinstance(other, (int, QuadInt)):
            return NotImplemented
        other = self._coerce(other)
        return QuadInt(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadInt":
        if not isinstance(other, (int, QuadInt)):
            return NotImplemented
        other = self._coerce(other)
        return QuadInt(self.field, self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "QuadInt":
        if not isinstance(other, int):
            return NotImplemented
        return QuadInt(self.field, other - self.a, -self.b)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.field, -self.a, -self.b)

    def __mul__(self, other) -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.field, self.a * other, self.b * other)
        if not isinstance(other, QuadInt):
            return NotImplemented
        self._check(other)
        a, b, e, f = self.a, self.b, other.a, other.b
        bf = b * f
        if self.field.half_basis:
            return QuadInt(self.field, a * e - self.field.w_sq_const * bf, a * f + b * e + bf)
        return QuadInt(self.field, a * e - self.field.d * bf, a * f + b * e)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuadInt":
        return power(self, k)

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        return format_quadint(self)

    def __repr__(self) -> str:
        return f"QuadInt({format_quadint(self)})"


def norm(x: QuadInt) -> int:
    a, b = x.a, x.b
    if x.field.half_basis:
        return a * a + a * b + x.field.w_sq_const * b * b
    return a * a + x.field.d * b * b


def conj(x: QuadInt) -> QuadInt:
    if x.field.half_basis:
        return QuadInt(x.field, x.a + x.b, -x.b)
    return QuadInt(x.field, x.a, -x.b)


def trace(x: QuadInt) -> int:
    return 2 * x.a + x.b if x.field.half_basis else 2 * x.a


def add(x: QuadInt, y: QuadInt) -> QuadInt:
    return x + y


def sub(x: QuadInt, y: QuadInt) -> QuadInt:
    return x - y


def neg(x: QuadInt) -> QuadInt:
    return -x


def mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def exact_div(x: QuadInt, y: QuadInt) -> QuadInt:
    """Return q with q*y == x, or raise NotDivisible."""
    x._check(y)
    n = norm(y)
    if n == 0:
        raise ZeroDivisionError("exact_div by zero")
    p = x * conj(y)
    qa, ra = divmod(p.a, n)
    qb, rb = divmod(p.b, n)
    if ra or rb:
        raise NotDivisible(f"{format_quadint(y)} does not divide {format_quadint(x)}")
    return QuadInt(x.field, qa, qb)


def divides(y: QuadInt, x: QuadInt) -> bool:
    n = norm(y)
    p = x * conj(y)
    return p.a % n == 0 and p.b % n == 0


def power(x: QuadInt, k: int) -> QuadInt:
    if k < 0:
        raise ValueError("negative exponents leave O_K")
    result = x.field.one()
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def embed_complex(x: QuadInt) -> tuple[float, float]:
    """Embedding into C with Im(w) > 0."""
    root = math.sqrt(x.field.d)
    if x.field.half_basis:
        return (x.a + x.b / 2, x.b * root / 2)
    return (float(x.a), x.b * root)


def modulus(x: QuadInt) -> float:
    return math.sqrt(norm(x))


def log_modulus(x: QuadInt) -> float:
    """log|x| from the exact norm; safe for norms beyond float range."""
    return 0.5 * math.log(norm(x))


def argument(x: QuadInt) -> float:
    """Principal argument in (-pi, pi]."""
    re_, im_ = embed_complex(x)
    return math.atan2(im_, re_)


def _band_b_range(field: FieldSpec, hi: int) -> range:
    bmax = math.isqrt(4 * hi // field.d) if field.half_basis else math.isqrt(hi // field.d)
    return range(-bmax, bmax + 1)


def _band_a_values(field: FieldSpec, b: int, lo: int, hi: int) -> Iterator[int]:
    """a-coordinates with lo < norm(a + b w) <= hi for a fixed b."""
    if field.half_basis:
        # norm*4 = (2a+b)^2 + d b^2
        db = field.d * b * b
        outer = 4 * hi - db
        if outer < 0:
            return
        jmax = math.isqrt(outer)
        inner = 4 * lo - db
        jmin = math.isqrt(inner) + 1 if inner >= 0 else 0
        js = range(jmin, jmax + 1)
        for j in sorted({s * j for j in js for s in (1, -1)}):
            if (j - b) % 2 == 0:
                yield (j - b) // 2
    else:
        db = field.d * b * b
        outer = hi - db
        if outer < 0:
            return
        amax = math.isqrt(outer)
        inner = lo - db
        if inner < 0:
            yield from range(-amax, amax + 1)
        else:
            amin = math.isqrt(inner) + 1
            yield from range(-amax, -amin + 1)
            yield from range(amin, amax + 1)


def enumerate_norm_band(field: FieldSpec, lo: int, hi: int) -> list[QuadInt]:
    """Every x with lo < norm(x) <= hi, ordered by (norm, a, b)."""
    lo = max(lo, 0)
    if hi <= lo:
        return []
    keyed = []
    for b in _band_b_range(field, hi):
        for a in _band_a_values(field, b, lo, hi):
            x = QuadInt(field, a, b)
            keyed.append((norm(x), a, b, x))
    keyed.sort(key=lambda t: t[:3])
    return [t[3] for t in keyed]


def enumerate_by_norm(field: FieldSpec, n_max: int) -> list[QuadInt]:
    """All nonzero x with norm(x) <= n_max, ordered by (norm, a, b)."""
    return enumerate_norm_band(field, 0, n_max)


def count_by_norm(field: FieldSpec, n_max: int) -> int:
    return sum(
        1 for b in _band_b_range(field, n_max) for _ in _band_a_values(field, b, 0, n_max)
    )


def to_alpha_coordinates(x: QuadInt, alpha: QuadInt) -> tuple[int, int]:
    """(u, v) with x = u + v*alpha; requires alpha to have w-coordinate +-1."""
    if alpha.b not in (1, -1):
        raise ValueError(f"{format_quadint(alpha)} does not generate O_K over Z")
    return x.a - x.b * alpha.b * alpha.a, x.b * alpha.b


def from_alpha_coordinates(u: int, v: int, alpha: QuadInt) -> QuadInt:
    return QuadInt(alpha.field, u + v * alpha.a, v * alpha.b)


_QUADINT_RE = re.compile(r"^\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*w\[(\d+)\]\s*$")


def format_quadint(x: QuadInt) -> str:
    return f"{x.a}{x.b:+d}*w[{x.field.d}]"


def parse_quadint(text: str, d: int | None = None) -> QuadInt:
    """Parse "a+b*w[d]"; when d is given it must agree with the bracketed value."""
    match = _QUADINT_RE.match(text)
    if not match:
        raise ParseError(f"Expected 'a+b*w[d]', got {text!r}")
    a = int(match.group(1))
    b = int(match.group(3)) * (-1 if match.group(2) == "-" else 1)
    text_d = int(match.group(4))
    if d is not None and d != text_d:
        raise FieldMismatch(f"{text!r} lives in d={text_d}, expected d={d}")
    return QuadInt(make_field(text_d), a, b)
