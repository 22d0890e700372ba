"""
Heights and the numeric bound evaluators: absolute logarithmic height of integers of K,
the height inequalities, Matveev's lower bound, the Loxton-van der Poorten exponent bound
and the digit-count bound function. Everything is binary64 with natural logs.
"""
from __future__ import annotations

import math
from typing import Sequence

from pydantic import BaseModel, field_validator, model_validator

from .errors import DomainError, ZeroInput, ZeroPolynomial
from .ring import QuadInt, format_quadint, norm

TOLERANCE = 1e-9


class MatveevParams(BaseModel):
    T: int
    D: int
    logA: list[float]
    B: float

    @field_validator("T", "D")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @field_validator("B")
    @classmethod
    def _b_at_least_one(cls, value: float) -> float:
        if value < 1:
            raise ValueError("B must be >= 1")
        return value

    @model_validator(mode="after")
    def _check_logA(self) -> "MatveevParams":
        if len(self.logA) != self.T:
            raise ValueError(f"logA has {len(self.logA)} entries, expected T={self.T}")
        floor = 0.16 / self.D
        if any(x < floor - TOLERANCE * floor for x in self.logA):
            raise ValueError(f"every logA entry must be >= 0.16/D = {floor}")
        return self


class LvdpParams(BaseModel):
    T: int
    D: int
    omega_K: int
    heights: list[float]
    lambda_D: float

    @field_validator("T")
    @classmethod
    def _at_least_two(cls, value: int) -> int:
        if value < 2:
            raise ValueError("T must be >= 2")
        return value

    @field_validator("D", "omega_K")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be a positive integer")
        return value

    @field_validator("lambda_D")
    @classmethod
    def _lambda_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("lambda_D must be positive")
        return value

    @model_validator(mode="after")
    def _check_heights(self) -> "LvdpParams":
        if len(self.heights) != self.T:
            raise ValueError(f"{len(self.heights)} heights given, expected T={self.T}")
        if any(h < 0 for h in self.heights):
            raise ValueError("heights are nonnegative")
        return self


def height(gamma: QuadInt) -> float:
    """Absolute logarithmic height of a nonzero integer of K: (1/2) log N(gamma)."""
    n = norm(gamma)
    if n == 0:
        raise ZeroInput("height(0) is undefined")
    return 0.5 * math.log(n)


def check_height_product(d1: QuadInt, d2: QuadInt) -> bool:
    return height(d1 * d2) <= height(d1) + height(d2) + TOLERANCE


def evaluate_poly(f: Sequence[int], delta: QuadInt) -> QuadInt:
    """f[i] is the coefficient of x**i."""
    acc = delta.field.zero()
    for c in reversed(f):
        acc = acc * delta + c
    return acc


def poly_degree(f: Sequence[int]) -> int:
    for i in range(len(f) - 1, -1, -1):
        if f[i]:
            return i
    raise ZeroPolynomial("f is the zero polynomial")


def poly_height_bound(f: Sequence[int], delta: QuadInt) -> float:
    """(deg f) h(delta) + log L(f), L(f) the sum of absolute coefficients."""
    deg = poly_degree(f)
    return deg * height(delta) + math.log(sum(abs(c) for c in f))


def check_poly_height(f: Sequence[int], delta: QuadInt) -> bool:
    value = evaluate_poly(f, delta)
    if not value:
        raise ZeroInput(f"f vanishes at {format_quadint(delta)}")
    return height(value) <= poly_height_bound(f, delta) + TOLERANCE


def matveev_bound(p: MatveevParams) -> float:
    """Lower bound for log|Lambda| with Lambda = prod delta_j**k_j - 1 != 0."""
    T, D = p.T, p.D
    return (
        -3
        * 30 ** (T + 4)
        * (T + 1) ** 5.5
        * D ** (T + 2)
        * math.log(math.e * D)
        * math.prod(p.logA)
        * math.log(math.e * T * p.B)
    )


def lvdp_exponent_bound(p: LvdpParams) -> list[float]:
    """Bounds |n_j| <= (T-1)! omega(K) prod_{i != j} D h_i / lambda(D)."""
    scaled = [p.D * h / p.lambda_D for h in p.heights]
    lead = math.factorial(p.T - 1) * p.omega_K
    return [lead * math.prod(scaled[:j] + scaled[j + 1 :]) for j in range(p.T)]


def theorem_bound(x: float, C: float) -> float:
    """log log x / (log log log x + C), defined for x > e**e with a positive denominator."""
    if not x > math.exp(math.e):
        raise DomainError(f"theorem_bound needs x > e^e ~ 15.154, got {x}")
    loglog = math.log(math.log(x))
    denominator = math.log(loglog) + C
    if not denominator > 0:
        raise DomainError(f"log log log x + C = {denominator} is not positive")
    return loglog / denominator
