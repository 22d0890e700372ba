"""
Experiment harness for the two-base digit-count theorem.

Gadgets reproduce the quantities of the lower-bound argument for a single gamma:
the splittings (alpha-1)*gamma = A1*alpha**m_p + A2, the interval case analysis driven by
theta = c1*log log|gamma|, the linear form Lambda and its upper bound, the bound on the
exponents, and the height/Matveev parameters of the Baker step. The sweep tabulates digit
counts in two bases over every gamma up to a norm and estimates the constant C.

The argument assumes |alpha| >= |beta|; gadgets order the two bases that way and report
which input base played alpha.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from . import bounds, ring
from .cns import CnsBase, expand, make_base
from .digitstat import KpConstants
from .errors import (
    DependentBases,
    DomainError,
    EmptyInput,
    FieldMismatch,
    IndexOutOfRange,
    NotDependent,
    NotGapCase,
    ZeroInput,
)
from .multdep import mult_dep
from .ring import FieldSpec, QuadInt, format_quadint, log_modulus, norm, power

logger = logging.getLogger(__name__)

MIN_MODULUS = 16.0
DEFAULT_C1 = 2.0
LAMBDA_SLACK = 2.0
B_BOUND_SLACK = 1.0

SWEEP_COLUMNS = ["a", "b", "norm", "abs", "Za", "Sa", "La", "Zb", "Sb", "Lb", "lhs", "bound_C0"]


@dataclass(frozen=True, slots=True)
class Split:
    """(alpha-1)*gamma = A1*alpha**m_p + A2 with head = A1/(alpha-1)."""

    A1: QuadInt
    A2: QuadInt
    m_p: int
    head: QuadInt
    head_coefficients: tuple[int, ...]


class SplitQuantities(BaseModel):
    A1: str
    A2: str
    m_p: int
    B1: str
    B2: str
    l_q: int
    c3: float
    c4: float
    d3: float
    d4: float
    a2_zero: bool
    b2_zero: bool


class CaseReport(BaseModel):
    gamma: str
    alpha: str
    beta: str
    alpha_is_first: bool
    theta: float
    k: int
    X: float
    case: Literal["AllIntervalsHit", "GapFound"]
    r: int
    t: int
    s: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    interval_ok: Optional[bool] = None
    pigeonhole_bound: Optional[float] = None


class LambdaCheck(BaseModel):
    lambda_abs: float
    log_lambda: Optional[float]
    rhs: float
    holds: bool
    degenerate: bool
    a2_zero: bool
    b2_zero: bool


class BBoundCheck(BaseModel):
    B: int
    bound: float
    holds: bool


class SplitBoundsCheck(BaseModel):
    a1_upper: bool
    a2_upper: bool
    a1_lower: bool
    gamma_lower_alpha: bool
    b1_upper: bool
    b2_upper: bool
    b1_lower: bool
    gamma_lower_beta: bool

    @property
    def all_hold(self) -> bool:
        return all(self.model_dump().values())


class Delta1HeightCheck(BaseModel):
    h_head_a: float
    h_head_b: float
    head_a_bound: float
    head_b_bound: float
    theta_bound: float
    holds: bool


class BakerCheck(BaseModel):
    degenerate: bool
    log_lambda: Optional[float] = None
    matveev_lower: Optional[float] = None
    logA: list[float] = []
    B: int = 1
    holds: bool
    bases_independent: bool = True


class GammaReport(BaseModel):
    case: CaseReport
    split_identity: bool
    quantities: Optional[SplitQuantities] = None
    lam: Optional[LambdaCheck] = None
    b_bound: Optional[BBoundCheck] = None
    split_bounds: Optional[SplitBoundsCheck] = None
    delta1: Optional[Delta1HeightCheck] = None
    baker: Optional[BakerCheck] = None

    @property
    def all_hold(self) -> bool:
        checks = [self.lam, self.b_bound, self.delta1, self.baker]
        return (
            self.split_identity
            and all(c.holds for c in checks if c is not None)
            and (self.split_bounds is None or self.split_bounds.all_hold)
        )


class EmpiricalC(BaseModel):
    C_emp: float
    n_max: int
    argmax_gamma: str
    statistic: Literal["Z", "S"] = "Z"
    considered: int
    verified: bool


@dataclass(frozen=True, slots=True)
class SweepRecord:
    a: int
    b: int
    norm: int
    abs: float
    Za: int
    Sa: int
    La: int
    Zb: int
    Sb: int
    Lb: int
    lhs: int
    bound_C0: float
    d: int = 1


def order_bases(baseA: CnsBase, baseB: CnsBase) -> tuple[CnsBase, CnsBase, bool]:
    """(alpha, beta, alpha_is_first) with |alpha| >= |beta|; ties keep the input order."""
    if baseA.F >= baseB.F:
        return baseA, baseB, True
    return baseB, baseA, False


def _ordered_kp(kp_constants: Sequence[KpConstants], alpha_is_first: bool) -> tuple[KpConstants, KpConstants]:
    kp_a, kp_b = kp_constants
    return (kp_a, kp_b) if alpha_is_first else (kp_b, kp_a)


def nonzero_terms(gamma: QuadInt, base: CnsBase) -> list[tuple[int, int]]:
    """[(m_1, a_1), ..., (m_r, a_r)] with m_1 > ... > m_r."""
    if not gamma:
        return []
    return expand(gamma, base).nonzero_terms()


def split(gamma: QuadInt, base: CnsBase, p: int) -> Split:
    terms = nonzero_terms(gamma, base)
    if not 1 <= p <= len(terms):
        raise IndexOutOfRange(f"p={p} outside 1..{len(terms)} for {format_quadint(gamma)}")
    alpha = base.alpha
    m_p = terms[p - 1][0]
    head_coefficients = [0] * (terms[0][0] - m_p + 1)
    for m, digit in terms[:p]:
        head_coefficients[m - m_p] = digit
    head = bounds.evaluate_poly(head_coefficients, alpha)
    tail = base.field.zero()
    for m, digit in terms[p:]:
        tail = tail + power(alpha, m) * digit
    A1 = (alpha - 1) * head
    A2 = (alpha - 1) * tail
    if (alpha - 1) * gamma != A1 * power(alpha, m_p) + A2:
        raise AssertionError(f"split identity failed for {format_quadint(gamma)}, p={p}")
    return Split(A1=A1, A2=A2, m_p=m_p, head=head, head_coefficients=tuple(head_coefficients))


def verify_split_identity(gamma: QuadInt, baseA: CnsBase, baseB: CnsBase, p: int, q: int) -> bool:
    sa, sb = split(gamma, baseA, p), split(gamma, baseB, q)
    alpha, beta = baseA.alpha, baseB.alpha
    # sb.A1, sb.A2 are B1, B2 of the beta splitting
    lhs = (beta - 1) * (sa.A1 * power(alpha, sa.m_p) + sa.A2)
    rhs = (alpha - 1) * (sb.A1 * power(beta, sb.m_p) + sb.A2)
    return lhs == rhs == (alpha - 1) * (beta - 1) * gamma


def c3_of(base: CnsBase) -> float:
    alpha = base.alpha
    return base.eps_a * math.sqrt(norm(alpha * (alpha - 1))) / (base.mod_alpha - 1)


def c4_of(base: CnsBase, kp: KpConstants) -> float:
    return base.mod_alpha ** (-kp.e2_hat)


def split_quantities(
    gamma: QuadInt, baseA: CnsBase, baseB: CnsBase, p: int, q: int, kp_constants: Sequence[KpConstants]
) -> SplitQuantities:
    sa, sb = split(gamma, baseA, p), split(gamma, baseB, q)
    kp_a, kp_b = kp_constants
    if not sa.A2:
        logger.debug(f"A2 = 0 for {format_quadint(gamma)} at p={p}: last nonzero digit split")
    return SplitQuantities(
        A1=format_quadint(sa.A1),
        A2=format_quadint(sa.A2),
        m_p=sa.m_p,
        B1=format_quadint(sb.A1),
        B2=format_quadint(sb.A2),
        l_q=sb.m_p,
        c3=c3_of(baseA),
        c4=c4_of(baseA, kp_a),
        d3=c3_of(baseB),
        d4=c4_of(baseB, kp_b),
        a2_zero=not sa.A2,
        b2_zero=not sb.A2,
    )


def _count_within(gaps: list[int], limit: float) -> int:
    return sum(1 for g in gaps if g <= limit)


def case_split(
    gamma: QuadInt,
    baseA: CnsBase,
    baseB: CnsBase,
    c1: float,
    kp_constants: Sequence[KpConstants],
) -> CaseReport:
    """Interval case analysis with theta = c1 log log|gamma| and intervals (theta**(s-1), theta**s]."""
    if c1 <= 1:
        raise DomainError(f"c1 must exceed 1, got {c1}")
    log_gamma = log_modulus(gamma) if gamma else -math.inf
    if not log_gamma > math.log(MIN_MODULUS):
        raise DomainError(f"|gamma| must exceed {MIN_MODULUS}: {format_quadint(gamma)}")
    alpha, beta, alpha_is_first = order_bases(baseA, baseB)
    kp_alpha, _ = _ordered_kp(kp_constants, alpha_is_first)

    theta = c1 * math.log(log_gamma)
    X = 0.5 * (log_gamma / alpha.log_mod_alpha + kp_alpha.e1_hat)
    k = 0
    while theta ** (k + 1) <= X:
        k += 1

    m = [e for e, _ in nonzero_terms(gamma, alpha)]
    l = [e for e, _ in nonzero_terms(gamma, beta)]
    gaps_m = [m[0] - mi for mi in m[1:]]
    gaps_l = [l[0] - lj for lj in l[1:]]
    gaps = gaps_m + gaps_l

    report = dict(
        gamma=format_quadint(gamma),
        alpha=str(alpha),
        beta=str(beta),
        alpha_is_first=alpha_is_first,
        theta=theta,
        k=k,
        X=X,
        r=len(m),
        t=len(l),
    )
    for s in range(1, k + 1):
        lower = 0.0 if s == 1 else theta ** (s - 1)
        upper = theta**s
        if any(lower < g <= upper for g in gaps):
            continue
        below = theta ** (s - 1)
        p = 1 + _count_within(gaps_m, below)
        q = 1 + _count_within(gaps_l, below)
        # m_{r+1} = l_{t+1} = 0
        next_m = m[p] if p < len(m) else 0
        next_l = l[q] if q < len(l) else 0
        interval_ok = (
            m[0] - m[p - 1] <= below < upper <= m[0] - next_m
            and l[0] - l[q - 1] <= below < upper <= l[0] - next_l
        )
        return CaseReport(**report, case="GapFound", s=s, p=p, q=q, interval_ok=interval_ok)
    pigeonhole = math.log(X) / math.log(theta) - 1 if X > 0 else None
    return CaseReport(**report, case="AllIntervalsHit", pigeonhole_bound=pigeonhole)


def _lambda_parts(gamma: QuadInt, alpha: CnsBase, beta: CnsBase, report: CaseReport) -> tuple[Split, Split, QuadInt, QuadInt]:
    sa = split(gamma, alpha, report.p)
    sb = split(gamma, beta, report.q)
    numerator = (beta.alpha - 1) * sa.A1 * power(alpha.alpha, sa.m_p)
    denominator = (alpha.alpha - 1) * sb.A1 * power(beta.alpha, sb.m_p)
    return sa, sb, numerator, denominator


def _ordered_from_report(baseA: CnsBase, baseB: CnsBase, report: CaseReport) -> tuple[CnsBase, CnsBase]:
    return (baseA, baseB) if report.alpha_is_first else (baseB, baseA)


def lambda_and_bound_check(
    gamma: QuadInt,
    baseA: CnsBase,
    baseB: CnsBase,
    report: CaseReport,
    kp_constants: Sequence[KpConstants],
    slack: float = LAMBDA_SLACK,
) -> LambdaCheck:
    """|Lambda| against (c3 d3/(|(alpha-1)(beta-1)| c4 d4) + c3/(|alpha-1| c4)) |beta|**(-theta**s)."""
    if report.case != "GapFound":
        raise NotGapCase(f"{report.gamma} has no gap interval")
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    kp_alpha, kp_beta = _ordered_kp(kp_constants, report.alpha_is_first)
    sa, sb, numerator, denominator = _lambda_parts(gamma, alpha, beta, report)

    difference = numerator - denominator
    if difference:
        log_lambda = 0.5 * (math.log(norm(difference)) - math.log(norm(denominator)))
        lambda_abs = math.exp(log_lambda)
    else:
        logger.debug(f"Lambda = 0 for {report.gamma}; degenerate relation")
        log_lambda = None
        lambda_abs = 0.0

    c3, c4 = c3_of(alpha), c4_of(alpha, kp_alpha)
    d3, d4 = c3_of(beta), c4_of(beta, kp_beta)
    abs_am1 = math.sqrt(norm(alpha.alpha - 1))
    abs_bm1 = math.sqrt(norm(beta.alpha - 1))
    rhs = (c3 * d3 / (abs_am1 * abs_bm1 * c4 * d4) + c3 / (abs_am1 * c4)) * beta.mod_alpha ** (-(report.theta**report.s))
    return LambdaCheck(
        lambda_abs=lambda_abs,
        log_lambda=log_lambda,
        rhs=rhs,
        holds=lambda_abs <= slack * rhs,
        degenerate=not difference,
        a2_zero=not sa.A2,
        b2_zero=not sb.A2,
    )


def b_bound_check(
    gamma: QuadInt,
    baseA: CnsBase,
    baseB: CnsBase,
    report: CaseReport,
    kp_constants: Sequence[KpConstants],
    slack: float = B_BOUND_SLACK,
) -> BBoundCheck:
    """max(m_p, l_q) <= (1/log|beta| + max e2 / log 16) log|gamma| + slack."""
    if report.case != "GapFound":
        raise NotGapCase(f"{report.gamma} has no gap interval")
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    m_p = split(gamma, alpha, report.p).m_p
    l_q = split(gamma, beta, report.q).m_p
    e2_max = max(kp.e2_hat for kp in kp_constants)
    bound = (1 / beta.log_mod_alpha + e2_max / math.log(MIN_MODULUS)) * log_modulus(gamma)
    B = max(1, m_p, l_q)
    return BBoundCheck(B=B, bound=bound, holds=max(m_p, l_q) <= bound + slack)


def _log_le(lhs_norm: int, log_rhs: float) -> bool:
    """|x| <= exp(log_rhs) for |x| = sqrt(lhs_norm)."""
    if lhs_norm == 0:
        return True
    return 0.5 * math.log(lhs_norm) <= log_rhs + bounds.TOLERANCE


def _log_ge(lhs_norm: int, log_rhs: float) -> bool:
    if lhs_norm == 0:
        return False
    return 0.5 * math.log(lhs_norm) >= log_rhs - bounds.TOLERANCE


def split_bounds_check(
    gamma: QuadInt,
    baseA: CnsBase,
    baseB: CnsBase,
    report: CaseReport,
    kp_constants: Sequence[KpConstants],
) -> SplitBoundsCheck:
    """Upper and lower size bounds on A1, A2, B1, B2 and gamma used to bound Lambda."""
    if report.case != "GapFound":
        raise NotGapCase(f"{report.gamma} has no gap interval")
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    kp_alpha, kp_beta = _ordered_kp(kp_constants, report.alpha_is_first)
    results = {}
    for name, base, kp, index in (("a", alpha, kp_alpha, report.p), ("b", beta, kp_beta, report.q)):
        terms = nonzero_terms(gamma, base)
        s = split(gamma, base, index)
        top = terms[0][0]
        next_exp = terms[index][0] if index < len(terms) else 0
        log_c3 = math.log(c3_of(base))
        log_c4 = math.log(c4_of(base, kp))
        log_mod = base.log_mod_alpha
        results[f"{name}1_upper"] = _log_le(norm(s.A1), log_c3 + (top - s.m_p) * log_mod)
        results[f"{name}2_upper"] = _log_le(norm(s.A2), log_c3 + next_exp * log_mod)
        results[f"{name}1_lower"] = _log_ge(
            norm(s.A1), log_c4 + log_modulus(base.alpha - 1) + (top - s.m_p) * log_mod
        )
        results[f"gamma_lower_{'alpha' if name == 'a' else 'beta'}"] = _log_ge(norm(gamma), log_c4 + top * log_mod)
    return SplitBoundsCheck(**results)


def delta1_height_check(gamma: QuadInt, baseA: CnsBase, baseB: CnsBase, report: CaseReport) -> Delta1HeightCheck:
    """h(delta1) <= h(P) + h(Q) <= (h(alpha)+log eps_a+h(beta)+log eps_b+2) theta**(s-1)."""
    if report.case != "GapFound":
        raise NotGapCase(f"{report.gamma} has no gap interval")
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    sa = split(gamma, alpha, report.p)
    sb = split(gamma, beta, report.q)
    h_a = bounds.height(sa.head)
    h_b = bounds.height(sb.head)
    bound_a = bounds.poly_height_bound(sa.head_coefficients, alpha.alpha)
    bound_b = bounds.poly_height_bound(sb.head_coefficients, beta.alpha)
    theta_bound = (
        bounds.height(alpha.alpha)
        + math.log(alpha.eps_a)
        + bounds.height(beta.alpha)
        + math.log(beta.eps_a)
        + 2
    ) * report.theta ** (report.s - 1)
    holds = (
        h_a <= bound_a + bounds.TOLERANCE
        and h_b <= bound_b + bounds.TOLERANCE
        and h_a + h_b <= theta_bound + bounds.TOLERANCE
    )
    return Delta1HeightCheck(
        h_head_a=h_a, h_head_b=h_b, head_a_bound=bound_a, head_b_bound=bound_b, theta_bound=theta_bound, holds=holds
    )


def _abs_log(x: QuadInt) -> float:
    """|log x| for the principal logarithm."""
    return math.hypot(log_modulus(x), ring.argument(x))


def baker_check(gamma: QuadInt, baseA: CnsBase, baseB: CnsBase, report: CaseReport) -> BakerCheck:
    """Matveev's bound with T=3, D=2, (delta1, alpha, beta) and exponents (1, m_p, -l_q)."""
    if report.case != "GapFound":
        raise NotGapCase(f"{report.gamma} has no gap interval")
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    sa, sb, numerator, denominator = _lambda_parts(gamma, alpha, beta, report)
    difference = numerator - denominator
    if not difference:
        independent = not mult_dep(alpha.alpha, beta.alpha).dependent
        return BakerCheck(degenerate=True, holds=independent, bases_independent=independent)

    D = 2
    floor = 0.16 / D
    # delta1 = P/Q with h(P/Q) <= h(P) + h(Q)
    h_delta1 = bounds.height(sa.head) + bounds.height(sb.head)
    arg_delta1 = math.remainder(ring.argument(sa.head) - ring.argument(sb.head), 2 * math.pi)
    abs_log_delta1 = math.hypot(log_modulus(sa.head) - log_modulus(sb.head), arg_delta1)
    logA = [
        max(h_delta1, abs_log_delta1 / D, floor),
        max(bounds.height(alpha.alpha), _abs_log(alpha.alpha) / D, floor),
        max(bounds.height(beta.alpha), _abs_log(beta.alpha) / D, floor),
    ]
    B = max(1, sa.m_p, sb.m_p)
    lower = bounds.matveev_bound(bounds.MatveevParams(T=3, D=D, logA=logA, B=B))
    log_lambda = 0.5 * (math.log(norm(difference)) - math.log(norm(denominator)))
    return BakerCheck(
        degenerate=False, log_lambda=log_lambda, matveev_lower=lower, logA=logA, B=B, holds=log_lambda > lower
    )


def analyze_gamma(
    gamma: QuadInt,
    baseA: CnsBase,
    baseB: CnsBase,
    kp_constants: Sequence[KpConstants],
    c1: float = DEFAULT_C1,
    lambda_slack: float = LAMBDA_SLACK,
    b_slack: float = B_BOUND_SLACK,
) -> GammaReport:
    """Every gadget for one gamma."""
    report = case_split(gamma, baseA, baseB, c1, kp_constants)
    if report.case != "GapFound":
        return GammaReport(case=report, split_identity=verify_split_identity(gamma, baseA, baseB, 1, 1))
    alpha, beta = _ordered_from_report(baseA, baseB, report)
    ordered_kp = _ordered_kp(kp_constants, report.alpha_is_first)
    return GammaReport(
        case=report,
        split_identity=verify_split_identity(gamma, alpha, beta, report.p, report.q),
        quantities=split_quantities(gamma, alpha, beta, report.p, report.q, ordered_kp),
        lam=lambda_and_bound_check(gamma, baseA, baseB, report, kp_constants, lambda_slack),
        b_bound=b_bound_check(gamma, baseA, baseB, report, kp_constants, b_slack),
        split_bounds=split_bounds_check(gamma, baseA, baseB, report, kp_constants),
        delta1=delta1_height_check(gamma, baseA, baseB, report),
        baker=baker_check(gamma, baseA, baseB, report),
    )


def sample_gammas(field: FieldSpec, n_max: int, count: int, seed: int = 0, min_modulus: float = 0.0) -> list[QuadInt]:
    """Seeded uniform sample of distinct gamma with 0 < norm <= n_max and |gamma| > min_modulus."""
    rng = np.random.default_rng(seed)
    bmax = math.isqrt(4 * n_max // field.d) if field.half_basis else math.isqrt(n_max // field.d)
    amax = math.isqrt(n_max) + bmax
    seen: dict[tuple[int, int], QuadInt] = {}
    attempts = 0
    while len(seen) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise EmptyInput(f"Could not sample {count} elements with norm <= {n_max}")
        a = int(rng.integers(-amax, amax + 1))
        b = int(rng.integers(-bmax, bmax + 1))
        x = QuadInt(field, a, b)
        n = norm(x)
        if 0 < n <= n_max and n > min_modulus**2:
            seen.setdefault((a, b), x)
    return list(seen.values())


def all_split_indices(gamma: QuadInt, baseA: CnsBase, baseB: CnsBase) -> Iterable[tuple[int, int]]:
    r = len(nonzero_terms(gamma, baseA))
    t = len(nonzero_terms(gamma, baseB))
    return ((p, q) for p in range(1, r + 1) for q in range(1, t + 1))


def _bound_c0(abs_value: float) -> float:
    if abs_value <= math.exp(math.e):
        return math.nan
    return bounds.theorem_bound(abs_value, 0.0)


def sweep_band(baseA: CnsBase, baseB: CnsBase, lo: int, hi: int) -> dict[str, np.ndarray]:
    """Sweep columns for lo < norm <= hi in (norm, a, b) order."""
    columns: dict[str, list] = {name: [] for name in SWEEP_COLUMNS}
    for gamma in ring.enumerate_norm_band(baseA.field, lo, hi):
        da = expand(gamma, baseA)
        db = expand(gamma, baseB)
        n = norm(gamma)
        abs_value = math.sqrt(n)
        za, zb = da.Z, db.Z
        row = (gamma.a, gamma.b, n, abs_value, za, da.S, da.L, zb, db.S, db.L, za + zb, _bound_c0(abs_value))
        for name, value in zip(SWEEP_COLUMNS, row):
            columns[name].append(value)
    return {
        name: np.asarray(values, dtype=np.float64 if name in ("abs", "bound_C0") else np.int64)
        for name, values in columns.items()
    }


def sweep_frame(
    field: FieldSpec, baseA: CnsBase, baseB: CnsBase, n_max: int, workers: Optional[int] = None
) -> pd.DataFrame:
    """One row per gamma with 0 < norm <= n_max, ordered by (norm, a, b)."""
    from .parallel import map_bands

    for base in (baseA, baseB):
        if base.field.d != field.d:
            raise FieldMismatch(f"Base {base} is not in {field.name}")
    verdict = mult_dep(baseA.alpha, baseB.alpha)
    if verdict.dependent:
        raise DependentBases(f"{baseA} and {baseB} are multiplicatively dependent (u={verdict.u}, v={verdict.v})")
    parts = map_bands(sweep_band, baseA, baseB, n_max=n_max, workers=workers)
    frame = pd.concat([pd.DataFrame(part, columns=SWEEP_COLUMNS) for part in parts], ignore_index=True)
    frame.attrs.update(d=field.d, n_max=n_max, alpha=str(baseA), beta=str(baseB))
    logger.info(f"Sweep {baseA} / {baseB} up to norm {n_max}: {len(frame)} records")
    return frame


def sweep(
    field: FieldSpec, baseA: CnsBase, baseB: CnsBase, n_max: int, workers: Optional[int] = None
) -> list[SweepRecord]:
    frame = sweep_frame(field, baseA, baseB, n_max, workers)
    return records_from_frame(frame)


def records_from_frame(frame: pd.DataFrame) -> list[SweepRecord]:
    d = frame.attrs.get("d", 1)
    return [
        SweepRecord(
            a=int(row.a),
            b=int(row.b),
            norm=int(row.norm),
            abs=float(row.abs),
            Za=int(row.Za),
            Sa=int(row.Sa),
            La=int(row.La),
            Zb=int(row.Zb),
            Sb=int(row.Sb),
            Lb=int(row.Lb),
            lhs=int(row.lhs),
            bound_C0=float(row.bound_C0),
            d=d,
        )
        for row in frame.itertuples(index=False)
    ]


def frame_from_records(records: Sequence[SweepRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([[getattr(r, name) for name in SWEEP_COLUMNS] for r in records], columns=SWEEP_COLUMNS)
    if records:
        frame.attrs.update(d=records[0].d, n_max=max(r.norm for r in records))
    return frame


def write_sweep_csv(frame: pd.DataFrame, out) -> None:
    """CSV with the fixed column order; abs and bound_C0 at 9 significant digits."""
    frame.to_csv(out, columns=SWEEP_COLUMNS, index=False, float_format="%.9g", lineterminator="\n")


def empirical_C(
    records: Union[pd.DataFrame, Sequence[SweepRecord]], statistic: Literal["Z", "S"] = "Z"
) -> EmpiricalC:
    """Smallest C >= 0 with count >= log log|gamma| / (log log log|gamma| + C) on every record with |gamma| > 16."""
    frame = records if isinstance(records, pd.DataFrame) else frame_from_records(records)
    if frame.empty:
        raise EmptyInput("No sweep records")
    considered = frame[frame["abs"] > MIN_MODULUS]
    if considered.empty:
        raise EmptyInput(f"No record has |gamma| > {MIN_MODULUS}")
    counts = (considered["lhs"] if statistic == "Z" else considered["Sa"] + considered["Sb"]).to_numpy(dtype=np.float64)
    loglog = np.log(np.log(considered["abs"].to_numpy()))
    logloglog = np.log(loglog)
    candidates = loglog / counts - logloglog
    i_max = int(np.argmax(candidates))
    C = max(0.0, float(candidates[i_max]))
    bound = loglog / (logloglog + C)
    verified = bool(np.all(counts >= bound - bounds.TOLERANCE))
    row = considered.iloc[i_max]
    d = frame.attrs.get("d", 1)
    n_max = int(frame.attrs.get("n_max", frame["norm"].max()))
    return EmpiricalC(
        C_emp=C,
        n_max=n_max,
        argmax_gamma=format_quadint(QuadInt(ring.make_field(d), int(row["a"]), int(row["b"]))),
        statistic=statistic,
        considered=len(considered),
        verified=verified,
    )


def dependent_counterexample_check(alpha: QuadInt, beta: QuadInt, u: int, v: int, m_max: int) -> bool:
    """For dependent alpha**u == beta**v, every alpha**(u m) has a single digit 1 in both bases."""
    if power(alpha, u) != power(beta, v):
        raise NotDependent(f"{format_quadint(alpha)}^{u} != {format_quadint(beta)}^{v}")
    base_a, base_b = make_base(alpha), make_base(beta)
    for m in range(1, m_max + 1):
        gamma = power(alpha, u * m)
        for base, exponent in ((base_a, u * m), (base_b, v * m)):
            ds = expand(gamma, base)
            if ds.Z != 1 or ds.digits[-1] != 1 or ds.L != exponent:
                logger.info(f"{format_quadint(gamma)} has digits {ds.digits} in base {base}")
                return False
    return True


def survey(
    field: FieldSpec,
    baseA: CnsBase,
    baseB: CnsBase,
    kp_constants: Sequence[KpConstants],
    n_max: int,
    samples: int = 100,
    seed: int = 0,
    c1: float = DEFAULT_C1,
) -> list[GammaReport]:
    """analyze_gamma over a seeded sample of gamma with |gamma| > 16."""
    gammas = sample_gammas(field, n_max, samples, seed=seed, min_modulus=MIN_MODULUS)
    return [analyze_gamma(g, baseA, baseB, kp_constants, c1) for g in gammas]
