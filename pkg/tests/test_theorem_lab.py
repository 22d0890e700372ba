import io
import math

import pytest

from cnslab.cns import expand, make_base
from cnslab.digitstat import kp_empirical_constants
from cnslab.errors import DependentBases, DomainError, EmptyInput, IndexOutOfRange, NotDependent, NotGapCase
from cnslab.ring import count_by_norm, enumerate_norm_band, log_modulus, make_field, parse_quadint, power
from cnslab.theorem_lab import (
    SWEEP_COLUMNS,
    SweepRecord,
    all_split_indices,
    analyze_gamma,
    b_bound_check,
    case_split,
    dependent_counterexample_check,
    empirical_C,
    lambda_and_bound_check,
    order_bases,
    records_from_frame,
    split,
    survey,
    sweep,
    sweep_frame,
    verify_split_identity,
    write_sweep_csv,
)

GAP_C1 = 1.01
GAP_NORM_MAX = 40_000
GAP_COUNT = 25


@pytest.fixture(scope="module")
def bases():
    gaussian = make_field(1)
    return make_base(gaussian(-1, 1)), make_base(gaussian(-2, 1))


@pytest.fixture(scope="module")
def kp(bases):
    return tuple(kp_empirical_constants(base, 10_000, workers=1) for base in bases)


@pytest.fixture(scope="module")
def reports(bases, kp):
    base_a, base_b = bases
    return survey(make_field(1), base_a, base_b, kp, n_max=10_000, samples=100, seed=11, c1=1.2)


@pytest.fixture(scope="module")
def gap_kp(bases):
    return tuple(kp_empirical_constants(base, GAP_NORM_MAX, workers=1) for base in bases)


@pytest.fixture(scope="module")
def gap_reports(bases, gap_kp):
    """The first GAP_COUNT gamma in (norm, a, b) order whose case split finds a gap at c1 = GAP_C1."""
    found = []
    for gamma in enumerate_norm_band(make_field(1), 256, GAP_NORM_MAX):
        if case_split(gamma, *bases, GAP_C1, gap_kp).case == "GapFound":
            found.append(analyze_gamma(gamma, *bases, gap_kp, c1=GAP_C1))
            if len(found) == GAP_COUNT:
                break
    return found


def test_split_of_two(gaussian, bases):
    base = bases[0]
    alpha = base.alpha
    s = split(gaussian(2, 0), base, 1)
    assert s.m_p == 3
    assert s.A1 == alpha - 1
    assert s.A2 == (alpha - 1) * power(alpha, 2)

    s = split(gaussian(2, 0), base, 2)
    assert s.m_p == 2
    assert s.A1 == (alpha - 1) * (alpha + 1)
    assert not s.A2


def test_split_single_term(bases):
    base = bases[0]
    alpha = base.alpha
    s = split(power(alpha, 5), base, 1)
    assert (s.A1, s.m_p) == (alpha - 1, 5)
    assert not s.A2


def test_split_index_range(gaussian, bases):
    with pytest.raises(IndexOutOfRange):
        split(gaussian(2, 0), bases[0], 0)
    with pytest.raises(IndexOutOfRange):
        split(gaussian(2, 0), bases[0], 3)
    with pytest.raises(IndexOutOfRange):
        split(gaussian(0, 0), bases[0], 1)


@pytest.mark.parametrize("coords", [(2, 0), (17, -4), (-123, 88), (1000, 1)])
def test_split_identity_for_all_indices(gaussian, bases, coords):
    gamma = gaussian(*coords)
    base_a, base_b = bases
    for p, q in all_split_indices(gamma, base_a, base_b):
        assert verify_split_identity(gamma, base_a, base_b, p, q)
    assert verify_split_identity(gamma, base_a, base_a, 1, 1)


def test_order_bases(bases):
    small, large = bases
    assert order_bases(small, large) == (large, small, False)
    assert order_bases(large, small) == (large, small, True)


def test_case_split_theta(gaussian, bases, kp):
    gamma = gaussian(10**6, 0)
    report = case_split(gamma, *bases, 2.0, kp)
    assert report.theta == pytest.approx(2 * math.log(math.log(1e6)))
    assert report.alpha == "-2+1*w[1]"


def test_case_split_domain(gaussian, bases, kp):
    with pytest.raises(DomainError):
        case_split(gaussian(16, 0), *bases, 2.0, kp)
    with pytest.raises(DomainError):
        case_split(gaussian(100, 0), *bases, 1.0, kp)
    with pytest.raises(TypeError):
        case_split(gaussian(100, 0), *bases, 2.0)


def _assert_case_invariants(case):
    assert case.theta**case.k <= case.X < case.theta ** (case.k + 1) or (case.k == 0 and case.X < case.theta)
    if case.case == "AllIntervalsHit":
        assert case.r - 1 + case.t - 1 >= case.k
        if case.pigeonhole_bound is not None:
            assert case.k > case.pigeonhole_bound
    else:
        assert case.interval_ok
        assert 1 <= case.s <= case.k
        assert 1 <= case.p <= case.r and 1 <= case.q <= case.t


def test_case_split_invariants(reports, gap_reports):
    assert {r.case.case for r in reports} == {"AllIntervalsHit"}
    assert len(gap_reports) == GAP_COUNT
    for r in [*reports, *gap_reports]:
        _assert_case_invariants(r.case)


def test_small_norms_never_leave_room_for_a_gap(bases, kp):
    # at c1 = 1.2 and norm <= 10^4, X stays below theta**2 and every interval is hit
    for gamma in enumerate_norm_band(make_field(1), 256, 2_000):
        report = case_split(gamma, *bases, 1.2, kp)
        assert report.case == "AllIntervalsHit"
        assert report.k <= 1


def test_split_and_lambda_chain(reports, gap_reports):
    for r in reports:
        assert r.split_identity
        assert r.lam is None and r.baker is None
    for r in gap_reports:
        gamma = r.case.gamma
        assert r.case.case == "GapFound"
        assert r.split_identity, gamma
        assert r.lam.holds, gamma
        assert r.b_bound.holds, gamma
        assert r.split_bounds.all_hold, gamma
        assert r.delta1.holds, gamma
        assert r.baker.holds, gamma
        assert r.quantities.a2_zero == (r.quantities.A2 == "0+0*w[1]")
        assert r.quantities.c3 > 0 and 0 < r.quantities.c4 <= 1
        assert r.all_hold, gamma


def test_lambda_rhs_decreases_in_s(bases, gap_kp, gap_reports):
    report = gap_reports[0].case
    gamma = parse_quadint(report.gamma)
    values = [
        lambda_and_bound_check(gamma, *bases, report.model_copy(update={"s": s}), gap_kp).rhs for s in (1, 2, 3)
    ]
    assert values[0] > values[1] > values[2]


def test_gadgets_need_a_gap(bases, kp, reports):
    report = reports[0].case
    gamma = parse_quadint(report.gamma)
    with pytest.raises(NotGapCase):
        lambda_and_bound_check(gamma, *bases, report, kp)
    with pytest.raises(NotGapCase):
        b_bound_check(gamma, *bases, report, kp)


@pytest.mark.slow
def test_split_and_lambda_chain_full_scale(bases, runtime_home):
    from cnslab.settings import FixtureStore

    kp_large = tuple(kp_empirical_constants(base, 1_000_000) for base in bases)
    cases = {"AllIntervalsHit": 0, "GapFound": 0}
    for gamma in enumerate_norm_band(make_field(1), 990_000, 1_000_000):
        r = analyze_gamma(gamma, *bases, kp_large, c1=2.0)
        cases[r.case.case] += 1
        _assert_case_invariants(r.case)
        assert r.all_hold, r.case.gamma
    assert sum(cases.values()) == count_by_norm(make_field(1), 1_000_000) - count_by_norm(make_field(1), 990_000)
    assert FixtureStore().record("cases/c1=2/-1+1*w[1]/-2+1*w[1]/990000-1000000", cases) == cases


def test_sweep_records(gaussian, bases):
    records = sweep(gaussian, *bases, 1_000, workers=1)
    assert len(records) == count_by_norm(gaussian, 1_000)
    keys = [(r.norm, r.a, r.b) for r in records]
    assert keys == sorted(keys)

    two = next(r for r in records if (r.a, r.b) == (2, 0))
    assert (two.Za, two.Sa, two.La) == (2, 2, 3)
    assert (two.Zb, two.Sb, two.Lb) == (1, 2, 0)
    assert two.lhs == 3

    for r in records:
        assert r.lhs == r.Za + r.Zb >= 2
        if r.abs <= math.exp(math.e):
            assert math.isnan(r.bound_C0)


def test_sweep_single_digits(gaussian, bases):
    records = sweep(gaussian, *bases, 2, workers=1)
    for r in records:
        if r.a >= 0 and r.b == 0:
            assert r.Za == r.Zb == 1 and r.lhs == 2


def test_sweep_rejects_dependent_bases(gaussian):
    with pytest.raises(DependentBases):
        sweep_frame(gaussian, make_base(gaussian(-1, 1)), make_base(gaussian(-1, -1)), 100)


def test_sweep_csv_is_independent_of_workers(gaussian, bases):
    outputs = []
    for workers in (1, 2):
        buffer = io.StringIO()
        write_sweep_csv(sweep_frame(gaussian, *bases, 3_000, workers=workers), buffer)
        outputs.append(buffer.getvalue())
    assert outputs[0] == outputs[1]
    lines = outputs[0].splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    # gamma = -1, the first element in (norm, a, b) order
    assert lines[1] == "-1,0,1,1,4,4,4,3,9,2,7,"


def test_empirical_c_single_record():
    x = 1000.0
    record = SweepRecord(a=1000, b=0, norm=10**6, abs=x, Za=1, Sa=1, La=1, Zb=1, Sb=1, Lb=1, lhs=2, bound_C0=0.0)
    result = empirical_C([record])
    loglog = math.log(math.log(x))
    assert result.C_emp == pytest.approx(max(0.0, loglog / 2 - math.log(loglog)))
    assert result.argmax_gamma == "1000+0*w[1]"
    assert result.verified


def test_empirical_c_errors():
    with pytest.raises(EmptyInput):
        empirical_C([])
    small = SweepRecord(a=2, b=0, norm=4, abs=2.0, Za=1, Sa=1, La=1, Zb=1, Sb=1, Lb=1, lhs=2, bound_C0=math.nan)
    with pytest.raises(EmptyInput):
        empirical_C([small])


def test_empirical_c_grows_with_the_sweep(gaussian, bases):
    frame = sweep_frame(gaussian, *bases, 5_000, workers=1)
    smaller = frame[frame["norm"] <= 1_000].copy()
    smaller.attrs.update(frame.attrs)
    c_small = empirical_C(smaller)
    c_large = empirical_C(frame)
    assert 0 <= c_small.C_emp <= c_large.C_emp
    assert c_large.verified
    assert c_large.n_max == 5_000
    for statistic in ("Z", "S"):
        assert empirical_C(records_from_frame(frame), statistic).C_emp >= 0


@pytest.mark.slow
def test_empirical_c_full_scale(gaussian, bases, runtime_home):
    from cnslab.bounds import theorem_bound
    from cnslab.settings import FixtureStore

    frame = sweep_frame(gaussian, *bases, 1_000_000)
    result = empirical_C(frame)
    assert math.isfinite(result.C_emp) and result.C_emp >= 0
    considered = frame[frame["abs"] > 16]
    for abs_value, lhs in zip(considered["abs"], considered["lhs"]):
        assert lhs >= theorem_bound(abs_value, result.C_emp) - 1e-9
    store = FixtureStore()
    assert store.record("C_emp/Z/-1+1*w[1]/-2+1*w[1]/1000000", result.C_emp) == result.C_emp
    again = empirical_C(sweep_frame(gaussian, *bases, 1_000_000))
    assert store.record("C_emp/Z/-1+1*w[1]/-2+1*w[1]/1000000", again.C_emp) == result.C_emp


def test_dependent_counterexample(gaussian):
    assert dependent_counterexample_check(gaussian(-1, 1), gaussian(-1, -1), 4, 4, 8)
    ds = expand(power(gaussian(-1, 1), 4), make_base(gaussian(-1, 1)))
    assert (ds.Z, ds.L) == (1, 4)
    with pytest.raises(NotDependent):
        dependent_counterexample_check(gaussian(-1, 1), gaussian(-1, -1), 1, 2, 3)


def test_analyze_gamma_reports_which_base_is_alpha(gaussian, bases, kp):
    report = analyze_gamma(gaussian(90, 7), *bases, kp, c1=1.2)
    assert not report.case.alpha_is_first
    assert report.case.beta == "-1+1*w[1]"
    assert log_modulus(gaussian(90, 7)) > math.log(16)
