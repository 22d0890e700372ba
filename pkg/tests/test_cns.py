import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cnslab.cns import (
    DigitString,
    brute_force_is_cns,
    criterion_matches_brute_force,
    digit_step,
    digit_string,
    digit_string_from_json,
    evaluate,
    expand,
    expand_by_steps,
    is_cns,
    katai_szabo_scan,
    make_base,
    minimal_poly,
    verify_exhaustive,
)
from cnslab.errors import DigitOutOfRange, NotCns, NotQuadratic, ParseError, RingMismatch
from cnslab.ring import QuadInt, enumerate_by_norm, make_field, modulus, norm


@pytest.fixture
def base_m1p1(gaussian):
    return make_base(gaussian(-1, 1))


def _bases():
    gaussian = make_field(1)
    return [
        make_base(gaussian(-1, 1)),
        make_base(gaussian(-1, -1)),
        make_base(gaussian(-2, 1)),
        make_base(gaussian(-3, 1)),
        # x^2 + 2x + 3 over Z[sqrt(-2)]
        make_base(make_field(2)(-1, 1)),
        # x^2 + 3x + 3 over Z[(1+sqrt(-3))/2]
        make_base(make_field(3)(-2, 1)),
    ]


def test_minimal_poly(gaussian):
    assert minimal_poly(gaussian(-1, 1)) == (2, 2)
    assert minimal_poly(gaussian(-2, 1)) == (4, 5)
    assert minimal_poly(make_field(2)(-1, 1)) == (2, 3)
    assert minimal_poly(make_field(3)(-2, 1)) == (3, 3)
    with pytest.raises(NotQuadratic):
        minimal_poly(gaussian(5, 0))


def test_is_cns_examples(gaussian):
    check = is_cns(gaussian(-1, 1))
    assert check.criterion_ok and check.ring_match
    assert (check.E, check.F) == (2, 2)

    # 1 + i has E = -2 < -1
    assert not is_cns(gaussian(1, 1)).criterion_ok
    # -1 + 2i generates Z[2i] only
    check = is_cns(gaussian(-1, 2))
    assert check.criterion_ok and not check.ring_match


def test_make_base_errors(gaussian):
    with pytest.raises(NotCns):
        make_base(gaussian(1, 1))
    with pytest.raises(NotCns):
        make_base(gaussian(0, 1))
    with pytest.raises(RingMismatch):
        make_base(gaussian(-1, 2))
    # 2i satisfies the criterion but Z[2i] is not Z[i]
    with pytest.raises(RingMismatch):
        make_base(gaussian(0, 2))
    with pytest.raises(NotQuadratic):
        make_base(gaussian(-3, 0))


def test_make_base_caches_constants(base_m1p1):
    assert base_m1p1.F == 2
    assert base_m1p1.digit_max == 1
    assert base_m1p1.mod_alpha == pytest.approx(2**0.5)


def test_digit_step(gaussian, base_m1p1):
    digit, quotient = digit_step(gaussian(2, 0), base_m1p1)
    assert digit == 0
    assert quotient == gaussian(-1, -1)

    digit, quotient = digit_step(gaussian(1, 0), base_m1p1)
    assert (digit, quotient) == (1, gaussian(0, 0))


def test_expand_two_in_base_m1p1(gaussian, base_m1p1):
    ds = expand(gaussian(2, 0), base_m1p1)
    assert ds.digits == (0, 0, 1, 1)
    assert (ds.L, ds.Z, ds.S) == (3, 2, 2)
    assert ds.nonzero_terms() == [(3, 1), (2, 1)]
    assert str(ds) == "(1 1 0 0)_-1+1*w[1]"


def test_expand_zero(gaussian, base_m1p1):
    ds = expand(gaussian(0, 0), base_m1p1)
    assert ds.digits == (0,)
    assert ds.Z == 0
    assert evaluate(ds) == gaussian(0, 0)


def test_expand_digits(gaussian, base_m1p1):
    # -1 = alpha^4 + alpha^3 + alpha^2 + 1
    assert expand(gaussian(-1, 0), base_m1p1).digits == (1, 0, 1, 1, 1)
    assert expand(gaussian(0, 1), base_m1p1).digits == (1, 1)


@pytest.mark.parametrize("base", _bases(), ids=str)
def test_exhaustive_round_trip_small(base):
    report = verify_exhaustive(base, 2_000, workers=1)
    assert report.all_roundtrip
    assert report.failures == []
    assert report.count == len(enumerate_by_norm(base.field, 2_000)) + 1


@pytest.mark.slow
@pytest.mark.parametrize("base", _bases(), ids=str)
def test_exhaustive_round_trip(base):
    report = verify_exhaustive(base, 10_000)
    assert report.all_roundtrip


@pytest.mark.parametrize("base", _bases(), ids=str)
def test_fast_expansion_matches_digit_steps(base):
    for gamma in enumerate_by_norm(base.field, 300):
        assert expand(gamma, base) == expand_by_steps(gamma, base)


@given(st.integers(-500, 500), st.integers(-500, 500))
@settings(max_examples=200)
def test_expand_evaluate_round_trip(a, b):
    for base in _bases():
        gamma = QuadInt(base.field, a, b)
        ds = expand(gamma, base)
        assert evaluate(ds) == gamma
        assert all(0 <= e < base.F for e in ds.digits)
        assert ds.L == 0 or ds.digits[-1] != 0


def test_evaluate_rejects_out_of_range(base_m1p1):
    with pytest.raises(DigitOutOfRange):
        evaluate(DigitString(base_m1p1, (0, 2)))
    with pytest.raises(DigitOutOfRange):
        digit_string(base_m1p1, [0, 2])
    with pytest.raises(ParseError):
        digit_string(base_m1p1, [])


def test_digit_string_json(gaussian, base_m1p1):
    ds = expand(gaussian(7, -3), base_m1p1)
    data = ds.to_json()
    assert data["base"] == "-1+1*w[1]"
    assert data["d"] == 1
    assert digit_string_from_json(data) == ds
    with pytest.raises(ParseError):
        digit_string_from_json({"digits": [1]})


def test_criterion_matches_brute_force():
    gaussian = make_field(1)
    checked = 0
    for alpha in enumerate_by_norm(gaussian, 25):
        if alpha.is_rational() or norm(alpha) < 2:
            continue
        check = is_cns(alpha)
        if not check.ring_match:
            continue
        assert criterion_matches_brute_force(alpha, 1_000), str(alpha)
        checked += 1
    assert checked > 0
    assert brute_force_is_cns(gaussian(-1, 1), 1_000)
    assert not brute_force_is_cns(gaussian(1, 1), 1_000)


def test_katai_szabo_scan():
    gaussian = make_field(1)
    found = {b.alpha for b in katai_szabo_scan(5)}
    expected = {gaussian(-a, s) for a in range(1, 6) for s in (1, -1)}
    assert found == expected


@pytest.mark.parametrize("base, max_length", [(_bases()[0], 8), (_bases()[2], 5), (_bases()[4], 6)], ids=str)
def test_digit_strings_are_unique(base, max_length):
    checked = 0
    for length in range(1, max_length + 1):
        for lower in itertools.product(range(base.F), repeat=length - 1):
            for leading in range(1, base.F):
                ds = digit_string(base, (*lower, leading))
                assert expand(evaluate(ds), base) == ds
                checked += 1
    assert checked == base.F**max_length - 1


@pytest.mark.parametrize("base", _bases(), ids=str)
def test_digit_step_contracts_large_elements(base):
    threshold = base.F * base.mod_alpha / (base.mod_alpha - 1)
    checked = 0
    for gamma in enumerate_by_norm(base.field, 2_000):
        if modulus(gamma) <= threshold:
            continue
        _, quotient = digit_step(gamma, base)
        assert modulus(quotient) < modulus(gamma)
        checked += 1
    assert checked > 0
