import math

import pytest
from hypothesis import given, strategies as st

from collabrisk.errors import ValidationError
from collabrisk.prob import (
    FailureRecord,
    FrequencyPerYear,
    ProbInterval,
    check_probability,
    interval_complement,
    interval_product,
    rate_to_probability,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = draw(unit), draw(unit)
    return ProbInterval(min(a, b), max(a, b))


def test_product_examples():
    assert interval_product(ProbInterval(0, 0), ProbInterval(0.2, 0.4)) == ProbInterval(0, 0)
    assert interval_product(ProbInterval(1, 1), ProbInterval(0.2, 0.4)) == ProbInterval(0.2, 0.4)
    r = interval_product(ProbInterval(0.1, 0.2), ProbInterval(0.3, 0.5))
    assert r.lower == pytest.approx(0.03, abs=1e-15)
    assert r.upper == pytest.approx(0.10, abs=1e-15)
    assert ProbInterval(0.1, 0.2) * ProbInterval(0.3, 0.5) == r


def test_complement_examples():
    assert interval_complement(ProbInterval(0, 0)) == ProbInterval(1, 1)
    r = interval_complement(ProbInterval(0.3, 0.5))
    assert (r.lower, r.upper) == pytest.approx((0.5, 0.7), abs=1e-15)
    assert interval_complement(ProbInterval.point(0.25)).is_point


@pytest.mark.parametrize("bad", [(-0.1, 0.5), (0.2, 1.5), (0.6, 0.4), (math.nan, 0.5), (0.1, math.inf)])
def test_invalid_intervals_rejected(bad):
    with pytest.raises(ValidationError):
        ProbInterval(*bad)


@pytest.mark.parametrize("bad", [True, "0.5", None, -1e-300, 1.0000001])
def test_check_probability_rejects(bad):
    with pytest.raises(ValidationError):
        check_probability(bad)


def test_degenerate_interval_allowed():
    iv = ProbInterval(7.54e-2, 7.54e-2)
    assert iv.is_point and iv.width == 0.0


def test_coerce():
    assert ProbInterval.coerce(0.3) == ProbInterval(0.3, 0.3)
    assert ProbInterval.coerce([0.1, 0.2]) == ProbInterval(0.1, 0.2)
    with pytest.raises(ValidationError):
        ProbInterval.coerce((0.1, 0.2, 0.3))


@given(intervals(), intervals())
def test_product_keeps_order(a, b):
    r = interval_product(a, b)
    assert 0.0 <= r.lower <= r.upper <= 1.0


@given(intervals())
def test_complement_keeps_order(a):
    r = interval_complement(a)
    assert 0.0 <= r.lower <= r.upper <= 1.0


@given(unit, unit)
def test_point_intervals_match_scalar_arithmetic(p, q):
    r = interval_product(ProbInterval.point(p), ProbInterval.point(q))
    assert r.is_point and r.lower == p * q
    c = interval_complement(ProbInterval.point(p))
    assert c.is_point and c.lower == 1.0 - p


def test_rate_examples():
    assert rate_to_probability(0.0, 123.0) == 0.0
    assert rate_to_probability(math.log(2), 1.0) == pytest.approx(0.5, abs=1e-15)
    assert rate_to_probability(1e-4, 8760) == pytest.approx(1 - math.exp(-0.876), rel=1e-14)
    assert rate_to_probability(1e-4, 8760) == pytest.approx(0.58355, abs=1e-5)


@pytest.mark.parametrize("rate,t", [(-1e-3, 10), (1e-3, 0), (1e-3, -5), (math.inf, 1), (math.nan, 1), (1e-3, math.inf)])
def test_rate_rejects(rate, t):
    with pytest.raises(ValidationError):
        rate_to_probability(rate, t)


@given(st.floats(0, 1e3), st.floats(1e-6, 1e5))
def test_rate_in_unit_interval(rate, t):
    p = rate_to_probability(rate, t)
    assert 0.0 <= p <= 1.0
    if rate * t < 30:
        assert p < 1.0


@given(st.floats(0, 1e-2), st.floats(1e-3, 1e4))
def test_rate_rare_event_limit(rate, t):
    if rate * t < 0.01 and rate * t > 0:
        assert rate_to_probability(rate, t) == pytest.approx(rate * t, rel=0.01)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(1e-3, 100))
def test_rate_monotone(r1, r2, t):
    lo, hi = sorted((r1, r2))
    assert rate_to_probability(lo, t) <= rate_to_probability(hi, t)
    assert rate_to_probability(t, lo + 1e-3) <= rate_to_probability(t, hi + 1e-3)


def test_frequency_may_exceed_one():
    f = FrequencyPerYear(12.0)
    assert f.value == 12.0
    assert FrequencyPerYear(2.0, 4.0).scaled(ProbInterval(0.1, 0.5)) == FrequencyPerYear(0.2, 2.0)
    with pytest.raises(ValidationError):
        FrequencyPerYear(2.0, 4.0).value
    for bad in ((-1.0,), (3.0, 2.0), (math.inf,)):
        with pytest.raises(ValidationError):
            FrequencyPerYear(*bad)


def test_failure_record_resolution():
    r = FailureRecord("PT-100", rate_per_hour=1e-4, mission_time_hours=8760)
    assert r.resolvable
    assert r.resolved_interval().lower == pytest.approx(0.58355, abs=1e-5)
    explicit = FailureRecord("PT-100", rate_per_hour=5e-4, mission_time_hours=8760, probability=1.25e-2)
    assert explicit.resolved_interval() == ProbInterval.point(1.25e-2)
    dangling = FailureRecord("X", rate_per_hour=1e-4)
    assert not dangling.resolvable and dangling.resolved_interval() is None
    with pytest.raises(ValidationError):
        FailureRecord("Y")
    with pytest.raises(ValidationError):
        FailureRecord("", probability=0.1)
