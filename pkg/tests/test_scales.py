from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ultrapetal.scales import (
    RangeSet,
    ZERO,
    as_scale,
    max_outside,
    nearly_discrete_metric,
    scale_str,
)

scales = st.fractions(min_value=0, max_value=10, max_denominator=40)
scale_lists = st.lists(scales, max_size=8)


def test_as_scale_parsing():
    assert as_scale("1/2") == Fraction(1, 2)
    assert as_scale("3") == Fraction(3)
    assert as_scale(Fraction(2, 4)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        as_scale("-1/2")
    with pytest.raises((ValueError, ZeroDivisionError)):
        as_scale("1/0")


def test_scale_str_round_trip():
    for text in ["0", "1/2", "3", "7/3"]:
        assert scale_str(as_scale(text)) == text


def test_nearly_discrete_metric_examples():
    assert nearly_discrete_metric("1/2", "1/3") == Fraction(1, 2)
    assert nearly_discrete_metric("3/4", "3/4") == ZERO
    assert nearly_discrete_metric(0, 2) == Fraction(2)


@given(scales, scales, scales)
def test_nearly_discrete_metric_is_ultrametric(x, y, z):
    dxy = nearly_discrete_metric(x, y)
    assert dxy == nearly_discrete_metric(y, x)
    assert (dxy == ZERO) == (x == y)
    assert dxy <= max(nearly_discrete_metric(x, z), nearly_discrete_metric(z, y))


def test_union_examples():
    assert RangeSet(["0", "1"]).union(RangeSet(["0", "1/2"])).to_json() == ["0", "1/2", "1"]
    assert RangeSet().union(RangeSet()).to_json() == ["0"]
    assert RangeSet(["0", "1/3", "1"]).union(RangeSet(["0", "1/3"])).to_json() == ["0", "1/3", "1"]


def test_intersect_examples():
    assert RangeSet(["0", "1/2", "1"]).intersect(RangeSet(["0", "1"])).to_json() == ["0", "1"]
    assert RangeSet().intersect(RangeSet(["0", "5"])).to_json() == ["0"]
    assert RangeSet(["0", "1/4", "1/2"]).intersect(RangeSet(["0", "1/3"])).to_json() == ["0"]


def test_tail_subset_examples():
    a = RangeSet(["0", "1/2", "1"])
    b = RangeSet(["0", "1"])
    # oracle: enumerate the elements above the threshold
    assert [e for e in a if e > Fraction(1, 2)] == [Fraction(1)]
    assert a.tail_subset(b, Fraction(1, 2)) is True
    assert [e for e in a if e > Fraction(1, 4) and e not in b] == [Fraction(1, 2)]
    assert a.tail_subset(b, Fraction(1, 4)) is False
    assert RangeSet().tail_subset(RangeSet(), 0) is True


@given(scale_lists, scale_lists)
def test_union_intersect_laws(xs, ys):
    a, b = RangeSet(xs), RangeSet(ys)
    assert a.union(b) == b.union(a)
    assert a.intersect(b) == b.intersect(a)
    assert a.union(a) == a
    assert a.intersect(a) == a
    assert ZERO in a.union(b)
    assert ZERO in a.intersect(b)


@given(scale_lists, scale_lists, scale_lists)
def test_union_intersect_associative(xs, ys, zs):
    a, b, c = RangeSet(xs), RangeSet(ys), RangeSet(zs)
    assert a.union(b).union(c) == a.union(b.union(c))
    assert a.intersect(b).intersect(c) == a.intersect(b.intersect(c))


@given(scale_lists, scale_lists, scales, scales)
def test_tail_subset_monotone(xs, ys, t1, t2):
    lo, hi = min(t1, t2), max(t1, t2)
    a, b = RangeSet(xs), RangeSet(ys)
    if a.tail_subset(b, lo):
        assert a.tail_subset(b, hi)


@given(scale_lists, scale_lists)
def test_max_outside_is_largest_missing(xs, ys):
    a, b = RangeSet(xs), RangeSet(ys)
    missing = [e for e in a if e not in b]
    assert max_outside(a, b) == (max(missing) if missing else ZERO)


def test_range_set_json_round_trip():
    a = RangeSet(["1/2", "2", "0"])
    assert RangeSet.from_json(a.to_json()) == a
    with pytest.raises(ValueError):
        RangeSet.from_json({"not": "a list"})
