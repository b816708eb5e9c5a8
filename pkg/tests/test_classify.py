from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hartogs.classify import (
    Case,
    SCAN_HEADER,
    classify,
    gamma_constraint_holds,
    parse_number,
    phase_scan,
    projection_self_bounded,
    scan_rows_as_text,
    upper_edge,
)
from hartogs.domain import DomainError


def test_examples():
    v = classify(1, 2, 2)
    assert (v.case, v.alpha_threshold, v.strict) == (Case.II, 0, False)
    assert v.as_dict() == {"case": "II", "alpha_threshold": "0", "strict": False}
    assert classify(2, 2, 3).case is Case.I
    v = classify(1, Fraction(4, 3), Fraction(4, 3))
    assert (v.case, v.alpha_threshold, v.strict) == (Case.III, 0, True)


def test_self_bounded_examples():
    assert projection_self_bounded(1, 2)
    assert not projection_self_bounded(2, 3)
    assert not projection_self_bounded(1, Fraction(4, 3))
    assert not classify(1, Fraction(4, 3), Fraction(4, 3)).admits(0)


def test_parse_number():
    assert parse_number("1.2") == Fraction(6, 5)
    assert parse_number("4/3") == Fraction(4, 3)
    assert parse_number(2) == Fraction(2)
    assert isinstance(parse_number(1.2), float)
    for bad in ("abc", "nan", "inf"):
        with pytest.raises(ValueError):
            parse_number(bad)
    with pytest.raises(TypeError):
        parse_number(True)


def test_decimal_string_is_exact():
    # 1.2 as a float would sit a rounding error away from the case boundary
    v = classify(1, "1.2", "1.2")
    assert v.case is Case.III and v.alpha_threshold == Fraction(1, 6)


def test_rejects_invalid():
    with pytest.raises(DomainError):
        classify(1, Fraction(1, 2), 2)
    with pytest.raises(DomainError):
        classify(1, 1, 2)
    with pytest.raises(DomainError):
        classify(1, 3, 2)


def test_float_ties():
    # 1/q = k/(2k+2) exactly goes to case I; 1/q on the upper edge to case III
    assert classify(2, 2.0, 3.0).case is Case.I
    assert classify(1, 4 / 3, 4 / 3).case is Case.III
    assert classify(1, 4 / 3, 4 / 3).strict


fractions = st.fractions(min_value=Fraction(1, 40), max_value=Fraction(39, 40), max_denominator=40)


@given(st.integers(1, 6), fractions, fractions)
def test_exactly_one_case_and_threshold_formula(k, a, b):
    x, y = max(a, b), min(a, b)
    v = classify(k, 1 / x, 1 / y)
    if y <= Fraction(k, 2 * k + 2):
        assert v.case is Case.I and v.alpha_threshold is None
    elif y >= upper_edge(k, x):
        assert v.case is Case.III and v.strict and v.alpha_threshold == x - upper_edge(k, x)
    else:
        assert v.case is Case.II and not v.strict and v.alpha_threshold == x - y


@given(st.integers(1, 6), fractions, fractions, fractions)
def test_threshold_monotone(k, a, b, c):
    y, x1, x2 = sorted([a, b, c])
    if x1 == x2:
        return
    v1, v2 = classify(k, 1 / x1, 1 / y), classify(k, 1 / x2, 1 / y)
    if v1.case is Case.III and v2.case is Case.III:
        # larger p means smaller x
        assert v1.alpha_threshold <= v2.alpha_threshold
    x, y1, y2 = c, a, b
    if not (y1 < y2 <= x):
        return
    w1, w2 = classify(k, 1 / x, 1 / y1), classify(k, 1 / x, 1 / y2)
    if w1.case is Case.II and w2.case is Case.II:
        assert w1.alpha_threshold >= w2.alpha_threshold


@settings(max_examples=200)
@given(st.integers(1, 5), st.floats(1.01, 20), st.floats(1.0, 3.0))
def test_float_matches_exact_away_from_ties(k, p, ratio):
    q = p * ratio
    vf = classify(k, p, q)
    vx = classify(k, Fraction(p), Fraction(q))
    assert vf.case is vx.case or abs(1 / q - k / (2 * k + 2)) < 1e-9 or abs(1 / q - float(upper_edge(k, Fraction(1, 1) / Fraction(p)))) < 1e-9


def test_phase_scan_shape_and_diagonal():
    k, n = 2, 20
    rows = phase_scan(k, n)
    assert len(rows) == (n - 1) * n // 2
    for r in rows:
        if r["inv_q"] <= Fraction(k, 2 * k + 2):
            assert r["case"] == "I"
        if r["inv_p"] == r["inv_q"] and Fraction(k, 2 * k + 2) < r["inv_p"] < Fraction(k + 2, 2 * k + 2):
            assert r["alpha_threshold"] == 0 and not r["strict"]
    text = scan_rows_as_text(rows)
    assert all(len(t) == len(SCAN_HEADER) for t in text)
    assert all("," not in f for t in text for f in t)
    with pytest.raises(ValueError):
        phase_scan(1, 1)


def test_gamma_constraint():
    assert gamma_constraint_holds(1, 2, 2)
    assert isinstance(gamma_constraint_holds(1, 2.0, 2.5), bool)
