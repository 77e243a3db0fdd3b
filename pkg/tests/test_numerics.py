import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from signsum.errors import DomainError
from signsum.numerics import (
    BASE_PRECISION,
    MAX_PRECISION,
    Interval,
    as_fraction,
    decimal_string,
    get_precision,
    hull_of,
    interval_arith,
    interval_from_json,
    interval_from_rational,
    interval_pi,
    interval_sqrt,
    interval_to_json,
    parse_rational,
    precision_ladder,
    rational_from_json,
    rational_to_json,
    working_precision,
)


def F(x):
    return as_fraction(x)


def iv(lo, hi=None):
    return Interval.from_bounds(Fraction(lo), Fraction(hi if hi is not None else lo))


# -- construction ----------------------------------------------------------

def test_dyadic_rationals_are_exact():
    assert interval_from_rational(Fraction(1, 4)).width == 0
    x = interval_from_rational(Fraction(13, 32))
    assert F(x.lo) == F(x.hi) == Fraction(13, 32)


def test_one_third_is_one_ulp_wide():
    x = interval_from_rational(Fraction(1, 3))
    assert F(x.lo) < Fraction(1, 3) < F(x.hi)
    assert gmpy2.next_above(x.lo) == x.hi


def test_interval_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        Interval(gmpy2.mpfr(2), gmpy2.mpfr(1))


def test_parse_rational_forms():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational("-0.125") == Fraction(-1, 8)
    assert parse_rational("1e-3") == Fraction(1, 1000)
    with pytest.raises(ValueError):
        parse_rational("abc")


def test_as_fraction_rejects_non_numbers():
    with pytest.raises(TypeError):
        as_fraction("1/2")


# -- arithmetic examples ---------------------------------------------------

def test_arith_examples():
    assert interval_arith(iv(1, 2), iv(3, 4), "add").fraction_bounds() == (4, 6)
    assert interval_arith(iv(-1, 1), iv(-1, 1), "mul").fraction_bounds() == (-1, 1)
    third = interval_arith(iv(1), iv(3), "div")
    assert F(third.lo) < Fraction(1, 3) < F(third.hi)
    assert interval_arith(iv(5), iv(2, 3), "sub").fraction_bounds() == (2, 3)


def test_division_by_zero_interval():
    with pytest.raises(DomainError):
        interval_arith(iv(1), iv(-1, 1), "div")


def test_sqrt_examples():
    assert interval_sqrt(iv(4)).fraction_bounds() == (2, 2)
    assert interval_sqrt(iv(0)).fraction_bounds() == (0, 0)
    r2 = interval_sqrt(iv(2))
    assert F(r2.lo) ** 2 < 2 < F(r2.hi) ** 2
    assert gmpy2.next_above(gmpy2.next_above(r2.lo)) >= r2.hi
    with pytest.raises(DomainError):
        interval_sqrt(iv(-1, 1))


def test_square_of_straddling_interval_is_nonnegative():
    assert iv(-2, 1).square().fraction_bounds() == (0, 4)
    assert (iv(-2, 1) ** 3).fraction_bounds() == (-8, 1)


def test_pi_enclosure():
    p = interval_pi()
    assert F(p.lo) < Fraction(314159265358979323847, 10**20) < F(p.hi)


def test_hull_intersect_clamp():
    a, b = iv(0, 1), iv(2, 3)
    assert a.hull(b).fraction_bounds() == (0, 3)
    assert hull_of([b, a, iv(Fraction(1, 2))]).fraction_bounds() == (0, 3)
    assert iv(-1, 2).clamp(0, 1).fraction_bounds() == (0, 1)
    assert iv(0, 2).intersect(iv(1, 3)).fraction_bounds() == (1, 2)
    with pytest.raises(DomainError):
        a.intersect(b)


def test_certified_comparisons():
    a, b = iv(0, 1), iv(2, 3)
    assert b.certainly_gt(a) and a.certainly_lt(b)
    assert not a.certainly_gt(iv(Fraction(1, 2)))
    assert iv(1, 2).certainly_ge(iv(0, 1)) and not iv(1, 2).certainly_gt(iv(0, 1))
    assert iv(0, 1).certainly_le(1)


# -- precision control -----------------------------------------------------

def test_precision_ladder_and_context():
    assert precision_ladder() == [64, 128, 256, 512]
    assert MAX_PRECISION == 512
    assert get_precision() == BASE_PRECISION
    with working_precision(200):
        assert get_precision() == 200
        third = interval_from_rational(Fraction(1, 3))
        assert third.lo.precision == 200
    assert get_precision() == BASE_PRECISION


def test_negation_keeps_operand_precision():
    with working_precision(256):
        x = interval_from_rational(Fraction(1, 3))
    y = -x
    assert F(y.lo) == -F(x.hi) and F(y.hi) == -F(x.lo)


# -- serialization -----------------------------------------------------------

def test_rational_json_roundtrip():
    r = Fraction(-7, 12)
    assert rational_to_json(r) == {"num": "-7", "den": "12"}
    assert rational_from_json(rational_to_json(r)) == r


def test_interval_json_is_outward():
    x = interval_from_rational(Fraction(1, 3))
    js = interval_to_json(x)
    assert js["precision"] == 64
    back = interval_from_json(js)
    assert F(back.lo) <= F(x.lo) and F(back.hi) >= F(x.hi)
    assert Fraction(js["lo"]) <= Fraction(1, 3) <= Fraction(js["hi"])


def test_decimal_string_directed():
    third = Fraction(1, 3)
    down, up = decimal_string(third, 5, False), decimal_string(third, 5, True)
    assert Fraction(down) < third < Fraction(up)
    assert decimal_string(Fraction(0), 5, True) == "0"
    assert Fraction(decimal_string(Fraction(-1, 3), 4, False)) < Fraction(-1, 3)


# -- containment and inclusion properties -----------------------------------

def _random_interval(rng):
    a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
    b = a + Fraction(rng.randint(0, 10**5), rng.randint(1, 10**5))
    return a, b


def _point_in(rng, a, b):
    return a + (b - a) * Fraction(rng.randint(0, 1000), 1000)


def test_sampled_containment_100k():
    """op(x) lies in op(X) for 10^5 random (x, X) pairs."""
    rng = random.Random(12345)
    ops = [
        ("add", lambda x, y: x + y),
        ("sub", lambda x, y: x - y),
        ("mul", lambda x, y: x * y),
        ("div", lambda x, y: x / y),
    ]
    checked = 0
    while checked < 100_000:
        a, b = _random_interval(rng)
        c, d = _random_interval(rng)
        X, Y = iv(a, b), iv(c, d)
        x, y = _point_in(rng, a, b), _point_in(rng, c, d)
        name, exact = ops[checked % 4]
        if name == "div" and Y.contains(0):
            Y, y = iv(c + 10**6 + 1, d + 10**6 + 1), y + 10**6 + 1
        out = interval_arith(X, Y, name)
        assert out.contains(exact(x, y)), (name, X, Y, x, y)
        checked += 1
        if checked % 10 == 0:
            # unary operations on the same sample
            assert X.square().contains(x * x)
            assert (-X).contains(-x)
            if a >= 0:
                r = X.sqrt()
                assert F(r.lo) ** 2 <= x <= F(r.hi) ** 2


@given(
    st.fractions(min_value=0, max_value=1000, max_denominator=10**6),
    st.fractions(min_value=0, max_value=100, max_denominator=10**6),
    st.integers(min_value=0, max_value=1000),
)
def test_sqrt_contains_point(a, w, k):
    X = iv(a, a + w)
    x = a + w * Fraction(k, 1000)
    r = X.sqrt()
    lo, hi = F(r.lo), F(r.hi)
    assert lo * lo <= x <= hi * hi


@given(
    st.fractions(min_value=-20, max_value=20, max_denominator=1000),
    st.fractions(min_value=0, max_value=5, max_denominator=1000),
    st.integers(min_value=0, max_value=100),
)
def test_exp_contains_point(a, w, k):
    import mpmath

    X = iv(a, a + w)
    x = a + w * Fraction(k, 100)
    e = X.exp()
    with mpmath.workdps(60):
        value = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
        assert mpmath.mpf(F(e.lo).numerator) / F(e.lo).denominator <= value
        assert mpmath.mpf(F(e.hi).numerator) / F(e.hi).denominator >= value


nested = st.tuples(
    st.fractions(min_value=-100, max_value=100, max_denominator=1000),
    st.fractions(min_value=0, max_value=10, max_denominator=1000),
    st.fractions(min_value=0, max_value=10, max_denominator=1000),
    st.fractions(min_value=0, max_value=10, max_denominator=1000),
)


@given(nested, nested, st.sampled_from(["add", "sub", "mul", "div"]))
def test_inclusion_monotone(p, q, op):
    """X inside X' and Y inside Y' implies op(X, Y) inside op(X', Y')."""
    def pair(t):
        a, w, left, right = t
        return iv(a, a + w), iv(a - left, a + w + right)

    X, Xw = pair(p)
    Y, Yw = pair(q)
    if op == "div" and Yw.contains(0):
        return
    inner, outer = interval_arith(X, Y, op), interval_arith(Xw, Yw, op)
    assert outer.lo <= inner.lo and inner.hi <= outer.hi


@given(st.fractions(max_denominator=10**9), st.fractions(max_denominator=10**9))
def test_rational_roundtrip(a, c):
    assert (a + c) - c == a
    if c != 0:
        assert (a / c) * c == a
