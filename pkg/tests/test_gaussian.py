from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

import oracles
from oracles import bd_oracle, encloses, f_oracle, q_oracle
from signsum.errors import ContractError, PrecisionExhausted
from signsum.gaussian import (
    bd_bound,
    density,
    f_of_c,
    q_prime,
    q_second,
    q_second_derivative_identity_check,
    q_tail,
)
from signsum.numerics import Interval, as_fraction
from signsum.report import Verdict
from signsum.surds import RootSum

SQRT2 = RootSum.sqrt_of(2)


def F(x):
    return as_fraction(x)


# -- frozen oracle values ----------------------------------------------------

def test_q_at_zero_is_half():
    q = q_tail(0)
    assert q.contains(Fraction(1, 2)) and q.width <= 1e-12


def test_q_frozen_values():
    assert encloses(q_tail(SQRT2), Fraction(oracles.Q_SQRT2), rel=1e-28)
    assert encloses(q_tail(2), Fraction(oracles.Q_2), rel=1e-28)
    assert encloses(q_tail(1), Fraction(oracles.Q_1), rel=1e-28)
    assert q_tail(2).width <= 1e-12


def test_bd_frozen_values():
    b = bd_bound(SQRT2)
    assert b.contains(Fraction(1, 4)) and b.width <= 1e-12
    assert encloses(bd_bound(2), Fraction(oracles.BD_2), rel=1e-28)
    assert encloses(bd_bound(Fraction(7, 5)), Fraction(oracles.BD_1_4), rel=1e-28)
    assert encloses(bd_bound(1), Fraction(oracles.BD_1), rel=1e-28)
    assert F(bd_bound(0).lo) > 1


def test_f_frozen_values():
    f = f_of_c(Fraction(1, 4))
    assert F(f.lo) > Fraction(427685, 10**6) and F(f.hi) < Fraction(427687, 10**6)
    assert encloses(f, Fraction(oracles.F_QUARTER), rel=1e-28)
    assert encloses(f_of_c(1), Fraction(oracles.F_ONE), rel=1e-26)
    assert encloses(f_of_c(Fraction(7, 25)), Fraction(oracles.F_7_25), rel=1e-28)
    assert encloses(f_of_c(Fraction(1, 5)), Fraction(oracles.F_1_5), rel=1e-28)


def test_f_near_zero():
    f = f_of_c(Fraction(1, 10**6))
    assert F(f.hi) <= Fraction(1, 2)
    assert F(f.lo) >= Fraction(1, 2) - Fraction(1, 10**9)


def test_f_of_half_is_quarter():
    # 1/sqrt(1/2) = sqrt 2, so F(1/2) = 1/2 - 1/4 exactly
    assert f_of_c(Fraction(1, 2)).contains(Fraction(1, 4))


def test_higher_precision_targets():
    q = q_tail(Fraction(1, 3), 1e-60)
    assert q.width <= 1e-60
    assert encloses(q, q_oracle(Fraction(1, 3)), rel=1e-50)
    f = f_of_c(Fraction(1, 4), Fraction(1, 10**40))
    assert f.width <= Fraction(1, 10**40)


def test_unreachable_target():
    with pytest.raises(PrecisionExhausted):
        q_tail(1, Fraction(1, 10**300))
    with pytest.raises(ContractError):
        q_tail(1, 0)


def test_interval_argument_encloses_range():
    x = Interval.from_bounds(1, 2)
    q = q_tail(x)
    assert encloses(q, q_oracle(1)) and encloses(q, q_oracle(2))
    assert encloses(q, q_oracle(Fraction(3, 2)))


def test_large_arguments():
    for x in (3, Fraction(30001, 10000), 5, 10, 37, 100):
        q = q_tail(x)
        assert encloses(q, q_oracle(x), rel=1e-10), x
    with pytest.raises(ContractError):
        q_tail(10**9)


def test_invalid_c():
    with pytest.raises(ContractError):
        f_of_c(0)
    with pytest.raises(ContractError):
        f_of_c(Interval.from_bounds(-1, 1))


def test_derivatives_and_identity():
    t = Interval.point(1)
    assert q_prime(t).hi < 0
    assert encloses(q_second(t), mpmath.npdf(1))
    assert encloses(-q_prime(t), mpmath.npdf(1))
    for x in (1, Fraction(1, 10), 3):
        assert q_second_derivative_identity_check(Interval.point(x)) is Verdict.VERIFIED
    with pytest.raises(ContractError):
        q_second_derivative_identity_check(Interval.point(0))


def test_density_encloses_oracle():
    assert encloses(density(Interval.point(Fraction(1, 2))), mpmath.npdf(0.5))


# -- grid properties -----------------------------------------------------------

GRID = [Fraction(-10) + Fraction(20 * k, 999) for k in range(1000)]


def test_q_monotone_and_symmetric_on_grid():
    values = [q_tail(x) for x in GRID]
    for a, b in zip(values, values[1:]):
        assert a.lo >= b.lo and a.hi >= b.hi
    for x, q in zip(GRID, values):
        assert 0 <= q.lo and q.hi <= 1
        total = q + q_tail(-x)
        assert total.contains(1)


def test_q_matches_oracle_on_grid():
    for x in GRID:
        assert encloses(q_tail(x), q_oracle(x), rel=1e-30), x


def test_f_decreasing_and_bounded_on_grid():
    cs = [Fraction(2 * k, 1000) for k in range(1, 1001)]
    values = [f_of_c(c) for c in cs]
    mids = [F(v.mid) for v in values]
    assert all(a > b for a, b in zip(mids[200:], mids[201:]))
    assert all(a >= b for a, b in zip(mids, mids[1:]))
    for c, v in zip(cs, values):
        assert F(v.hi) <= Fraction(1, 2)
    for i in range(0, 1000, 50):
        for j in range(i + 50, 1000, 50):
            if values[i].lo > values[j].hi:
                assert F(values[i].lo) > F(values[j].hi)
    assert values[100].lo > values[200].hi


def test_f_matches_oracle_on_grid():
    for k in range(1, 1001, 7):
        c = Fraction(2 * k, 1000)
        assert encloses(f_of_c(c), f_oracle(c), rel=1e-25), c


@given(st.fractions(min_value=-8, max_value=8, max_denominator=10**4),
       st.fractions(min_value=0, max_value=1, max_denominator=10**4))
def test_q_monotone_pairs(x, d):
    a, b = q_tail(x), q_tail(x + d)
    assert a.lo >= b.lo and a.hi >= b.hi


@given(st.fractions(min_value=-6, max_value=6, max_denominator=10**4))
def test_bd_matches_oracle(x):
    assert encloses(bd_bound(x), bd_oracle(x), rel=1e-28)
