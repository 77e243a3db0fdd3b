import random
from fractions import Fraction

import pytest

from oracles import F_QUARTER, LEMMA2_K2_LHS, encloses, f_oracle
from signsum.distribution import WeightVector
from signsum.errors import ContractError
from signsum.numerics import Interval, as_fraction
from signsum.report import Evidence, Verdict, VerificationReport, combine, compare_ge, compare_gt
from signsum.surds import RootSum
from signsum.verifier import (
    LemmaTwoInstance,
    convexity_expression,
    convexity_grid,
    random_unit_vector,
    run_batch,
    verify_bd_on_instance,
    verify_convexity_q_invsqrt,
    verify_f_decreasing_pair,
    verify_f_midpoint_concavity,
    verify_f_properties,
    verify_lemma1_on_instance,
    verify_lemma2_all_k,
    verify_lemma2_finite,
    verify_main_conclusion,
    verify_main_constant,
    verify_xi_inequality,
)

fr = Fraction


def strict_when_verified(report: VerificationReport):
    """Verified comparisons of order type are strict at interval level."""
    for e in report.evidence:
        if e.verdict is not Verdict.VERIFIED:
            continue
        lhs = e.lhs if isinstance(e.lhs, Interval) else Interval.point(e.lhs)
        rhs = e.rhs if isinstance(e.rhs, Interval) else Interval.point(e.rhs)
        if e.relation in (">", ">="):
            assert lhs.lo >= rhs.hi
        elif e.relation == "<=":
            assert lhs.hi <= rhs.lo
    for c in report.components:
        strict_when_verified(c)


# -- verdict plumbing --------------------------------------------------------

def test_compare_semantics():
    a, b = Interval.from_bounds(1, 2), Interval.from_bounds(fr(3, 2), 3)
    assert compare_ge(b, a) is Verdict.UNDECIDED
    assert compare_ge(Interval.from_bounds(2, 3), a) is Verdict.VERIFIED
    assert compare_ge(a, Interval.from_bounds(3, 4)) is Verdict.REFUTED
    assert compare_gt(Interval.from_bounds(2, 3), a) is Verdict.UNDECIDED
    assert combine([]) is Verdict.VERIFIED
    assert combine([Verdict.VERIFIED, Verdict.UNDECIDED]) is Verdict.UNDECIDED
    assert combine([Verdict.UNDECIDED, Verdict.REFUTED]) is Verdict.REFUTED


def test_report_json_and_failing():
    ev = Evidence({"x": fr(1, 3)}, fr(1, 2), Interval.from_bounds(0, 1), ">=", Verdict.UNDECIDED)
    report = VerificationReport("demo", Verdict.UNDECIDED, [ev], notes=["n"])
    js = report.to_json()
    assert js["evidence"][0]["lhs"]["exact"] == {"num": "1", "den": "2"}
    assert js["evidence"][0]["input"] == {"x": {"num": "1", "den": "3"}}
    assert report.failing() == [ev] and not report.verified
    assert "1 not verified" in report.summary()


# -- main constant and F --------------------------------------------------------

def test_main_constant():
    report = verify_main_constant()
    assert report.verified
    f = report.evidence[0].lhs
    assert as_fraction(f.lo) > fr(427685, 10**6) and f.width <= 1e-9
    assert f.contains(fr(F_QUARTER))


def test_f_properties_examples():
    report = verify_f_properties()
    assert report.verified and len(report.components) == 4
    assert verify_f_properties([fr(1, 4)]).components[0].verified
    pair = verify_f_decreasing_pair(fr(1, 5), fr(7, 25))
    assert pair.verdict is Verdict.VERIFIED
    with pytest.raises(ContractError):
        verify_f_properties([fr(1, 2), fr(1, 4)])
    with pytest.raises(ContractError):
        verify_f_decreasing_pair(1, fr(1, 2))


def test_midpoint_concavity_grid():
    report = verify_f_midpoint_concavity()
    assert report.verified and len(report.evidence) > 100
    with pytest.raises(ContractError):
        verify_f_midpoint_concavity([fr(1, 10), fr(1, 2)])


# -- BD instances -----------------------------------------------------------------

def test_bd_examples():
    eq = verify_bd_on_instance(WeightVector(["sqrt(1/2)"] * 2), RootSum.sqrt_of(2))
    assert eq.verified and eq.evidence[0].lhs == fr(1, 4)
    assert verify_bd_on_instance(WeightVector([fr(3, 5), fr(4, 5)]), 1).verified
    assert verify_bd_on_instance(WeightVector([1]), 0).verified
    assert verify_bd_on_instance(WeightVector(["sqrt(1/2)"] * 2), "sqrt(2)").verified
    with pytest.raises(ContractError):
        verify_bd_on_instance(WeightVector([1, 1]), 0)


def test_bd_on_bare_enclosure():
    sqrt2 = RootSum.sqrt_of(2).enclosure()
    report = verify_bd_on_instance(WeightVector(["sqrt(1/2)"] * 2), sqrt2)
    assert report.verified


# -- Lemma 1 ------------------------------------------------------------------------

def test_lemma1_examples():
    assert verify_lemma1_on_instance(WeightVector([0] * 4), fr(1, 3), fr(-1, 2)).verified
    r = verify_lemma1_on_instance(WeightVector([fr(1, 2)] * 4), fr(1, 4), 1)
    assert r.verified and r.evidence[0].lhs == fr(11, 16)
    r = verify_lemma1_on_instance(WeightVector([fr(3, 5), fr(4, 5)]), fr(1, 4), 1)
    assert r.verified and r.evidence[0].lhs == fr(1, 2)


def test_lemma1_contract():
    with pytest.raises(ContractError):
        verify_lemma1_on_instance(WeightVector([1]), fr(1, 4), 0)
    with pytest.raises(ContractError):
        verify_lemma1_on_instance(WeightVector([fr(1, 2)]), fr(1, 4), fr(3, 2))
    with pytest.raises(ContractError):
        verify_lemma1_on_instance(WeightVector([fr(1, 2)]), 0, 0)


def test_lemma1_extremal_shapes():
    # budget met with equality by a single surd weight and by two equal ones
    for c in (fr(1, 10), fr(1, 4), fr(1, 2), 1):
        for x in (0, fr(1, 3), -1):
            scale = RootSum.sqrt_of(c) * (1 + abs(fr(x)))
            assert verify_lemma1_on_instance(WeightVector([scale]), c, x).verdict is not Verdict.REFUTED


def test_random_unit_vectors_are_on_sphere():
    rng = random.Random(5)
    for n in range(0, 9):
        v = random_unit_vector(rng, n)
        assert len(v) == n
        if n:
            assert sum(x * x for x in v) == 1


# -- Lemma 2 and the xi inequality -----------------------------------------------------

def test_lemma_two_instance():
    k2 = LemmaTwoInstance(2)
    assert (k2.c1, k2.c2, k2.weight) == (fr(7, 25), fr(5, 25), fr(1, 2))
    assert k2.c1 == fr(1, 4) + fr(3, 100) and k2.c2 == fr(1, 4) - fr(1, 20)
    for K in range(2, 200):
        inst = LemmaTwoInstance(K)
        assert inst.identities_hold()
        assert inst.c1 - fr(1, 4) == fr(3, 4) / (2 * K + 1) ** 2
        assert fr(1, 4) - inst.c2 == fr(5, 4) / (2 * K + 1) ** 2
    with pytest.raises(ContractError):
        LemmaTwoInstance(1)


def test_lemma2_finite():
    report = verify_lemma2_finite(60)
    assert report.verified and len(report.evidence) == 59
    k2 = report.evidence[0]
    assert k2.lhs.contains(fr(LEMMA2_K2_LHS))
    strict_when_verified(report)
    with pytest.raises(ContractError):
        verify_lemma2_finite(1)


def test_lemma2_all_k():
    report = verify_lemma2_all_k(10)
    assert report.verified
    claims = [c.claim for c in report.components]
    assert claims == ["lemma2-finite", "xi-endpoints", "convexity", "lemma2-reduction"]


def test_xi_examples():
    zero = verify_xi_inequality(0)
    assert zero.verified and zero.evidence[0].input["comparison"] == "structural"
    for xi in (fr(1, 25), fr(1, 9), fr(1, 100)):
        r = verify_xi_inequality(xi)
        assert r.verified
        strict_when_verified(r)
    with pytest.raises(ContractError):
        verify_xi_inequality(fr(1, 5))
    with pytest.raises(ContractError):
        verify_xi_inequality(fr(-1, 100))


def test_xi_lhs_matches_oracle():
    r = verify_xi_inequality(fr(1, 9))
    expected = (f_oracle(fr(1, 3)) + f_oracle(fr(1, 9))) / 2
    assert encloses(r.evidence[0].lhs, expected, rel=1e-25)


def test_undecided_at_absurd_precision():
    report = verify_xi_inequality(fr(1, 25), fr(1, 10**300))
    assert report.verdict is Verdict.UNDECIDED


# -- convexity ------------------------------------------------------------------------

def test_convexity_examples():
    tenth = Interval.point(fr(1, 10))
    assert convexity_expression(tenth).lo > 0
    third = Interval.from_rational(fr(1, 3))
    value = convexity_expression(third)
    assert value.lo >= 0 and value.contains(0)
    assert convexity_expression(Interval.from_bounds(fr(3, 10), fr(33, 100))).lo > 0


def test_convexity_grid_and_report():
    grid = convexity_grid()
    assert as_fraction(grid[0].lo) <= fr(1, 10**4) and as_fraction(grid[-1].hi) >= fr(1, 3)
    report = verify_convexity_q_invsqrt(grid)
    assert report.verified
    custom = [Interval.from_bounds(fr(1, 10**4), fr(1, 10)), Interval.from_bounds(fr(1, 10), fr(1, 3))]
    assert verify_convexity_q_invsqrt(custom).verified


def test_convexity_grid_must_cover():
    with pytest.raises(ContractError):
        verify_convexity_q_invsqrt([Interval.from_bounds(fr(1, 10**4), fr(1, 10)),
                                    Interval.from_bounds(fr(1, 5), fr(1, 3))])
    with pytest.raises(ContractError):
        verify_convexity_q_invsqrt([Interval.from_bounds(fr(1, 10), fr(1, 3))])


# -- main conclusion -----------------------------------------------------------------

def test_main_conclusion_examples():
    for v, expected in (
        (["sqrt(1/2)"] * 2, fr(1, 2)),
        ([fr(1, 2)] * 4, fr(7, 8)),
        ([1], fr(1)),
    ):
        r = verify_main_conclusion(WeightVector(v))
        assert r.verified and r.evidence[0].lhs == expected
    with pytest.raises(ContractError):
        verify_main_conclusion(WeightVector([1, 1]))


def test_run_batch_keeps_order():
    items = list(range(50))
    assert run_batch(lambda x: x * x, items, workers=4) == [x * x for x in items]
