from fractions import Fraction

import pytest

from primpair import charsum as cs
from primpair.ffield import build_field
from primpair.fmt import matches_printed, round_down_sig
from primpair.intnum import factor_group_order
from primpair.sieve import (
    SievePlan,
    bc_check,
    bc_threshold,
    lhs_exceeds,
    mpsc_check,
    mpsc_threshold,
    optimize_plan,
    psc_check,
    psc_threshold,
)


def plan(q, t, s=0, n=4):
    return SievePlan.from_factorization(q, n, factor_group_order(q, n), t, s)


def test_bc_small_fails():
    rep = bc_check(2, 4)
    assert rep.threshold == 32 and not rep.passed
    rep = bc_check(102829, 4)
    assert rep.threshold == 3 * (1 << 26) and not rep.passed


def test_bc_passes_eventually():
    # few prime factors and quartic degree: lhs q beats C_q * 2^{2*omega}
    from primpair.intnum import Factorization

    fake = Factorization(2, ((2, 1),))
    rep = bc_check(101, 4, fake)
    assert rep.threshold == 12 and rep.passed  # 101 > 3 * 4


def test_worked_example_10009():
    p1 = plan(10009, t=3)
    rep = psc_check(10009, 4, p1)
    assert matches_printed(p1.delta, "0.22671")
    assert matches_printed(rep.threshold, "11393")
    assert not rep.passed
    p2 = plan(10009, t=3, s=1)
    rep2 = mpsc_check(10009, 4, p2)
    assert matches_printed(p2.delta, "0.22678")
    assert matches_printed(rep2.threshold, "9925.04")
    assert rep2.passed


def test_worked_example_21013():
    rep = psc_check(21013, 4, plan(21013, t=3))
    assert rep.plan.r == 9
    assert matches_printed(rep.plan.delta, "0.2093")
    assert matches_printed(rep.threshold, "15977")
    assert rep.passed


def test_worked_example_102829():
    rep = optimize_plan(102829, 4)
    assert rep.kind == "PSC" and rep.passed
    assert rep.plan.t == 4 and rep.plan.r == 9
    assert rep.plan.core == (2, 3, 5, 7)
    assert matches_printed(rep.plan.delta, "0.2983")
    assert matches_printed(rep.threshold, "45289")


def test_worked_example_20747():
    rep = psc_check(20747, 4, plan(20747, t=4))
    assert matches_printed(rep.plan.delta, "0.3504")
    assert matches_printed(rep.threshold, "34410")
    assert not rep.passed
    full = optimize_plan(20747, 4)
    assert full.unresolved and not full.passed


def test_worked_example_3947():
    rep = psc_check(3947, 4, plan(3947, t=3))
    assert rep.plan.r == 6  # the printed record says r=7 but its own delta implies 6
    assert matches_printed(rep.plan.delta, "0.50515")
    assert matches_printed(rep.threshold, "4564.8")
    assert not rep.passed
    rep1 = mpsc_check(3947, 4, plan(3947, t=3, s=1))
    assert matches_printed(rep1.plan.delta, "0.5061")
    assert matches_printed(rep1.threshold, "3993.6")
    assert not rep1.passed
    rep2 = mpsc_check(3947, 4, plan(3947, t=3, s=2))
    assert matches_printed(rep2.plan.delta, "0.51106")
    assert matches_printed(rep2.threshold, "3795.1")
    assert rep2.passed


def test_small_pairs_unresolved():
    for q in (2, 3):
        rep = optimize_plan(q, 4)
        assert rep.unresolved


def test_degenerate_mpsc_recovers_psc():
    """With s = eps = 0 and the theta^2(k) factor cancelled, the modified
    threshold collapses to the plain sieve threshold."""
    for q, t in ((10009, 3), (3947, 2), (256, 2)):
        p = plan(q, t)
        th = p.theta_core
        lhs = mpsc_threshold(p.cq, p.t, p.r, 0, th, p.delta, Fraction(0))
        # numerator theta^2 (2r-1+2delta) 2^{2t} + 0; denominator theta^2 delta
        assert lhs == psc_threshold(p.cq, p.t, p.r, p.delta)


def test_degenerate_psc_recovers_bc():
    """r = 0, delta = 1 collapses the sieve threshold to C_q 2^{2t}."""
    for cq in (2, 3):
        for t in (2, 5, 12):
            assert psc_threshold(cq, t, 0, Fraction(1)) == bc_threshold(cq, t)


def test_exact_comparison_odd_degree():
    # q^{n/2-1} for n=3 is sqrt(q): comparisons square exactly
    assert lhs_exceeds(101, 3, Fraction(10))
    assert not lhs_exceeds(101, 3, Fraction(11))
    assert lhs_exceeds(101, 3, Fraction(-5))


def test_negative_delta_reports_fail():
    fact = factor_group_order(49, 4)
    p = SievePlan.from_factorization(49, 4, fact, 0)
    rep = psc_check(49, 4, p)
    assert rep.threshold is None and not rep.passed and rep.applicable


def test_mpsc_inapplicable_distinct_from_fail():
    # tiny "large" primes drive 2*eps past theta^2 * delta <= 1
    p = SievePlan(q=2, n=12, core=(13,), sieving=(7,), large=(3, 5))
    assert 2 * p.epsilon > 1
    rep = mpsc_check(2, 12, p)
    assert not rep.applicable and not rep.passed and rep.threshold is None


def test_monotonicity_core_growth():
    """Moving a prime from sieving to core raises 2^{2t} and raises delta."""
    f = factor_group_order(10009, 4)
    for t in range(1, 8):
        a = SievePlan.from_factorization(10009, 4, f, t)
        b = SievePlan.from_factorization(10009, 4, f, t + 1)
        assert b.delta > a.delta
        assert (1 << (2 * b.t)) > (1 << (2 * a.t))


def test_plan_partition_validated():
    with pytest.raises(ValueError):
        SievePlan(q=5, n=4, core=(2,), sieving=(2, 3), large=())
    with pytest.raises(ValueError):
        SievePlan.from_factorization(5, 4, factor_group_order(5, 4), t=99)


def test_pass_implies_membership_on_small_fields():
    """The criteria are sufficient conditions: any passing (q, n) with the
    field in table range must have brute-force witnesses for every a."""
    for p, h, n in [(2, 1, 4), (3, 1, 4), (2, 2, 3), (5, 1, 3), (7, 1, 3), (2, 1, 6), (3, 1, 5)]:
        q = p**h
        rep = optimize_plan(q, n)
        if not rep.passed:
            continue
        ctx = build_field(p, h, n)
        g = ctx.order - 1
        for a in range(ctx.q):
            assert cs.count_by_bruteforce(ctx, a, g, g).count > 0, (q, n, a)


def test_report_json_shape():
    rep = optimize_plan(10009, 4)
    d = rep.to_json_dict()
    assert d["kind"] == "MPSC" and d["passed"] is True
    assert d["t"] == 3 and d["s"] == 1
    assert d["delta_exact"].count("/") == 1
    assert d["threshold"] == float(round_down_sig(rep.threshold, 6))
