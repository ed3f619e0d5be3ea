import os

import pytest

from primpair.ffield import FieldContext, build_field
from primpair.verifier import (
    check_witness,
    load_checkpoint,
    verify_exhaustive,
    verify_quartic_prime,
    verify_quartic_primepower,
)


def test_small_membership_outcomes():
    assert verify_exhaustive(2, 4).success
    assert verify_exhaustive(4, 4).success
    for q in (3, 4, 5):
        r = verify_exhaustive(q, 3)
        assert not r.success
        assert r.failures == [0]  # the missing trace value is 0 in all three
    assert verify_exhaustive(2, 3).success


def test_exhaustive_witnesses_recheck(small_field):
    ctx = small_field
    r = verify_exhaustive(ctx.q, ctx.n)
    for a, w in r.witnesses.items():
        assert check_witness(ctx.q, ctx.n, a, w)


def test_exhaustive_single_trace():
    r = verify_exhaustive(4, 3, trace=0)
    assert not r.success and r.failures == [0]
    r1 = verify_exhaustive(4, 3, trace=1)
    assert r1.success and list(r1.witnesses) == [1]


def test_exhaustive_limit():
    from primpair.ffield import FieldTooLargeError

    with pytest.raises(FieldTooLargeError):
        verify_exhaustive(101, 4, limit=10**6)


def test_witness_rejects_tampering():
    r = verify_exhaustive(5, 4)
    a, (kind, coeffs) = next(iter(r.witnesses.items()))
    ctx = build_field(5, 1, 4)
    # wrong trace target
    wrong_a = (a + 1) % 5
    assert not check_witness(5, 4, wrong_a, (kind, coeffs))
    # non-primitive element injected (1 is never primitive)
    one = tuple([1] + [0] * (ctx.m - 1))
    assert not check_witness(5, 4, ctx.trace_to_base_packed(1), ("element", one))


def test_witness_portable_across_rebuilt_context():
    """A fresh context (bypassing the build cache) accepts stored witnesses."""
    r = verify_exhaustive(3, 4)
    fresh = FieldContext(3, 1, 4)
    for a, w in r.witnesses.items():
        assert check_witness(3, 4, a, w, ctx=fresh)


def test_quartic_search_is_sound():
    """Quartic Success implies exhaustive Success; its witnesses re-verify.
    The restricted polynomial family can genuinely fail at small q (the
    reference computations only used it from q = 307 up), so outcome
    equality is asserted where the family is dense enough."""
    for q in (7, 11, 13, 31):
        rq = verify_quartic_prime(q)
        for a, w in rq.witnesses.items():
            assert check_witness(q, 4, a, w)
        if rq.success:
            assert verify_exhaustive(q, 4).success
    assert verify_quartic_prime(31).success == verify_exhaustive(31, 4).success


def test_quartic_trace_is_automatic():
    """check_witness recomputes the trace of the residue class x mod f and
    it always equals the a the polynomial was built from."""
    r = verify_quartic_prime(31)
    for a, (_, payload) in r.witnesses.items():
        assert payload[0] == a
        assert check_witness(31, 4, a, ("poly", payload))


def test_quartic_conjugate_partners_share_order():
    """All four roots of an accepted quartic have partners of equal order,
    so testing the residue class x alone loses nothing."""
    r = verify_quartic_prime(7, trace=1)
    ctx = build_field(7, 1, 4)
    (_, (a, b, c)) = r.witnesses[1]
    roots = []
    for v in range(ctx.order):
        x = ctx.from_packed(v)
        if not (x**4 - a * x**3 + b * x + c):
            roots.append(x)
    assert len(roots) == 4
    orders = {ctx.element_order(x + x.inverse()) for x in roots}
    assert orders == {ctx.order - 1}


def test_quartic_prime_power_small():
    """F_9: the sweep covers a = 0 and every other packed value."""
    r = verify_quartic_primepower(3, 2)
    assert r.success
    assert set(r.witnesses) == set(range(9))
    for a in (0, 4, 8):
        assert check_witness(9, 4, a, r.witnesses[a])


def test_quartic_prime_power_rejects_prime():
    with pytest.raises(ValueError):
        verify_quartic_primepower(7, 1)


def test_quartic_record_b_starts_at_zero():
    r = verify_quartic_prime(307, trace=51)
    assert r.stats.min_b[51] == 0
    assert r.stats.next_b_after_zero[51] >= 1


def test_checkpoint_roundtrip(tmp_path):
    path = str(tmp_path / "check.txt")
    r = verify_quartic_prime(31, checkpoint=path)
    lines = open(path).read().strip().splitlines()
    assert lines[-1] == f"RESULT,31,4,{r.outcome}"
    done = load_checkpoint(path)
    assert set(done) == set(range(31))
    # resume: a fully-recorded file short-circuits the search
    r2 = verify_quartic_prime(31, resume=path)
    assert r2.success == r.success
    assert r2.stats.min_b == r.stats.min_b


def test_checkpoint_partial_resume(tmp_path):
    path = str(tmp_path / "partial.txt")
    verify_quartic_prime(31, trace=3, checkpoint=path)
    done = load_checkpoint(path)
    assert list(done) == [3]
    full = verify_quartic_prime(31, resume=path)
    assert full.success
    assert full.stats.min_b[3] == done[3][1][1]


def test_workers_deterministic():
    a = verify_quartic_prime(31, workers=1)
    b = verify_quartic_prime(31, workers=3)
    assert a.stats.min_b == b.stats.min_b
    assert a.witnesses == b.witnesses
