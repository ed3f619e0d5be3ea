import cmath

import pytest

from primpair import charsum as cs
from primpair.ffield import build_field
from primpair.intnum import factorize, squarefree_divisors, theta


def test_character_multiplicativity(f16):
    chi = cs.MultCharacter(5, 2)
    for u in range(1, 16):
        for v in range(1, 16, 3):
            x, y = f16.from_packed(u), f16.from_packed(v)
            lhs = chi.value(f16, x * y)
            rhs = chi.value(f16, x) * chi.value(f16, y)
            assert abs(lhs - rhs) < 1e-12


def test_character_exact_order(f81):
    g = f81.generator
    for d in (2, 4, 5):
        for chi in cs.characters_of_order(f81, d):
            vals = [chi.value(f81, g**k) for k in range(d)]
            assert abs(vals[0] - 1) < 1e-12
            # the character's restriction to powers of g has exact period d
            assert all(abs(v - 1) > 1e-9 for v in vals[1:])


def test_additive_character_additivity(f81):
    psi = cs.AdditiveCharacter(1)
    for u in range(0, 81, 7):
        for v in range(0, 81, 11):
            x, y = f81.from_packed(u), f81.from_packed(v)
            assert abs(psi.value(f81, x + y) - psi.value(f81, x) * psi.value(f81, y)) < 1e-12


def test_character_orthogonality(small_field):
    ctx = small_field
    g = ctx.order - 1
    for ell, _ in ctx.group_fact.factors:
        chi = cs.characters_of_order(ctx, ell)[0]
        total = sum(chi.value(ctx, ctx.from_packed(v)) for v in range(1, ctx.order))
        assert abs(total) < 1e-8
    # additive: sum over u in F_q of psi_0(u*b) = 0 for b != 0
    for b in range(1, ctx.q):
        total = sum(
            cmath.exp(2j * cmath.pi * ctx.base.abs_trace_packed(ctx.base._pmul(u, b)) / ctx.p)
            for u in range(ctx.q)
        )
        assert abs(total) < 1e-9


def test_trivial_sum_counts_nonsingular_units(small_field):
    ctx = small_field
    s = cs.mixed_sum(ctx, cs.MultCharacter(1, 0), cs.MultCharacter(1, 0), 0)
    assert abs(s.imag) < 1e-9
    assert abs(s.real - (ctx.order - 1 - cs.singular_count(ctx))) < 1e-9


def test_formula_matches_oracle_everywhere(small_field):
    worst, at = cs.formula_oracle_deltas(ctx=small_field)
    assert worst < 1e-6, at


def test_closed_form_trace_counts(small_field):
    """N_a(1,1) equals the classical closed form minus the number of roots
    of x^2 + 1 with trace a (the vanishing-at-zero convention)."""
    ctx = small_field
    t = ctx.tables(10**6)
    lead = ctx.order // ctx.q
    import numpy as np

    sing = [int(t.exp[i]) for i in np.flatnonzero(t.partner < 0)]
    sing_by_trace = {}
    for v in sing:
        a = ctx.trace_to_base_packed(v)
        sing_by_trace[a] = sing_by_trace.get(a, 0) + 1
    for a in range(ctx.q):
        closed = lead - (1 if a == 0 else 0)
        got = cs.count_by_bruteforce(ctx, a, 1, 1).count
        assert got == closed - sing_by_trace.get(a, 0)
        assert abs(cs.count_by_formula(ctx, a, 1, 1) - got) < 1e-6


def test_closed_forms_exact_when_no_singular_collision():
    ctx = build_field(7, 1, 3)  # x^2 + 1 has no roots in F_343
    assert cs.singular_count(ctx) == 0
    lead = ctx.order // ctx.q
    for a in range(ctx.q):
        want = lead - (1 if a == 0 else 0)
        assert cs.count_by_bruteforce(ctx, a, 1, 1).count == want


def test_radical_invariance(f81):
    # 80 = 2^4 * 5: e and Rad(e) give identical counts
    for a in range(3):
        for e, rad in ((80, 10), (16, 2), (40, 10)):
            c1 = cs.count_by_bruteforce(f81, a, e, e).count
            c2 = cs.count_by_bruteforce(f81, a, rad, rad).count
            assert c1 == c2


def test_efree_counts_match_theta(small_field):
    """The number of e-free units is theta(e) * (q^n - 1), exactly."""
    ctx = small_field
    g = ctx.order - 1
    t = ctx.tables(10**6)
    import numpy as np

    idx = np.arange(t.order)
    for e in squarefree_divisors(ctx.group_fact):
        mask = np.ones(t.order, dtype=bool)
        for ell, _ in ctx.group_fact.factors:
            if e % ell == 0:
                mask &= (idx % ell) != 0
        assert int(mask.sum()) == theta(factorize(e)) * g


def test_membership_positive_counts_small():
    """Every trace value admits a witness pair on the 16-element quartic
    field; the 64-element cubic field genuinely misses one."""
    f16 = build_field(2, 1, 4)
    g = 15
    for a in range(2):
        assert cs.count_by_bruteforce(f16, a, g, g).count > 0
    f64 = build_field(2, 2, 3)  # F_{4^3}
    g = f64.order - 1
    counts = [cs.count_by_bruteforce(f64, a, g, g).count for a in range(f64.q)]
    assert min(counts) == 0


def test_lower_bound_inequality(small_field):
    """Brute counts respect theta^2(k)(q^{n-1} - C_q W^2(k) q^{n/2}) for
    every square-free k."""
    import math

    ctx = small_field
    cq = 3 if ctx.q % 2 else 2
    qn2 = math.sqrt(ctx.order)
    lead = ctx.order // ctx.q
    for k in squarefree_divisors(ctx.group_fact):
        th = float(theta(factorize(k)))
        w = 2 ** len([1 for ell, _ in ctx.group_fact.factors if k % ell == 0])
        bound = th * th * (lead - cq * w * w * qn2)
        counts = cs.pair_counts_all(ctx, k, k)
        for a in range(ctx.q):
            assert counts[a] >= bound - 1e-9


def test_sieve_inequality_on_partitions(small_field):
    """N_a(kP,kP) >= sum_i N_a(k p_i, k) + sum_i N_a(k, k p_i) - (2r-1) N_a(k,k)
    for every split of the prime support into core and sieving parts."""
    from itertools import combinations

    ctx = small_field
    primes = [ell for ell, _ in ctx.group_fact.factors]
    for t in range(len(primes)):
        for core in combinations(primes, t):
            rest = [p for p in primes if p not in core]
            if not rest:
                continue
            k = 1
            for p in core:
                k *= p
            kp_all = k
            for p in rest:
                kp_all *= p
            nkk = cs.pair_counts_all(ctx, k, k)
            lhs = cs.pair_counts_all(ctx, kp_all, kp_all)
            for a in range(ctx.q):
                rhs = -(2 * len(rest) - 1) * int(nkk[a])
                for p in rest:
                    rhs += int(cs.pair_counts_all(ctx, k * p, k)[a])
                    rhs += int(cs.pair_counts_all(ctx, k, k * p)[a])
                assert int(lhs[a]) >= rhs


def test_bounds_report(small_field):
    rep = cs.verify_bounds(small_field)
    assert rep.passed, rep.max_ratios
    for cls in ("general", "gauss", "partner", "trace_low", "sieve_diff"):
        assert rep.max_ratios[cls] <= 1 + 1e-9
    assert rep.info["trivial_sum"] == rep.info["trivial_sum_expected"]
    # the vanishing convention can push the plain gauss sums past q^{n/2}
    # by at most the singular fringe
    import math

    fringe = rep.info["singular_roots"] / math.sqrt(small_field.order)
    assert rep.info["gauss_with_vanishing_convention"] <= 1 + fringe + 1e-9


def test_requires_divisor(f16):
    with pytest.raises(ValueError):
        cs.count_by_formula(f16, 0, 7, 1)
    with pytest.raises(ValueError):
        cs.count_by_bruteforce(f16, 0, 1, 9)


def test_mixed_sum_general_bound_examples(f16):
    import math

    cq, qn2 = 2, math.sqrt(16)
    for d1, j1 in ((3, 1), (5, 1), (15, 2)):
        for d2, j2 in ((1, 0), (3, 2)):
            for u in range(2):
                if (d1, d2, u) == (1, 1, 0):
                    continue
                s = cs.mixed_sum(f16, cs.MultCharacter(d1, j1), cs.MultCharacter(d2, j2), u)
                assert abs(s) <= cq * qn2 + 1e-9


def test_partner_free_sum_is_classical_gauss(small_field):
    """|sum chi(alpha) psihat(u alpha)| = q^{n/2} exactly for nontrivial chi
    and u != 0."""
    import math

    ctx = small_field
    ell = ctx.group_fact.factors[-1][0]
    chi = cs.characters_of_order(ctx, ell)[0]
    for u in range(1, ctx.q):
        g = cs.partner_free_sum(ctx, chi, u)
        assert abs(abs(g) - math.sqrt(ctx.order)) < 1e-6
