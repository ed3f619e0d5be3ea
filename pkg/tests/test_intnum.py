import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primpair import intnum
from primpair.intnum import (
    Factorization,
    big_w,
    euler_phi,
    factor_group_order,
    factorize,
    is_prime,
    iter_prime_powers,
    moebius,
    nth_prime,
    omega,
    primes_up_to,
    primorial,
    radical,
    squarefree_divisors,
    theta,
)


def test_factorize_unit():
    f = factorize(1)
    assert f.value == 1 and f.factors == ()
    assert omega(f) == 0 and big_w(f) == 1 and theta(f) == 1


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_known_group_order_factorizations():
    f = factor_group_order(10009, 4)
    assert f.factors == ((2, 5), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (101, 1), (139, 1), (29173, 1))
    f = factor_group_order(20747, 4)
    assert f.factors == ((2, 4), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (19, 1), (23, 1), (29, 1), (41, 1), (653, 1), (2273, 1))
    assert omega(f) == 12


def test_printed_record_omits_primes():
    # three group orders whose published factorizations drop a prime each
    assert 47 in factor_group_order(3947, 4).primes
    assert 13 in factor_group_order(21013, 4).primes
    assert 41 in factor_group_order(102829, 4).primes
    assert omega(factor_group_order(102829, 4)) == 13


def test_factor_group_order_equals_direct():
    for q, n in [(7, 3), (9, 4), (49, 4), (2, 10)]:
        assert factor_group_order(q, n).factors == factorize(q**n - 1).factors


def test_omega_examples():
    assert omega(factorize(15)) == 2
    assert omega(factorize(1)) == 0


def test_big_w_examples():
    assert big_w(factorize(30)) == 8
    assert big_w(factorize(1)) == 1
    assert big_w(factorize(210)) == 16


def test_theta_examples():
    assert theta(factorize(30)) == Fraction(4, 15)
    assert theta(factorize(1)) == 1
    assert theta(factorize(210)) == Fraction(8, 35)


def test_phi_moebius_radical():
    assert euler_phi(factorize(15)) == 8
    assert moebius(6) == 1 and moebius(2) == -1 and moebius(4) == 0
    assert radical(factorize(2**5 * 3**2)) == 6


def test_nth_prime():
    assert nth_prime(1) == 2
    assert nth_prime(100) == 541
    assert nth_prime(17922) == 199247


def test_primes_up_to():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_up_to(1) == []


def test_squarefree_divisors():
    assert squarefree_divisors(factorize(342)) == [1, 2, 3, 6, 19, 38, 57, 114]
    assert squarefree_divisors(factorize(1)) == [1]


def test_iter_prime_powers():
    assert list(iter_prime_powers(2, 32)) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]


def test_is_prime_power():
    assert intnum.is_prime_power(2197) == (13, 3)
    assert intnum.is_prime_power(512) == (2, 9)
    assert intnum.is_prime_power(12) is None


@given(st.integers(min_value=1, max_value=10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(m):
    f = factorize(m)
    assert math.prod(p**e for p, e in f.factors) == m
    assert all(is_prime(p) for p, _ in f.factors)
    assert list(f.primes) == sorted(f.primes)


@given(st.integers(min_value=1, max_value=10**5), st.integers(min_value=1, max_value=10**5))
@settings(max_examples=100, deadline=None)
def test_multiplicativity_on_coprime_pairs(a, b):
    if math.gcd(a, b) != 1:
        return
    fa, fb, fab = factorize(a), factorize(b), factorize(a * b)
    assert euler_phi(fab) == euler_phi(fa) * euler_phi(fb)
    assert big_w(fab) == big_w(fa) * big_w(fb)
    assert theta(fab) == theta(fa) * theta(fb)


@given(st.integers(min_value=1, max_value=10**9))
@settings(max_examples=100, deadline=None)
def test_theta_times_m_is_phi(m):
    f = factorize(m)
    assert theta(f) * m == euler_phi(f)


def test_squarefree_divisor_growth_margin():
    """Exact big-integer check that 2^k / primorial(k)^(1/16) < 0.95 at
    k = 17922 (equivalently 2^(16k) * 20^16 < 19^16 * primorial(k))."""
    k = 17922
    prd = primorial(k)
    assert prd > 235 * 10**86319  # > 2.35e86321
    assert 2 ** (16 * k) * 20**16 < 19**16 * prd
