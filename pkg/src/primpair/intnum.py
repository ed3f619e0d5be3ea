"""Exact integer arithmetic: factorization, multiplicative functions, primes.

Everything downstream (field construction, the sieve criteria, the
verification algorithms) keys off the prime decomposition of q^n - 1,
so this module is deliberately free of floating point: theta() returns
an exact Fraction and all comparisons elsewhere cross-multiply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

__all__ = [
    "Factorization",
    "factorize",
    "factor_group_order",
    "omega",
    "big_w",
    "theta",
    "euler_phi",
    "moebius",
    "radical",
    "squarefree_divisors",
    "is_prime",
    "is_prime_power",
    "nth_prime",
    "primes_up_to",
    "iter_prime_powers",
    "primorial",
]

# Deterministic Miller-Rabin witness set: correct for all n < 3.317e24,
# far beyond the ~2^128 group orders this package is configured for.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_BOUND = 10_000

# Growing prime cache shared by nth_prime / primes_up_to / trial division.
_sieve_limit = 0
_sieve_primes: list[int] = []


def _ensure_sieve(limit: int) -> None:
    global _sieve_limit, _sieve_primes
    if limit <= _sieve_limit:
        return
    limit = max(limit, 2 * _sieve_limit, 1 << 16)
    comp = np.zeros(limit + 1, dtype=bool)
    comp[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not comp[p]:
            comp[p * p :: p] = True
    _sieve_primes = np.flatnonzero(~comp).tolist()
    _sieve_limit = limit


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, ascending."""
    if bound < 2:
        return []
    _ensure_sieve(bound)
    # cache may extend past bound
    import bisect

    cut = bisect.bisect_right(_sieve_primes, bound)
    return _sieve_primes[:cut]


def nth_prime(i: int) -> int:
    """The i-th prime, 1-indexed: nth_prime(1) == 2."""
    if i < 1:
        raise ValueError("prime index must be >= 1")
    if i >= 6:
        # Rosser-style upper bound keeps the sieve allocation one-shot.
        bound = int(i * (math.log(i) + math.log(math.log(i)))) + 10
    else:
        bound = 13
    _ensure_sieve(bound)
    while len(_sieve_primes) < i:
        _ensure_sieve(2 * _sieve_limit)
    return _sieve_primes[i - 1]


def primorial(k: int) -> int:
    """Product of the first k primes (1 for k == 0)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return 1
    nth_prime(k)  # grow the cache
    return _prod_tree(_sieve_primes[:k])


def _prod_tree(vals: list[int]) -> int:
    # balanced product keeps big-int multiplications big*big (karatsuba wins)
    while len(vals) > 1:
        vals = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)] + (
            [vals[-1]] if len(vals) & 1 else []
        )
    return vals[0]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (fixed witness set, valid to ~3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    if n < 0:
        raise ValueError
    if n == 0:
        return 0
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _brent_rho(n: int) -> int:
    """Nontrivial factor of odd composite n (deterministic parameter sweep)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho parameter sweep exhausted on {n}")  # pragma: no cover


def _factor_into(n: int, counts: dict[int, int], mult: int = 1) -> None:
    if n == 1:
        return
    if is_prime(n):
        counts[n] = counts.get(n, 0) + mult
        return
    # perfect powers stall rho; peel them off exactly
    for k in range(2, n.bit_length() + 1):
        r = _iroot(n, k)
        if r > 1 and r**k == n:
            _factor_into(r, counts, mult * k)
            return
    d = _brent_rho(n)
    _factor_into(d, counts, mult)
    _factor_into(n // d, counts, mult)


@dataclass(frozen=True)
class Factorization:
    """An integer together with its complete prime decomposition.

    Invariants: primes strictly increasing, exponents >= 1, and the
    product of prime**exponent recovers value.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return f"{self.value} = 1"
        terms = " * ".join(f"{p}^{e}" if e > 1 else f"{p}" for p, e in self.factors)
        return f"{self.value} = {terms}"


def factorize(m: int) -> Factorization:
    """Complete prime factorization of m >= 1 (deterministic)."""
    if m < 1:
        raise ValueError("factorize requires m >= 1")
    counts: dict[int, int] = {}
    rem = m
    _ensure_sieve(_TRIAL_BOUND)
    for p in _sieve_primes:
        if p > _TRIAL_BOUND or p * p > rem:
            break
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    if rem > 1:
        if rem <= _TRIAL_BOUND * _TRIAL_BOUND:
            counts[rem] = counts.get(rem, 0) + 1  # no factor below sqrt => prime
        else:
            _factor_into(rem, counts)
    return Factorization(m, tuple(sorted(counts.items())))


def _cyclotomic_value(d: int, q: int, cache: dict[int, int]) -> int:
    if d in cache:
        return cache[d]
    v = q**d - 1
    for e in range(1, d):
        if d % e == 0:
            v //= _cyclotomic_value(e, q, cache)
    cache[d] = v
    return v


def factor_group_order(q: int, n: int) -> Factorization:
    """Factorization of q^n - 1, splitting along cyclotomic factors first.

    Each cyclotomic factor of q^n - 1 is at most ~q^n / (q - 1), so the
    numbers handed to rho stay at desk scale even when q^n does not.
    """
    if q < 2 or n < 1:
        raise ValueError("need q >= 2, n >= 1")
    cache: dict[int, int] = {}
    counts: dict[int, int] = {}
    for d in range(1, n + 1):
        if n % d == 0:
            for p, e in factorize(_cyclotomic_value(d, q, cache)).factors:
                counts[p] = counts.get(p, 0) + e
    return Factorization(q**n - 1, tuple(sorted(counts.items())))


def omega(f: Factorization) -> int:
    """Number of distinct prime factors."""
    return len(f.factors)


def big_w(f: Factorization) -> int:
    """Number of square-free divisors, 2**omega."""
    return 1 << len(f.factors)


def theta(f: Factorization) -> Fraction:
    """phi(m)/m as an exact rational: product of (1 - 1/p) over p | m."""
    return reduce(lambda acc, pe: acc * Fraction(pe[0] - 1, pe[0]), f.factors, Fraction(1))


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def radical(f: Factorization) -> int:
    """Product of the distinct primes dividing the value."""
    out = 1
    for p, _ in f.factors:
        out *= p
    return out


def moebius(m: int) -> int:
    """Moebius function; 0 on non-square-free input rather than an error."""
    if m < 1:
        raise ValueError("moebius requires m >= 1")
    f = factorize(m)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) & 1 else 1


def squarefree_divisors(f: Factorization) -> list[int]:
    """Sorted square-free divisors of the value (products of distinct primes)."""
    divs = [1]
    for p, _ in f.factors:
        divs += [d * p for d in divs]
    return sorted(divs)


def is_prime_power(m: int) -> tuple[int, int] | None:
    """(p, h) with m == p**h, or None when m is not a prime power."""
    if m < 2:
        return None
    f = factorize(m)
    if len(f.factors) != 1:
        return None
    return f.factors[0]


def iter_prime_powers(lo: int, hi: int):
    """Yield all prime powers q with lo <= q <= hi, ascending."""
    if hi < 2:
        return
    lo = max(lo, 2)
    qs = set(p for p in primes_up_to(hi) if p >= lo)
    for p in primes_up_to(_iroot(hi, 2)):
        v = p * p
        while v <= hi:
            if v >= lo:
                qs.add(v)
            v *= p
    yield from sorted(qs)
