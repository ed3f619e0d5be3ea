"""Exact-rational display helpers.

Comparisons in this package are exact; decimals exist only for display
and for regression against printed reference values.  The reference
record rounds down (toward zero), so the matcher accepts one ulp of the
last printed digit in either direction.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["round_down_sig", "matches_printed", "fraction_str", "parse_decimal"]


def round_down_sig(value: Fraction | int, sig: int) -> str:
    """Decimal string of value truncated (toward zero) to sig significant figures."""
    v = Fraction(value)
    if v == 0:
        return "0"
    neg = v < 0
    if neg:
        v = -v
    # exponent e with 10^e <= v < 10^(e+1)
    e = 0
    t = v
    while t >= 10:
        t /= 10
        e += 1
    while t < 1:
        t *= 10
        e -= 1
    shift = sig - 1 - e
    scaled = v * Fraction(10) ** shift
    digits = int(scaled)  # truncation
    s = str(digits)
    point = len(s) + e - (sig - 1)
    if shift <= 0:
        out = s + "0" * (-shift)
    elif point >= 1:
        out = s[:point] + "." + s[point:]
    else:
        out = "0." + "0" * (-point) + s
    if out.endswith("."):
        out = out[:-1]
    return ("-" if neg else "") + out


def parse_decimal(printed: str) -> tuple[Fraction, Fraction]:
    """(value, ulp) for a printed decimal like '.4109', '11393', '9925.04'."""
    s = printed.strip()
    if s.startswith("."):
        s = "0" + s
    val = Fraction(s)
    ulp = Fraction(1, 10 ** (len(s) - s.index(".") - 1)) if "." in s else Fraction(1)
    return val, ulp


def matches_printed(value: Fraction | float, printed: str) -> bool:
    """Whether value agrees with the printed figure to within one ulp of
    its last digit (covers both round-down and round-half conventions)."""
    ref, ulp = parse_decimal(printed)
    return abs(Fraction(value) - ref) <= ulp


def fraction_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"
