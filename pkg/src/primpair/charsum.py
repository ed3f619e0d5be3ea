"""Character-sum counting of primitive pairs with prescribed trace.

The count N_a(e1, e2) of nonzero alpha in F_{q^n} that are e1-free,
have trace a, and whose partner alpha + alpha^{-1} is nonzero and
e2-free, expands over multiplicative characters chi_{d1}, chi_{d2}
(d_i running over square-free divisors of e_i) and the additive
characters of F_q:

    N_a(e1,e2) = theta(e1) theta(e2) / q
                 * sum_{d1,d2} mu(d1) mu(d2) / (phi(d1) phi(d2))
                 * sum_u psi_0(-a u) sum_{chi_{d1}, chi_{d2}} S(chi_{d1}, chi_{d2}, u)

with the mixed sum S(chi1, chi2, u) = sum over alpha != 0 of
chi1(alpha) chi2(alpha + alpha^{-1}) psihat_0(u alpha).

Conventions (fixed here and mirrored by the brute-force oracle):
multiplicative characters vanish at 0, including the trivial character,
so alpha with alpha^2 + 1 = 0 never contributes.  Consequently
S(chi_1, chi_1, 0) equals the exact number of nonzero alpha with
alpha^2 + 1 != 0, and N_a(1,1) undercounts the classical q^{n-1}
closed form by the number of roots of x^2 + 1 with trace a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from primpair import backend
from primpair.ffield import FieldContext, FieldElement

__all__ = [
    "MultCharacter",
    "AdditiveCharacter",
    "PairCount",
    "BoundsReport",
    "characters_of_order",
    "mixed_sum",
    "partner_free_sum",
    "count_by_formula",
    "count_by_bruteforce",
    "pair_counts_all",
    "singular_count",
    "formula_oracle_deltas",
    "verify_bounds",
    "DEFAULT_CHARSUM_LIMIT",
    "DEFAULT_BRUTE_LIMIT",
]

DEFAULT_CHARSUM_LIMIT = 10**6
DEFAULT_BRUTE_LIMIT = 10**7


@dataclass(frozen=True)
class MultCharacter:
    """Multiplicative character chi(g^k) = e(j*k/d) against the context's
    fixed generator g; chi(0) = 0.  Exact order d requires gcd(j, d) = 1."""

    d: int
    j: int

    def value(self, ctx: FieldContext, x: FieldElement) -> complex:
        if x.val == 0:
            return 0.0
        t = ctx.tables(DEFAULT_CHARSUM_LIMIT)
        k = int(t.log[x.val])
        return complex(np.exp(2j * np.pi * ((self.j * k) % self.d) / self.d))


@dataclass(frozen=True)
class AdditiveCharacter:
    """Canonical additive character of F_{q^n} shifted by u in F_q:
    alpha -> e(T(u alpha)/p) with T the absolute trace down to F_p."""

    u: int  # packed base-field value

    def value(self, ctx: FieldContext, x: FieldElement) -> complex:
        ue = ctx.embed_packed(self.u)
        t = ctx.abs_trace_packed(ctx._pmul(ue, x.val))
        return complex(np.exp(2j * np.pi * t / ctx.p))


@dataclass(frozen=True)
class PairCount:
    a: int
    e1: int
    e2: int
    count: int


def characters_of_order(ctx: FieldContext, d: int) -> list[MultCharacter]:
    """The phi(d) multiplicative characters of exact order d."""
    g = ctx.order - 1
    if d < 1 or g % d != 0:
        raise ValueError(f"{d} does not divide the group order {g}")
    return [MultCharacter(d, j) for j in range(d) if math.gcd(j, d) == 1]


def _cache(ctx: FieldContext) -> dict:
    try:
        return ctx._charsum_cache  # type: ignore[attr-defined]
    except AttributeError:
        ctx._charsum_cache = {}  # type: ignore[attr-defined]
        return ctx._charsum_cache  # type: ignore[attr-defined]


def _tpu(ctx: FieldContext, t, u: int) -> np.ndarray:
    """Absolute traces of u * g^i for i = 0..order-1 (zeros when u = 0)."""
    if u == 0:
        key = ("tpu0",)
        cache = _cache(ctx)
        if key not in cache:
            cache[key] = np.zeros(t.order, dtype=np.int64)
        return cache[key]
    lu = int(t.log[ctx.embed_packed(u)])
    return np.roll(t.trace_p, -lu)


def _coerce_u(ctx: FieldContext, u) -> int:
    if isinstance(u, AdditiveCharacter):
        return u.u
    if isinstance(u, FieldElement):
        if u.ctx is not ctx.base:
            raise ValueError("shift u must live in the base field")
        return u.val
    u = int(u)
    if not 0 <= u < ctx.q:
        raise ValueError("shift u out of base-field range")
    return u


def mixed_sum(ctx: FieldContext, chi1: MultCharacter, chi2: MultCharacter, u, limit: int = DEFAULT_CHARSUM_LIMIT) -> complex:
    """S(chi1, chi2, u): sum over nonzero alpha of
    chi1(alpha) chi2(alpha + alpha^{-1}) psihat_0(u alpha), with every
    multiplicative character (the trivial one included) taken as 0 at 0."""
    u = _coerce_u(ctx, u)
    g = ctx.order - 1
    for d in (chi1.d, chi2.d):
        if d < 1 or g % d != 0:
            raise ValueError(f"character order {d} does not divide {g}")
    t = ctx.tables(limit)
    key = ("S", chi1.d, chi1.j % chi1.d, chi2.d, chi2.j % chi2.d, u)
    cache = _cache(ctx)
    if key not in cache:
        k = backend.kernels()
        cache[key] = k.mixed_sum(
            t.partner, _tpu(ctx, t, u), chi1.j % chi1.d, chi1.d, chi2.j % chi2.d, chi2.d, ctx.p
        )
    return cache[key]


def partner_free_sum(ctx: FieldContext, chi1: MultCharacter, u, limit: int = DEFAULT_CHARSUM_LIMIT) -> complex:
    """Gauss-type sum over all nonzero alpha of chi1(alpha) psihat_0(u alpha),
    with no partner factor (nothing vanishes at alpha^2 + 1 = 0)."""
    u = _coerce_u(ctx, u)
    t = ctx.tables(limit)
    key = ("G", chi1.d, chi1.j % chi1.d, u)
    cache = _cache(ctx)
    if key not in cache:
        k = backend.kernels()
        zeros = cache.setdefault(("zeros",), np.zeros(t.order, dtype=np.int64))
        cache[key] = k.mixed_sum(zeros, _tpu(ctx, t, u), chi1.j % chi1.d, chi1.d, 0, 1, ctx.p)
    return cache[key]


def _check_divisor(ctx: FieldContext, e: int) -> None:
    g = ctx.order - 1
    if e < 1 or g % e != 0:
        raise ValueError(f"{e} does not divide the group order {g}")


def _prime_support(ctx: FieldContext, e: int) -> list[int]:
    return [ell for ell, _ in ctx.group_fact.factors if e % ell == 0]


def _squarefree_divisors_of(ctx: FieldContext, e: int) -> list[int]:
    divs = [1]
    for ell in _prime_support(ctx, e):
        divs += [d * ell for d in divs]
    return sorted(divs)


def _psi0(ctx: FieldContext, a: int) -> complex:
    """psi_0(a) = e(Tr_{F_q/F_p}(a)/p) on the base field."""
    t = ctx.base.abs_trace_packed(a)
    return complex(np.exp(2j * np.pi * t / ctx.p))


def count_by_formula(ctx: FieldContext, a: int, e1: int, e2: int, limit: int = DEFAULT_CHARSUM_LIMIT) -> float:
    """Character-sum evaluation of N_a(e1, e2); real up to rounding and
    within 1e-6 of the integer the brute-force oracle returns."""
    a = int(a)
    if not 0 <= a < ctx.q:
        raise ValueError("trace target out of base-field range")
    _check_divisor(ctx, e1)
    _check_divisor(ctx, e2)
    th = _theta_of_divisor(ctx, e1) * _theta_of_divisor(ctx, e2) / ctx.q
    total = 0j
    for u in range(ctx.q):
        psi_fac = _psi0(ctx, ctx.base._pmul(ctx.base._pneg(a), u))
        inner = 0j
        for d1 in _squarefree_divisors_of(ctx, e1):
            mu1 = -1 if len(_prime_support(ctx, d1)) % 2 else 1
            for d2 in _squarefree_divisors_of(ctx, e2):
                mu2 = -1 if len(_prime_support(ctx, d2)) % 2 else 1
                w = Fraction(mu1 * mu2, _phi_of_divisor(ctx, d1) * _phi_of_divisor(ctx, d2))
                s = 0j
                for c1 in characters_of_order(ctx, d1):
                    for c2 in characters_of_order(ctx, d2):
                        s += mixed_sum(ctx, c1, c2, u, limit)
                inner += float(w) * s
        total += psi_fac * inner
    return float((float(th) * total).real)


def _theta_of_divisor(ctx: FieldContext, e: int) -> Fraction:
    out = Fraction(1)
    for ell in _prime_support(ctx, e):
        out *= Fraction(ell - 1, ell)
    return out


def _phi_of_divisor(ctx: FieldContext, d: int) -> int:
    out = 1
    for ell in _prime_support(ctx, d):
        out *= ell - 1
    return out


def pair_counts_all(ctx: FieldContext, e1: int, e2: int, limit: int = DEFAULT_BRUTE_LIMIT) -> np.ndarray:
    """Brute-force N_a(e1, e2) for every a at once (array indexed by the
    packed base-field value of a)."""
    _check_divisor(ctx, e1)
    _check_divisor(ctx, e2)
    t = ctx.tables(limit)
    ell1 = tuple(_prime_support(ctx, e1))
    ell2 = tuple(_prime_support(ctx, e2))
    key = ("N", ell1, ell2)
    cache = _cache(ctx)
    if key not in cache:
        k = backend.kernels()
        cache[key] = k.pair_counts(
            t.partner,
            t.trace_q,
            np.array(ell1, dtype=np.int64),
            np.array(ell2, dtype=np.int64),
            ctx.q,
        )
    return cache[key]


def count_by_bruteforce(ctx: FieldContext, a: int, e1: int, e2: int, limit: int = DEFAULT_BRUTE_LIMIT) -> PairCount:
    """Exhaustive N_a(e1, e2): walk every nonzero alpha, keep those with
    trace a, alpha e1-free, and alpha + alpha^{-1} nonzero and e2-free."""
    a = int(a)
    if not 0 <= a < ctx.q:
        raise ValueError("trace target out of base-field range")
    counts = pair_counts_all(ctx, e1, e2, limit)
    return PairCount(a=a, e1=e1, e2=e2, count=int(counts[a]))


def singular_count(ctx: FieldContext, limit: int = DEFAULT_CHARSUM_LIMIT) -> int:
    """Number of nonzero alpha with alpha + alpha^{-1} = 0 (roots of x^2 + 1)."""
    t = ctx.tables(limit)
    return int(np.count_nonzero(t.partner < 0))


def formula_oracle_deltas(ctx: FieldContext, limit: int = DEFAULT_CHARSUM_LIMIT):
    """Max |formula - oracle| over every a and every square-free divisor
    pair (e1, e2) of the group order; also returns the worst triple."""
    worst = 0.0
    worst_at = None
    divs = _squarefree_divisors_of(ctx, ctx.order - 1)
    for e1 in divs:
        for e2 in divs:
            counts = pair_counts_all(ctx, e1, e2, limit)
            for a in range(ctx.q):
                delta = abs(count_by_formula(ctx, a, e1, e2, limit) - int(counts[a]))
                if delta > worst:
                    worst = delta
                    worst_at = (a, e1, e2)
    return worst, worst_at


@dataclass
class BoundsReport:
    """Outcome of sweeping every (d1, d2, u) triple against the proved
    estimates; ratios are |sum| / bound and must stay <= 1 (+ float fuzz)."""

    q: int
    n: int
    cq: int
    max_ratios: dict = field(default_factory=dict)
    argmax: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    #: classes whose estimate must hold; partner_printed is a known-false
    #: published constant, tracked but not gating.
    STRICT = ("general", "gauss", "partner", "trace_low", "sieve_diff")

    @property
    def passed(self) -> bool:
        return all(self.max_ratios.get(c, 0.0) <= 1 + 1e-9 for c in self.STRICT)

    @property
    def printed_partner_bound_holds(self) -> bool:
        return self.max_ratios.get("partner_printed", 0.0) <= 1 + 1e-9


def verify_bounds(ctx: FieldContext, limit: int = DEFAULT_CHARSUM_LIMIT) -> BoundsReport:
    """Exhaustively check the mixed-sum estimates on a table-backed field.

    Classes checked (all square-free orders d1, d2 and all u in F_q):
      general         |S(chi_{d1}, chi_{d2}, u)| <= C_q q^{n/2}, (d1,d2,u) != (1,1,0)
      gauss           |sum chi_ell(alpha) psihat_0(u alpha)| <= q^{n/2}, ell prime
                      (the partner-free sum, exactly the displayed estimate)
      partner         |S(chi_1, chi_ell, u)| <= C_q q^{n/2}, ell prime
      partner_printed the same sums against (C_q - 1) q^{n/2}
      trace_low       N_a(1,1) >= q^{n-1} - C_q for every a
      sieve_diff      |N_a(k*ell, k) - theta(ell) N_a(k, k)| and the mirrored
                      difference <= (1 - 1/ell) C_q W^2(k) q^{n/2}

    partner_printed is the constant the source record states; it is
    numerically false already on tiny fields (|S(chi_1, chi_2, 1)| = 27
    = C_q q^{n/2} on the 81-element quartic field), so passed ignores it;
    the honest maximum ratio is still reported.  Likewise the
    vanishing-at-zero convention pushes the gauss-class sums up to
    q^{n/2} + (number of roots of x^2 + 1); that variant is reported
    under info["gauss_with_vanishing_convention"].
    """
    cq = 3 if ctx.q % 2 else 2
    qn2 = math.sqrt(float(ctx.order))
    rep = BoundsReport(q=ctx.q, n=ctx.n, cq=cq)
    g = ctx.order - 1
    divs = _squarefree_divisors_of(ctx, g)
    primes = [ell for ell, _ in ctx.group_fact.factors]

    def bump(cls: str, ratio: float, at) -> None:
        if ratio > rep.max_ratios.get(cls, 0.0):
            rep.max_ratios[cls] = ratio
            rep.argmax[cls] = at

    for cls in ("general", "gauss", "partner", "partner_printed", "trace_low", "sieve_diff"):
        rep.max_ratios.setdefault(cls, 0.0)
        rep.argmax.setdefault(cls, None)

    for u in range(ctx.q):
        for d1 in divs:
            for c1 in characters_of_order(ctx, d1):
                for d2 in divs:
                    for c2 in characters_of_order(ctx, d2):
                        if d1 == 1 and d2 == 1 and u == 0:
                            continue
                        s = mixed_sum(ctx, c1, c2, u, limit)
                        bump("general", abs(s) / (cq * qn2), (d1, c1.j, d2, c2.j, u))
                        if d1 == 1 and d2 in primes:
                            at = (d1, c1.j, d2, c2.j, u)
                            bump("partner", abs(s) / (cq * qn2), at)
                            bump("partner_printed", abs(s) / ((cq - 1) * qn2), at)
        for ell in primes:
            for c1 in characters_of_order(ctx, ell):
                gsum = partner_free_sum(ctx, c1, u, limit)
                bump("gauss", abs(gsum) / qn2, (ell, c1.j, 1, 0, u))
                sconv = mixed_sum(ctx, c1, MultCharacter(1, 0), u, limit)
                prev = rep.info.get("gauss_with_vanishing_convention", 0.0)
                rep.info["gauss_with_vanishing_convention"] = max(prev, abs(sconv) / qn2)

    # exact value of the fully trivial sum
    s110 = mixed_sum(ctx, MultCharacter(1, 0), MultCharacter(1, 0), 0, limit)
    nsing = singular_count(ctx, limit)
    rep.info["trivial_sum"] = float(s110.real)
    rep.info["trivial_sum_expected"] = ctx.order - 1 - nsing
    rep.info["singular_roots"] = nsing

    low = ctx.order // ctx.q - cq  # q^{n-1} - C_q
    n11 = pair_counts_all(ctx, 1, 1, limit)
    for a in range(ctx.q):
        if low > 0:
            bump("trace_low", low / int(n11[a]), (a,))

    w2cq = lambda k_primes: cq * (1 << (2 * len(k_primes)))  # noqa: E731
    for k in divs:
        kp = _prime_support(ctx, k)
        nkk = pair_counts_all(ctx, k, k, limit)
        for ell in primes:
            if k % ell == 0:
                continue
            bound = (1 - 1 / ell) * w2cq(kp) * qn2
            th = Fraction(ell - 1, ell)
            for variant, counts in (("left", pair_counts_all(ctx, k * ell, k, limit)),
                                    ("right", pair_counts_all(ctx, k, k * ell, limit))):
                for a in range(ctx.q):
                    d = abs(Fraction(int(counts[a])) - th * int(nkk[a]))
                    bump("sieve_diff", float(d) / bound, (k, ell, variant, a))
    return rep
