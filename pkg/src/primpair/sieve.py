"""Sufficient membership criteria driven by the factorization of q^n - 1.

Three escalating tests decide whether every a in F_q has a primitive
alpha in F_{q^n} with trace a and alpha + alpha^{-1} primitive:

  BC    q^{n/2-1} > C_q W^2(q^n - 1)
  PSC   q^{n/2-1} > C_q 2^{2t} ((2r - 1)/delta + 2)
  MPSC  q^{n/2-1} > C_q {theta^2(k)(2r - 1 + 2 delta) 2^{2t} + (s - eps)}
                    / (theta^2(k) delta - 2 eps)

where the distinct primes of q^n - 1 split into a core k (the t
smallest), r sieving primes, and s large primes (the largest), with
delta = 1 - 2 sum 1/p_i over the sieving primes and eps = sum 1/l_i
over the large ones.  All quantities are exact rationals; the
comparison against q^{n/2-1} cross-multiplies (squaring when n is odd)
so no floating point ever decides an outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from primpair.fmt import fraction_str, round_down_sig
from primpair.intnum import Factorization, factor_group_order

__all__ = [
    "SievePlan",
    "CriterionReport",
    "bc_check",
    "psc_check",
    "mpsc_check",
    "optimize_plan",
    "bc_threshold",
    "psc_threshold",
    "mpsc_threshold",
    "lhs_exceeds",
]

KINDS = ("BC", "PSC", "MPSC")


def c_q(q: int) -> int:
    """Character-sum constant: 3 for odd q, 2 for even q."""
    return 3 if q % 2 else 2


@dataclass(frozen=True)
class SievePlan:
    """Partition of the distinct primes of q^n - 1 into core / sieving / large."""

    q: int
    n: int
    core: tuple[int, ...]
    sieving: tuple[int, ...]
    large: tuple[int, ...]

    def __post_init__(self):
        merged = sorted(self.core + self.sieving + self.large)
        if len(set(merged)) != len(merged):
            raise ValueError("plan parts must be disjoint")

    @property
    def t(self) -> int:
        return len(self.core)

    @property
    def r(self) -> int:
        return len(self.sieving)

    @property
    def s(self) -> int:
        return len(self.large)

    @property
    def delta(self) -> Fraction:
        return 1 - 2 * sum((Fraction(1, p) for p in self.sieving), Fraction(0))

    @property
    def epsilon(self) -> Fraction:
        return sum((Fraction(1, p) for p in self.large), Fraction(0))

    @property
    def cq(self) -> int:
        return c_q(self.q)

    @property
    def theta_core(self) -> Fraction:
        out = Fraction(1)
        for p in self.core:
            out *= Fraction(p - 1, p)
        return out

    @classmethod
    def from_factorization(cls, q: int, n: int, fact: Factorization, t: int, s: int = 0) -> "SievePlan":
        primes = fact.primes
        w = len(primes)
        if not (0 <= t <= w and 0 <= s <= w - t):
            raise ValueError(f"invalid split t={t}, s={s} of {w} primes")
        return cls(
            q=q,
            n=n,
            core=primes[:t],
            sieving=primes[t : w - s],
            large=primes[w - s :] if s else (),
        )


def lhs_exceeds(q: int, n: int, threshold: Fraction) -> bool:
    """Exact comparison q^{n/2-1} > threshold (squares both sides when n is odd)."""
    if threshold < 0:
        return True
    if n % 2 == 0:
        return Fraction(q) ** (n // 2 - 1) > threshold
    return Fraction(q) ** (n - 2) > threshold * threshold


def bc_threshold(cq: int, w: int) -> Fraction:
    """C_q W^2 with W = 2^w square-free divisors."""
    return Fraction(cq) * (1 << (2 * w))


def psc_threshold(cq: int, t: int, r: int, delta: Fraction) -> Fraction:
    return Fraction(cq) * (1 << (2 * t)) * (Fraction(2 * r - 1) / delta + 2)


def mpsc_threshold(cq: int, t: int, r: int, s: int, theta_core: Fraction, delta: Fraction, epsilon: Fraction) -> Fraction:
    th2 = theta_core * theta_core
    num = cq * (th2 * (2 * r - 1 + 2 * delta) * (1 << (2 * t)) + (s - epsilon))
    den = th2 * delta - 2 * epsilon
    return num / den


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one criterion: exact threshold versus q^{n/2-1}."""

    kind: str
    q: int
    n: int
    plan: SievePlan | None
    threshold: Fraction | None  # None: undefined (infinite or inapplicable)
    passed: bool
    applicable: bool = True
    unresolved: bool = False

    @property
    def lhs(self) -> float:
        return float(self.q) ** (self.n / 2 - 1)

    def to_json_dict(self) -> dict:
        plan = self.plan
        out = {
            "kind": self.kind,
            "q": self.q,
            "n": self.n,
            "t": plan.t if plan else None,
            "r": plan.r if plan else None,
            "s": plan.s if plan else None,
            "delta": float(round_down_sig(plan.delta, 6)) if plan else None,
            "delta_exact": fraction_str(plan.delta) if plan else None,
            "epsilon": float(round_down_sig(plan.epsilon, 6)) if plan else None,
            "epsilon_exact": fraction_str(plan.epsilon) if plan else None,
            "threshold": float(round_down_sig(self.threshold, 6)) if self.threshold is not None else None,
            "threshold_exact": fraction_str(self.threshold) if self.threshold is not None else None,
            "lhs": float(round_down_sig(Fraction(self.q) ** (self.n // 2 - 1), 6))
            if self.n % 2 == 0
            else self.lhs,
            "lhs_exact": f"{self.q}^({self.n - 2}/2)",
            "passed": self.passed,
            "applicable": self.applicable,
            "unresolved": self.unresolved,
        }
        return out


def bc_check(q: int, n: int, fact: Factorization | None = None) -> CriterionReport:
    """Basic criterion: q^{n/2-1} > C_q W^2(q^n - 1)."""
    if n < 3:
        raise ValueError("criteria are stated for n >= 3")
    if fact is None:
        fact = factor_group_order(q, n)
    thr = bc_threshold(c_q(q), len(fact.factors))
    return CriterionReport("BC", q, n, None, thr, lhs_exceeds(q, n, thr))


def psc_check(q: int, n: int, plan: SievePlan) -> CriterionReport:
    """Prime sieve criterion on an explicit plan (no large primes)."""
    if n < 3:
        raise ValueError("criteria are stated for n >= 3")
    if plan.s != 0:
        raise ValueError("the prime sieve uses no large primes; use mpsc_check")
    if plan.r < 1:
        raise ValueError("the prime sieve needs at least one sieving prime")
    delta = plan.delta
    if delta <= 0:
        return CriterionReport("PSC", q, n, plan, None, passed=False)
    thr = psc_threshold(plan.cq, plan.t, plan.r, delta)
    return CriterionReport("PSC", q, n, plan, thr, lhs_exceeds(q, n, thr))


def mpsc_check(q: int, n: int, plan: SievePlan) -> CriterionReport:
    """Modified prime sieve criterion: s >= 1 largest primes treated separately.

    When theta^2(k) delta - 2 eps <= 0 the right-hand side is undefined
    and the report is marked inapplicable (distinct from a failing
    comparison)."""
    if n < 3:
        raise ValueError("criteria are stated for n >= 3")
    if plan.s < 1:
        raise ValueError("the modified sieve needs at least one large prime")
    if plan.r < 1:
        raise ValueError("the modified sieve needs at least one sieving prime")
    th2 = plan.theta_core * plan.theta_core
    den = th2 * plan.delta - 2 * plan.epsilon
    if den <= 0:
        return CriterionReport("MPSC", q, n, plan, None, passed=False, applicable=False)
    thr = mpsc_threshold(plan.cq, plan.t, plan.r, plan.s, plan.theta_core, plan.delta, plan.epsilon)
    return CriterionReport("MPSC", q, n, plan, thr, lhs_exceeds(q, n, thr))


def optimize_plan(q: int, n: int, fact: Factorization | None = None, kinds=KINDS) -> CriterionReport:
    """Search the plan family for the first passing criterion.

    Order: BC; PSC with the core being the t smallest primes, t
    ascending; MPSC with the large set being the s largest primes, t
    ascending then s ascending.  If nothing passes, the report with the
    smallest defined threshold comes back flagged unresolved.
    """
    if n < 3:
        raise ValueError("criteria are stated for n >= 3")
    if fact is None:
        fact = factor_group_order(q, n)
    w = len(fact.factors)
    best: CriterionReport | None = None

    def consider(rep: CriterionReport) -> CriterionReport | None:
        nonlocal best
        if rep.passed:
            return rep
        if rep.threshold is not None and (best is None or best.threshold is None or rep.threshold < best.threshold):
            best = rep
        elif best is None:
            best = rep
        return None

    if "BC" in kinds:
        hit = consider(bc_check(q, n, fact))
        if hit:
            return hit
    if "PSC" in kinds:
        for t in range(0, w):
            hit = consider(psc_check(q, n, SievePlan.from_factorization(q, n, fact, t)))
            if hit:
                return hit
    if "MPSC" in kinds:
        for t in range(0, max(w - 1, 0)):
            for s in range(1, w - t):
                hit = consider(mpsc_check(q, n, SievePlan.from_factorization(q, n, fact, t, s)))
                if hit:
                    return hit
    if best is None:  # no criterion requested or evaluable
        best = CriterionReport(kinds[0] if kinds else "BC", q, n, None, None, passed=False)
    return replace(best, unresolved=True)
