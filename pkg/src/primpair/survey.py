"""Range scans, worst-case stage arithmetic, and reference-table checks.

scan() classifies every prime power in a range by the first criterion
that certifies it.  cascade_thresholds() reproduces the omega-descent
bookkeeping that caps how far such scans ever need to go: for a given
omega = omega(q^n - 1) and core size t, the sieving primes are at worst
the smallest primes available, which bounds delta from below and the
threshold R from above, while q^n - 1 >= primorial(omega) bounds q from
below.  reproduce_table1/2() diff our exact recomputation against the
embedded reference classification, routing known transcription defects
through an annotation channel instead of hard failures.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from primpair import intnum
from primpair.fmt import matches_printed, round_down_sig
from primpair.intnum import factor_group_order, iter_prime_powers, nth_prime, primorial
from primpair.sieve import (
    KINDS,
    CriterionReport,
    SievePlan,
    c_q,
    mpsc_threshold,
    optimize_plan,
    psc_threshold,
)

__all__ = [
    "SurveyRecord",
    "CascadeStage",
    "scan",
    "cascade_thresholds",
    "worst_case_stage",
    "reproduce_table1",
    "reproduce_table2",
    "load_reference_tables",
]


@dataclass
class SurveyRecord:
    q: int
    n: int
    omega: int
    resolution: str  # "BC" | "PSC" | "MPSC" | "unresolved"
    report: CriterionReport
    elapsed: float

    def csv_row(self) -> list:
        plan = self.report.plan
        return [
            self.q,
            self.n,
            self.omega,
            self.resolution,
            plan.t if plan else "",
            plan.r if plan else "",
            plan.s if plan else "",
            round_down_sig(plan.delta, 6) if plan else "",
            round_down_sig(self.report.threshold, 6) if self.report.threshold is not None else "",
            self.report.passed,
        ]

    def to_json_dict(self) -> dict:
        out = self.report.to_json_dict()
        out["omega"] = self.omega
        out["resolution"] = self.resolution
        return out


CSV_COLUMNS = ["q", "n", "omega", "resolution", "t", "r", "s", "delta", "threshold", "passed"]


def _scan_chunk(args) -> list:
    n, qs, cascade = args
    out = []
    for q in qs:
        t0 = time.monotonic()
        fact = factor_group_order(q, n)
        rep = optimize_plan(q, n, fact, kinds=cascade)
        out.append(
            SurveyRecord(
                q=q,
                n=n,
                omega=len(fact.factors),
                resolution=rep.kind if rep.passed else "unresolved",
                report=rep,
                elapsed=time.monotonic() - t0,
            )
        )
    return out


def scan(
    n: int,
    q_lo: int,
    q_hi: int,
    cascade=KINDS,
    omega_filter: int | None = None,
    workers: int = 1,
) -> list[SurveyRecord]:
    """Classify every prime power q in [q_lo, q_hi] by the requested cascade.

    Deterministic regardless of worker count: records come back sorted
    by q, and each record is a pure function of q."""
    if q_lo > q_hi:
        raise ValueError("empty range")
    qs = list(iter_prime_powers(q_lo, q_hi))
    cascade = tuple(cascade)
    if workers > 1 and len(qs) > 64:
        chunks = [qs[i::workers] for i in range(workers) if qs[i::workers]]
        records: list[SurveyRecord] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_chunk, [(n, ch, cascade) for ch in chunks]):
                records.extend(part)
        records.sort(key=lambda r: r.q)
    else:
        records = _scan_chunk((n, qs, cascade))
    if omega_filter is not None:
        records = [r for r in records if r.omega == omega_filter]
    return records


# -- worst-case stage arithmetic ------------------------------------------------


def _prime_stream(kind: str, count: int) -> list[int]:
    if kind == "all":
        return [nth_prime(i) for i in range(1, count + 1)]
    if kind == "one_mod_six":
        out = []
        i = 1
        while len(out) < count:
            p = nth_prime(i)
            if p % 6 == 1:
                out.append(p)
            i += 1
        return out
    raise ValueError(f"unknown prime stream {kind!r}")


def _frac_sum(vals: list[Fraction]) -> Fraction:
    """Balanced pairwise sum (keeps the big-denominator additions big*big)."""
    if not vals:
        return Fraction(0)
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)] + (
            [vals[-1]] if len(vals) & 1 else []
        )
    return vals[0]


@dataclass
class CascadeStage:
    """Worst case for all q with omega(q^n - 1) = omega and core size t."""

    n: int
    omega: int
    t: int
    stream: str
    delta: Fraction
    threshold: Fraction | None  # worst-case R; None when delta <= 0
    q_lower: int  # q > q_lower for every such q (primorial bound)
    resolved: bool  # primorial(omega) alone already beats the threshold

    @property
    def r(self) -> int:
        return self.omega - self.t

    def qn_cutoff(self) -> Fraction | None:
        """q^n above which the worst-case sieve certifies membership."""
        if self.threshold is None:
            return None
        e = 2 * self.n // (self.n - 2)  # integer for n in {3, 4}
        return self.threshold**e

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "omega": self.omega,
            "t": self.t,
            "r": self.r,
            "stream": self.stream,
            "delta": float(round_down_sig(self.delta, 6)),
            "threshold": float(round_down_sig(self.threshold, 8)) if self.threshold is not None else None,
            "q_lower": self.q_lower,
            "resolved_by_size": self.resolved,
        }


def worst_case_stage(n: int, omega: int, t: int, stream: str = "all", cq: int = 3) -> CascadeStage:
    if n not in (3, 4):
        raise ValueError("stage arithmetic is tabulated for n in {3, 4}")
    primes = _prime_stream(stream, omega)
    sieving = primes[t:omega]
    delta = 1 - 2 * _frac_sum([Fraction(1, p) for p in sieving])
    thr = psc_threshold(cq, t, omega - t, delta) if delta > 0 else None
    pml = primorial(omega)
    q_lower = intnum._iroot(pml, n)  # q^n > primorial(omega) => q > floor(primorial^(1/n))
    resolved = False
    if thr is not None:
        e = 2 * n // (n - 2)
        resolved = Fraction(pml) > thr**e
    return CascadeStage(
        n=n, omega=omega, t=t, stream=stream, delta=delta, threshold=thr, q_lower=q_lower, resolved=resolved
    )


def _best_stage(n: int, omega: int, stream: str) -> CascadeStage:
    best = None
    for t in range(1, omega):
        st = worst_case_stage(n, omega, t, stream)
        if st.threshold is None:
            continue
        if best is None or st.threshold < best.threshold:
            best = st
    if best is None:
        raise ValueError(f"no positive-delta split exists for omega={omega}")
    return best


def cascade_thresholds(n: int, stream: str = "all") -> dict:
    """The omega-descent chain: per omega, the best worst-case stage.

    For n = 4 the chain runs omega = 28 (the entry stage, t = 6) down to
    13; the per-omega q_lower and threshold reproduce the recorded
    descent.  For n = 3 the recorded fixed-t stages are emitted, plus
    the same chain on the primes-congruent-to-1-mod-6 stream for
    comparison with the cubic preliminary bound (omega >= 27 or
    q > 3e13)."""
    if n == 4:
        entry = worst_case_stage(4, 28, 6, stream)
        stages = [entry]
        for omega in range(21, 12, -1):
            stages.append(_best_stage(4, omega, stream))
        return {
            "n": 4,
            "stream": stream,
            "entry_threshold_pow": entry.qn_cutoff(),
            "primorial_22": primorial(22),
            "stages": stages,
        }
    if n == 3:
        fixed = [(17921, 342), (429, 35), (74, 11), (38, 8), (30, 7), (28, 6)]
        stages = [worst_case_stage(3, omega, t, stream) for omega, t in fixed]
        refined = [worst_case_stage(3, omega, t, "one_mod_six") for omega, t in fixed[-3:]]
        return {
            "n": 3,
            "stream": stream,
            "stages": stages,
            "refined_stages": refined,
            "reference_omega_cap": 27,
            "reference_q_cap": 3 * 10**13,
        }
    raise ValueError("descent chains are tabulated for n in {3, 4}")


# -- reference-table reproduction -----------------------------------------------


def load_reference_tables() -> tuple[dict, dict]:
    pkg = resources.files("primpair.data")
    t1 = json.loads((pkg / "table1.json").read_text())
    t2 = json.loads((pkg / "table2.json").read_text())
    return t1, t2


@dataclass
class Table1Diff:
    per_omega: dict = field(default_factory=dict)
    computed_total: int = 0
    reference_total: int = 0
    computed_residual: int = 0
    reference_residual: int = 0
    annotations: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        """True when every difference against the reference is an annotated one."""
        return all(row["matches_reference"] or row["annotated"] for row in self.per_omega.values())

    def to_json_dict(self) -> dict:
        return {
            "per_omega": self.per_omega,
            "computed_total": self.computed_total,
            "reference_total": self.reference_total,
            "computed_residual": self.computed_residual,
            "reference_residual": self.reference_residual,
            "clean": self.clean,
            "annotations": self.annotations,
        }


def table1_scan_bound(n: int = 4) -> int:
    """Largest q any omega <= 12 exception can reach (worst-case thresholds)."""
    best = 0
    for omega in range(2, 13):
        st = _best_stage(n, omega, "all")
        best = max(best, int(st.threshold) + 1)
    return best


def reproduce_table1(n: int = 4, workers: int = 1, records: list[SurveyRecord] | None = None) -> Table1Diff:
    """Recompute the full classification of plain-sieve exceptions and diff
    it against the embedded reference rows."""
    ref, _ = load_reference_tables()
    hi = table1_scan_bound(n)
    if records is None:
        records = scan(n, 2, hi, cascade=("PSC",), workers=workers)
    unresolved = [r for r in records if r.resolution == "unresolved"]
    ours: dict[int, list[int]] = {}
    for r in unresolved:
        ours.setdefault(r.omega, []).append(r.q)
    diff = Table1Diff(annotations=ref["annotations"])
    diff.reference_total = ref["total_claimed"]
    diff.computed_total = len(unresolved)
    annotated_qs = {49, 243, 256, 641, 751, 38501}
    for omega in sorted(set(ours) | {int(k) for k in ref["rows"]}):
        ref_row = ref["rows"].get(str(omega), {"count": 0, "values": [], "bold": []})
        mine = sorted(ours.get(omega, []))
        ref_vals = sorted(ref_row["values"])
        extra = sorted(set(mine) - set(ref_vals))
        missing = sorted(set(ref_vals) - set(mine))
        diff.per_omega[omega] = {
            "computed": mine,
            "reference": ref_vals,
            "reference_count_claimed": ref_row["count"],
            "extra_in_computed": extra,
            "resolved_despite_reference": missing,
            "matches_reference": not extra and not missing,
            "annotated": set(extra) | set(missing) <= annotated_qs,
        }
    # residual after the modified sieve
    residual = 0
    for r in unresolved:
        rep = optimize_plan(r.q, n, kinds=("PSC", "MPSC"))
        if not rep.passed:
            residual += 1
    diff.computed_residual = residual
    diff.reference_residual = ref["residual_claimed"]
    return diff


@dataclass
class Table2RowCheck:
    q: int
    omega: int
    matched: bool
    channel: str  # "printed" | "blank_s" | "s_shift" | "cq3" | "annotated_mismatch"
    annotated: bool
    delta: str
    rprime: str
    rprime_below_q: bool
    annotation: str | None = None

    @property
    def acceptable(self) -> bool:
        """Matched outright, or a known annotated defect with the modified
        sieve still satisfied by our exact threshold."""
        return (self.matched or self.annotated) and self.rprime_below_q

    def to_json_dict(self) -> dict:
        out = self.__dict__.copy()
        out["acceptable"] = self.acceptable
        return out


def reproduce_table2() -> list[Table2RowCheck]:
    """Recompute every reference modified-sieve row at printed precision.

    Known defects go through the annotation channel: the blank s cell,
    the even-q constant, the two rows whose printed r/s disagree with
    their own delta/R', and one arithmetic overshoot."""
    _, ref = load_reference_tables()
    out = []
    notes = ref["annotations"]
    for row in ref["rows"]:
        q, t = row["q"], row["t"]
        fact = factor_group_order(q, 4)
        w = len(fact.factors)
        note = notes.get(str(q))
        channel = "printed"
        s = row["s"]
        if s is None:
            s = w - t - row["r"]
            channel = "blank_s"
        candidates = [(channel, s)]
        if s > 1:
            candidates.append(("s_shift", s - 1))
        matched = False
        use = None
        for ch, s_try in candidates:
            plan = SievePlan.from_factorization(q, 4, fact, t, s_try)
            thr = mpsc_threshold(plan.cq, plan.t, plan.r, plan.s, plan.theta_core, plan.delta, plan.epsilon)
            if matches_printed(plan.delta, row["delta"]) and matches_printed(thr, row["rprime"]):
                matched, use, channel = True, (plan, thr), ch
                break
            thr3 = mpsc_threshold(3, plan.t, plan.r, plan.s, plan.theta_core, plan.delta, plan.epsilon)
            if matches_printed(plan.delta, row["delta"]) and matches_printed(thr3, row["rprime"]):
                matched, use, channel = True, (plan, thr3), "cq3"
                break
            if use is None:
                use = (plan, thr)
        if not matched and note is not None:
            channel = "annotated_mismatch"
        plan, thr = use
        out.append(
            Table2RowCheck(
                q=q,
                omega=w,
                matched=matched,
                channel=channel,
                annotated=note is not None,
                delta=round_down_sig(plan.delta, 5),
                rprime=round_down_sig(thr, 6),
                rprime_below_q=thr < q,
                annotation=note,
            )
        )
    return out
