"""Command-line interface.

Subcommands: factor, criterion, charsum, verify, survey, tables.
Exit code 0 means pass/success, 1 means failure or unresolved (so shell
pipelines can branch), 2 is a usage error.  Output is deterministic:
identical flags (any worker count) produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from primpair import charsum, intnum, survey
from primpair.ffield import build_field
from primpair.fmt import fraction_str, round_down_sig
from primpair.intnum import factor_group_order, factorize, is_prime, is_prime_power
from primpair.sieve import SievePlan, bc_check, mpsc_check, optimize_plan, psc_check
from primpair.verifier import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    verify_exhaustive,
    verify_quartic_prime,
    verify_quartic_primepower,
)


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _emit(obj, fmt: str, text_lines=None, csv_rows=None, csv_header=None) -> None:
    if fmt == "json":
        _emit_json(obj)
    elif fmt == "csv":
        if csv_rows is None:
            raise SystemExit("csv output is not available for this subcommand")
        w = csv.writer(sys.stdout, lineterminator="\n")
        if csv_header:
            w.writerow(csv_header)
        for row in csv_rows:
            w.writerow(row)
    else:
        for line in text_lines or [json.dumps(obj, sort_keys=True, indent=2)]:
            sys.stdout.write(str(line) + "\n")


def _cmd_factor(args) -> int:
    f = factorize(args.m)
    th = intnum.theta(f)
    out = {
        "m": f.value,
        "factors": [[p, e] for p, e in f.factors],
        "omega": intnum.omega(f),
        "big_w": intnum.big_w(f),
        "radical": intnum.radical(f),
        "euler_phi": intnum.euler_phi(f),
        "theta": float(round_down_sig(th, 6)),
        "theta_exact": fraction_str(th),
    }
    _emit(out, args.format, text_lines=[str(f)])
    return 0


def _split_ph(q: int) -> tuple[int, int]:
    ph = is_prime_power(q)
    if ph is None:
        raise SystemExit(2)
    return ph


def _cmd_criterion(args) -> int:
    fact = factor_group_order(args.q, args.n)
    if args.kind == "BC":
        rep = bc_check(args.q, args.n, fact)
    elif args.t is not None:
        plan = SievePlan.from_factorization(args.q, args.n, fact, args.t, args.s or 0)
        rep = mpsc_check(args.q, args.n, plan) if (args.s or 0) >= 1 else psc_check(args.q, args.n, plan)
    else:
        rep = optimize_plan(args.q, args.n, fact)
    out = rep.to_json_dict()
    line = f"{rep.kind} q={args.q} n={args.n}: " + ("PASS" if rep.passed else "unresolved/fail")
    _emit(out, args.format, text_lines=[line])
    return 0 if rep.passed else 1


def _cmd_charsum(args) -> int:
    p, h = _split_ph(args.q)
    ctx = build_field(p, h, args.n)
    limit = args.limit_charsum
    rep = charsum.verify_bounds(ctx, limit)
    delta, worst_at = charsum.formula_oracle_deltas(ctx, limit)
    rows = []
    divs = charsum._squarefree_divisors_of(ctx, ctx.order - 1)
    truncated = False
    for e1 in divs:
        for e2 in divs:
            counts = charsum.pair_counts_all(ctx, e1, e2, limit)
            for a in range(ctx.q):
                if len(rows) >= args.max_pairs:
                    truncated = True
                    break
                rows.append(
                    {
                        "a": a,
                        "e1": e1,
                        "e2": e2,
                        "formula": charsum.count_by_formula(ctx, a, e1, e2, limit),
                        "oracle": int(counts[a]),
                    }
                )
    agree = delta < 1e-6
    out = {
        "q": ctx.q,
        "n": ctx.n,
        "cq": rep.cq,
        "bounds": {
            "max_ratios": rep.max_ratios,
            "argmax": {k: list(v) if v else None for k, v in rep.argmax.items()},
            "info": rep.info,
            "passed": rep.passed,
            "printed_partner_bound_holds": rep.printed_partner_bound_holds,
        },
        "formula_oracle": {
            "max_delta": delta,
            "worst_at": list(worst_at) if worst_at else None,
            "agree": agree,
            "rows": rows,
            "truncated": truncated,
        },
    }
    line = f"bounds {'PASS' if rep.passed else 'FAIL'}; formula/oracle max delta {delta:.2e}"
    _emit(out, args.format, text_lines=[line])
    return 0 if rep.passed and agree else 1


def _cmd_verify(args) -> int:
    if args.algorithm == "exhaustive":
        res = verify_exhaustive(
            args.q, args.n, limit=args.limit_exhaustive, trace=args.trace, checkpoint=args.checkpoint
        )
    else:
        if args.n != 4:
            raise SystemExit("the quartic search applies to n = 4 only")
        if is_prime(args.q):
            res = verify_quartic_prime(
                args.q, trace=args.trace, checkpoint=args.checkpoint, resume=args.resume, workers=args.workers
            )
        else:
            p, h = _split_ph(args.q)
            res = verify_quartic_primepower(
                p, h, trace=args.trace, checkpoint=args.checkpoint, resume=args.resume, workers=args.workers
            )
    out = res.to_json_dict()
    lines = [f"({args.q},{args.n}) {res.algorithm}: {res.outcome}"]
    if res.failures:
        lines.append(f"failures: {res.failures}")
    if res.stats and res.stats.max_b_positive:
        b, a = res.stats.max_b_positive
        lines.append(f"largest minimal b (b >= 1 convention): {b} at trace {a}")
    _emit(out, args.format, text_lines=lines)
    return 0 if res.success else 1


def _cmd_survey(args) -> int:
    cascade = tuple(k.strip().upper() for k in args.cascade.split(",") if k.strip())
    records = survey.scan(
        args.n,
        args.range_lo,
        args.range_hi,
        cascade=cascade,
        omega_filter=args.omega_filter,
        workers=args.workers,
    )
    out = {"n": args.n, "records": [r.to_json_dict() for r in records]}
    unresolved = [r.q for r in records if r.resolution == "unresolved"]
    _emit(
        out,
        args.format,
        text_lines=[f"{len(records)} prime powers; unresolved: {unresolved}"],
        csv_rows=[r.csv_row() for r in records],
        csv_header=survey.CSV_COLUMNS,
    )
    return 0 if not unresolved else 1


def _cmd_tables(args) -> int:
    ok = True
    out = {}
    if args.which in ("2", "both"):
        rows = survey.reproduce_table2()
        out["mpsc_rows"] = [r.to_json_dict() for r in rows]
        ok &= all(r.acceptable for r in rows)
    if args.which in ("1", "both"):
        diff = survey.reproduce_table1(workers=args.workers)
        out["psc_exceptions"] = diff.to_json_dict()
        ok &= diff.clean
    _emit(out, args.format, text_lines=[json.dumps(out, sort_keys=True, indent=1)])
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="primpair",
        description="primitive element pairs with prescribed trace: criteria, counts, verification",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("factor", help="factor an integer")
    p.add_argument("--m", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_factor)

    p = sub.add_parser("criterion", help="run the membership criteria for (q, n)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=None, help="explicit core size")
    p.add_argument("--s", type=int, default=None, help="explicit large-prime count")
    p.add_argument("--kind", choices=("BC",), default=None, help="force the basic criterion")
    common(p)
    p.set_defaults(fn=_cmd_criterion)

    p = sub.add_parser("charsum", help="character-sum bounds and formula/oracle comparison")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit-charsum", type=int, default=charsum.DEFAULT_CHARSUM_LIMIT)
    p.add_argument("--max-pairs", type=int, default=4096)
    common(p)
    p.set_defaults(fn=_cmd_charsum)

    p = sub.add_parser("verify", help="direct witness search for (q, n)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--algorithm", choices=("exhaustive", "quartic"), default="exhaustive")
    p.add_argument("--trace", type=int, default=None, help="single trace target (packed value)")
    p.add_argument("--resume", default=None, help="checkpoint file to resume from")
    p.add_argument("--checkpoint", default=None, help="append per-trace progress to this file")
    p.add_argument("--limit-exhaustive", type=int, default=DEFAULT_EXHAUSTIVE_LIMIT)
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("survey", help="scan a prime-power range through the criteria cascade")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--range-lo", type=int, required=True)
    p.add_argument("--range-hi", type=int, required=True)
    p.add_argument("--cascade", default="BC,PSC,MPSC")
    p.add_argument("--omega-filter", type=int, default=None)
    common(p)
    p.set_defaults(fn=_cmd_survey)

    p = sub.add_parser("tables", help="recompute the reference classification tables")
    p.add_argument("--which", choices=("1", "2", "both"), default="2")
    common(p)
    p.set_defaults(fn=_cmd_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
