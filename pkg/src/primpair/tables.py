"""Discrete-log tables for small fields.

Everything the enumeration sweeps need, indexed by the discrete log i
of alpha = g^i for the deterministic generator g:

  exp[i]      packed value of g^i
  log[v]      inverse lookup (-1 at v = 0)
  partner[i]  log of g^i + g^(-i), -1 when that sum is zero
  trace_q[i]  packed base-field value of the relative trace of g^i
  trace_p[i]  absolute trace of g^i down to F_p, as an int in [0, p)

Construction goes through the kernel backend (numba or numpy); the
linear-map steps (traces) are single chunked matmuls and live here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from primpair import backend

_CHUNK = 1 << 16


@dataclass
class DlogTables:
    order: int
    generator: int
    exp: np.ndarray
    log: np.ndarray
    partner: np.ndarray
    trace_q: np.ndarray
    trace_p: np.ndarray


def _digit_matrix(packed: np.ndarray, p: int, m: int) -> np.ndarray:
    pw = p ** np.arange(m, dtype=np.int64)
    return (packed[:, None] // pw) % p


def build_tables(ctx) -> DlogTables:
    k = backend.kernels()
    p, m = ctx.p, ctx.m
    order = ctx.order - 1
    mod_tail = np.array(ctx.modulus, dtype=np.int64)
    g = ctx.generator.val
    g_digits = ctx.unpack_array(g)
    exp = k.build_exp_table(p, m, mod_tail, g_digits, order)
    log = k.log_table(exp, ctx.order)
    partner = k.partner_logs(exp, log, p, m, order)

    tq_mat = ctx._trace_to_base_mat  # (m, h): big-field coords -> base coords
    pwh = ctx.p ** np.arange(ctx.h, dtype=np.int64)
    abs_vec = ctx._abs_trace_vec
    trace_q = np.empty(order, dtype=np.int64)
    trace_p = np.empty(order, dtype=np.int64)
    for s in range(0, order, _CHUNK):
        e = min(s + _CHUNK, order)
        digs = _digit_matrix(exp[s:e], p, m)
        trace_q[s:e] = (digs @ tq_mat % p) @ pwh
        trace_p[s:e] = digs @ abs_vec % p
    return DlogTables(
        order=order,
        generator=g,
        exp=exp,
        log=log,
        partner=partner,
        trace_q=trace_q,
        trace_p=trace_p,
    )
