"""Numba @njit implementations of the hot kernels.

Signature-compatible with _kernels_numpy; results must be bit-identical
apart from floating-point summation order in mixed_sum (compensated
here, pairwise there), which both land far inside the 1e-6 tolerances
used by callers.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 6.283185307179586


@njit(cache=True)
def _modpow(b: int, e: int, m: int) -> int:
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@njit(cache=True)
def build_exp_table(p, m, mod_tail, g_digits, order):
    pw = np.empty(m, np.int64)
    v = 1
    for k in range(m):
        pw[k] = v
        v *= p
    exp = np.empty(order, np.int64)
    cur = np.zeros(m, np.int64)
    cur[0] = 1
    tmp = np.zeros(2 * m - 1, np.int64)
    for i in range(order):
        acc = 0
        for k in range(m):
            acc += cur[k] * pw[k]
        exp[i] = acc
        for d in range(2 * m - 1):
            tmp[d] = 0
        for j in range(m):
            cj = cur[j]
            if cj != 0:
                for k in range(m):
                    tmp[j + k] += cj * g_digits[k]
        for d in range(2 * m - 2, m - 1, -1):
            c = tmp[d] % p
            if c != 0:
                for k in range(m):
                    tmp[d - m + k] -= c * mod_tail[k]
            tmp[d] = 0
        for k in range(m):
            cur[k] = tmp[k] % p
    return exp


@njit(cache=True)
def log_table(exp, size):
    log = np.full(size, -1, np.int64)
    for i in range(exp.shape[0]):
        log[exp[i]] = i
    return log


@njit(cache=True)
def partner_logs(exp, log, p, m, order):
    pw = np.empty(m, np.int64)
    v = 1
    for k in range(m):
        pw[k] = v
        v *= p
    out = np.empty(order, np.int64)
    for i in range(order):
        x = exp[i]
        y = exp[(order - i) % order]
        s = 0
        for k in range(m):
            s += ((x % p + y % p) % p) * pw[k]
            x //= p
            y //= p
        out[i] = log[s]
    return out


@njit(cache=True)
def mixed_sum(partner, tpu, j1, d1, j2, d2, p):
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    n = partner.shape[0]
    for i in range(n):
        pl = partner[i]
        if pl < 0:
            continue
        ph = ((j1 * i) % d1) / d1 + ((j2 * pl) % d2) / d2 + tpu[i] / p
        ang = TWO_PI * ph
        vr = math.cos(ang)
        vi = math.sin(ang)
        y = vr - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = vi - ci
        t = si + y
        ci = (t - si) - y
        si = t
    return complex(sr, si)


@njit(cache=True)
def pair_counts(partner, tq, ell1, ell2, q):
    counts = np.zeros(q, np.int64)
    n = partner.shape[0]
    for i in range(n):
        ok = True
        for k in range(ell1.shape[0]):
            if i % ell1[k] == 0:
                ok = False
                break
        if not ok:
            continue
        pl = partner[i]
        if pl < 0:
            continue
        for k in range(ell2.shape[0]):
            if pl % ell2[k] == 0:
                ok = False
                break
        if ok:
            counts[tq[i]] += 1
    return counts


@njit(cache=True)
def first_witness_per_trace(partner, tq, order, q):
    wit = np.full(q, -1, np.int64)
    remaining = q
    for i in range(order):
        if math.gcd(i, order) != 1:
            continue
        pl = partner[i]
        if pl < 0 or math.gcd(pl, order) != 1:
            continue
        a = tq[i]
        if wit[a] < 0:
            wit[a] = i
            remaining -= 1
            if remaining == 0:
                break
    return wit


# ---------------------------------------------------------------------------
# Quartic search over a prime field: coefficients are residues mod q,
# polynomials low-degree-first int64[4], modulus f monic with tail f[0..3].


@njit(cache=True)
def _q4_mul(a, b, f, q, t):
    for d in range(7):
        t[d] = 0
    for i in range(4):
        ai = a[i]
        if ai != 0:
            for j in range(4):
                t[i + j] += ai * b[j]
    for d in range(6, 3, -1):
        c = t[d] % q
        if c != 0:
            for k in range(4):
                t[d - 4 + k] -= c * f[k]
        t[d] = 0
    for k in range(4):
        a[k] = t[k] % q


@njit(cache=True)
def _q4_pow(base, e, f, q, out):
    t = np.empty(7, np.int64)
    b = base.copy()
    out[0] = 1
    out[1] = 0
    out[2] = 0
    out[3] = 0
    while e > 0:
        if e & 1:
            _q4_mul(out, b, f, q, t)
        e >>= 1
        if e:
            _q4_mul(b, b, f, q, t)


@njit(cache=True)
def _q4_compose(g, h, f, q, out):
    t = np.empty(7, np.int64)
    out[0] = g[3]
    out[1] = 0
    out[2] = 0
    out[3] = 0
    for k in range(2, -1, -1):
        _q4_mul(out, h, f, q, t)
        out[0] = (out[0] + g[k]) % q


@njit(cache=True)
def _q4_is_one(v):
    return v[0] == 1 and v[1] == 0 and v[2] == 0 and v[3] == 0


@njit(cache=True)
def _q4_is_x(v):
    return v[0] == 0 and v[1] == 1 and v[2] == 0 and v[3] == 0


@njit(cache=True)
def _q4_primitive(elt, exps, f, q, scratch):
    for idx in range(exps.shape[0]):
        _q4_pow(elt, exps[idx], f, q, scratch)
        if _q4_is_one(scratch):
            return False
    return True


@njit(cache=True)
def quartic_search_prime(q, c, a, b_lo, b_hi, exps, order):
    f = np.empty(4, np.int64)
    x = np.zeros(4, np.int64)
    x[1] = 1
    xq = np.empty(4, np.int64)
    xq2 = np.empty(4, np.int64)
    xq4 = np.empty(4, np.int64)
    pi = np.empty(4, np.int64)
    scratch = np.empty(4, np.int64)
    cinv = _modpow(c, q - 2, q)
    for b in range(b_lo, b_hi):
        f[0] = c
        f[1] = b % q
        f[2] = 0
        f[3] = (-a) % q
        _q4_pow(x, q, f, q, xq)
        _q4_compose(xq, xq, f, q, xq2)
        if _q4_is_x(xq2):
            continue  # some irreducible factor of degree 1 or 2
        _q4_compose(xq2, xq2, f, q, xq4)
        if not _q4_is_x(xq4):
            continue  # not squarefree with all factor degrees dividing 4
        if not _q4_primitive(x, exps, f, q, scratch):
            continue
        pi[0] = (-cinv * (b % q)) % q
        pi[1] = 1
        pi[2] = (cinv * a) % q
        pi[3] = (-cinv) % q
        if _q4_primitive(pi, exps, f, q, scratch):
            return b
    return -1


# ---------------------------------------------------------------------------
# Quartic search over a prime-power base field F_q = F_{p^h}: elements are
# base-p packed ints, multiplication via exp/log tables, addition digitwise.


@njit(cache=True)
def _fq_add(u, v, p, h):
    s = 0
    mul = 1
    for _ in range(h):
        s += ((u % p + v % p) % p) * mul
        u //= p
        v //= p
        mul *= p
    return s


@njit(cache=True)
def _fq_neg(u, p, h):
    s = 0
    mul = 1
    for _ in range(h):
        s += ((p - u % p) % p) * mul
        u //= p
        mul *= p
    return s


@njit(cache=True)
def _fq_mul(u, v, expq, logq, qm1):
    if u == 0 or v == 0:
        return 0
    return expq[(logq[u] + logq[v]) % qm1]


@njit(cache=True)
def _fq4_mul(a, b, f, expq, logq, qm1, p, h, t):
    for d in range(7):
        t[d] = 0
    for i in range(4):
        ai = a[i]
        if ai != 0:
            for j in range(4):
                prod = _fq_mul(ai, b[j], expq, logq, qm1)
                t[i + j] = _fq_add(t[i + j], prod, p, h)
    for d in range(6, 3, -1):
        c = t[d]
        if c != 0:
            for k in range(4):
                sub = _fq_neg(_fq_mul(c, f[k], expq, logq, qm1), p, h)
                t[d - 4 + k] = _fq_add(t[d - 4 + k], sub, p, h)
        t[d] = 0
    for k in range(4):
        a[k] = t[k]


@njit(cache=True)
def _fq4_pow(base, e, f, expq, logq, qm1, p, h, out):
    t = np.empty(7, np.int64)
    b = base.copy()
    out[0] = 1
    out[1] = 0
    out[2] = 0
    out[3] = 0
    while e > 0:
        if e & 1:
            _fq4_mul(out, b, f, expq, logq, qm1, p, h, t)
        e >>= 1
        if e:
            _fq4_mul(b, b, f, expq, logq, qm1, p, h, t)


@njit(cache=True)
def _fq4_compose(g, hpoly, f, expq, logq, qm1, p, h, out):
    t = np.empty(7, np.int64)
    out[0] = g[3]
    out[1] = 0
    out[2] = 0
    out[3] = 0
    for k in range(2, -1, -1):
        _fq4_mul(out, hpoly, f, expq, logq, qm1, p, h, t)
        out[0] = _fq_add(out[0], g[k], p, h)


@njit(cache=True)
def _fq4_primitive(elt, exps, f, expq, logq, qm1, p, h, scratch):
    for idx in range(exps.shape[0]):
        _fq4_pow(elt, exps[idx], f, expq, logq, qm1, p, h, scratch)
        if _q4_is_one(scratch):
            return False
    return True


@njit(cache=True)
def quartic_search_ppower(q, p, h, expq, logq, g, a, b_lo, b_hi, exps, order):
    qm1 = q - 1
    f = np.empty(4, np.int64)
    x = np.zeros(4, np.int64)
    x[1] = 1
    xq = np.empty(4, np.int64)
    xq2 = np.empty(4, np.int64)
    xq4 = np.empty(4, np.int64)
    pi = np.empty(4, np.int64)
    scratch = np.empty(4, np.int64)
    ginv = expq[(qm1 - logq[g]) % qm1]
    nega = _fq_neg(a, p, h)
    for b in range(b_lo, b_hi):
        f[0] = g
        f[1] = b
        f[2] = 0
        f[3] = nega
        _fq4_pow(x, q, f, expq, logq, qm1, p, h, xq)
        _fq4_compose(xq, xq, f, expq, logq, qm1, p, h, xq2)
        if _q4_is_x(xq2):
            continue
        _fq4_compose(xq2, xq2, f, expq, logq, qm1, p, h, xq4)
        if not _q4_is_x(xq4):
            continue
        if not _fq4_primitive(x, exps, f, expq, logq, qm1, p, h, scratch):
            continue
        pi[0] = _fq_neg(_fq_mul(ginv, b, expq, logq, qm1), p, h)
        pi[1] = 1
        pi[2] = _fq_mul(ginv, a, expq, logq, qm1)
        pi[3] = _fq_neg(ginv, p, h)
        if _fq4_primitive(pi, exps, f, expq, logq, qm1, p, h, scratch):
            return b
    return -1
