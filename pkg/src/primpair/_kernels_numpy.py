"""Vectorized numpy implementations of the hot kernels.

Reference semantics for the numba twins in _kernels_numba: every
function here must return bit-identical results.  Elements of
F_{p^m} travel as integers packed in base p, digit k being the
coefficient of x^k.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 16
TWO_PI = 6.283185307179586


def _powers(p: int, m: int) -> np.ndarray:
    return p ** np.arange(m, dtype=np.int64)


def _digits(packed: np.ndarray, p: int, m: int) -> np.ndarray:
    return (packed[:, None] // _powers(p, m)) % p


def _scalar_mulmod(a: np.ndarray, b: np.ndarray, p: int, m: int, mod_tail: np.ndarray) -> np.ndarray:
    t = np.convolve(a, b)
    full = np.zeros(2 * m - 1, dtype=np.int64)
    full[: t.shape[0]] = t
    for d in range(2 * m - 2, m - 1, -1):
        c = full[d] % p
        if c:
            full[d - m : d] -= c * mod_tail
        full[d] = 0
    return full[:m] % p


def _mul_matrix(beta: np.ndarray, p: int, m: int, mod_tail: np.ndarray) -> np.ndarray:
    """Row i holds the digits of beta * x^i reduced mod the modulus."""
    mat = np.empty((m, m), dtype=np.int64)
    row = beta % p
    mat[0] = row
    for i in range(1, m):
        c = row[m - 1]
        nxt = np.empty(m, dtype=np.int64)
        nxt[0] = 0
        nxt[1:] = row[:-1]
        if c:
            nxt = (nxt - c * mod_tail) % p
        mat[i] = nxt
        row = nxt
    return mat


def build_exp_table(p: int, m: int, mod_tail: np.ndarray, g_digits: np.ndarray, order: int) -> np.ndarray:
    """Packed values of g^0 .. g^(order-1) by repeated doubling of the range."""
    pw = _powers(p, m)
    exp = np.empty(order, dtype=np.int64)
    exp[0] = 1
    beta = g_digits.astype(np.int64) % p
    filled = 1
    while filled < order:
        take = min(filled, order - filled)
        mat = _mul_matrix(beta, p, m, mod_tail)
        for s in range(0, take, _CHUNK):
            e = min(s + _CHUNK, take)
            nd = _digits(exp[s:e], p, m) @ mat % p
            exp[filled + s : filled + e] = nd @ pw
        beta = _scalar_mulmod(beta, beta, p, m, mod_tail)
        filled += take
    return exp


def log_table(exp: np.ndarray, size: int) -> np.ndarray:
    log = np.full(size, -1, dtype=np.int64)
    log[exp] = np.arange(exp.shape[0], dtype=np.int64)
    return log


def partner_logs(exp: np.ndarray, log: np.ndarray, p: int, m: int, order: int) -> np.ndarray:
    """Discrete log of g^i + g^(-i) for each i; -1 where the sum is zero."""
    pw = _powers(p, m)
    inv = np.empty(order, dtype=np.int64)
    inv[0] = exp[0]
    inv[1:] = exp[:0:-1]
    out = np.empty(order, dtype=np.int64)
    for s in range(0, order, _CHUNK):
        e = min(s + _CHUNK, order)
        summed = ((_digits(exp[s:e], p, m) + _digits(inv[s:e], p, m)) % p) @ pw
        out[s:e] = log[summed]
    return out


def mixed_sum(partner: np.ndarray, tpu: np.ndarray, j1: int, d1: int, j2: int, d2: int, p: int) -> complex:
    """Sum over i of e(j1*i/d1) * e(j2*partner[i]/d2) * e(tpu[i]/p), where
    e(t) = exp(2*pi*1j*t); indices with partner[i] < 0 contribute zero."""
    n = partner.shape[0]
    i = np.arange(n, dtype=np.int64)
    mask = partner >= 0
    ph = ((j1 * i) % d1) / d1
    ph = ph + ((j2 * np.where(mask, partner, 0)) % d2) / d2
    ph = ph + tpu / p
    vals = np.exp(TWO_PI * 1j * ph)
    vals[~mask] = 0.0
    return complex(vals.sum())


def pair_counts(partner: np.ndarray, tq: np.ndarray, ell1: np.ndarray, ell2: np.ndarray, q: int) -> np.ndarray:
    """Per trace value a: how many i have i free of every prime in ell1,
    partner[i] defined and free of every prime in ell2."""
    n = partner.shape[0]
    mask = partner >= 0
    if ell1.shape[0]:
        i = np.arange(n, dtype=np.int64)
        for ell in ell1:
            mask &= (i % ell) != 0
    for ell in ell2:
        mask &= (partner % ell) != 0
    return np.bincount(tq[mask], minlength=q).astype(np.int64)


def first_witness_per_trace(partner: np.ndarray, tq: np.ndarray, order: int, q: int) -> np.ndarray:
    """Minimal exponent i per trace value with both g^i and its partner
    primitive (gcd of the log with the group order = 1); -1 when none."""
    i = np.arange(order, dtype=np.int64)
    cand = (np.gcd(i, order) == 1) & (partner >= 0)
    cand &= np.gcd(np.where(partner >= 0, partner, 0), order) == 1
    wit = np.full(q, -1, dtype=np.int64)
    ci = i[cand]
    vals, first = np.unique(tq[cand], return_index=True)
    wit[vals] = ci[first]
    return wit


# ---------------------------------------------------------------------------
# Quartic polynomial searches: f = x^4 - a*x^3 + b*x + c over F_q, looking for
# the least b making f primitive with x + x^{-1} primitive in F_q[x]/(f).
# Batched over b; chunks scale up so small winners stay cheap.


def _bmul(av: np.ndarray, bv: np.ndarray, fv: np.ndarray, q: int) -> np.ndarray:
    t = np.zeros((av.shape[0], 7), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            t[:, i + j] += av[:, i] * bv[:, j]
    t %= q
    for d in (6, 5, 4):
        c = t[:, d]
        t[:, d - 4 : d] = (t[:, d - 4 : d] - c[:, None] * fv) % q
        t[:, d] = 0
    return t[:, :4]


def _bpow(base: np.ndarray, e: int, fv: np.ndarray, q: int) -> np.ndarray:
    r = np.zeros_like(base)
    r[:, 0] = 1
    b = base.copy()
    while e > 0:
        if e & 1:
            r = _bmul(r, b, fv, q)
        e >>= 1
        if e:
            b = _bmul(b, b, fv, q)
    return r


def _bcompose(g: np.ndarray, h: np.ndarray, fv: np.ndarray, q: int) -> np.ndarray:
    r = np.zeros_like(g)
    r[:, 0] = g[:, 3]
    for k in (2, 1, 0):
        r = _bmul(r, h, fv, q)
        r[:, 0] = (r[:, 0] + g[:, k]) % q
    return r


def _is_one(v: np.ndarray) -> np.ndarray:
    return (v[:, 0] == 1) & (v[:, 1] == 0) & (v[:, 2] == 0) & (v[:, 3] == 0)


def _is_x(v: np.ndarray) -> np.ndarray:
    return (v[:, 0] == 0) & (v[:, 1] == 1) & (v[:, 2] == 0) & (v[:, 3] == 0)


def _batch_good_prime(q: int, c: int, a: int, bs: np.ndarray, exps: np.ndarray) -> np.ndarray:
    nb = bs.shape[0]
    fv = np.zeros((nb, 4), dtype=np.int64)
    fv[:, 0] = c
    fv[:, 1] = bs % q
    fv[:, 3] = (-a) % q
    x = np.zeros((nb, 4), dtype=np.int64)
    x[:, 1] = 1
    xq = _bpow(x, q, fv, q)
    xq2 = _bcompose(xq, xq, fv, q)
    good = ~_is_x(xq2)  # a factor of degree <= 2 would fix x under q^2
    xq4 = _bcompose(xq2, xq2, fv, q)
    good &= _is_x(xq4)  # squarefree with factor degrees dividing 4
    for e in exps:
        if not good.any():
            return good
        good &= ~_is_one(_bpow(x, int(e), fv, q))
    cinv = pow(c, q - 2, q)
    pi = np.zeros((nb, 4), dtype=np.int64)
    pi[:, 0] = (-cinv * (bs % q)) % q
    pi[:, 1] = 1
    pi[:, 2] = (cinv * a) % q
    pi[:, 3] = (-cinv) % q
    for e in exps:
        if not good.any():
            return good
        good &= ~_is_one(_bpow(pi, int(e), fv, q))
    return good


def quartic_search_prime(q: int, c: int, a: int, b_lo: int, b_hi: int, exps: np.ndarray, order: int) -> int:
    chunk = 16
    b = b_lo
    while b < b_hi:
        end = min(b + chunk, b_hi)
        bs = np.arange(b, end, dtype=np.int64)
        good = _batch_good_prime(q, c, a, bs, exps)
        hits = np.flatnonzero(good)
        if hits.shape[0]:
            return int(bs[hits[0]])
        b = end
        chunk = min(chunk * 4, 1024)
    return -1


# Prime-power base field: elements of F_q packed in base p, multiplied
# through exp/log tables, added digit by digit.


def _fq_add_vec(u: np.ndarray, v: np.ndarray, p: int, h: int) -> np.ndarray:
    s = np.zeros_like(u)
    uu, vv = u.copy(), v.copy()
    mul = 1
    for _ in range(h):
        s += ((uu % p + vv % p) % p) * mul
        uu //= p
        vv //= p
        mul *= p
    return s


def _fq_neg_vec(u: np.ndarray, p: int, h: int) -> np.ndarray:
    s = np.zeros_like(u)
    uu = u.copy()
    mul = 1
    for _ in range(h):
        s += ((p - uu % p) % p) * mul
        uu //= p
        mul *= p
    return s


def _fq_mul_vec(u: np.ndarray, v: np.ndarray, expq: np.ndarray, logq: np.ndarray, qm1: int) -> np.ndarray:
    nz = (u != 0) & (v != 0)
    out = np.zeros_like(u)
    if nz.any():
        out[nz] = expq[(logq[u[nz]] + logq[v[nz]]) % qm1]
    return out


def _bmul_fq(av, bv, fv, expq, logq, qm1, p, h):
    t = np.zeros((av.shape[0], 7), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            prod = _fq_mul_vec(av[:, i], bv[:, j], expq, logq, qm1)
            t[:, i + j] = _fq_add_vec(t[:, i + j], prod, p, h)
    for d in (6, 5, 4):
        c = t[:, d].copy()
        for k in range(4):
            sub = _fq_neg_vec(_fq_mul_vec(c, fv[:, k], expq, logq, qm1), p, h)
            t[:, d - 4 + k] = _fq_add_vec(t[:, d - 4 + k], sub, p, h)
        t[:, d] = 0
    return t[:, :4]


def _bpow_fq(base, e, fv, expq, logq, qm1, p, h):
    r = np.zeros_like(base)
    r[:, 0] = 1
    b = base.copy()
    while e > 0:
        if e & 1:
            r = _bmul_fq(r, b, fv, expq, logq, qm1, p, h)
        e >>= 1
        if e:
            b = _bmul_fq(b, b, fv, expq, logq, qm1, p, h)
    return r


def _bcompose_fq(g, hh, fv, expq, logq, qm1, p, h):
    r = np.zeros_like(g)
    r[:, 0] = g[:, 3]
    for k in (2, 1, 0):
        r = _bmul_fq(r, hh, fv, expq, logq, qm1, p, h)
        r[:, 0] = _fq_add_vec(r[:, 0], g[:, k], p, h)
    return r


def _batch_good_ppower(q, p, h, expq, logq, g, a, bs, exps):
    qm1 = q - 1
    nb = bs.shape[0]
    fv = np.zeros((nb, 4), dtype=np.int64)
    fv[:, 0] = g
    fv[:, 1] = bs
    fv[:, 3] = _fq_neg_vec(np.full(nb, a, dtype=np.int64), p, h)
    x = np.zeros((nb, 4), dtype=np.int64)
    x[:, 1] = 1
    xq = _bpow_fq(x, q, fv, expq, logq, qm1, p, h)
    xq2 = _bcompose_fq(xq, xq, fv, expq, logq, qm1, p, h)
    good = ~_is_x(xq2)
    xq4 = _bcompose_fq(xq2, xq2, fv, expq, logq, qm1, p, h)
    good &= _is_x(xq4)
    for e in exps:
        if not good.any():
            return good
        good &= ~_is_one(_bpow_fq(x, int(e), fv, expq, logq, qm1, p, h))
    ginv = expq[(qm1 - logq[g]) % qm1]
    gen_arr = np.full(nb, ginv, dtype=np.int64)
    pi = np.zeros((nb, 4), dtype=np.int64)
    pi[:, 0] = _fq_neg_vec(_fq_mul_vec(gen_arr, bs, expq, logq, qm1), p, h)
    pi[:, 1] = 1
    pi[:, 2] = _fq_mul_vec(gen_arr, np.full(nb, a, dtype=np.int64), expq, logq, qm1)
    pi[:, 3] = _fq_neg_vec(gen_arr, p, h)
    for e in exps:
        if not good.any():
            return good
        good &= ~_is_one(_bpow_fq(pi, int(e), fv, expq, logq, qm1, p, h))
    return good


def quartic_search_ppower(q, p, h, expq, logq, g, a, b_lo, b_hi, exps, order) -> int:
    chunk = 16
    b = b_lo
    while b < b_hi:
        end = min(b + chunk, b_hi)
        bs = np.arange(b, end, dtype=np.int64)
        good = _batch_good_ppower(q, p, h, expq, logq, g, a, bs, exps)
        hits = np.flatnonzero(good)
        if hits.shape[0]:
            return int(bs[hits[0]])
        b = end
        chunk = min(chunk * 4, 1024)
    return -1
