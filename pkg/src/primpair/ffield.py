"""Exact arithmetic in F_p, F_q = F_{p^h} and F_{q^n}.

F_{q^n} is represented once and for all as a single extension of F_p of
degree m = h*n, with a deterministic modulus (the first irreducible
monic polynomial of degree m in packed order).  F_q is located inside
it as the unique subfield of order q, so every statement proved here
(membership of a pair (q, n), witness counts, traces) is independent of
anyone else's choice of defining polynomials.

Elements are stored packed: the vector (c_0, ..., c_{m-1}) of
coefficients over F_p becomes the integer sum c_k p^k.  The packed
value doubles as the element's position in the deterministic total
order used whenever "first" or "least" appears in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from primpair import intnum
from primpair.intnum import Factorization, factor_group_order, is_prime

__all__ = [
    "FieldContext",
    "FieldElement",
    "FieldTooLargeError",
    "build_field",
    "first_irreducible",
    "least_primitive_root",
    "is_primitive_polynomial",
]

#: Group orders past this are refused at construction time.
MAX_GROUP_ORDER = 1 << 128

#: Largest base field that embedding construction will enumerate.
_MAX_SUBFIELD_SCAN = 1 << 21


class FieldTooLargeError(ValueError):
    """The operation needs tables the field is too large to hold."""


# ---------------------------------------------------------------------------
# Dense polynomial arithmetic over F_p (lists, low degree first).


def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mulmod(a: list[int], b: list[int], tail: tuple[int, ...], p: int) -> list[int]:
    m = len(tail)
    t = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                t[i + j] += ai * bj
    for d in range(len(t) - 1, m - 1, -1):
        c = t[d] % p
        if c:
            for k in range(m):
                t[d - m + k] -= c * tail[k]
        t[d] = 0
    return [v % p for v in t[:m]] + [0] * max(0, m - len(t))


def _pp_powmod(base: list[int], e: int, tail: tuple[int, ...], p: int) -> list[int]:
    m = len(tail)
    r = [1] + [0] * (m - 1)
    b = list(base)
    while e:
        if e & 1:
            r = _pp_mulmod(r, b, tail, p)
        b = _pp_mulmod(b, b, tail, p)
        e >>= 1
    return r


def _pp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            if c:
                off = len(a) - len(b)
                for k in range(len(b)):
                    a[off + k] = (a[off + k] - c * b[k]) % p
            a.pop()
            _pp_trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _is_irreducible(tail: tuple[int, ...], p: int) -> bool:
    """Rabin test for the monic polynomial x^m + tail."""
    m = len(tail)
    if m == 1:
        return True
    xq = _pp_powmod([0, 1], p**m, tail, p)
    if _pp_trim(list(xq)) != [0, 1]:
        return False
    for r in {pe[0] for pe in intnum.factorize(m).factors}:
        xr = _pp_powmod([0, 1], p ** (m // r), tail, p)
        diff = list(xr)
        diff[1] = (diff[1] - 1) % p
        full = list(tail) + [1]
        if len(_pp_gcd(full, diff, p)) != 1:
            return False
    return True


def first_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Tail (c_0..c_{m-1}) of the first irreducible monic degree-m polynomial
    over F_p, "first" meaning least packed value sum c_k p^k."""
    pw = [p**k for k in range(m)]
    for v in range(p**m):
        tail = tuple((v // pw[k]) % p for k in range(m))
        if _is_irreducible(tail, p):
            return tail
    raise AssertionError("irreducible polynomial exists for every p, m")  # pragma: no cover


def _kernel_mod_p(mat: np.ndarray, p: int) -> list[list[int]]:
    """Basis of the left null space of mat over F_p (row vectors v with
    v @ mat == 0)."""
    # solve v @ mat = 0  <=>  mat.T @ v.T = 0: row-reduce mat.T
    a = (mat.T % p).astype(np.int64)
    rows, cols = a.shape
    piv_of_col: dict[int, int] = {}
    r = 0
    for c in range(cols):
        sel = -1
        for rr in range(r, rows):
            if a[rr, c] % p:
                sel = rr
                break
        if sel < 0:
            continue
        a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        for rr in range(rows):
            if rr != r and a[rr, c] % p:
                a[rr] = (a[rr] - a[rr, c] * a[r]) % p
        piv_of_col[c] = r
        r += 1
    basis = []
    for c in range(cols):
        if c in piv_of_col:
            continue
        v = [0] * cols
        v[c] = 1
        for c2, rr in piv_of_col.items():
            v[c2] = (-int(a[rr, c])) % p
        basis.append(v)
    return basis


class FieldElement:
    """Element of a FieldContext; packed-int backed, operator overloaded."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx: "FieldContext", val: int):
        self.ctx = ctx
        self.val = val

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.unpack(self.val)

    def __bool__(self) -> bool:
        return self.val != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.val == other.val
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.val))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements belong to different fields")
            return other.val
        if isinstance(other, int):  # integer acts as a prime-field constant
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx._padd(self.val, v))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx._pneg(self.val))

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx._padd(self.val, self.ctx._pneg(v)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx._pmul(self.val, v))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx._pinv(self.val))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx._pmul(self.val, self.ctx._pinv(v)))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx._ppow(self.val, e))

    def __repr__(self) -> str:
        return f"<{self.coeffs} in F_{self.ctx.p}^{self.ctx.m}>"


class FieldContext:
    """Immutable description of F_{q^n} over F_q over F_p.

    Safe to share across workers once constructed; discrete-log tables
    are built at most once (and only on explicit request, since they
    cost order q^n memory).
    """

    def __init__(self, p: int, h: int, n: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if h < 1 or n < 1:
            raise ValueError("need h >= 1 and n >= 1")
        self.p = p
        self.h = h
        self.n = n
        self.q = p**h
        self.m = h * n
        self.order = p**self.m
        if self.order > MAX_GROUP_ORDER:
            raise FieldTooLargeError(f"group order {self.order} exceeds the configured limit")
        if modulus is None:
            modulus = first_irreducible(p, self.m)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != self.m:
                raise ValueError("modulus tail must have length h*n")
            if not _is_irreducible(modulus, p):
                raise ValueError("modulus is not irreducible over F_p")
        self.modulus = modulus
        self.group_fact: Factorization = factor_group_order(p, self.m)
        self._pw = [p**k for k in range(self.m)]
        self._init_linear_maps()
        self._init_subfield()
        self._generator: int | None = None
        self._tables = None

    # -- linear structure ---------------------------------------------------

    def _init_linear_maps(self) -> None:
        p, m = self.p, self.m
        xp = _pp_powmod([0, 1], p, self.modulus, p)
        frob = np.zeros((m, m), dtype=np.int64)
        row = [1] + [0] * (m - 1)
        frob[0, : len(row)] = row
        for i in range(1, m):
            row = _pp_mulmod(row, xp, self.modulus, p)
            frob[i, : len(row)] = row
        self._frob_p = frob
        fq = np.eye(m, dtype=np.int64)
        for _ in range(self.h):
            fq = fq @ frob % p
        self._frob_q = fq
        tr = np.zeros((m, m), dtype=np.int64)
        acc = np.eye(m, dtype=np.int64)
        for _ in range(self.n):
            tr = (tr + acc) % p
            acc = acc @ fq % p
        self._trace_rel = tr
        s = np.zeros((m, m), dtype=np.int64)
        acc = np.eye(m, dtype=np.int64)
        for _ in range(m):
            s = (s + acc) % p
            acc = acc @ frob % p
        self._abs_trace_vec = s[:, 0].copy()

    def _init_subfield(self) -> None:
        p, m, h = self.p, self.m, self.h
        if self.n == 1:
            self.base: FieldContext = self
            self._embed = np.eye(m, dtype=np.int64)
            self._embed_piv = list(range(m))
            self._embed_inv = np.eye(m, dtype=np.int64)
            self._trace_to_base_mat = self._trace_rel % p
            return
        self.base = build_field(p, h, 1)
        if self.q > _MAX_SUBFIELD_SCAN:
            raise FieldTooLargeError(
                f"subfield of order {self.q} too large to locate by enumeration"
            )
        fixed = _kernel_mod_p((self._frob_q - np.eye(m, dtype=np.int64)) % p, p)
        if len(fixed) != h:
            raise AssertionError("Frobenius fixed space must have dimension h")
        basis = np.array(fixed, dtype=np.int64)
        g_tail = self.base.modulus
        root = None
        for combo in range(self.q):
            vec = np.zeros(m, dtype=np.int64)
            c = combo
            for k in range(h):
                vec = (vec + (c % p) * basis[k]) % p
                c //= p
            cand = int(vec @ self._pw_arr)
            # evaluate the base modulus g at cand (g has F_p coefficients)
            acc = 1
            val = 0
            for ge in g_tail:
                if ge:
                    val = self._padd(val, self._pmul(ge % p, acc))
                acc = self._pmul(acc, cand)
            val = self._padd(val, acc)  # monic leading term
            if val == 0 and (root is None or cand < root):
                root = cand
        if root is None:
            raise AssertionError("base modulus must split in the subfield")
        emb = np.zeros((h, m), dtype=np.int64)
        acc = 1
        for i in range(h):
            emb[i] = self.unpack_array(acc)
            acc = self._pmul(acc, root)
        self._embed = emb
        piv, inv = self._column_inverse(emb)
        self._embed_piv = piv
        self._embed_inv = inv
        self._trace_to_base_mat = (self._trace_rel[:, piv] @ inv) % p

    @property
    def _pw_arr(self) -> np.ndarray:
        return np.array(self._pw, dtype=np.int64)

    def _column_inverse(self, emb: np.ndarray) -> tuple[list[int], np.ndarray]:
        """Pivot columns J and inverse of emb[:, J] over F_p, so that the
        base coordinates of v in the image are v[J] @ inv."""
        p, h = self.p, emb.shape[0]
        piv: list[int] = []
        r = 0
        work = emb.copy() % p
        for c in range(emb.shape[1]):
            sel = -1
            for rr in range(r, h):
                if work[rr, c] % p:
                    sel = rr
                    break
            if sel < 0:
                continue
            work[[r, sel]] = work[[sel, r]]
            inv = pow(int(work[r, c]), p - 2, p)
            work[r] = work[r] * inv % p
            for rr in range(h):
                if rr != r and work[rr, c] % p:
                    work[rr] = (work[rr] - work[rr, c] * work[r]) % p
            piv.append(c)
            r += 1
            if r == h:
                break
        sq = emb[:, piv] % p
        inv = _matrix_inverse_mod_p(sq, p)
        return piv, inv

    # -- packed scalar arithmetic -------------------------------------------

    def unpack(self, v: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(v % p)
            v //= p
        return tuple(out)

    def unpack_array(self, v: int) -> np.ndarray:
        return np.array(self.unpack(v), dtype=np.int64)

    def pack(self, coeffs) -> int:
        p = self.p
        out = 0
        for c, pk in zip(coeffs, self._pw):
            out += (int(c) % p) * pk
        return out

    def _padd(self, u: int, v: int) -> int:
        p = self.p
        out = 0
        for pk in self._pw:
            out += ((u % p + v % p) % p) * pk
            u //= p
            v //= p
        return out

    def _pneg(self, u: int) -> int:
        p = self.p
        out = 0
        for pk in self._pw:
            out += ((p - u % p) % p) * pk
            u //= p
        return out

    def _pmul(self, u: int, v: int) -> int:
        if u == 0 or v == 0:
            return 0
        p = self.p
        a = self.unpack(u)
        b = self.unpack(v)
        prod = _pp_mulmod(list(a), list(b), self.modulus, p)
        return self.pack(prod)

    def _ppow(self, u: int, e: int) -> int:
        if e < 0:
            u = self._pinv(u)
            e = -e
        r = 1
        b = u
        while e:
            if e & 1:
                r = self._pmul(r, b)
            b = self._pmul(b, b)
            e >>= 1
        return r

    def _pinv(self, u: int) -> int:
        if u == 0:
            raise ZeroDivisionError("inversion of zero field element")
        return self._ppow(u, self.order - 2)

    # -- public element API ---------------------------------------------------

    def element(self, coeffs) -> FieldElement:
        return FieldElement(self, self.pack(coeffs))

    def from_packed(self, v: int) -> FieldElement:
        if not 0 <= v < self.order:
            raise ValueError("packed value out of range")
        return FieldElement(self, v)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def iter_elements(self):
        for v in range(self.order):
            yield FieldElement(self, v)

    # -- subfield / trace -----------------------------------------------------

    def embed_packed(self, a: int) -> int:
        """Packed image in F_{q^n} of the base-field element packed as a."""
        vec = np.zeros(self.m, dtype=np.int64)
        p = self.p
        for i in range(self.h):
            d = a % p
            a //= p
            if d:
                vec = (vec + d * self._embed[i]) % p
        return int(vec @ self._pw_arr)

    def embed(self, a) -> FieldElement:
        if isinstance(a, FieldElement):
            if a.ctx is not self.base:
                raise ValueError("embed expects an element of the base field")
            a = a.val
        return FieldElement(self, self.embed_packed(int(a)))

    def in_subfield(self, x: FieldElement) -> bool:
        v = self.unpack_array(x.val)
        return bool(np.array_equal(v @ self._frob_q % self.p, v))

    def frobenius_q(self, x: FieldElement) -> FieldElement:
        v = self.unpack_array(x.val) @ self._frob_q % self.p
        return FieldElement(self, int(v @ self._pw_arr))

    def trace_to_base_packed(self, v: int) -> int:
        vec = self.unpack_array(v)
        coords = vec @ self._trace_to_base_mat % self.p
        out = 0
        for k in range(self.h):
            out += int(coords[k]) * self.p**k
        return out

    def trace_to_base(self, x: FieldElement) -> FieldElement:
        """Relative trace sum_{i<n} x^{q^i}, returned inside this field
        (its value lies in the embedded subfield)."""
        vec = self.unpack_array(x.val) @ self._trace_rel % self.p
        return FieldElement(self, int(vec @ self._pw_arr))

    def abs_trace_packed(self, v: int) -> int:
        return int(self.unpack_array(v) @ self._abs_trace_vec % self.p)

    # -- multiplicative structure ----------------------------------------------

    @property
    def generator(self) -> FieldElement:
        """Least primitive element in packed order (deterministic)."""
        if self._generator is None:
            if self.order == 2:
                self._generator = 1
            else:
                v = 2
                while v < self.order:
                    if self._is_primitive_packed(v):
                        break
                    v += 1
                self._generator = v
        return FieldElement(self, self._generator)

    def _is_primitive_packed(self, v: int) -> bool:
        if v == 0:
            return False
        g = self.order - 1
        for ell, _ in self.group_fact.factors:
            if self._ppow(v, g // ell) == 1:
                return False
        return True

    def element_order(self, x: FieldElement) -> int:
        if x.val == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        o = self.order - 1
        for ell, e in self.group_fact.factors:
            for _ in range(e):
                if o % ell == 0 and self._ppow(x.val, o // ell) == 1:
                    o //= ell
                else:
                    break
        return o

    def is_e_free(self, x: FieldElement, e: int) -> bool:
        """True iff x is an e-free unit: no prime ell | e has x an ell-th power.

        Depends only on the radical of e; checked via the power test
        x^((q^n-1)/ell) != 1 for each prime ell | e.
        """
        if x.val == 0:
            raise ValueError("e-freeness is defined for nonzero elements")
        g = self.order - 1
        if e < 1 or g % e != 0:
            raise ValueError(f"{e} does not divide the group order {g}")
        for ell, _ in self.group_fact.factors:
            if e % ell == 0 and self._ppow(x.val, g // ell) == 1:
                return False
        return True

    def is_primitive(self, x: FieldElement) -> bool:
        return x.val != 0 and self._is_primitive_packed(x.val)

    # -- discrete-log tables -----------------------------------------------------

    def tables(self, limit: int | None = None):
        """Build (once) and return the discrete-log tables.

        limit guards memory: construction is refused when the field order
        exceeds it.  Once built, the tables are returned regardless.
        """
        if self._tables is None:
            from primpair import tables as _tables

            if limit is not None and self.order > limit:
                raise FieldTooLargeError(
                    f"field order {self.order} exceeds the table limit {limit}"
                )
            self._tables = _tables.build_tables(self)
        return self._tables

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, h={self.h}, n={self.n}, modulus={self.modulus})"


def _matrix_inverse_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    work = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        sel = -1
        for r in range(c, n):
            if work[r, c] % p:
                sel = r
                break
        if sel < 0:
            raise ValueError("matrix not invertible")
        work[[c, sel]] = work[[sel, c]]
        inv = pow(int(work[c, c]), p - 2, p)
        work[c] = work[c] * inv % p
        for r in range(n):
            if r != c and work[r, c] % p:
                work[r] = (work[r] - work[r, c] * work[c]) % p
    return work[:, n:]


@lru_cache(maxsize=24)
def _build_field_cached(p: int, h: int, n: int, modulus: tuple[int, ...] | None) -> FieldContext:
    return FieldContext(p, h, n, modulus)


def build_field(p: int, h: int, n: int, modulus=None) -> FieldContext:
    """Deterministic context for F_{(p^h)^n}; see FieldContext.

    Contexts are cached: repeated calls with the same arguments return
    the same immutable object (tables built at most once per shape).
    """
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return _build_field_cached(p, h, n, modulus)


def least_primitive_root(q: int) -> int:
    """Smallest positive generator of (Z/qZ)* for prime q."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2:
        return 1
    fact = intnum.factorize(q - 1)
    for c in range(2, q):
        if all(pow(c, (q - 1) // ell, q) != 1 for ell, _ in fact.factors):
            return c
    raise AssertionError("a primitive root exists for every prime")  # pragma: no cover


# ---------------------------------------------------------------------------
# Polynomials over F_q (coefficients = packed base-field values).


def _fq_poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fq_poly_mulmod(fq: FieldContext, a: list[int], b: list[int], mod: list[int]) -> list[int]:
    """a*b reduced by the monic polynomial mod (full coeff list, lead 1)."""
    deg = len(mod) - 1
    t = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    t[i + j] = fq._padd(t[i + j], fq._pmul(ai, bj))
    for d in range(len(t) - 1, deg - 1, -1):
        c = t[d]
        if c:
            for k in range(deg):
                if mod[k]:
                    t[d - deg + k] = fq._padd(t[d - deg + k], fq._pneg(fq._pmul(c, mod[k])))
        t[d] = 0
    out = t[:deg] + [0] * max(0, deg - len(t))
    return out


def _fq_poly_powmod(fq: FieldContext, base: list[int], e: int, mod: list[int]) -> list[int]:
    deg = len(mod) - 1
    r = [1] + [0] * (deg - 1)
    b = list(base) + [0] * max(0, deg - len(base))
    while e:
        if e & 1:
            r = _fq_poly_mulmod(fq, r, b, mod)
        b = _fq_poly_mulmod(fq, b, b, mod)
        e >>= 1
    return r


def _fq_poly_gcd(fq: FieldContext, a: list[int], b: list[int]) -> list[int]:
    a, b = _fq_poly_trim(list(a)), _fq_poly_trim(list(b))
    while b:
        inv = fq._pinv(b[-1])
        while len(a) >= len(b):
            c = fq._pmul(a[-1], inv)
            if c:
                off = len(a) - len(b)
                for k in range(len(b)):
                    a[off + k] = fq._padd(a[off + k], fq._pneg(fq._pmul(c, b[k])))
            a.pop()
            _fq_poly_trim(a)
            if not a:
                break
        a, b = b, a
    return a


def is_primitive_polynomial(fq: FieldContext, coeffs) -> bool:
    """Whether the monic polynomial with the given coefficients (packed
    base-field values, low degree first, leading 1 included) is primitive
    over fq: irreducible, with its roots generating the full multiplicative
    group of the degree-n extension.

    Implemented by exponentiating x modulo f; the group order q^n - 1 is
    factored once per degree.
    """
    mod = [c.val if isinstance(c, FieldElement) else int(c) for c in coeffs]
    if not mod or mod[-1] != 1:
        raise ValueError("polynomial must be monic (leading coefficient 1)")
    n = len(mod) - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    q = fq.order
    if n == 1:  # linear: primitive iff the root is a generator of fq
        return fq._is_primitive_packed(fq._pneg(mod[0]))
    x = [0, 1]
    # irreducibility (Rabin): x^(q^n) = x mod f, gcd(x^(q^(n/r)) - x, f) = 1
    xqn = _fq_poly_powmod(fq, x, q**n, mod)
    ref = [0, 1] + [0] * (n - 2)
    if _fq_poly_trim(list(xqn)) != _fq_poly_trim(list(ref)):
        return False
    for r in {pe[0] for pe in intnum.factorize(n).factors}:
        xqr = _fq_poly_powmod(fq, x, q ** (n // r), mod)
        diff = list(xqr)
        if len(diff) < 2:
            diff += [0] * (2 - len(diff))
        diff[1] = fq._padd(diff[1], fq._pneg(1))
        if len(_fq_poly_gcd(fq, mod, diff)) != 1:
            return False
    # order of x must be the full group order
    gfact = factor_group_order(q, n)
    g = gfact.value
    one = [1] + [0] * (n - 1)
    for ell, _ in gfact.factors:
        if _fq_poly_powmod(fq, x, g // ell, mod) == one:
            return False
    return True
