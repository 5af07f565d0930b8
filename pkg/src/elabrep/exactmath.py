"""Exact arithmetic in GF(p^e) and dense linear algebra over it.

Field elements are encoded as integers ``c0 + c1*p + ... + c_{e-1}*p^(e-1)``
where ``c0 + c1*t + ...`` is the polynomial-basis representative modulo the
defining polynomial.  Matrices are numpy ``int64`` arrays of such codes.
Row reduction runs in numba-compiled loops over addition/multiplication
tables; products go through per-coefficient integer planes and BLAS.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numba import njit

__all__ = [
    "FieldSpec",
    "FieldElement",
    "Field",
    "MatrixFF",
    "default_poly",
    "is_prime",
    "fe_arith",
    "rref",
    "kernel",
    "image",
    "solve",
    "kronecker",
]

MAX_TABLE_ORDER = 1024
MAX_FIELD_ORDER = 1 << 20

# (p, e) -> defining polynomial, coefficients low to high
DEFAULT_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 1, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (2, 3, 0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient tuples low -> high


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _ptrim([x % p for x in a])
    b = _ptrim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _ptrim(a)
    return a


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(poly) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(poly, list(low) + [1], p):
                return False
    return True


def default_poly(p: int, e: int) -> tuple[int, ...]:
    """Shipped defining polynomial for GF(p^e); first irreducible otherwise."""
    if e == 1:
        return (0, 1)
    if (p, e) in DEFAULT_POLYS:
        return DEFAULT_POLYS[(p, e)]
    for low in itertools.product(range(p), repeat=e):
        cand = tuple(reversed(low)) + (1,)
        if cand[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {e} over GF({p})")


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _rref_kernel(M, add, mul, inv, neg, ncols):
    R, C = M.shape
    piv = np.empty(min(R, C) + 1, np.int64)
    r = 0
    for c in range(ncols):
        if r == R:
            break
        pr = -1
        for i in range(r, R):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(C):
                tmp = M[r, j]
                M[r, j] = M[pr, j]
                M[pr, j] = tmp
        iv = inv[M[r, c]]
        if iv != 1:
            for j in range(c, C):
                M[r, j] = mul[iv, M[r, j]]
        nz = np.empty(C - c, np.int64)
        nnz = 0
        for j in range(c, C):
            if M[r, j] != 0:
                nz[nnz] = j
                nnz += 1
        for i in range(R):
            if i != r:
                a = M[i, c]
                if a != 0:
                    f = neg[a]
                    for kk in range(nnz):
                        j = nz[kk]
                        M[i, j] = add[M[i, j], mul[f, M[r, j]]]
        piv[r] = c
        r += 1
    return piv[:r].copy()


@njit(cache=True)
def _charpoly_kernel(A, add, mul, inv, neg):
    """Characteristic polynomial via Hessenberg reduction (low -> high coeffs)."""
    n = A.shape[0]
    H = A.copy()
    for j in range(n - 2):
        pr = -1
        for i in range(j + 1, n):
            if H[i, j] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != j + 1:
            for k in range(n):
                tmp = H[pr, k]
                H[pr, k] = H[j + 1, k]
                H[j + 1, k] = tmp
            for k in range(n):
                tmp = H[k, pr]
                H[k, pr] = H[k, j + 1]
                H[k, j + 1] = tmp
        ip = inv[H[j + 1, j]]
        for i in range(j + 2, n):
            if H[i, j] != 0:
                f = mul[H[i, j], ip]
                nf = neg[f]
                for k in range(n):
                    H[i, k] = add[H[i, k], mul[nf, H[j + 1, k]]]
                for k in range(n):
                    H[k, j + 1] = add[H[k, j + 1], mul[f, H[k, i]]]
    # p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik prod_{m=i+1..k} h_{m,m-1} p_i
    P = np.zeros((n + 1, n + 1), np.int64)
    P[0, 0] = 1
    for k in range(n):
        for d in range(k + 1):
            P[k + 1, d + 1] = add[P[k + 1, d + 1], P[k, d]]
            P[k + 1, d] = add[P[k + 1, d], mul[neg[H[k, k]], P[k, d]]]
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = mul[prod, H[i + 1, i]]
            if prod == 0:
                break
            c = mul[H[i, k], prod]
            if c != 0:
                nc = neg[c]
                for d in range(i + 1):
                    P[k + 1, d] = add[P[k + 1, d], mul[nc, P[i, d]]]
    return P[n].copy()


# ---------------------------------------------------------------------------
# field specification and elements


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e) presented as GF(p)[t]/(poly)."""

    p: int
    e: int = 1
    poly: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError("extension degree must be >= 1")
        if self.p**self.e > MAX_FIELD_ORDER:
            raise ValueError("field order exceeds 2^20")
        poly = tuple(int(c) % self.p for c in self.poly) if self.poly else default_poly(self.p, self.e)
        if len(poly) != self.e + 1:
            raise ValueError("defining polynomial must have degree e")
        if poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        if not _is_irreducible(poly, self.p):
            raise ValueError(f"{poly} is reducible over GF({self.p})")
        object.__setattr__(self, "poly", poly)

    @classmethod
    def gf(cls, p: int, e: int = 1, poly: Sequence[int] | None = None) -> "FieldSpec":
        return cls(p, e, tuple(poly) if poly else ())

    @property
    def order(self) -> int:
        return self.p**self.e

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            v = int(value)
            if not 0 <= v < self.order:
                raise ValueError(f"code {v} out of range for GF({self.order})")
            return FieldElement(self, v)
        coeffs = list(value)
        red = _pmod(coeffs, self.poly, self.p) if len(coeffs) > self.e else [c % self.p for c in coeffs]
        return FieldElement(self, self._encode(red))

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _decode(self, v: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The class of t (equals 1's code p when e > 1)."""
        return self.element([0, 1])

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(self, v) for v in range(self.order))

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "poly": list(self.poly)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), int(d["e"]), tuple(d["poly"]))

    @property
    def arith(self) -> "Field":
        return _field_for(self)

    def __str__(self):
        return f"GF({self.order})"

    # scalar polynomial arithmetic (any order up to 2^20)
    def _add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._encode([x + y for x, y in zip(self._decode(a), self._decode(b))])

    def _neg(self, a: int) -> int:
        return self._encode([-x for x in self._decode(a)])

    def _mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da, db = self._decode(a), self._decode(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._encode(_pmod(prod, self.poly, self.p) if any(prod) else [])

    def _inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + str(self))
        # extended Euclid over GF(p)[t]
        p = self.p
        r0, r1 = list(self.poly), _ptrim(self._decode(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r0[0], p - 2, p)
        return self._encode(_pmod([x * c for x in s0], self.poly, p) if len(s0) > self.e else [x * c for x in s0])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pdivmod(a, b, p):
    a = _ptrim([x % p for x in a])
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _ptrim(a)
    return _ptrim(q), a


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.spec._decode(self.value)

    def _check(self, other) -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.spec.element([int(other)])
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise ValueError(f"mismatched fields {self.spec} and {other.spec}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.spec, self.spec._add(self.value, other.value))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, self.spec._neg(self.value))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.spec, self.spec._mul(self.value, other.value))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec._inv(self.value))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.spec.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{mono}" if (c != 1 or i == 0) else mono)
        return "+".join(reversed(terms)) or "0"


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.spec != b.spec:
        raise ValueError("mismatched field specs")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# array-level arithmetic


class Field:
    """Table-driven vectorised arithmetic for one FieldSpec."""

    def __init__(self, spec: FieldSpec):
        if spec.order > MAX_TABLE_ORDER:
            raise ValueError(f"matrix arithmetic supports fields of order <= {MAX_TABLE_ORDER}")
        self.spec = spec
        self.p, self.e, self.q = spec.p, spec.e, spec.order
        Q = self.q
        digits = np.array([spec._decode(v) for v in range(Q)], dtype=np.int64).reshape(Q, self.e)
        self.digits = digits
        self.pow_p = self.p ** np.arange(self.e, dtype=np.int64)
        self.add_t = ((digits[:, None, :] + digits[None, :, :]) % self.p) @ self.pow_p
        self.neg_t = ((-digits) % self.p) @ self.pow_p
        # t^m mod poly, m < 2e-1
        red = np.zeros((max(2 * self.e - 1, 1), self.e), dtype=np.int64)
        for m in range(red.shape[0]):
            mono = [0] * m + [1]
            r = _pmod(mono, spec.poly, self.p) if m >= self.e else mono
            red[m, : len(r)] = r
        self.red = red
        codes = np.arange(Q, dtype=np.int64)
        self.mul_t = self._mul_planes(codes[:, None], codes[None, :])
        inv = np.zeros(Q, dtype=np.int64)
        for a in range(1, Q):
            inv[a] = int(np.nonzero(self.mul_t[a] == 1)[0][0])
        self.inv_t = inv

    # -- elementwise
    def _mul_planes(self, a, b):
        da, db = self.digits[a], self.digits[b]
        out = np.zeros(np.broadcast(a, b).shape + (self.e,), dtype=np.int64)
        for i in range(self.e):
            for j in range(self.e):
                out += (da[..., i] * db[..., j])[..., None] * self.red[i + j]
        return (out % self.p) @ self.pow_p

    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.add_t[a, self.neg_t[b]]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def inv(self, a):
        return self.inv_t[a]

    def power(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = int(self.mul_t[out, a])
        return out

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    # -- matrices
    def zeros(self, r, c=None):
        return np.zeros((r, r if c is None else c), dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if A.size == 0 or B.size == 0:
            return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        if self.e == 1:
            return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % self.p
        Ad = [self.digits[A, i].astype(np.float64) for i in range(self.e)]
        Bd = [self.digits[B, i].astype(np.float64) for i in range(self.e)]
        acc = np.zeros(A.shape[:-1] + B.shape[1:] + (self.e,), dtype=np.int64)
        for m in range(2 * self.e - 1):
            cm = None
            for i in range(max(0, m - self.e + 1), min(m, self.e - 1) + 1):
                term = Ad[i] @ Bd[m - i]
                cm = term if cm is None else cm + term
            cm = np.rint(cm).astype(np.int64) % self.p
            acc += cm[..., None] * self.red[m]
        return (acc % self.p) @ self.pow_p

    def lincomb(self, coeffs, mats):
        """sum_k coeffs[..., k] * mats[k] for a stack of matrices."""
        mats = np.asarray(mats, dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=np.int64)
        flat = mats.reshape(mats.shape[0], -1)
        out = self.matmul(coeffs.reshape(-1, mats.shape[0]), flat)
        return out.reshape(coeffs.shape[:-1] + mats.shape[1:])

    def scale(self, c, A):
        return self.mul_t[c, A]

    def kron(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = self.mul_t[A[:, None, :, None], B[None, :, None, :]]
        return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])

    def block_diag(self, *blocks):
        r = sum(b.shape[0] for b in blocks)
        c = sum(b.shape[1] for b in blocks)
        out = np.zeros((r, c), dtype=np.int64)
        i = j = 0
        for b in blocks:
            out[i : i + b.shape[0], j : j + b.shape[1]] = b
            i += b.shape[0]
            j += b.shape[1]
        return out

    def rref(self, A, ncols=None):
        M = np.array(A, dtype=np.int64, copy=True)
        if M.ndim != 2:
            raise ValueError("rref expects a 2-d array")
        if M.size == 0:
            return M, np.zeros(0, dtype=np.int64)
        nc = M.shape[1] if ncols is None else ncols
        piv = _rref_kernel(M, self.add_t, self.mul_t, self.inv_t, self.neg_t, nc)
        return M, piv

    def rank(self, A) -> int:
        A = np.asarray(A)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def kernel(self, A):
        """Right kernel as columns of an (ncols x nullity) array."""
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[1]
        if A.shape[0] == 0:
            return np.eye(n, dtype=np.int64)
        R, piv = self.rref(A)
        free = np.setdiff1d(np.arange(n), piv)
        K = np.zeros((n, len(free)), dtype=np.int64)
        if len(free):
            K[free, np.arange(len(free))] = 1
            if len(piv):
                K[piv, :] = self.neg_t[R[: len(piv)][:, free]]
        return K

    def solve(self, A, b):
        """One solution x of A x = b (b may be a matrix) or None."""
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vec = b.ndim == 1
        B = b[:, None] if vec else b
        if A.shape[0] != B.shape[0]:
            raise ValueError("dimension mismatch in solve")
        aug = np.concatenate([A, B], axis=1)
        R, piv = self.rref(aug, ncols=A.shape[1])
        r = len(piv)
        if np.any(R[r:, A.shape[1] :]):
            return None
        X = np.zeros((A.shape[1], B.shape[1]), dtype=np.int64)
        X[piv] = R[:r, A.shape[1] :]
        return X[:, 0] if vec else X

    def image(self, A):
        """Column-space basis (columns, reduced)."""
        A = np.asarray(A, dtype=np.int64)
        if A.size == 0:
            return np.zeros((A.shape[0], 0), dtype=np.int64)
        R, piv = self.rref(A.T)
        return R[: len(piv)].T.copy()

    def row_basis(self, A):
        R, piv = self.rref(A)
        return R[: len(piv)].copy()

    def inverse(self, A):
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("inverse of non-square matrix")
        R, piv = self.rref(np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1), ncols=n)
        if len(piv) < n:
            raise ZeroDivisionError("singular matrix")
        return R[:, n:].copy()

    def mat_power(self, A, k: int):
        out = np.eye(A.shape[0], dtype=np.int64)
        base = np.asarray(A, dtype=np.int64)
        while k:
            if k & 1:
                out = self.matmul(out, base)
            k >>= 1
            if k:
                base = self.matmul(base, base)
        return out

    def charpoly(self, A):
        A = np.asarray(A, dtype=np.int64)
        return _charpoly_kernel(A, self.add_t, self.mul_t, self.inv_t, self.neg_t)

    def poly_eval(self, coeffs, x: int) -> int:
        acc = 0
        for c in coeffs[::-1]:
            acc = int(self.add_t[self.mul_t[acc, x], c])
        return acc

    def random(self, rng: np.random.Generator, shape):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def sub_mat(self, A, B):
        return self.add_t[A, self.neg_t[B]]

    def add_mat(self, A, B):
        return self.add_t[A, B]


@functools.lru_cache(maxsize=None)
def _field_for(spec: FieldSpec) -> Field:
    return Field(spec)


# ---------------------------------------------------------------------------
# matrices


class MatrixFF:
    """Immutable dense matrix over a FieldSpec."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("MatrixFF needs a 2-d array")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise ValueError("entry codes out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, *_):
        raise AttributeError("MatrixFF is immutable")

    @classmethod
    def _wrap(cls, field: FieldSpec, arr) -> "MatrixFF":
        obj = object.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "data", arr)
        return obj

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "MatrixFF":
        def code(x):
            if isinstance(x, FieldElement):
                if x.spec != field:
                    raise ValueError("entries must share one FieldSpec")
                return x.value
            if isinstance(x, (list, tuple)):
                return field.element(x).value
            return int(x) % field.p

        return cls(field, [[code(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixFF":
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, r: int, c: int) -> "MatrixFF":
        return cls._wrap(field, np.zeros((r, c), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, int(self.data[i, j]))

    def _same(self, other: "MatrixFF"):
        if not isinstance(other, MatrixFF):
            raise TypeError("expected MatrixFF")
        if other.field != self.field:
            raise ValueError("mismatched field specs")

    def __matmul__(self, other: "MatrixFF") -> "MatrixFF":
        self._same(other)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return MatrixFF._wrap(self.field, self.field.arith.matmul(self.data, other.data))

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return MatrixFF._wrap(self.field, self.field.arith.add_mat(self.data, other.data))

    def __sub__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return MatrixFF._wrap(self.field, self.field.arith.sub_mat(self.data, other.data))

    def __neg__(self):
        return MatrixFF._wrap(self.field, self.field.arith.neg(self.data))

    def scale(self, c: FieldElement) -> "MatrixFF":
        return MatrixFF._wrap(self.field, self.field.arith.scale(c.value, self.data))

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFF)
            and other.field == self.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    @property
    def T(self) -> "MatrixFF":
        return MatrixFF._wrap(self.field, self.data.T.copy())

    def rref(self):
        R, piv = self.field.arith.rref(self.data)
        return MatrixFF._wrap(self.field, R), len(piv), [int(c) for c in piv]

    def rank(self) -> int:
        return self.field.arith.rank(self.data)

    def kernel(self) -> list["MatrixFF"]:
        K = self.field.arith.kernel(self.data)
        return [MatrixFF._wrap(self.field, K[:, i].copy()[:, None]) for i in range(K.shape[1])]

    def inverse(self) -> "MatrixFF":
        return MatrixFF._wrap(self.field, self.field.arith.inverse(self.data))

    def power(self, k: int) -> "MatrixFF":
        return MatrixFF._wrap(self.field, self.field.arith.mat_power(self.data, k))

    def to_list(self) -> list[list[int]]:
        """Row-major list of entries, each entry as its polynomial coefficient list."""
        return [[self.field._decode(int(x)) for x in row] for row in self.data]

    def to_codes(self) -> list[list[int]]:
        return self.data.tolist()

    @classmethod
    def from_list(cls, field: FieldSpec, rows) -> "MatrixFF":
        return cls(field, [[field.element(list(c)).value for c in row] for row in rows]) if rows else cls.zeros(field, 0, 0)

    def __repr__(self):
        return f"MatrixFF({self.field}, {self.rows}x{self.cols})"


def _as_matrix(m) -> MatrixFF:
    if not isinstance(m, MatrixFF):
        raise TypeError("expected MatrixFF")
    return m


def rref(m: MatrixFF):
    """Return (reduced row echelon form, rank, pivot columns)."""
    return _as_matrix(m).rref()


def kernel(m: MatrixFF) -> list[MatrixFF]:
    """Basis of the right kernel as column vectors."""
    return _as_matrix(m).kernel()


def image(m: MatrixFF) -> list[MatrixFF]:
    m = _as_matrix(m)
    B = m.field.arith.image(m.data)
    return [MatrixFF._wrap(m.field, B[:, i].copy()[:, None]) for i in range(B.shape[1])]


def solve(m: MatrixFF, rhs: MatrixFF) -> MatrixFF | None:
    m = _as_matrix(m)
    rhs = _as_matrix(rhs)
    if rhs.field != m.field:
        raise ValueError("mismatched field specs")
    if rhs.rows != m.rows:
        raise ValueError("dimension mismatch")
    x = m.field.arith.solve(m.data, rhs.data)
    return None if x is None else MatrixFF._wrap(m.field, x)


def kronecker(a: MatrixFF, b: MatrixFF) -> MatrixFF:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.field != b.field:
        raise ValueError("mismatched field specs")
    return MatrixFF._wrap(a.field, a.field.arith.kron(a.data, b.data))
