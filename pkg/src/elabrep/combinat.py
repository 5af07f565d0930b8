"""Binomial coefficients modulo p and the combinatorial identities used by
the module constructions.

``binom_mod_p`` is computed digit by digit in base p (Lucas).  The identity
checks evaluate both sides exactly and compare them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

__all__ = [
    "PadicDigits",
    "binom",
    "binom_mod_p",
    "prime_power_parts",
    "check_signed_reflection",
    "check_absorption",
    "check_vandermonde",
    "signed_reflection_suite",
    "absorption_suite",
    "vandermonde_suite",
    "pascal_rows",
]


@dataclass(frozen=True)
class PadicDigits:
    """Base-p digits of a nonnegative integer, least significant first."""

    value: int
    base: int
    digits: tuple[int, ...]

    @classmethod
    def of(cls, value: int, base: int) -> "PadicDigits":
        if value < 0:
            raise ValueError("value must be nonnegative")
        if base < 2:
            raise ValueError("base must be at least 2")
        digits = []
        v = value
        while v:
            v, r = divmod(v, base)
            digits.append(r)
        return cls(value, base, tuple(digits))

    def digit(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0


def binom(a: int, b: int) -> int:
    """Integer binomial with C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


@functools.lru_cache(maxsize=1 << 16)
def binom_mod_p(a: int, b: int, p: int) -> int:
    """C(a, b) mod p as a product of digit binomials."""
    if a < 0 or b < 0:
        raise ValueError("binom_mod_p needs nonnegative arguments")
    if b > a:
        return 0
    result = 1
    while a or b:
        a, ai = divmod(a, p)
        b, bi = divmod(b, p)
        if bi > ai:
            return 0
        result = result * comb(ai, bi) % p
    return result


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            r = q
            while r % p == 0:
                r //= p
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p
    raise ValueError(f"{q} is not a prime power")


def prime_power_parts(q: int) -> tuple[int, int]:
    """(p, n) with q = p^n; raises for non prime powers."""
    p = _prime_of(q)
    n, r = 0, q
    while r > 1:
        r //= p
        n += 1
    return p, n


def check_signed_reflection(q: int, k: int, j: int) -> bool:
    """C(q-1-k+j, j) == (-1)^j C(k, j) mod p for j <= k < q-1."""
    p = _prime_of(q)
    if not (0 <= j <= k < q - 1):
        raise ValueError(f"need 0 <= j <= k < q-1, got j={j}, k={k}, q={q}")
    lhs = binom_mod_p(q - 1 - k + j, j, p)
    rhs = ((-1) ** j * binom_mod_p(k, j, p)) % p
    return lhs == rhs


def check_absorption(k: int, l: int) -> bool:
    """l * C(k, l) == k * C(k-1, l-1) over the integers."""
    if k < 0 or l < 0:
        raise ValueError("absorption identity needs nonnegative k, l")
    return l * binom(k, l) == k * binom(k - 1, l - 1)


def check_vandermonde(i: int, s: int, t: int) -> bool:
    """sum_{j+k=i} C(t, j) C(s, k) == C(s+t, i)."""
    if min(i, s, t) < 0:
        raise ValueError("Vandermonde identity needs nonnegative arguments")
    return sum(binom(t, j) * binom(s, i - j) for j in range(i + 1)) == binom(s + t, i)


def signed_reflection_suite(q: int) -> tuple[int, list[tuple[int, int]]]:
    """Run the reflection identity over all j <= k < q-1; return (count, failures)."""
    failures = []
    count = 0
    for k in range(q - 1):
        for j in range(k + 1):
            count += 1
            if not check_signed_reflection(q, k, j):
                failures.append((k, j))
    return count, failures


def absorption_suite(limit: int) -> tuple[int, list[tuple[int, int]]]:
    failures = [(k, l) for k in range(limit + 1) for l in range(k + 1) if not check_absorption(k, l)]
    return (limit + 1) * (limit + 2) // 2, failures


def pascal_rows(n: int) -> list[list[int]]:
    """Rows 0..n of Pascal's triangle by the additive recurrence (exact integers)."""
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, len(prev))] + [1])
    return rows


def vandermonde_suite(limit: int) -> tuple[int, list[tuple[int, int, int]]]:
    """Check every (i, s, t) <= limit; one exact convolution per (s, t)."""
    rows = pascal_rows(2 * limit)
    failures = []
    for s in range(limit + 1):
        rs = rows[s]
        for t in range(limit + 1):
            rt = rows[t]
            target = rows[s + t]
            for i in range(limit + 1):
                lo, hi = max(0, i - s), min(i, t)
                lhs = sum(rt[j] * rs[i - j] for j in range(lo, hi + 1))
                rhs = target[i] if i <= s + t else 0
                if lhs != rhs:
                    failures.append((i, s, t))
    return (limit + 1) ** 3, failures
