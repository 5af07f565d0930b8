"""Binomials mod p and the identities behind the module formulas."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elabrep import combinat as cb


def _factorial_binom(a, b):
    """Big-integer oracle independent of math.comb."""
    if b < 0 or b > a:
        return 0
    return factorial(a) // (factorial(b) * factorial(a - b))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lucas_matches_factorial_oracle(p):
    for a in range(0, 201):
        for b in range(0, 201):
            assert cb.binom_mod_p(a, b, p) == _factorial_binom(a, b) % p


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_lucas_large_arguments(a, b, p):
    if b > a:
        assert cb.binom_mod_p(a, b, p) == 0
    elif a < 3000:
        assert cb.binom_mod_p(a, b, p) == comb(a, b) % p
    else:
        # Kummer: p | C(a, b) iff a base-p digit of b exceeds that of a
        da, db = cb.PadicDigits.of(a, p), cb.PadicDigits.of(b, p)
        carry = any(db.digit(i) > da.digit(i) for i in range(len(da.digits)))
        assert (cb.binom_mod_p(a, b, p) == 0) == carry


def test_binom_edges():
    assert cb.binom(5, -1) == 0
    assert cb.binom(5, 6) == 0
    assert cb.binom(0, 0) == 1
    with pytest.raises(ValueError):
        cb.binom_mod_p(-1, 0, 3)


def test_padic_digits():
    d = cb.PadicDigits.of(100, 3)
    assert d.digits == (1, 0, 2, 0, 1)
    assert sum(x * 3**i for i, x in enumerate(d.digits)) == 100
    assert d.digit(10) == 0
    with pytest.raises(ValueError):
        cb.PadicDigits.of(-1, 3)
    with pytest.raises(ValueError):
        cb.PadicDigits.of(5, 1)


@pytest.mark.parametrize("q,pn", [(4, (2, 2)), (8, (2, 3)), (9, (3, 2)), (25, (5, 2)), (27, (3, 3)), (7, (7, 1))])
def test_prime_power_parts(q, pn):
    assert cb.prime_power_parts(q) == pn


@pytest.mark.parametrize("q", [6, 12, 1])
def test_prime_power_parts_rejects(q):
    with pytest.raises(ValueError):
        cb.prime_power_parts(q)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_signed_reflection_exhaustive(q):
    p = cb.prime_power_parts(q)[0]
    count, bad = cb.signed_reflection_suite(q)
    assert not bad
    assert count == (q - 1) * q // 2
    # independent oracle with exact factorial binomials
    for k in range(q - 1):
        for j in range(k + 1):
            assert _factorial_binom(q - 1 - k + j, j) % p == ((-1) ** j * _factorial_binom(k, j)) % p


def test_signed_reflection_rejects_out_of_range():
    with pytest.raises(ValueError):
        cb.check_signed_reflection(9, 8, 0)


def test_absorption_exhaustive_to_60():
    count, bad = cb.absorption_suite(60)
    assert not bad and count == 61 * 62 // 2
    for k in range(1, 61):
        for l in range(1, k + 1):
            assert Fraction(l * _factorial_binom(k, l), k) == _factorial_binom(k - 1, l - 1)


def test_vandermonde_exhaustive_to_60():
    count, bad = cb.vandermonde_suite(60)
    assert not bad and count == 61**3


def test_pascal_rows_match_factorials():
    rows = cb.pascal_rows(40)
    for n, row in enumerate(rows):
        assert row == [_factorial_binom(n, k) for k in range(n + 1)]


@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_vandermonde_single(i, s, t):
    assert cb.check_vandermonde(i, s, t)


def test_identity_checks_reject_negative_arguments():
    with pytest.raises(ValueError):
        cb.check_absorption(-1, 0)
    with pytest.raises(ValueError):
        cb.check_vandermonde(-1, 0, 0)
