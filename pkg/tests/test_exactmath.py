"""Exact field and matrix arithmetic against independent pure-Python oracles."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elabrep.exactmath import Field, FieldSpec, MatrixFF, default_poly, fe_arith, is_prime, kernel, kronecker, rref, solve

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3), (2, 4)]


# -- oracle: GF(p)[t]/(f) with plain lists, extended Euclid for inverses


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    return _polymod(prod, f, p)


def _polymod(a, f, p):
    a = _trim([x % p for x in a])
    f = _trim(f)
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) >= len(f):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(f)
        for i, x in enumerate(f):
            a[shift + i] = (a[shift + i] - c * x) % p
        a = _trim(a)
    return a


def _polydivmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - c * x) % p
        a = _trim(a)
    return _trim(q), a


def _polysub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _polyinv(a, f, p):
    """Extended Euclid: s with s*a = 1 mod f."""
    r0, r1 = _trim(f), _trim(a)
    s0, s1 = [], [1]
    while r1:
        q, r = _polydivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _polysub(s0, _polymulmod(q, s1, [0] * 64 + [1], p), p)
    c = pow(r0[0], p - 2, p)
    return _polymod([x * c for x in s0], f, p)


def _coeffs(code, p, e):
    out = []
    for _ in range(e):
        out.append(code % p)
        code //= p
    return out


def _code(coeffs, p):
    return sum(c * p**i for i, c in enumerate(coeffs))


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplication_table_matches_polynomial_oracle(p, e):
    spec = FieldSpec(p, e)
    F = spec.arith
    f = list(spec.poly)
    for a in range(spec.order):
        for b in range(0, spec.order, max(1, spec.order // 9)):
            want = _code(_polymulmod(_coeffs(a, p, e), _coeffs(b, p, e), f, p), p)
            assert F.mul_t[a, b] == want


@pytest.mark.parametrize("p,e", FIELDS)
def test_inverse_matches_extended_euclid(p, e):
    spec = FieldSpec(p, e)
    F = spec.arith
    for a in range(1, spec.order):
        want = _code(_polyinv(_coeffs(a, p, e), list(spec.poly), p), p)
        assert F.inv_t[a] == want


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, e):
    spec = FieldSpec(p, e)
    F = spec.arith
    q = spec.order
    orders = []
    for a in range(1, q):
        k, x = 1, a
        while x != 1:
            x = int(F.mul_t[x, a])
            k += 1
        orders.append(k)
    assert max(orders) == q - 1
    assert all((q - 1) % k == 0 for k in orders)


@given(st.sampled_from(FIELDS), st.data())
@settings(max_examples=60, deadline=None)
def test_field_element_axioms(pe, data):
    p, e = pe
    spec = FieldSpec(p, e)
    el = st.integers(0, spec.order - 1).map(spec.element)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == spec.zero()
    if a:
        assert a * a.inverse() == spec.one()
        assert fe_arith(b, a, "div") * a == b
    assert a ** (spec.order) == a


def test_fe_arith_rejects_bad_input():
    s4, s9 = FieldSpec(2, 2), FieldSpec(3, 2)
    with pytest.raises(ValueError):
        fe_arith(s4.one(), s9.one(), "add")
    with pytest.raises(ZeroDivisionError):
        fe_arith(s4.one(), s4.zero(), "div")
    with pytest.raises(ValueError):
        fe_arith(s4.one(), s4.one(), "pow")


def test_fieldspec_validation():
    with pytest.raises(ValueError):
        FieldSpec(4, 1)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))  # t^2 + 1 = (t + 1)^2 over GF(2)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 1, 0))
    assert FieldSpec(2, 2).poly == default_poly(2, 2)


def test_is_prime_against_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, n))

    assert [n for n in range(200) if is_prime(n)] == [n for n in range(200) if slow(n)]


def test_alternative_defining_polynomial_gives_isomorphic_field():
    a = FieldSpec(3, 2, (1, 0, 1))  # t^2 + 1
    b = FieldSpec(3, 2, (2, 2, 1))  # t^2 + 2t + 2
    for spec in (a, b):
        F = spec.arith
        assert sorted(F.mul_t[1:, 1:].reshape(-1).tolist()).count(1) == spec.order - 1


# -- matrices


def _gfp_rank_oracle(M, p):
    """Gaussian elimination with Python ints (prime fields only)."""
    M = [list(map(int, row)) for row in M]
    rank, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], p - 2, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c] % p:
                f = M[r][c]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_matches_integer_elimination(p):
    F = FieldSpec(p).arith
    rng = np.random.default_rng(p)
    for _ in range(20):
        r, c = rng.integers(1, 12, size=2)
        k = rng.integers(1, min(r, c) + 1)
        A = F.matmul(rng.integers(0, p, (r, k)), rng.integers(0, p, (k, c)))
        assert F.rank(A) == _gfp_rank_oracle(A, p)


@given(st.sampled_from(FIELDS), st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_kernel_image_and_rank_nullity(pe, r, c, seed):
    F = FieldSpec(*pe).arith
    rng = np.random.default_rng(seed)
    A = F.random(rng, (r, c))
    K = F.kernel(A)
    assert K.shape == (c, c - F.rank(A))
    assert not np.any(F.matmul(A, K))
    assert F.rank(K) == K.shape[1]
    assert F.image(A).shape[1] == F.rank(A)


@given(st.sampled_from(FIELDS), st.integers(1, 8), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_inverse_and_solve(pe, n, seed):
    F = FieldSpec(*pe).arith
    rng = np.random.default_rng(seed)
    A = F.random(rng, (n, n))
    if F.rank(A) < n:
        with pytest.raises(ZeroDivisionError):
            F.inverse(A)
        return
    Ai = F.inverse(A)
    assert np.array_equal(F.matmul(A, Ai), np.eye(n, dtype=np.int64))
    b = F.random(rng, (n, 2))
    x = F.solve(A, b)
    assert np.array_equal(F.matmul(A, x), b)


def test_solve_reports_inconsistent_system():
    F = FieldSpec(3).arith
    A = np.array([[1, 1], [1, 1]])
    assert F.solve(A, np.array([1, 2])) is None


def test_charpoly_annihilates_matrix():
    F = FieldSpec(3, 2).arith
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        A = F.random(rng, (n, n))
        cp = F.charpoly(A)
        acc = np.zeros((n, n), dtype=np.int64)
        for c in cp[::-1]:
            acc = F.add_mat(F.matmul(acc, A), F.scale(int(c), np.eye(n, dtype=np.int64)))
        assert not np.any(acc)


def test_matrixff_wrapper_operations():
    spec = FieldSpec(2, 2)
    a = MatrixFF(spec, [[1, 2], [0, 3]])
    i2 = MatrixFF.identity(spec, 2)
    assert a @ i2 == a
    assert a - a == MatrixFF.zeros(spec, 2, 2)
    assert (a @ a.inverse()) == i2
    _, r, piv = rref(a)
    assert r == 2 and piv == [0, 1]
    assert kernel(MatrixFF(spec, [[1, 1], [1, 1]]))[0].shape == (2, 1)
    assert solve(a, MatrixFF(spec, [[1], [1]])) is not None
    assert kronecker(i2, i2) == MatrixFF.identity(spec, 4)
    with pytest.raises(ValueError):
        a @ MatrixFF.identity(FieldSpec(3, 2), 2)
    with pytest.raises(ValueError):
        MatrixFF(spec, [[4]])


def test_large_field_tables_refused():
    with pytest.raises(ValueError):
        Field(FieldSpec(2, 11))
