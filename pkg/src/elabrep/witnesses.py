"""Explicit bases from the structural arguments, checked coefficient by
coefficient.

Each check builds a list of vectors inside an ambient module together with a
claimed action pattern, then evaluates both sides exactly at every group
generator and at a few random group elements.  A claimed pattern is a
function ``(alpha, i) -> {target_index: coefficient}`` describing
``alpha * w_i`` in the witness basis.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .combinat import binom_mod_p
from .homalg import decompose, is_isomorphic
from .modcore import (
    GModule,
    GroupSpec,
    build_V,
    sym_basis,
    sym_power,
    submodule,
    tensor,
)

log = logging.getLogger(__name__)

__all__ = [
    "WitnessCheck",
    "check_pattern",
    "pattern_V",
    "pattern_Vdual",
    "witness_Y",
    "witness_X",
    "witness_shift",
    "witness_s2",
    "xy_span_rank",
    "explore_sym_top",
]

Pattern = Callable[[int, int], dict]


@dataclass
class WitnessCheck:
    name: str
    ambient: str
    vectors: np.ndarray  # ambient_dim x k
    claimed: str
    passed: bool
    discrepancy: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient": self.ambient,
            "count": int(self.vectors.shape[1]),
            "claimed": self.claimed,
            "passed": self.passed,
            "discrepancy": self.discrepancy,
            **self.extra,
        }


def pattern_V(group: GroupSpec, k: int) -> Pattern:
    """alpha * w_i = sum_j C(i+j, i) (-alpha)^j w_{i+j}: the V_k pattern."""
    F, p = group.F, group.p

    def pat(alpha: int, i: int) -> dict:
        na = int(F.neg_t[alpha])
        out, pw = {}, 1
        for j in range(k - i):
            c = binom_mod_p(i + j, i, p)
            if c:
                out[i + j] = int(F.mul_t[c, pw])
            pw = int(F.mul_t[pw, na])
        return out

    return pat


def pattern_Vdual(group: GroupSpec, k: int) -> Pattern:
    """alpha * y_i = sum_j C(i, j) alpha^j y_{i-j}: the V_k^* pattern."""
    F, p = group.F, group.p

    def pat(alpha: int, i: int) -> dict:
        out, pw = {}, 1
        for j in range(i + 1):
            c = binom_mod_p(i, j, p)
            if c:
                out[i - j] = int(F.mul_t[c, pw])
            pw = int(F.mul_t[pw, alpha])
        return out

    return pat


def _sample_coords(group: GroupSpec, rng: np.random.Generator, extra: int) -> list[np.ndarray]:
    pts = []
    for i in range(group.n):
        e = np.zeros(group.n, dtype=np.int64)
        e[i] = 1
        pts.append(e)
    for _ in range(extra):
        pts.append(rng.integers(0, group.p, size=group.n))
    return pts


def check_pattern(
    name: str, amb: GModule, vecs: np.ndarray, pattern: Pattern, claimed: str, seed: int = 0, extra: int = 3
) -> WitnessCheck:
    """Compare rho(alpha) w_i against the claimed combination for sampled alpha.

    The check passes when the action pattern holds at every sampled element and
    the vectors are linearly independent, so that their span really has the
    claimed dimension.  ``extra`` records the two facts separately.
    """
    F = amb.F
    g = amb.group
    vecs = np.asarray(vecs, dtype=np.int64)
    rng = np.random.default_rng([seed, 0x317])
    k = vecs.shape[1]
    independent = F.rank(vecs) == k if k else True
    extra_info = {"independent": bool(independent)}
    for c in _sample_coords(g, rng, extra):
        alpha = g.element_code(c)
        rho = amb.element(c)
        got = F.matmul(rho, vecs)
        for i in range(k):
            exp = np.zeros(amb.dim, dtype=np.int64)
            for tgt, coef in pattern(alpha, i).items():
                if tgt >= k:
                    raise ValueError(f"claimed pattern refers to w_{tgt} beyond the witness list")
                exp = F.add_t[exp, F.mul_t[coef, vecs[:, tgt]]]
            if not np.array_equal(exp, got[:, i]):
                disc = {
                    "alpha": [int(x) for x in c],
                    "index": i,
                    "expected": exp.tolist(),
                    "got": got[:, i].tolist(),
                }
                return WitnessCheck(name, amb.label, vecs, claimed, False, disc, {**extra_info, "pattern_holds": False})
    disc = None if independent else {"reason": "witness vectors are linearly dependent"}
    return WitnessCheck(name, amb.label, vecs, claimed, independent, disc, {**extra_info, "pattern_holds": True})


def _check_range(m: int, group: GroupSpec):
    if not 1 <= m < group.q:
        raise ValueError(f"need 1 <= m < q, got m={m}, q={group.q}")


def _yz_vectors(m: int, F) -> tuple:
    """y_i = x0 (x) x_i at index i, z_i = x1 (x) x_i at index m + i."""

    def y(i):
        v = np.zeros(2 * m, dtype=np.int64)
        if 0 <= i < m:
            v[i] = 1
        return v

    def z(i):
        v = np.zeros(2 * m, dtype=np.int64)
        if 0 <= i < m:
            v[m + i] = 1
        return v

    return y, z


def witness_Y(m: int, group: GroupSpec, seed: int = 0) -> WitnessCheck:
    """w_i = y_i + z_{i-1}, i = 0..m, spanning a copy of V_{m+1} in V_2 (x) V_m."""
    _check_range(m, group)
    F = group.F
    amb = tensor(build_V(2, group), build_V(m, group))
    y, z = _yz_vectors(m, F)
    W = np.stack([F.add_t[y(i), z(i - 1)] for i in range(m + 1)], axis=1)
    return check_pattern(f"Y(m={m})", amb, W, pattern_V(group, m + 1), f"V({m + 1})", seed)


def witness_X(m: int, group: GroupSpec, seed: int = 0) -> WitnessCheck:
    """v_i = (i+1) y_{i+1} + (i+1-m) z_i, i = 0..m-2, spanning a copy of V_{m-1}.

    The action pattern holds for every m.  When p divides m the vector
    v_{p-1} vanishes, so the list is dependent and the check reports failure
    with ``pattern_holds`` still true.
    """
    _check_range(m, group)
    F, p = group.F, group.p
    amb = tensor(build_V(2, group), build_V(m, group))
    y, z = _yz_vectors(m, F)
    if m < 2:
        return WitnessCheck(
            f"X(m={m})", amb.label, np.zeros((2 * m, 0), dtype=np.int64), "V(0)", True, None,
            {"independent": True, "pattern_holds": True},
        )
    cols = []
    for i in range(m - 1):
        a = (i + 1) % p
        b = (i + 1 - m) % p
        cols.append(F.add_t[F.mul_t[a, y(i + 1)], F.mul_t[b, z(i)]])
    X = np.stack(cols, axis=1)
    return check_pattern(f"X(m={m})", amb, X, pattern_V(group, m - 1), f"V({m - 1})", seed)


def xy_span_rank(m: int, group: GroupSpec) -> tuple[int, int]:
    """(rank of the stacked X and Y witnesses, ambient dimension 2m)."""
    wy = witness_Y(m, group)
    wx = witness_X(m, group)
    stack = np.concatenate([wx.vectors, wy.vectors], axis=1)
    return group.F.rank(stack), 2 * m


def witness_shift(m: int, group: GroupSpec, seed: int = 0) -> WitnessCheck:
    """y_k = x_{q-1-k} in ker(pi_{q,m}) with the V_{q-m}^* pattern."""
    _check_range(m, group)
    q = group.q
    amb = build_V(q, group)
    k = q - m
    Y = np.zeros((q, k), dtype=np.int64)
    Y[q - 1 - np.arange(k), np.arange(k)] = 1
    return check_pattern(f"shift(m={m})", amb, Y, pattern_Vdual(group, k), f"Vd({k})", seed)


def _s2_index(dim: int) -> dict:
    return {mono: i for i, mono in enumerate(sym_basis(dim, 2))}


def _s2_z(p: int, idx: dict, dim: int, signed: bool) -> np.ndarray:
    """Columns z_i, i = 0..2p, summing x_j x_k over ordered pairs with j + k = i."""
    Z = np.zeros((dim, 2 * p + 1), dtype=np.int64)
    for i in range(2 * p + 1):
        sign = p - 1 if signed and i % 2 else 1
        for j in range(p + 1):
            k = i - j
            if 0 <= k <= p:
                pos = idx[(min(j, k), max(j, k))]
                Z[pos, i] = (Z[pos, i] + sign) % p
    return Z


def witness_s2(p: int, group: GroupSpec, seed: int = 0) -> list[WitnessCheck]:
    """Witnesses inside V_{p+1} and S^2(V_{p+1}) together with the splitting data.

    Returns three checks:

    * ``S2-Y``: y_i = (i+1) x_{i+1}, i = 0..p-2, with the V_{p-1} pattern.
    * ``S2-Z-signed``: z_i = (-1)^i sum_{j+k=i} x_j x_k with the pattern
      alpha z_i = sum_r C(r, i) (-alpha)^{r-i} z_r.  Expanding the action shows
      alpha z_i = sum_r C(r, i) alpha^{r-i} z_r instead, so this check fails
      and its discrepancy is reported.
    * ``S2-Z``: z_i = sum_{j+k=i} x_j x_k, which carries the V_{2p+1} pattern
      exactly.  Both lists span the same subspace Z.  This check also records
      Y cap Z = 0, the dimension count and the two isomorphism types.

    S^2 uses the monomial order of ``sym_basis(p+1, 2)``: x_j x_k with j <= k in
    lexicographic order.  A monomial x_j x_k with j < k arises from two ordered
    pairs and receives coefficient 2; x_j^2 receives 1.
    """
    if p == 2:
        raise ValueError("this construction needs p > 2")
    if group.p != p or group.n != 2:
        raise ValueError("witness_s2 needs a group of order p^2")
    F = group.F
    V = build_V(p + 1, group)
    Yv = np.zeros((p + 1, p - 1), dtype=np.int64)
    for i in range(p - 1):
        Yv[i + 1, i] = (i + 1) % p
    c1 = check_pattern(f"S2-Y(p={p})", V, Yv, pattern_V(group, p - 1), f"V({p - 1})", seed)

    S2 = sym_power(V, 2)
    idx = _s2_index(p + 1)
    Zs = _s2_z(p, idx, S2.dim, signed=True)
    c_signed = check_pattern(
        f"S2-Z-signed(p={p})", S2, Zs, pattern_V(group, 2 * p + 1), f"V({2 * p + 1})", seed
    )
    Z = _s2_z(p, idx, S2.dim, signed=False)
    c2 = check_pattern(f"S2-Z(p={p})", S2, Z, pattern_V(group, 2 * p + 1), f"V({2 * p + 1})", seed)

    Ymon = np.zeros((S2.dim, p * (p - 1) // 2), dtype=np.int64)
    col = 0
    for a in range(1, p):
        for b in range(a, p):
            Ymon[idx[(a, b)], col] = 1
            col += 1
    same_span = F.rank(np.concatenate([Zs, Z], axis=1)) == F.rank(Z)
    rank_sum = F.rank(np.concatenate([Ymon, Z], axis=1))
    direct = rank_sum == Ymon.shape[1] + Z.shape[1] == S2.dim
    ysub = submodule(S2, Ymon, f"Ysub(p={p})")
    y_iso = is_isomorphic(ysub, sym_power(build_V(p - 1, group), 2), seed).verdict == "yes"
    zsub = submodule(S2, Z, f"Zsub(p={p})")
    z_iso = is_isomorphic(zsub, build_V(2 * p + 1, group), seed).verdict == "yes"
    c2.extra.update(
        {
            "dim_Y": int(Ymon.shape[1]),
            "dim_Z": int(Z.shape[1]),
            "dim_S2": int(S2.dim),
            "direct_sum": bool(direct),
            "signed_same_span": bool(same_span),
            "Y_iso_S2_V(p-1)": bool(y_iso),
            "Z_iso_V(2p+1)": bool(z_iso),
        }
    )
    c2.passed = c2.passed and direct and same_span and y_iso and z_iso
    return [c1, c_signed, c2]


def _multinomial_count(mono: tuple[int, ...]) -> int:
    """Number of orderings of a sorted index tuple."""
    out = 1
    total = 0
    for c in Counter(mono).values():
        for t in range(1, c + 1):
            total += 1
            out = out * total // t
    return out


def explore_sym_top(p: int, k: int, group: GroupSpec, seed: int = 0) -> dict:
    """Exploratory look at the top piece of S^k(V_{p+1}) for 2 <= k < p.

    The vectors z_i = sum over ordered k-tuples (j_1, ..., j_k) with
    j_1 + ... + j_k = i of x_{j_1} ... x_{j_k}, for i = 0..pk, are checked
    against the V_{pk+1} pattern (for k = 2 these are the S2-Z vectors).
    Whether that submodule is a direct summand is read off a full
    decomposition.  Nothing here is asserted; the result is reported.
    """
    if not 2 <= k < p:
        raise ValueError("needs 2 <= k < p")
    top = p * k + 1
    if top > group.q:
        raise ValueError(f"V({top}) does not exist for q = {group.q}")
    F = group.F
    V = build_V(p + 1, group)
    S = sym_power(V, k)
    Z = np.zeros((S.dim, top), dtype=np.int64)
    for pos, mono in enumerate(sym_basis(p + 1, k)):
        Z[pos, sum(mono)] = _multinomial_count(mono) % p
    chk = check_pattern(f"Sk-top(p={p},k={k})", S, Z, pattern_V(group, top), f"V({top})", seed)
    rep = decompose(S, seed)
    target = build_V(top, group)
    summand = any(
        leaf.dim == top and is_isomorphic(leaf, target, seed).verdict == "yes" for leaf in rep.leaves
    )
    return {
        "p": p,
        "k": k,
        "dim": int(S.dim),
        "embedding_pattern_holds": bool(chk.passed),
        "rank": int(F.rank(Z)),
        "summand": bool(summand),
        "summands": sorted(rep.label_multiset().elements()),
        "undetermined": rep.undetermined,
    }
