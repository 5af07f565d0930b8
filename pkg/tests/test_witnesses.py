"""Explicit witness bases: exact pattern checks plus an independent span test."""

from __future__ import annotations

import numpy as np
import pytest

from elabrep import modcore as mc
from elabrep import witnesses as wt
from elabrep.homalg import is_isomorphic
from elabrep.modcore import GroupSpec
from elabrep.verify.expr import Context, eval_expr

GROUPS = [(2, 2), (2, 3), (3, 2)]


def _span_module(amb, vecs, label):
    """Submodule spanned by the columns, after checking invariance by rank."""
    F = amb.F
    r = F.rank(vecs)
    for g in amb.gens:
        assert F.rank(np.concatenate([vecs, F.matmul(g, vecs)], axis=1)) == r
    return mc.submodule(amb, F.image(vecs), label)


@pytest.mark.parametrize("p,n", GROUPS)
def test_Y_witness_spans_V_m_plus_1(p, n):
    g = GroupSpec.make(p, n)
    for m in range(1, g.q):
        w = wt.witness_Y(m, g)
        assert w.passed, w.discrepancy
        amb = mc.tensor(mc.build_V(2, g), mc.build_V(m, g))
        sub = _span_module(amb, w.vectors, "Y")
        assert is_isomorphic(sub, mc.build_V(m + 1, g)).verdict == "yes"


@pytest.mark.parametrize("p,n", GROUPS)
def test_X_witness_pattern_and_degeneration(p, n):
    g = GroupSpec.make(p, n)
    for m in range(2, g.q):
        w = wt.witness_X(m, g)
        assert w.extra["pattern_holds"]
        degenerate = m % p == 0 and m >= p + 1
        assert w.passed == (not degenerate), m
        if not degenerate:
            amb = mc.tensor(mc.build_V(2, g), mc.build_V(m, g))
            sub = _span_module(amb, w.vectors, "X")
            assert is_isomorphic(sub, mc.build_V(m - 1, g)).verdict == "yes"


@pytest.mark.parametrize("p,n", GROUPS)
def test_X_and_Y_fill_the_tensor_when_p_does_not_divide_m(p, n):
    g = GroupSpec.make(p, n)
    for m in range(2, g.q):
        r, amb = wt.xy_span_rank(m, g)
        if m % p:
            assert r == amb


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_shift_witness(p, n):
    g = GroupSpec.make(p, n)
    for m in range(1, g.q):
        w = wt.witness_shift(m, g)
        assert w.passed, w.discrepancy
        ker = mc.truncate(g.q, m, g)
        F = g.F
        assert not np.any(F.matmul(ker.matrix, w.vectors))


@pytest.mark.parametrize("p", [3, 5])
def test_symmetric_square_splitting(p):
    g = GroupSpec.make(p, 2)
    y, zs, z = wt.witness_s2(p, g)
    assert y.passed and z.passed
    assert not zs.passed and zs.discrepancy is not None
    ex = z.extra
    assert ex["dim_Y"] + ex["dim_Z"] == ex["dim_S2"] == (p + 1) * (p + 2) // 2
    assert ex["dim_Z"] == 2 * p + 1 and ex["direct_sum"] and ex["signed_same_span"]
    assert ex["Y_iso_S2_V(p-1)"] and ex["Z_iso_V(2p+1)"]


def test_symmetric_square_needs_odd_p():
    with pytest.raises(ValueError):
        wt.witness_s2(2, GroupSpec.make(2, 2))


def test_symmetric_square_independent_route():
    """S^2(V_4) at q = 9 decomposes as S^2(V_2) + V_7 by plain decomposition."""
    ctx = Context(3, 2)
    lhs = eval_expr("S(2,V(4))", ctx)
    rhs = eval_expr("S(2,V(2))+V(7)", ctx)
    assert is_isomorphic(lhs, rhs).verdict == "yes"


def test_check_pattern_reports_discrepancy():
    g = GroupSpec.make(3, 2)
    amb = mc.build_V(4, g)
    vecs = np.eye(4, dtype=np.int64)
    bad = wt.check_pattern("dual-pattern", amb, vecs, wt.pattern_Vdual(g, 4), "Vd(4)")
    assert not bad.passed
    assert set(bad.discrepancy) == {"alpha", "index", "expected", "got"}
    good = wt.check_pattern("V-pattern", amb, vecs, wt.pattern_V(g, 4), "V(4)")
    assert good.passed and good.to_dict()["count"] == 4


def test_out_of_range_rejected():
    g = GroupSpec.make(2, 2)
    with pytest.raises(ValueError):
        wt.witness_Y(4, g)
    with pytest.raises(ValueError):
        wt.witness_shift(0, g)
