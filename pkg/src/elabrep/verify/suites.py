"""Verification suites.

Each suite expands into independent cells.  A cell evaluates module
expressions in a :class:`~elabrep.verify.expr.Context`, runs the relevant
decision procedure and returns a :class:`Case`.  Cells run serially or in a
process pool (``ctx.jobs``); results are collected in cell order, so reports
do not depend on scheduling.

Out-of-range cells (side conditions not met, or dimension above
``ctx.max_dim``) are never evaluated; they are recorded with verdict
``skip`` and a reason.  Cases marked ``evidence`` test statements that are
conjectured rather than proved; they are reported but never affect
:attr:`SuiteResult.passed`.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from .. import combinat as cb
from .. import homalg as ha
from .. import modcore as mc
from .. import stablecat as sc
from .. import witnesses as wt
from .cache import ResultCache
from .expr import Context, eval_expr

log = logging.getLogger(__name__)

__all__ = [
    "Case",
    "SuiteResult",
    "SUITES",
    "run_suite",
    "REFERENCE_Q9",
    "TABLE_INDICES_Q9",
    "label_key",
]

VERDICTS = ("pass", "fail", "undetermined", "skip")
CYCLIC_MIN_BUDGET = 2500


@dataclass
class Case:
    claim: str
    statement: str
    verdict: str
    evidence: bool = False
    artifacts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "statement": self.statement,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "artifacts": self.artifacts,
        }


@dataclass
class SuiteResult:
    name: str
    params: dict
    cases: list[Case]
    elapsed: float = 0.0

    @property
    def gating(self) -> list[Case]:
        return [c for c in self.cases if not c.evidence and c.verdict != "skip"]

    @property
    def passed(self) -> bool:
        return all(c.verdict == "pass" for c in self.gating)

    def counts(self, evidence: bool | None = None) -> dict[str, int]:
        sel = [c for c in self.cases if evidence is None or c.evidence == evidence]
        out = Counter(c.verdict for c in sel)
        return {v: out.get(v, 0) for v in VERDICTS}

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "suite": self.name,
            # the seed only steers witness searches, so reports leave it out
            "params": {k: v for k, v in self.params.items() if k != "seed"},
            "passed": self.passed,
            "counts": self.counts(evidence=False),
            "evidence_counts": self.counts(evidence=True),
            "cases": [c.to_dict() for c in self.cases],
        }
        if timing:
            d["elapsed_s"] = round(self.elapsed, 3)
        return d


# ---------------------------------------------------------------------------
# helpers


def label_key(lab: str):
    """Sort labels by family and then numerically where possible."""
    digits = "".join(ch if ch.isdigit() else " " for ch in lab).split()
    return (len(lab) - sum(len(d) for d in digits), lab.split("(")[0], [int(d) for d in digits], lab)


def _sorted(labels) -> list[str]:
    return sorted(labels, key=label_key)


def _skip(claim: str, statement: str, reason: str, evidence: bool = False) -> Case:
    return Case(claim, statement, "skip", evidence, {"reason": reason})


def _decomp(ctx: Context, text: str) -> dict:
    key = f"{text}|seed={ctx.seed}"
    if ctx.cache is not None:
        hit = ctx.cache.get("decompose", ctx, key)
        if hit is not None:
            return hit
    rep = ha.decompose(eval_expr(text, ctx), ctx.seed)
    out = {
        "summands": _sorted(rep.label_multiset().elements()),
        "undetermined": rep.undetermined,
    }
    if ctx.cache is not None:
        ctx.cache.put("decompose", ctx, key, out)
    return out


def _m_module(ctx: Context):
    return eval_expr("M", ctx)


def _mcore(ctx: Context, text: str) -> dict:
    key = f"{text}|seed={ctx.seed}"
    if ctx.cache is not None:
        hit = ctx.cache.get("mcore", ctx, key)
        if hit is not None:
            return hit
    rep = sc.m_core(eval_expr(text, ctx), _m_module(ctx), ctx.seed)
    out = {
        "core": _sorted(rep.labels().elements()),
        "stripped": _sorted(rep.stripped),
        "undetermined": rep.undetermined,
    }
    if ctx.cache is not None:
        ctx.cache.put("mcore", ctx, key, out)
    return out


def _has_unnamed(labels) -> bool:
    return any(lab.startswith("X") for lab in labels)


def _stable_texts(ctx: Context, lhs: list[str], rhs: list[str]) -> tuple[str, list[str], list[str]]:
    """Stable isomorphism relative to M of two direct sums given by part texts."""
    cores_l = [_mcore(ctx, t) for t in lhs]
    cores_r = [_mcore(ctx, t) for t in rhs]
    lab_l = _sorted(x for c in cores_l for x in c["core"])
    lab_r = _sorted(x for c in cores_r for x in c["core"])
    if any(c["undetermined"] for c in cores_l + cores_r):
        return "undetermined", lab_l, lab_r
    if not (_has_unnamed(lab_l) or _has_unnamed(lab_r)):
        verdict = "stably_isomorphic" if lab_l == lab_r else "not"
        return verdict, lab_l, lab_r
    m = _m_module(ctx)
    rep = sc.stable_iso_parts([eval_expr(t, ctx) for t in lhs], [eval_expr(t, ctx) for t in rhs], m, ctx.seed)
    return rep.verdict, lab_l, lab_r


def _verdict(ok: bool | None) -> str:
    return "undetermined" if ok is None else ("pass" if ok else "fail")


def _stable_case(ctx, claim, statement, lhs, rhs, evidence=False, extra=None) -> Case:
    verdict, cl, cr = _stable_texts(ctx, lhs, rhs)
    art = {"lhs": "+".join(lhs) or "0", "rhs": "+".join(rhs) or "0", "lhs_core": cl, "rhs_core": cr, "stable": verdict}
    if extra:
        art.update(extra)
    ok = None if verdict == "undetermined" else verdict == "stably_isomorphic"
    return Case(claim, statement, _verdict(ok), evidence, art)


CELLS: dict[str, Callable[..., Case]] = {}


def _cell(fn):
    CELLS[fn.__name__] = fn
    return fn


# ---------------------------------------------------------------------------
# tensoring with V2, and the witness bases behind it


@_cell
def tv2_split(ctx: Context, i: int) -> Case:
    statement = f"V(2)*V({i}) = V({i + 1}) + V({i - 1})" if i > 1 else "V(2)*V(1) = V(2)"
    if 2 * i > ctx.max_dim:
        return _skip("tensor-v2", statement, f"dim {2 * i} above max_dim")
    d = _decomp(ctx, f"V(2)*V({i})")
    expected = _sorted([f"V({i + 1})"] + ([f"V({i - 1})"] if i > 1 else []))
    ok = d["summands"] == expected and d["undetermined"] == 0
    if d["undetermined"]:
        ok = None
    return Case("tensor-v2", statement, _verdict(ok), artifacts={"summands": d["summands"], "expected": expected})


@_cell
def tv2_indecomposable(ctx: Context) -> Case:
    p = ctx.p
    statement = f"V(2)*V({p}) is indecomposable"
    a = eval_expr(f"V(2)*V({p})", ctx)
    ok, info = ha.is_indecomposable(a, ctx.seed)
    art: dict = {"dim": a.dim}
    if ok:
        art["certificate"] = info.to_dict()
    elif ok is False:
        art["split_dims"] = list(info.dims)
    # every summand of V2 (x) Vp has dimension divisible by p; a single summand of dim 2p is consistent
    art["dim_divisible_by_p"] = a.dim % p == 0
    wy = wt.witness_Y(p, ctx.group, ctx.seed)
    art["submodule_V(p+1)_embeds"] = wy.passed
    good = ok and art["dim_divisible_by_p"] and wy.passed
    return Case("tensor-v2-indecomposable", statement, _verdict(None if ok is None else bool(good)), artifacts=art)


@_cell
def tv2_cyclic_top(ctx: Context) -> Case:
    p = ctx.p
    statement = f"V(2)*V({p}) = 2 V({p}) for a cyclic group"
    d = _decomp(ctx, f"V(2)*V({p})")
    ok = d["summands"] == [f"V({p})", f"V({p})"]
    return Case("tensor-v2", statement, _verdict(ok), artifacts=d)


@_cell
def witness_xy(ctx: Context, m: int) -> Case:
    g = ctx.group
    p = ctx.p
    statement = f"V(2)*V({m}): Y = V({m + 1}) always, and X + Y is everything iff p does not divide m"
    if 2 * m > ctx.max_dim:
        return _skip("witness-xy", statement, "dimension above max_dim")
    wy = wt.witness_Y(m, g, ctx.seed)
    wx = wt.witness_X(m, g, ctx.seed)
    rk, full = wt.xy_span_rank(m, g)
    spans = rk == full
    ok = wy.passed and wx.extra.get("pattern_holds", False) and spans == (m % p != 0)
    if m % p:
        ok = ok and wx.passed
    art = {
        "Y": wy.to_dict(),
        "X": wx.to_dict(),
        "rank_X_plus_Y": rk,
        "ambient_dim": full,
    }
    return Case("witness-xy", statement, _verdict(ok), artifacts=art)


def suite_tensor_v2(ctx: Context) -> list[tuple[str, dict]]:
    q, p = ctx.q, ctx.p
    cells: list[tuple[str, dict]] = [("tv2_split", {"i": i}) for i in range(1, q) if i % p]
    if ctx.n > 1:
        cells.append(("tv2_indecomposable", {}))
        cells.extend(("witness_xy", {"m": m}) for m in range(1, q))
    else:
        cells.append(("tv2_cyclic_top", {}))
    return cells


# ---------------------------------------------------------------------------
# Heller shift of V_m


@_cell
def heller_shift(ctx: Context, m: int) -> Case:
    q = ctx.q
    statement = f"O(V({m})) = Vd({q - m})"
    ws = wt.witness_shift(m, ctx.group, ctx.seed)
    om = eval_expr(f"O(V({m}))", ctx)
    iso = ha.is_isomorphic(om, eval_expr(f"Vd({q - m})", ctx), ctx.seed)
    art = {"witness": ws.to_dict(), "iso": iso.verdict, "iso_certificate": iso.certificate, "dim": om.dim}
    ok = None if iso.verdict == "undetermined" else (ws.passed and iso.verdict == "yes")
    return Case("heller-shift", statement, _verdict(ok), artifacts=art)


def suite_shift(ctx: Context) -> list[tuple[str, dict]]:
    return [("heller_shift", {"m": m}) for m in range(1, ctx.q)]


# ---------------------------------------------------------------------------
# stable tensor formulas relative to M


def _expected_sum(i: int, j: int, k: int) -> list[str]:
    """Parts V(i+j-(2l-1)) for l = 1..k."""
    return [f"V({j + i - (2 * l - 1)})" for l in range(1, k + 1)]


@_cell
def stable_tensor_small(ctx: Context, i: int, j: int) -> Case:
    p = ctx.p
    jp = j % p
    rhs = _expected_sum(i, j, min(i, jp))
    statement = f"V({i})*V({j}) ~M " + ("+".join(rhs) or "0")
    return _stable_case(ctx, "stable-tensor", statement, [f"V({i})*V({j})"], rhs)


@_cell
def stable_tensor_reflect(ctx: Context, i: int, j: int) -> Case:
    p = ctx.p
    r, jp = divmod(j, p)
    other = p * r + p - jp
    statement = f"V({p - i})*V({j}) ~M V({i})*V({other})"
    return _stable_case(ctx, "stable-tensor-reflect", statement, [f"V({p - i})*V({j})"], [f"V({i})*V({other})"])


def suite_corollaries(ctx: Context) -> list[tuple[str, dict]]:
    p, q = ctx.p, ctx.q
    cells = []
    for i in range(1, p):
        for j in range(1, q):
            if i + j > q:
                continue
            jp = j % p
            if i + jp <= p:
                if i * j <= ctx.max_dim:
                    cells.append(("stable_tensor_small", {"i": i, "j": j}))
                else:
                    log.info("skip stable_tensor_small(%d,%d): dim %d", i, j, i * j)
            if i + jp >= p:
                r = j // p
                big = max((p - i) * j, i * (p * r + p - jp))
                if big <= ctx.max_dim:
                    cells.append(("stable_tensor_reflect", {"i": i, "j": j}))
                else:
                    log.info("skip stable_tensor_reflect(%d,%d): dim %d", i, j, big)
    return cells


# ---------------------------------------------------------------------------
# the q = 9 table of cores


TABLE_INDICES_Q9 = (1, 2, 4, 5, 7, 8)
_T = {
    1: ["V(1)", "V(2)", "V(4)", "V(5)", "V(7)", "V(8)"],
    2: ["V(2)", "V(1)", "V(5)", "V(4)", "V(8)", "V(7)"],
    4: ["V(4)", "V(5)", "V(7)", "V(8)", "Oi(V(5))", "Oi(V(4))"],
    5: ["V(5)", "V(4)", "V(8)", "V(7)", "Oi(V(4))", "Oi(V(5))"],
    7: ["V(7)", "V(8)", "Oi(V(5))", "Oi(V(4))", "Oi(V(8))", "Oi(V(7))"],
    8: ["V(8)", "V(7)", "Oi(V(4))", "Oi(V(5))", "Oi(V(7))", "Oi(V(8))"],
}
REFERENCE_Q9: dict[tuple[int, int], str] = {
    (i, j): _T[i][k] for i in TABLE_INDICES_Q9 for k, j in enumerate(TABLE_INDICES_Q9)
}


@_cell
def table_cell(ctx: Context, i: int, j: int) -> Case:
    ref = REFERENCE_Q9.get((i, j)) if ctx.q == 9 else None
    lhs = f"V({i})*V({j})"
    if ref is None:
        core = _mcore(ctx, lhs)
        ok = None if core["undetermined"] else True
        return Case(
            "table", f"core of {lhs}", _verdict(ok), evidence=True, artifacts={"i": i, "j": j, "lhs_core": core["core"]}
        )
    case = _stable_case(ctx, "table", f"{lhs} ~M {ref}", [lhs], [ref], extra={"i": i, "j": j, "reference": ref})
    return case


def suite_table(ctx: Context) -> list[tuple[str, dict]]:
    idx = [i for i in range(1, ctx.q) if i % ctx.p]
    return [("table_cell", {"i": i, "j": j}) for i in idx for j in idx]


# ---------------------------------------------------------------------------
# cyclic group of order p


def _cyc_decomp_case(ctx, claim, statement, text, expected, budget_dim=None) -> Case:
    if budget_dim is not None and budget_dim > max(ctx.max_dim, CYCLIC_MIN_BUDGET):
        return _skip(claim, statement, f"dim {budget_dim} above budget")
    d = _decomp(ctx, text)
    exp = _sorted(expected)
    return Case(claim, statement, _verdict(d["summands"] == exp), artifacts={"summands": d["summands"], "expected": exp})


def _jordan_formula(i: int, j: int) -> list[str]:
    """V_i (x) V_j for i + j <= p."""
    return [f"V({j + i - (2 * l - 1)})" for l in range(1, min(i, j) + 1)]


def _nonprojective(labels: list[str], p: int) -> list[str]:
    return [x for x in labels if x != f"V({p})"]


@_cell
def cyc_dual(ctx, i):
    return _cyc_decomp_case(ctx, "cyclic-dual", f"Vd({i}) = V({i})", f"Vd({i})", [f"V({i})"])


@_cell
def cyc_heller(ctx, i):
    p = ctx.p
    exp = [f"V({p - i})"] if i < p else []
    return _cyc_decomp_case(ctx, "cyclic-heller", f"O(V({i})) = V({p - i})", f"O(V({i}))", exp)


@_cell
def cyc_symV(ctx, i):
    return _cyc_decomp_case(ctx, "cyclic-sym-V2", f"S({i - 1},V(2)) = V({i})", f"S({i - 1},V(2))", [f"V({i})"])


@_cell
def cyc_tensor_v2(ctx, i):
    p = ctx.p
    exp = [f"V({p})", f"V({p})"] if i == p else [f"V({i + 1})"] + ([f"V({i - 1})"] if i > 1 else [])
    return _cyc_decomp_case(ctx, "cyclic-tensor-v2", f"V({i})*V(2) = " + "+".join(exp), f"V({i})*V(2)", exp)


@_cell
def cyc_tensor_vj(ctx, i, j):
    exp = _jordan_formula(i, j)
    return _cyc_decomp_case(ctx, "cyclic-tensor-vj", f"V({i})*V({j}) = " + "+".join(exp), f"V({i})*V({j})", exp)


@_cell
def cyc_tensor_reflect(ctx, i, j):
    p = ctx.p
    exp = [f"V({p})"] * (p - i - j) + _jordan_formula(i, j)
    statement = f"V({p - i})*V({p - j}) = {p - i - j} V({p}) + V({i})*V({j})"
    return _cyc_decomp_case(ctx, "cyclic-tensor-reflect", statement, f"V({p - i})*V({p - j})", exp)


@_cell
def cyc_projectivity(ctx, i, d):
    p = ctx.p
    dim = comb(i + d, d)
    statement = f"S({d},V({i + 1})) is projective"
    return _cyc_decomp_case(ctx, "cyclic-projectivity", statement, f"S({d},V({i + 1}))", [f"V({p})"] * (dim // p), dim)


@_cell
def cyc_periodicity(ctx, i, d):
    p = ctx.p
    dp = d % p
    statement = f"S({d},V({i + 1})) = S({dp},V({i + 1})) modulo projectives"
    dim = comb(i + d, d)
    if dim > max(ctx.max_dim, CYCLIC_MIN_BUDGET):
        return _skip("cyclic-periodicity", statement, f"dim {dim} above budget")
    a = _nonprojective(_decomp(ctx, f"S({d},V({i + 1}))")["summands"], p)
    b = _nonprojective(_decomp(ctx, f"S({dp},V({i + 1}))")["summands"], p)
    return Case("cyclic-periodicity", statement, _verdict(a == b), artifacts={"lhs": a, "rhs": b})


@_cell
def cyc_symmetry(ctx, i, d):
    p = ctx.p
    statement = f"S({d},V({i + 1})) = S({i},V({d + 1}))" + (f" = L({d},V({i + d}))" if d + i <= p else "")
    dim = comb(i + d, d)
    if dim > max(ctx.max_dim, CYCLIC_MIN_BUDGET):
        return _skip("cyclic-symmetry", statement, f"dim {dim} above budget")
    a = _decomp(ctx, f"S({d},V({i + 1}))")["summands"]
    b = _decomp(ctx, f"S({i},V({d + 1}))")["summands"]
    art = {"S(d,V(i+1))": a, "S(i,V(d+1))": b}
    ok = a == b
    if d + i <= p:
        c = _decomp(ctx, f"L({d},V({i + d}))")["summands"]
        art["L(d,V(i+d))"] = c
        ok = ok and a == c
    return Case("cyclic-symmetry", statement, _verdict(ok), artifacts=art)


def suite_cyclic(ctx: Context) -> list[tuple[str, dict]]:
    """Claims for the cyclic group of order p (the context is taken with n = 1)."""
    p = ctx.p
    cells: list[tuple[str, dict]] = []
    cells += [("cyc_dual", {"i": i}) for i in range(1, p + 1)]
    cells += [("cyc_heller", {"i": i}) for i in range(1, p + 1)]
    cells += [("cyc_symV", {"i": i}) for i in range(1, p + 1)]
    cells += [("cyc_tensor_v2", {"i": i}) for i in range(1, p + 1)]
    for i in range(1, p):
        for j in range(1, p - i + 1):
            cells.append(("cyc_tensor_vj", {"i": i, "j": j}))
            if i < p and j < p:
                cells.append(("cyc_tensor_reflect", {"i": i, "j": j}))
    for i in range(1, p):
        for d in range(1, p):
            if d + i >= p:
                cells.append(("cyc_projectivity", {"i": i, "d": d}))
    for i in range(0, p):
        for d in range(p, 2 * p):
            cells.append(("cyc_periodicity", {"i": i, "d": d}))
    for i in range(1, p):
        for d in range(1, p):
            cells.append(("cyc_symmetry", {"i": i, "d": d}))
    return cells


# ---------------------------------------------------------------------------
# self-duality and the symmetric/exterior power isomorphisms


def _is_p_power(i: int, p: int) -> bool:
    while i % p == 0:
        i //= p
    return i == 1


@_cell
def self_dual(ctx: Context, i: int) -> Case:
    p = ctx.p
    expect = i < p or _is_p_power(i, p)
    statement = f"V({i}) {'=' if expect else '!='} Vd({i})"
    a, b = eval_expr(f"V({i})", ctx), eval_expr(f"Vd({i})", ctx)
    r1 = ha.is_isomorphic(a, b, ctx.seed)
    r2 = ha.is_isomorphic(b, a, ctx.seed)
    art = {
        "forward": r1.verdict,
        "backward": r2.verdict,
        "certificate": r1.certificate,
        "fixed_dims": [mc.fixed_points(a)[0], mc.fixed_points(b)[0]],
    }
    # i < p or a power of p implies self-duality; the converse ("not-self-dual")
    # fails for odd p at proper multiples of q/p, e.g. V(6) at q = 9
    claim = "self-dual" if expect else "not-self-dual"
    if "undetermined" in (r1.verdict, r2.verdict):
        return Case(claim, statement, "undetermined", artifacts=art)
    want = "yes" if expect else "no"
    return Case(claim, statement, _verdict(r1.verdict == r2.verdict == want), artifacts=art)


@_cell
def sym_dual(ctx: Context, d: int, i: int) -> Case:
    lhs, rhs = f"S({d},V({i + 1}))", f"dual(S({i},Vd({d + 1})))"
    statement = f"{lhs} = {rhs}"
    r = ha.is_isomorphic(eval_expr(lhs, ctx), eval_expr(rhs, ctx), ctx.seed)
    ok = None if r.verdict == "undetermined" else r.verdict == "yes"
    return Case("sym-dual-reciprocity", statement, _verdict(ok), artifacts={"iso": r.verdict, "certificate": r.certificate})


@_cell
def sym_dual_corrected(ctx: Context, d: int, i: int) -> Case:
    """Reciprocity with the star on the outside only: S^d(V_{i+1}) = S^i(V_{d+1})^*.

    The variant with V_{d+1}^* inside fails whenever V_{d+1} is not
    self-dual (already at q = 4, d = 2, i = 1); this one holds on every cell
    computed.
    """
    lhs, rhs = f"S({d},V({i + 1}))", f"dual(S({i},V({d + 1})))"
    statement = f"{lhs} = {rhs}"
    r = ha.is_isomorphic(eval_expr(lhs, ctx), eval_expr(rhs, ctx), ctx.seed)
    ok = None if r.verdict == "undetermined" else r.verdict == "yes"
    return Case(
        "sym-dual-reciprocity-corrected", statement, _verdict(ok), artifacts={"iso": r.verdict, "certificate": r.certificate}
    )


@_cell
def sym_ext(ctx: Context, d: int, i: int) -> Case:
    lhs, rhs = f"S({d},V({i + 1}))", f"L({d},V({i + d}))"
    statement = f"{lhs} = {rhs}"
    r = ha.is_isomorphic(eval_expr(lhs, ctx), eval_expr(rhs, ctx), ctx.seed)
    ok = None if r.verdict == "undetermined" else r.verdict == "yes"
    return Case("sym-ext", statement, _verdict(ok), artifacts={"iso": r.verdict, "certificate": r.certificate})


@_cell
def sym_swap_fails_q4(ctx: Context) -> Case:
    """S^1(V_3) = V_3 and S^2(V_2) = V_3^* differ at q = 4; fixed points separate them."""
    statement = "S(1,V(3)) != S(2,V(2)) at q=4, separated by fixed-point dimensions"
    a, b = eval_expr("S(1,V(3))", ctx), eval_expr("S(2,V(2))", ctx)
    iso_b = ha.is_isomorphic(b, eval_expr("Vd(3)", ctx), ctx.seed).verdict
    fa, fb = mc.fixed_points(a)[0], mc.fixed_points(b)[0]
    r = ha.is_isomorphic(a, b, ctx.seed)
    art = {
        "fixed_dim_S(1,V(3))": fa,
        "fixed_dim_S(2,V(2))": fb,
        "fixed_dim_V(3)": mc.fixed_points(eval_expr("V(3)", ctx))[0],
        "fixed_dim_Vd(3)": mc.fixed_points(eval_expr("Vd(3)", ctx))[0],
        "S(2,V(2)) = Vd(3)": iso_b,
        "verdict": r.verdict,
        "certificate": r.certificate,
    }
    ok = r.verdict == "no" and sorted((fa, fb)) == [1, 2] and iso_b == "yes"
    return Case("sym-swap-fails", statement, _verdict(ok), artifacts=art)


def suite_duality(ctx: Context) -> list[tuple[str, dict]]:
    q = ctx.q
    cells: list[tuple[str, dict]] = [("self_dual", {"i": i}) for i in range(1, q + 1)]
    for d in range(1, q):
        for i in range(1, q):
            if comb(i + d, d) > ctx.max_dim:
                continue
            cells.append(("sym_dual", {"d": d, "i": i}))
            cells.append(("sym_dual_corrected", {"d": d, "i": i}))
            if d + i <= q:
                cells.append(("sym_ext", {"d": d, "i": i}))
    if q == 4:
        cells.append(("sym_swap_fails_q4", {}))
    return cells


# ---------------------------------------------------------------------------
# symmetric powers relative to small subgroups


def _chi(ctx: Context, i: int):
    return ctx.group.subgroups(max_order=i)


@_cell
def sym_chi_projective(ctx: Context, i: int, d: int) -> Case:
    statement = f"S({d},V({i + 1})) is projective relative to subgroups of order <= {i}"
    dim = comb(i + d, d)
    if dim > ctx.max_dim:
        return _skip("sym-chi-projective", statement, f"dim {dim} above max_dim")
    a = eval_expr(f"S({d},V({i + 1}))", ctx)
    chi = _chi(ctx, i)
    ok = sc.is_rel_projective_subgroups(a, chi, ctx.seed)
    rep = ha.decompose(a, ctx.seed)
    art = {"dim": dim, "subgroups": len(chi), "summands": _sorted(rep.label_multiset().elements())}
    if rep.undetermined:
        ok = None
    return Case("sym-chi-projective", statement, _verdict(ok), artifacts=art)


@_cell
def sym_chi_period(ctx: Context, i: int, d: int) -> Case:
    q = ctx.q
    dp = d % q
    statement = f"S({d},V({i + 1})) ~chi S({dp},V({i + 1})) for subgroups of order <= {i}"
    dim = comb(i + d, d)
    if dim > ctx.max_dim:
        return _skip("sym-chi-period", statement, f"dim {dim} above max_dim")
    a = eval_expr(f"S({d},V({i + 1}))", ctx)
    b = eval_expr(f"S({dp},V({i + 1}))", ctx)
    rep = sc.stable_iso_chi(a, b, _chi(ctx, i), ctx.seed)
    ok = None if rep.verdict == "undetermined" else rep.verdict == "stably_isomorphic"
    art = {"lhs_core": str(rep.lhs_core), "rhs_core": str(rep.rhs_core), "stable": rep.verdict}
    return Case("sym-chi-period", statement, _verdict(ok), artifacts=art)


RELPROJ_SPOTS_Q9 = {
    "sym_chi_projective": [(3, 6), (3, 7), (3, 8)],
    "sym_chi_period": [(1, 9), (1, 10), (2, 9), (2, 10)],
}


def suite_relproj(ctx: Context) -> list[tuple[str, dict]]:
    q = ctx.q
    cells: list[tuple[str, dict]] = []
    if q <= 4:
        for i in range(1, q):
            for d in range(1, q):
                if i + d >= q:
                    cells.append(("sym_chi_projective", {"i": i, "d": d}))
        for i in range(1, q):
            for d in range(q, 2 * q):
                cells.append(("sym_chi_period", {"i": i, "d": d}))
        return cells
    spots = RELPROJ_SPOTS_Q9 if q == 9 else {
        "sym_chi_projective": [(i, q - i) for i in range(1, q) if comb(q, i) <= ctx.max_dim],
        "sym_chi_period": [(1, q), (1, q + 1)],
    }
    for name, pairs in spots.items():
        cells.extend((name, {"i": i, "d": d}) for i, d in pairs)
    return cells


# ---------------------------------------------------------------------------
# conjectured extensions of the stable tensor formulas


@_cell
def conj_sum(ctx: Context, i: int, j: int) -> Case:
    p = ctx.p
    ip, jp = i % p, j % p
    rhs = _expected_sum(i, j, min(ip, jp))
    proven = min(i, j) < p or (i == j == p + 1 and p > 2)
    statement = f"V({i})*V({j}) ~M " + ("+".join(rhs) or "0")
    return _stable_case(ctx, "conjecture-sum", statement, [f"V({i})*V({j})"], rhs, evidence=not proven)


@_cell
def conj_reflect(ctx: Context, i: int, j: int) -> Case:
    p = ctx.p
    (r, ip), (s, jp) = divmod(i, p), divmod(j, p)
    a, b = p * r + p - ip, p * s + p - jp
    statement = f"V({a})*V({b}) ~M V({i})*V({j})"
    return _stable_case(ctx, "conjecture-reflect", statement, [f"V({a})*V({b})"], [f"V({i})*V({j})"], evidence=True)


@_cell
def square_p_plus_one(ctx: Context) -> Case:
    p = ctx.p
    statement = f"V({p + 1})*V({p + 1}) ~M V({2 * p + 1}), with S(2,V({p + 1})) = Y + Z"
    checks = wt.witness_s2(p, ctx.group, ctx.seed)
    by_name = {c.name.split("(")[0]: c for c in checks}
    case = _stable_case(ctx, "square-p-plus-one", statement, [f"V({p + 1})*V({p + 1})"], [f"V({2 * p + 1})"])
    case.artifacts["witnesses"] = [c.to_dict() for c in checks]
    if case.verdict == "pass" and not (by_name["S2-Y"].passed and by_name["S2-Z"].passed):
        case.verdict = "fail"
    return case


@_cell
def sym_top_explore(ctx: Context, k: int) -> Case:
    p = ctx.p
    statement = f"S({k},V({p + 1})) has a summand V({p * k + 1}) (exploratory)"
    info = wt.explore_sym_top(p, k, ctx.group, ctx.seed)
    ok = None if info["undetermined"] else info["summand"] and info["embedding_pattern_holds"]
    return Case("sym-top-exploratory", statement, _verdict(ok), evidence=True, artifacts=info)


def suite_conjecture(ctx: Context) -> list[tuple[str, dict]]:
    p, q = ctx.p, ctx.q
    cells: list[tuple[str, dict]] = []
    for i in range(1, q):
        for j in range(1, q):
            if i + j > q or (i % p) + (j % p) > p:
                continue
            if i * j <= ctx.max_dim:
                cells.append(("conj_sum", {"i": i, "j": j}))
            a, b = p * (i // p) + p - i % p, p * (j // p) + p - j % p
            if a <= q and b <= q and max(a * b, i * j) <= ctx.max_dim:
                cells.append(("conj_reflect", {"i": i, "j": j}))
    if ctx.n == 2 and p > 2 and (p + 1) ** 2 <= max(ctx.max_dim, 36):
        cells.append(("square_p_plus_one", {}))
    if ctx.n == 2:
        cells.extend(
            ("sym_top_explore", {"k": k}) for k in range(3, p) if comb(p + 1 + k - 1, k) <= min(ctx.max_dim, 200)
        )
    return cells


# ---------------------------------------------------------------------------
# Heller shift laws


LAW_CORPUS_Q9 = [
    "V(1)", "V(2)", "V(3)", "V(4)", "V(5)", "V(6)", "V(7)", "V(8)",
    "Vd(2)", "Vd(4)", "Vd(5)", "Vd(7)",
    "V(2)*V(3)", "V(2)*V(4)", "V(4)*V(4)", "W",
    "S(2,V(3))", "L(2,V(4))", "V(2)+V(5)", "O(V(2))",
]  # fmt: skip


def _law_corpus(ctx: Context) -> list[str]:
    if ctx.q == 9:
        return LAW_CORPUS_Q9
    q = ctx.q
    out = [f"V({m})" for m in range(1, q)] + [f"Vd({m})" for m in range(2, q)] + ["W", "V(2)*V(2)"]
    return out[:20]


@_cell
def law_single(ctx: Context, text: str) -> list[Case]:
    a = eval_expr(text, ctx)
    return [
        Case(f"heller-law-{c.law}", f"law ({c.law}) for {c.module}", _verdict(c.passed), artifacts={"detail": c.detail})
        for c in sc.law_checks_single(a, ctx.seed)
    ]


@_cell
def law_pair(ctx: Context, left: str, right: str) -> list[Case]:
    a, b = eval_expr(left, ctx), eval_expr(right, ctx)
    return [
        Case(f"heller-law-{c.law}", f"law ({c.law}) for {c.module}", _verdict(c.passed), artifacts={"detail": c.detail})
        for c in sc.law_checks_pair(a, b, ctx.seed)
    ]


def suite_laws(ctx: Context, pairs: int = 20) -> list[tuple[str, dict]]:
    corpus = _law_corpus(ctx)
    cells: list[tuple[str, dict]] = [("law_single", {"text": t}) for t in corpus]
    combos = list(itertools.combinations(corpus, 2))[:: max(1, len(corpus) * (len(corpus) - 1) // 2 // pairs)][:pairs]
    cells.extend(("law_pair", {"left": a, "right": b}) for a, b in combos)
    return cells


# ---------------------------------------------------------------------------
# binomial identities


@_cell
def comb_lucas(ctx: Context, p: int, limit: int = 200) -> Case:
    bad = [(a, b) for a in range(limit + 1) for b in range(limit + 1) if cb.binom_mod_p(a, b, p) != comb(a, b) % p]
    return Case("lucas", f"digitwise binomials mod {p} agree with exact binomials for a, b <= {limit}",
                _verdict(not bad), artifacts={"checked": (limit + 1) ** 2, "failures": bad[:10]})


@_cell
def comb_reflection(ctx: Context, q: int) -> Case:
    count, bad = cb.signed_reflection_suite(q)
    return Case("signed-reflection", f"C(q-1-k+j, j) = (-1)^j C(k, j) mod p for j <= k < q-1, q={q}",
                _verdict(not bad), artifacts={"checked": count, "failures": bad[:10]})


@_cell
def comb_absorption(ctx: Context, limit: int = 60) -> Case:
    count, bad = cb.absorption_suite(limit)
    return Case("absorption", f"l C(k, l) = k C(k-1, l-1) for l <= k <= {limit}",
                _verdict(not bad), artifacts={"checked": count, "failures": bad[:10]})


@_cell
def comb_vandermonde(ctx: Context, limit: int = 60) -> Case:
    count, bad = cb.vandermonde_suite(limit)
    return Case("vandermonde", f"sum C(t, j) C(s, k) over j + k = i equals C(s+t, i) for i, s, t <= {limit}",
                _verdict(not bad), artifacts={"checked": count, "failures": bad[:10]})


def suite_combinat(ctx: Context) -> list[tuple[str, dict]]:
    cells: list[tuple[str, dict]] = [("comb_lucas", {"p": p}) for p in (2, 3, 5, 7)]
    cells += [("comb_reflection", {"q": q}) for q in (4, 8, 9, 16, 25, 27)]
    cells += [("comb_absorption", {}), ("comb_vandermonde", {})]
    return cells


# ---------------------------------------------------------------------------
# running


SUITES: dict[str, Callable[[Context], list[tuple[str, dict]]]] = {
    "tensor-v2": suite_tensor_v2,
    "shift": suite_shift,
    "corollaries": suite_corollaries,
    "table": suite_table,
    "cyclic": suite_cyclic,
    "duality": suite_duality,
    "relproj": suite_relproj,
    "conjecture": suite_conjecture,
    "laws": suite_laws,
    "combinat": suite_combinat,
}


def _suite_context(name: str, ctx: Context) -> Context:
    if name == "cyclic" and ctx.n != 1:
        return Context(ctx.p, 1, None, ctx.seed, ctx.max_dim, ctx.m_from, ctx.cache, ctx.jobs)
    return ctx


def _as_cases(out) -> list[Case]:
    return out if isinstance(out, list) else [out]


def _worker(args) -> list[Case]:
    params, cache_dir, fname, kwargs = args
    ctx = Context(**params)
    if cache_dir is not None:
        ctx.cache = ResultCache(cache_dir)
    return _as_cases(CELLS[fname](ctx, **kwargs))


def run_suite(name: str, ctx: Context) -> SuiteResult:
    """Expand a suite into cells, run them (in a pool when ctx.jobs > 1) and collect cases."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ctx = _suite_context(name, ctx)
    t0 = time.perf_counter()
    cells = SUITES[name](ctx)
    log.info("suite %s: %d cells at p=%d n=%d", name, len(cells), ctx.p, ctx.n)
    cases: list[Case] = []
    if ctx.jobs > 1 and len(cells) > 1:
        cache_dir = str(ctx.cache.dir) if ctx.cache is not None else None
        jobs = [(ctx.params(), cache_dir, f, kw) for f, kw in cells]
        with ProcessPoolExecutor(max_workers=ctx.jobs) as ex:
            for out in ex.map(_worker, jobs):
                cases.extend(out)
    else:
        for f, kw in cells:
            cases.extend(_as_cases(CELLS[f](ctx, **kw)))
    for c in cases:
        if c.verdict == "skip":
            log.info("skipped %s: %s (%s)", c.claim, c.statement, c.artifacts.get("reason"))
        elif c.verdict != "pass":
            level = logging.WARNING if c.evidence else logging.ERROR
            log.log(level, "%s %s: %s", c.verdict.upper(), c.claim, c.statement)
    params = ctx.to_dict()
    return SuiteResult(name, params, cases, time.perf_counter() - t0)
