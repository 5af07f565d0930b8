"""Acceptance criteria 1 to 12, one summary line each.

Every criterion records a PASS or FAIL line that is printed in the terminal
summary (see ``conftest.py``).  Tolerances are pinned here: all module
comparisons are exact (label multisets with certified summands and zero
undetermined verdicts), and the only numeric tolerances are wall-clock
budgets.

Two statements cannot be reproduced because they are false as printed:
the literal symmetric-power reciprocity with the dual inside, and the
converse of the self-duality criterion.  They run in full and are marked
``xfail(strict=True)``.  Their FAIL lines are printed alongside, and the
corrected statements are checked green.
"""

from __future__ import annotations

import time
import warnings

import pytest

from elabrep import homalg as ha
from elabrep import modcore as mc
from elabrep import witnesses as wt
from elabrep.modcore import GroupSpec
from elabrep.verify import cli
from elabrep.verify.expr import Context, clear_memo
from elabrep.verify.suites import CELLS, SuiteResult, run_suite

# pinned budgets, seconds
BUDGET_TV2_SMALL = 60.0  # "seconds for q <= 9"
BUDGET_TV2_LARGE = 600.0  # "< 10 min for q = 27"
BUDGET_TABLE = 600.0
BUDGET_CYCLIC = 60.0
BUDGET_COMBINAT = 10.0
DUALITY_MAX_DIM = 120
CONJECTURE_MAX_DIM = 400

GROUPS_TV2 = [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)]


def _ids(groups):
    return [f"q{p ** n}" for p, n in groups]


def _run(name: str, ctx: Context) -> SuiteResult:
    clear_memo()
    res = run_suite(name, ctx)
    clear_memo()
    return res


def _bad(cases) -> list[str]:
    return [f"{c.statement} [{c.verdict}]" for c in cases if c.verdict != "pass"]


def _summary(cases) -> str:
    bad = _bad(cases)
    return f"{len(cases) - len(bad)}/{len(cases)} cells pass" + (f"; failing: {bad[:4]}" if bad else "")


def _cells(ctx: Context, calls) -> list:
    out = []
    for name, kw in calls:
        r = CELLS[name](ctx, **kw)
        out.extend(r if isinstance(r, list) else [r])
    return out


def _slow(groups, big):
    return [pytest.param(p, n, marks=pytest.mark.slow) if p**n in big else (p, n) for p, n in groups]


# 1 -------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", _slow(GROUPS_TV2, {25, 27}), ids=_ids(GROUPS_TV2))
def test_criterion_01_tensor_with_V2(acceptance, p, n):
    q = p**n
    ctx = Context(p, n)
    clear_memo()
    t0 = time.perf_counter()
    cases = _cells(ctx, [("tv2_split", {"i": i}) for i in range(1, q) if i % p])
    elapsed = time.perf_counter() - t0
    clear_memo()
    budget = BUDGET_TV2_SMALL if q <= 9 else BUDGET_TV2_LARGE
    ok = not _bad(cases) and elapsed < budget
    acceptance(1, f"V2 (x) Vi = V(i-1) + V(i+1), q={q}", ok, f"{_summary(cases)}; {elapsed:.1f}s < {budget:.0f}s")
    assert not _bad(cases), _bad(cases)
    assert elapsed < budget


# 2 -------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", _slow(GROUPS_TV2, {25, 27}), ids=_ids(GROUPS_TV2))
def test_criterion_02_V2_Vp_indecomposable(acceptance, p, n):
    g = GroupSpec.make(p, n)
    a = mc.tensor(mc.build_V(2, g), mc.build_V(p, g))
    indec, cert = ha.is_indecomposable(a)
    # sanity: every summand of V2 (x) Vp has dimension divisible by p
    divisible = a.dim % p == 0
    ok = indec is True and cert is not None and divisible
    detail = f"End local (certificate {type(cert).__name__}), dim {a.dim} divisible by p={p}: {divisible}"
    acceptance(2, f"V2 (x) Vp indecomposable, q={g.q}", ok, detail)
    assert indec is True and cert is not None
    assert divisible


# 3 -------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)], ids=_ids([(2, 2), (2, 3), (3, 2)]))
def test_criterion_03_heller_shift(acceptance, p, n):
    res = _run("shift", Context(p, n))
    wit = all(c.artifacts["witness"]["passed"] for c in res.cases)
    iso = all(c.artifacts["iso"] == "yes" for c in res.cases)
    ok = res.passed and wit and iso and len(res.cases) == p**n - 1
    acceptance(3, f"O(V_m) = V_(q-m)^*, q={p ** n}", ok, f"{_summary(res.cases)}; witness {wit}, iso {iso}")
    assert ok, _bad(res.cases)


# 4 -------------------------------------------------------------------------


def test_criterion_04_q9_table(acceptance, tmp_path):
    t0 = time.perf_counter()
    res = _run("table", Context(3, 2))
    elapsed = time.perf_counter() - t0
    texts = []
    for seed in (0, 1, 7):
        out = tmp_path / f"table{seed}.md"
        clear_memo()
        assert cli.main(["table", "--q", "9", "--seed", str(seed), "--out", str(out)]) == 0
        texts.append(out.read_bytes())
    stable = texts[0] == texts[1] == texts[2]
    inverse_cells = sum("Oi(" in c.statement for c in res.cases)
    ok = res.passed and len(res.cases) == 36 and stable and inverse_cells == 12 and elapsed < BUDGET_TABLE
    acceptance(
        4,
        "q=9 table, 36 cells",
        ok,
        f"{_summary(res.cases)}; Oi cells {inverse_cells}; Markdown identical for seeds 0,1,7: {stable}; {elapsed:.1f}s",
    )
    assert res.passed and len(res.cases) == 36, _bad(res.cases)
    assert inverse_cells == 12
    assert stable
    assert elapsed < BUDGET_TABLE


# 5 -------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), pytest.param(5, 2, marks=pytest.mark.slow)], ids=["q4", "q9", "q25"])
def test_criterion_05_stable_tensor_formulas(acceptance, p, n):
    res = _run("corollaries", Context(p, n))
    cases = res.gating
    und = sum(c.verdict == "undetermined" for c in cases)
    ok = res.passed and und == 0 and len(cases) > 0
    scope = "exhaustive" if p**n <= 9 else "budgeted, tensor dim <= 400"
    acceptance(5, f"stable tensor formulas, q={p ** n} ({scope})", ok, _summary(cases))
    assert ok, _bad(cases)


# 6 -------------------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_criterion_06_symmetric_square(acceptance, p):
    g = GroupSpec.make(p, 2)
    y, _signed, z = wt.witness_s2(p, g)
    ex = z.extra
    ctx = Context(p, 2)
    clear_memo()
    stable = CELLS["square_p_plus_one"](ctx)
    clear_memo()
    ok = y.passed and z.passed and ex["Y_iso_S2_V(p-1)"] and ex["Z_iso_V(2p+1)"] and stable.verdict == "pass"
    detail = (
        f"S2(V{p + 1}) = Y + Z with dims {ex['dim_Y']} + {ex['dim_Z']}; "
        f"V{p + 1} (x) V{p + 1} ~M V{2 * p + 1}: {stable.verdict}"
    )
    acceptance(6, f"symmetric square splitting, p={p}", ok, detail)
    assert ok


# 7 -------------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_criterion_07_cyclic(acceptance, p):
    t0 = time.perf_counter()
    res = _run("cyclic", Context(p, 1))
    elapsed = time.perf_counter() - t0
    claims = sorted({c.claim for c in res.cases})
    skipped = sum(c.verdict == "skip" for c in res.cases)
    ok = res.passed and skipped == 0 and elapsed < BUDGET_CYCLIC
    detail = f"{_summary(res.cases)}; {len(claims)} claims; {elapsed:.1f}s"
    if skipped:
        largest = max(int(c.artifacts["reason"].split()[1]) for c in res.cases if c.verdict == "skip")
        detail += f"; {skipped} cells skipped above the dimension budget (largest dim {largest})"
    acceptance(7, f"cyclic group of order {p}", ok, detail)
    assert res.passed, _bad(res.cases)
    assert skipped == 0, f"{skipped} cells above the dimension budget were not run"
    assert elapsed < BUDGET_CYCLIC


# 8 -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def duality_runs():
    return {q: _run("duality", Context(p, 2, max_dim=DUALITY_MAX_DIM)) for p, q in ((2, 4), (3, 9))}


@pytest.mark.parametrize("q", [4, 9])
def test_criterion_08_self_dual_if_direction_and_corrected_reciprocity(acceptance, duality_runs, q):
    res = duality_runs[q]
    keep = {"self-dual", "sym-dual-reciprocity-corrected", "sym-ext", "sym-swap-fails"}
    cases = [c for c in res.cases if c.claim in keep and c.verdict != "skip"]
    fixed = [c for c in cases if c.claim == "sym-swap-fails"]
    ok = not _bad(cases) and (q != 4 or len(fixed) == 1)
    extra = ""
    if fixed:
        a = fixed[0].artifacts
        extra = f"; fixed dims V3 {a['fixed_dim_V(3)']} vs V3^* {a['fixed_dim_Vd(3)']}"
    acceptance(8, f"self-dual (i<p or p-power), corrected reciprocity, exterior form, q={q}", ok, _summary(cases) + extra)
    assert ok, _bad(cases)


@pytest.mark.parametrize(
    "q",
    [
        4,
        pytest.param(
            9,
            marks=pytest.mark.xfail(strict=True, reason="V_6 is also self-dual at q=9"),
        ),
    ],
)
def test_criterion_08_self_dual_pattern_exactly(acceptance, duality_runs, q):
    cases = [c for c in duality_runs[q].cases if c.claim in ("self-dual", "not-self-dual")]
    ok = not _bad(cases)
    acceptance(8, f"self-dual pattern exactly 'i<p or i=p^k', q={q}", ok, _summary(cases), known_false=q == 9)
    assert ok, _bad(cases)


@pytest.mark.xfail(strict=True, reason="printed reciprocity needs V_(d+1) self-dual; fails at q=4 for d=2")
@pytest.mark.parametrize("q", [4, 9])
def test_criterion_08_literal_reciprocity(acceptance, duality_runs, q):
    cases = [c for c in duality_runs[q].cases if c.claim == "sym-dual-reciprocity" and c.verdict != "skip"]
    ok = not _bad(cases)
    acceptance(8, f"literal reciprocity S^d(V_(i+1)) = S^i(V_(d+1)^*)^*, q={q}", ok, _summary(cases), known_false=True)
    assert ok, _bad(cases)


def test_criterion_08_V6_self_dual_counterexample(acceptance, g9):
    a, b = mc.build_V(6, g9), mc.build_V_dual(6, g9)
    r = ha.is_isomorphic(a, b)
    F = a.F
    checked = r.witness is not None and F.rank(r.witness) == 6
    checked = checked and all(
        (F.matmul(r.witness, ga) == F.matmul(gb, r.witness)).all() for ga, gb in zip(a.gens, b.gens)
    )
    acceptance(8, "V6 = V6^* at q=9 (converse counterexample)", r.verdict == "yes" and checked, "invertible intertwiner checked")
    assert r.verdict == "yes" and checked


# 9 -------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2)], ids=["q4", "q9"])
def test_criterion_09_relative_projectivity(acceptance, p, n):
    res = _run("relproj", Context(p, n))
    cases = res.gating
    spots = sorted((c.artifacts.get("dim"), c.statement) for c in cases if c.claim == "sym-chi-projective")
    ok = res.passed and len(cases) > 0
    scope = "exhaustive" if p**n == 4 else "i=3, d in {6,7,8} plus periodicity spots"
    acceptance(9, f"symmetric powers relative to small subgroups, q={p ** n} ({scope})", ok, _summary(cases))
    assert ok, _bad(cases)
    if p**n == 9:
        assert len(spots) == 3


# 10 ------------------------------------------------------------------------


def test_criterion_10_combinatorics(acceptance):
    t0 = time.perf_counter()
    res = _run("combinat", Context(2, 1))
    elapsed = time.perf_counter() - t0
    ok = res.passed and elapsed < BUDGET_COMBINAT
    acceptance(10, "Lucas, signed reflection, absorption, Vandermonde", ok, f"{_summary(res.cases)}; {elapsed:.1f}s")
    assert res.passed, _bad(res.cases)
    assert elapsed < BUDGET_COMBINAT


# 11 ------------------------------------------------------------------------


def test_criterion_11_heller_laws(acceptance):
    res = _run("laws", Context(3, 2))
    singles = sum(1 for c in res.cases if c.claim == "heller-law-iii")
    laws = sorted({c.claim for c in res.cases})
    ok = res.passed and singles == 20 and len(laws) == 4
    acceptance(11, "Heller laws (i)-(iv), 20-module corpus at q=9", ok, f"{_summary(res.cases)}; laws {laws}")
    assert ok, _bad(res.cases)


# 12 ------------------------------------------------------------------------


@pytest.mark.parametrize("p,n", [(3, 2), pytest.param(5, 2, marks=pytest.mark.slow)], ids=["q9", "q25"])
def test_criterion_12_conjecture_evidence(acceptance, p, n):
    res = _run("conjecture", Context(p, n, max_dim=CONJECTURE_MAX_DIM))
    gating = res.gating
    evidence = [c for c in res.cases if c.evidence and c.verdict != "skip"]
    ev_bad = _bad(evidence)
    detail = f"proven sub-cases {_summary(gating)}; EVIDENCE {len(evidence) - len(ev_bad)}/{len(evidence)} pass"
    if ev_bad:
        detail += f"; EVIDENCE FAILURES: {ev_bad[:6]}"
        warnings.warn(f"conjecture evidence failures at q={p ** n}: {ev_bad}", stacklevel=1)
    acceptance(12, f"conjectured stable tensor formulas, q={p ** n} (product dim <= {CONJECTURE_MAX_DIM})", res.passed, detail)
    assert res.passed, _bad(gating)
