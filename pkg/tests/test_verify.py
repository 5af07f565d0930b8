"""Expression language, cache, report emitters and the command line."""

from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elabrep import homalg as ha
from elabrep.verify import cli
from elabrep.verify.cache import ResultCache
from elabrep.verify.expr import (
    Atom,
    BinOp,
    Call,
    Context,
    ExprSyntaxError,
    Power,
    Sub,
    canonical,
    clear_memo,
    eval_expr,
    parse_expr,
    to_text,
)
from elabrep.verify.suites import SUITES, run_suite
from elabrep.verify.tables import pretty_label, render

# -- parser


def _exprs():
    atoms = st.one_of(
        st.builds(Atom, st.sampled_from(["V", "Vd"]), st.integers(1, 9)),
        st.builds(Atom, st.sampled_from(["W", "reg", "M"])),
    )

    def extend(inner):
        basis = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=0, max_size=2).map(tuple)
        return st.one_of(
            st.builds(Call, st.sampled_from(["dual", "O", "Oi"]), inner),
            st.builds(Power, st.sampled_from(["S", "L"]), st.integers(0, 4), inner),
            st.builds(BinOp, st.sampled_from(["+", "*"]), inner, inner),
            st.builds(Sub, st.just("res"), inner, basis),
            st.builds(Sub, st.just("ind"), inner, st.one_of(st.none(), basis)),
        )

    return st.recursive(atoms, extend, max_leaves=8)


@given(_exprs())
@settings(max_examples=300)
def test_print_parse_round_trip(e):
    text = to_text(e)
    assert to_text(parse_expr(text)) == text
    assert canonical(text) == text


@given(_exprs())
@settings(max_examples=200)
def test_canonical_is_stable_under_extra_spacing_and_parentheses(e):
    text = to_text(e)
    noisy = " ( " + text.replace(",", " , ").replace("+", " + ") + " ) "
    assert canonical(noisy) == text


SUITE_EXPRESSIONS = [
    "V(2)*V(5)",
    "V(4)+V(6)",
    "O(V(3))",
    "Oi(V(7))",
    "dual(S(2,Vd(3)))",
    "L(2,V(4))",
    "res(V(5),[1,0])",
    "ind(V(2),[1,0])",
    "ind(V(1))",
    "(V(2)+V(3))*V(4)",
    "V(2)*(V(3)+V(4))",
    "V(2)*V(3)*V(4)",
    "S(2,V(2)*V(2))",
    "M",
    "reg+W",
]


@pytest.mark.parametrize("text", SUITE_EXPRESSIONS)
def test_corpus_round_trip(text):
    assert canonical(text) == text
    assert canonical(canonical(text)) == canonical(text)


def test_precedence_and_associativity():
    e = parse_expr("V(1)+V(2)*V(3)+V(4)")
    assert isinstance(e, BinOp) and e.op == "+"
    assert isinstance(e.left, BinOp) and e.left.op == "+"
    assert isinstance(e.left.right, BinOp) and e.left.right.op == "*"
    assert canonical("(V(1)*V(2))*V(3)") == "V(1)*V(2)*V(3)"
    assert canonical("V(1)*(V(2)*V(3))") == "V(1)*(V(2)*V(3))"


@pytest.mark.parametrize(
    "text,pos",
    [("V(2", 3), ("V(2)*", 5), ("Q(3)", 0), ("S(2 V(3))", 4), ("res(V(2),[1,0;1])", 16), ("V(2))", 4), ("", 0)],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.pos == pos


def test_evaluated_labels_are_canonical():
    ctx = Context(3, 2)
    mod = eval_expr(" V(2) * ( V(3)+V(4) ) ", ctx)
    assert mod.label == "V(2)*(V(3)+V(4))"
    assert mod.dim == 14
    assert eval_expr("ind(V(2),[1,0])", ctx).dim == 6
    assert eval_expr("res(V(5),[1,0])", ctx).group.n == 1
    with pytest.raises(ValueError):
        eval_expr("V(10)", ctx)


# -- cache


def _random_expression(rng: random.Random) -> str:
    base = [f"V({rng.randint(1, 4)})", f"Vd({rng.randint(1, 4)})", "W"]
    a, b = rng.choice(base), rng.choice(base)
    form = rng.choice(["{a}", "{a}*{b}", "{a}+{b}", "dual({a})", "O({a})", "S(2,{a})", "L(2,{a})*{b}", "Oi({a})+{b}"])
    return form.format(a=a, b=b)


def test_cached_and_fresh_evaluations_agree(tmp_path):
    rng = random.Random(2024)
    texts = [_random_expression(rng) for _ in range(50)]
    cache_dir = tmp_path / "cache"
    warm = Context(2, 2, cache=ResultCache(cache_dir))
    for t in texts:
        eval_expr(t, warm)
    clear_memo()
    cached_ctx = Context(2, 2, cache=ResultCache(cache_dir))
    fresh_ctx = Context(2, 2)
    for t in texts:
        c = eval_expr(t, cached_ctx)
        clear_memo()
        f = eval_expr(t, fresh_ctx)
        clear_memo()
        assert ha.decompose(c).label_multiset() == ha.decompose(f).label_multiset(), t
    assert cached_ctx.cache.hits >= len(set(texts))


def test_cache_keys_separate_groups_and_survive_corruption(tmp_path):
    cache = ResultCache(tmp_path)
    c4, c9 = Context(2, 2), Context(3, 2)
    cache.put("decompose", c4, "V(2)", {"x": 1})
    assert cache.get("decompose", c9, "V(2)") is None
    assert cache.get("decompose", c4, "V(2)") == {"x": 1}
    path = cache._path("decompose", c4, "V(2)")
    path.write_text("{not json")
    assert cache.get("decompose", c4, "V(2)") is None
    assert not list(tmp_path.glob(".tmp-*"))


# -- suites and reports


def test_every_suite_is_registered():
    assert set(SUITES) == {
        "tensor-v2",
        "shift",
        "corollaries",
        "table",
        "cyclic",
        "duality",
        "relproj",
        "conjecture",
        "laws",
        "combinat",
    }


def test_reports_are_deterministic_and_cover_formats():
    a = run_suite("tensor-v2", Context(2, 2))
    clear_memo()
    b = run_suite("tensor-v2", Context(2, 2))
    for fmt in ("md", "json", "csv"):
        assert render(a, fmt) == render(b, fmt)
    data = json.loads(render(a, "json"))
    assert data["passed"] and "elapsed_s" not in data
    assert "elapsed_s" in json.loads(render(a, "json", timing=True))
    with pytest.raises(ValueError):
        render(a, "xml")


def test_parallel_run_matches_serial(tmp_path):
    serial = run_suite("shift", Context(2, 3))
    parallel = run_suite("shift", Context(2, 3, jobs=2, cache=ResultCache(tmp_path)))
    assert render(serial, "json") == render(parallel, "json")


def test_pretty_labels():
    assert pretty_label("Oi(V(7))") == "Ω^-1(V_7)"
    assert pretty_label("Vd(3)") == "V_3^*"
    assert pretty_label("O(Vd(2))") == "Ω(V_2^*)"


# -- command line


def test_cli_verify_exit_codes(capsys):
    assert cli.main(["verify", "combinat", "--p", "2", "--n", "1"]) == 0
    assert "overall: PASS" in capsys.readouterr().out
    assert cli.main(["verify", "duality", "--p", "2", "--n", "2", "--format", "csv"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("suite,claim,statement,verdict,evidence")


def test_cli_decompose_and_errors(capsys):
    assert cli.main(["decompose", "--expr", "V(2)*V(4)", "--p", "3", "--n", "2", "--core"]) == 0
    out = capsys.readouterr().out
    assert "V(3) + V(5)" in out and "core relative to M" in out
    assert cli.main(["decompose", "--expr", "V(2", "--p", "3", "--n", "2"]) == 2
    assert cli.main(["decompose", "--expr", "V(2)", "--p", "4", "--n", "1"]) == 2
    assert cli.main(["decompose", "--expr", "V(2)*V(4)", "--p", "3", "--n", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dim"] == 8


def test_cli_export_import_round_trip(tmp_path, capsys):
    path = tmp_path / "mod.json"
    assert cli.main(["export", "--expr", "O(V(2))", "--p", "3", "--n", "2", "--out", str(path)]) == 0
    assert cli.main(["import", str(path)]) == 0
    out = capsys.readouterr().out
    assert "O(V(2))" in out and "dim 7" in out


def test_cli_table_markdown_layout(tmp_path):
    out = tmp_path / "t.md"
    assert cli.main(["table", "--q", "9", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == "| ⊗ | V_1 | V_2 | V_4 | V_5 | V_7 | V_8 |"
    assert "Ω^-1(V_7)" in text


def test_cli_field_polynomial_option(capsys):
    assert cli.main(["decompose", "--expr", "V(2)*V(2)", "--p", "3", "--n", "2", "--field-poly", "2,2,1"]) == 0
    assert "V(1) + V(3)" in capsys.readouterr().out
