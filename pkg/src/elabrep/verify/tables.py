"""Report emitters: Markdown, JSON and CSV.

The Markdown emitter lays out the core table in the same arrangement as the
printed q = 9 table, with row and column headers V_i.  All emitters produce
byte-identical output for identical suite results.
"""

from __future__ import annotations

import csv
import io
import json
import re

from .suites import SuiteResult, label_key

__all__ = ["pretty_label", "core_table", "table_markdown", "table_csv", "render", "FORMATS"]

FORMATS = ("md", "json", "csv")

_V = re.compile(r"V\((\d+)\)")
_VD = re.compile(r"Vd\((\d+)\)")


def pretty_label(lab: str) -> str:
    """Readable rendering: V(7) -> V_7, Vd(3) -> V_3^*, Oi(V(5)) -> Ω^-1(V_5), O(x) -> Ω(x)."""
    s = _VD.sub(lambda m: f"V_{m.group(1)}^*", lab)
    s = _V.sub(lambda m: f"V_{m.group(1)}", s)
    s = s.replace("Oi(", "Ω^-1(").replace("O(", "Ω(")
    return s


def _core_text(labels: list[str]) -> str:
    if not labels:
        return "0"
    return " ⊕ ".join(pretty_label(x) for x in sorted(labels, key=label_key))


def core_table(result: SuiteResult) -> tuple[list[int], dict[tuple[int, int], dict]]:
    """Indices and cells {(i, j): case artifacts} of a table suite result."""
    cells = {}
    for c in result.cases:
        a = c.artifacts
        if "i" in a and "j" in a:
            cells[(a["i"], a["j"])] = {**a, "verdict": c.verdict}
    idx = sorted({i for i, _ in cells})
    return idx, cells


def table_markdown(result: SuiteResult) -> str:
    idx, cells = core_table(result)
    head = "| ⊗ | " + " | ".join(f"V_{j}" for j in idx) + " |"
    sep = "|---|" + "---|" * len(idx)
    lines = [head, sep]
    for i in idx:
        row = []
        for j in idx:
            cell = cells.get((i, j))
            if cell is None:
                row.append("")
                continue
            txt = _core_text(cell.get("lhs_core", []))
            if cell["verdict"] != "pass":
                txt += f" ({cell['verdict']})"
            row.append(txt)
        lines.append(f"| V_{i} | " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def table_csv(result: SuiteResult) -> str:
    idx, cells = core_table(result)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "core", "reference", "verdict"])
    for i in idx:
        for j in idx:
            cell = cells.get((i, j))
            if cell is None:
                continue
            core = "+".join(sorted(cell.get("lhs_core", []), key=label_key)) or "0"
            w.writerow([i, j, core, cell.get("reference", ""), cell["verdict"]])
    return buf.getvalue()


def _cases_markdown(result: SuiteResult) -> str:
    lines = [
        f"## {result.name} (p={result.params['p']}, n={result.params['n']})",
        "",
        "| claim | statement | verdict |",
        "|---|---|---|",
    ]
    for c in result.cases:
        tag = " (EVIDENCE)" if c.evidence else ""
        lines.append(f"| {c.claim} | {c.statement} | {c.verdict}{tag} |")
    counts = result.counts(evidence=False)
    ev = result.counts(evidence=True)
    lines += [
        "",
        "gating: " + ", ".join(f"{k} {v}" for k, v in counts.items()),
        "evidence: " + ", ".join(f"{k} {v}" for k, v in ev.items()),
        f"overall: {'PASS' if result.passed else 'FAIL'}",
    ]
    return "\n".join(lines) + "\n"


def _cases_csv(result: SuiteResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "claim", "statement", "verdict", "evidence"])
    for c in result.cases:
        w.writerow([result.name, c.claim, c.statement, c.verdict, int(c.evidence)])
    return buf.getvalue()


def render(result: SuiteResult, fmt: str = "md", timing: bool = False) -> str:
    """Render a suite result; table suites get the grid layout in md and csv."""
    if fmt == "json":
        return json.dumps(result.to_dict(timing=timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    is_table = result.name == "table"
    if fmt == "md":
        body = _cases_markdown(result)
        if is_table:
            body = table_markdown(result) + "\n" + body
        if timing:
            body += f"elapsed: {result.elapsed:.2f}s\n"
        return body
    if fmt == "csv":
        return table_csv(result) if is_table else _cases_csv(result)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
