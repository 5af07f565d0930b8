"""The table of V_i (x) V_j modulo modules projective relative to M, at q = 9.

Run with ``python3 demos/stable_table_q9.py``.  M is the sum of the V(3r);
summands projective relative to M are stripped and the remaining core is
matched against the reference entries, six of which are co-Heller shifts.
"""

from __future__ import annotations

from elabrep import stablecat as sc
from elabrep.verify.expr import Context, eval_expr
from elabrep.verify.suites import run_suite
from elabrep.verify.tables import render


def main() -> None:
    ctx = Context(3, 2)
    M = eval_expr("M", ctx)
    print(f"M = {M.label}, dim {M.dim}")
    rep = sc.m_core(eval_expr("V(4)*V(5)", ctx), M)
    print(f"V(4)*V(5): core {sorted(rep.labels().elements())}, stripped {sorted(rep.stripped)}\n")
    result = run_suite("table", ctx)
    print(render(result, "md"))
    print(f"all cells reproduced: {result.passed}")


if __name__ == "__main__":
    main()
