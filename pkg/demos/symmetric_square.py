"""The symmetric square of V_(p+1) at q = p^2.

Run with ``python3 demos/symmetric_square.py``.  S^2(V_(p+1)) splits as
Y + Z with Y ~ S^2(V_(p-1)) and Z ~ V_(2p+1).  The vectors spanning Z are
sums of x_j x_k over j + k = i; an alternating-sign variant spans the same
space but does not carry the V_(2p+1) action coefficient by coefficient.
Stably, V_(p+1) (x) V_(p+1) agrees with V_(2p+1) modulo M-projectives.
"""

from __future__ import annotations

from elabrep import stablecat as sc
from elabrep import witnesses as wt
from elabrep.modcore import GroupSpec
from elabrep.verify.expr import Context, eval_expr


def main() -> None:
    for p in (3, 5):
        g = GroupSpec.make(p, 2)
        y, signed, z = wt.witness_s2(p, g)
        print(f"p={p}: Y pattern {y.passed}, Z pattern {z.passed}, signed variant {signed.passed}")
        print(f"  first discrepancy of the signed variant: {signed.discrepancy}")
        print(f"  splitting data: {z.extra}")
        ctx = Context(p, 2)
        r = sc.stable_iso(eval_expr(f"V({p + 1})*V({p + 1})", ctx), eval_expr(f"V({2 * p + 1})", ctx), eval_expr("M", ctx))
        print(f"  V({p + 1})*V({p + 1}) ~M V({2 * p + 1}): {r.verdict}")
    info = wt.explore_sym_top(5, 3, GroupSpec.make(5, 2))
    print(f"\nexploratory, p=5: S^3(V(6)) = {' + '.join(info['summands'])}; V(16) a summand: {info['summand']}")


if __name__ == "__main__":
    main()
