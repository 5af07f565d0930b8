"""Tensoring the family V_m with the two-dimensional module W = V_2.

Run with ``python3 demos/tensor_with_v2.py``.  At q = 9 every V_2 (x) V_i
with 3 not dividing i splits as V_(i-1) + V_(i+1), while V_2 (x) V_3 stays
indecomposable.  The explicit vectors behind the splitting are checked too.
"""

from __future__ import annotations

from elabrep import homalg as ha
from elabrep import modcore as mc
from elabrep import witnesses as wt
from elabrep.modcore import GroupSpec


def main() -> None:
    g = GroupSpec.make(3, 2)
    print(f"group of order q = {g.q}, field GF({g.F.q})")
    w = mc.build_V(2, g)
    for i in range(1, g.q):
        rep = ha.decompose(mc.tensor(w, mc.build_V(i, g)))
        print(f"  V(2) (x) V({i}) = {rep}")

    ok, cert = ha.is_indecomposable(mc.tensor(w, mc.build_V(3, g)))
    print(f"\nV(2) (x) V(3) indecomposable: {ok} (certified through its local endomorphism ring)")

    print("\nexplicit submodules inside V(2) (x) V(m):")
    for m in range(2, g.q):
        y, x = wt.witness_Y(m, g), wt.witness_X(m, g)
        rank, full = wt.xy_span_rank(m, g)
        print(f"  m={m}: Y ~ V({m + 1}) {y.passed}, X ~ V({m - 1}) {x.passed}, rank(X+Y) = {rank} of {full}")


if __name__ == "__main__":
    main()
