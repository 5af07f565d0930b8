"""The Heller shift of V_m is the dual of V_(q-m).

Run with ``python3 demos/heller_shift.py``.  For each m the kernel of the
projective cover is compared with Vd(q-m) twice: by an explicit basis whose
action is checked coefficient by coefficient, and by an isomorphism search
that returns an invertible intertwiner.
"""

from __future__ import annotations

from elabrep import homalg as ha
from elabrep import modcore as mc
from elabrep import stablecat as sc
from elabrep import witnesses as wt
from elabrep.modcore import GroupSpec


def main() -> None:
    for p, n in [(2, 2), (2, 3), (3, 2)]:
        g = GroupSpec.make(p, n)
        print(f"q = {g.q}")
        for m in range(1, g.q):
            om = sc.heller(mc.build_V(m, g))
            iso = ha.is_isomorphic(om, mc.build_V_dual(g.q - m, g))
            wit = wt.witness_shift(m, g)
            print(f"  O(V({m})) has dim {om.dim}; = Vd({g.q - m}): witness {wit.passed}, isomorphism {iso.verdict}")


if __name__ == "__main__":
    main()
