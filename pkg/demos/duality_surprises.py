"""Where self-duality and symmetric-power reciprocity need care.

Run with ``python3 demos/duality_surprises.py``.

* At q = 4, V(3) and its dual have fixed-point spaces of dimension 2 and 1.
* V_i is self-dual when i < p or i is a power of p, but not only then:
  at q = 9, V(6) is isomorphic to its dual, shown by an explicit intertwiner.
* S^d(V_(i+1)) matches S^i(V_(d+1))^*; putting the dual on V_(d+1) as well
  breaks the statement as soon as V_(d+1) is not self-dual.
"""

from __future__ import annotations

from elabrep import homalg as ha
from elabrep import modcore as mc
from elabrep.modcore import GroupSpec


def main() -> None:
    g4 = GroupSpec.make(2, 2)
    v3, v3d = mc.build_V(3, g4), mc.build_V_dual(3, g4)
    print(f"q=4: dim V(3)^G = {mc.fixed_points(v3)[0]}, dim Vd(3)^G = {mc.fixed_points(v3d)[0]}")

    g9 = GroupSpec.make(3, 2)
    for i in range(1, 10):
        r = ha.is_isomorphic(mc.build_V(i, g9), mc.build_V_dual(i, g9))
        print(f"q=9: V({i}) = Vd({i})? {r.verdict}")

    for d, i in [(2, 1), (1, 2), (2, 2)]:
        lhs = mc.sym_power(mc.build_V(i + 1, g4), d)
        fixed = mc.dual(mc.sym_power(mc.build_V(d + 1, g4), i))
        literal = mc.dual(mc.sym_power(mc.build_V_dual(d + 1, g4), i))
        print(
            f"q=4, d={d}, i={i}: S^d(V(i+1)) = S^i(V(d+1))^* {ha.is_isomorphic(lhs, fixed).verdict}, "
            f"= S^i(Vd(d+1))^* {ha.is_isomorphic(lhs, literal).verdict}"
        )


if __name__ == "__main__":
    main()
