"""Projective covers, Heller shifts, relative projectivity and stable
isomorphism relative to a module.

Relative projectivity of an indecomposable A with respect to a module N is
decided summand by summand of N.  Three exact tests are tried in order:

* a restriction test: if N is free on a cyclic subgroup H but A is not,
  A cannot be a summand of anything of the form X (x) N;
* an isomorphism test against the summand itself;
* Higman's criterion in trace form: A is N-projective iff the identity of A
  is a partial trace (over the N* factor) of a module endomorphism of N* (x) A.

Projectivity relative to a set of subgroups uses the relative trace map
Tr_H^G on End_H(A).
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactmath import FieldSpec
from .homalg import (
    DecompositionReport,
    Summand,
    _free_count,
    _hom_solution,
    _maps_from_solutions,
    decompose,
    free_action,
    hom_space,
    is_isomorphic,
    presentation,
    split_free,
)
from .modcore import (
    GModule,
    GroupSpec,
    ModuleMap,
    _check_group,
    _mk,
    build_V,
    dsum,
    dsum_all,
    dual,
    restrict,
    submodule,
    tensor,
)

log = logging.getLogger(__name__)

__all__ = [
    "StableReport",
    "regular_module",
    "projective_cover",
    "heller",
    "coheller",
    "is_projective",
    "build_M",
    "is_rel_projective",
    "is_rel_projective_subgroups",
    "m_core",
    "m_core_parts",
    "chi_core",
    "stable_iso",
    "stable_iso_chi",
    "stable_iso_parts",
    "match_cores",
    "CoreReport",
    "LawCheck",
    "check_omega_laws",
    "law_checks_single",
    "law_checks_pair",
]

HIGMAN_MAX_DIM = 400
HIGMAN_RANDOM_TRIES = 4
HIGMAN_CHUNK_ENTRIES = 4_000_000


def regular_module(group: GroupSpec) -> GModule:
    """The regular module, realised as V_q."""
    reg = build_V(group.q, group)
    return reg.relabel("reg")


def _zero(group: GroupSpec) -> GModule:
    return _mk(group, [np.zeros((0, 0), dtype=np.int64)] * group.n, "0", 0)


def projective_cover(a: GModule) -> tuple[GModule, ModuleMap]:
    """(P, cover) with P a sum of copies of V_q and cover: P -> a surjective."""
    g = a.group
    F = a.F
    pres = presentation(a)
    t = pres.top.shape[1]
    if t == 0:
        return _zero(g), ModuleMap(_zero(g), a, np.zeros((a.dim, 0), dtype=np.int64))
    reg = build_V(g.q, g)
    x0 = np.zeros((g.q, 1), dtype=np.int64)
    x0[0, 0] = 1
    J = reg.orbit_vectors(x0)[:, :, 0].T  # q x q: e_h -> rho(h) x0
    Jinv = F.inverse(J)
    blocks = []
    phi = pres.phi.reshape(a.dim, g.q, t)
    for k in range(t):
        blocks.append(F.matmul(np.ascontiguousarray(phi[:, :, k]), Jinv))
    cover = np.concatenate(blocks, axis=1)
    P = dsum_all([reg] * t, label="+".join(["V(%d)" % g.q] * t))
    return P, ModuleMap(P, a, cover)


def heller(a: GModule) -> GModule:
    """Omega(a): kernel of the projective cover, projective summands removed."""
    g = a.group
    if "heller" in a._cache:
        return a._cache["heller"]
    pres = presentation(a)
    t = pres.top.shape[1]
    label = f"O({a.label})"
    if pres.kernel.shape[1] == 0:
        out = _zero(g).relabel(label)
    else:
        free = _mk(g, free_action(g, t), "free", g.q * t)
        K = submodule(free, pres.kernel, label)
        nfree, _ = _free_count(K)
        if nfree:
            K = split_free(K)[1]
        out = K.relabel(label)
    a._cache["heller"] = out
    return out


def coheller(a: GModule) -> GModule:
    """Omega^{-1}(a) = Omega(a*)*."""
    if "coheller" in a._cache:
        return a._cache["coheller"]
    out = dual(heller(dual(a))).relabel(f"Oi({a.label})")
    a._cache["coheller"] = out
    return out


def is_projective(a: GModule) -> bool:
    if a.dim == 0:
        return True
    if a.dim % a.group.q:
        return False
    nfree, _ = _free_count(a)
    return nfree * a.group.q == a.dim


def build_M(group: GroupSpec, m_from: int = 1) -> GModule:
    """M = V_p + V_2p + ... + V_q (the r = 0 term, if requested, is zero)."""
    if m_from not in (0, 1):
        raise ValueError("m_from must be 0 or 1")
    p = group.p
    parts = [build_V(r * p, group) for r in range(1, group.q // p + 1)]
    return dsum_all(parts, label="M")


def _cyclic_free(a: GModule, sub: np.ndarray) -> bool:
    """Is the restriction of a to the cyclic subgroup spanned by ``sub`` free?"""
    F = a.F
    g = a.element(sub)
    u = F.sub_mat(g, np.eye(a.dim, dtype=np.int64))
    return F.rank(F.mat_power(u, a.group.p - 1)) * a.group.p == a.dim


def _partial_trace(F, maps: np.ndarray, n: int, da: int) -> np.ndarray:
    """Trace over the first tensor factor: (s, n*da, n*da) -> (s, da, da)."""
    blocks = maps.reshape(maps.shape[0], n, da, n, da)
    acc = np.zeros((maps.shape[0], da, da), dtype=np.int64)
    for i in range(n):
        acc = F.add_t[acc, blocks[:, i, :, i, :]]
    return acc


def _higman_trace(a: GModule, n: GModule, seed: int = 0) -> bool | None:
    """id_a in ptr(End_G(n* (x) a))?  None if beyond the size budget.

    The image of the partial trace is an ideal of End_G(a), so one invertible
    ptr(f) already puts id_a in the image.  A few random f are tried first;
    otherwise the image is spanned exactly from a Hom basis built in chunks
    of at most HIGMAN_CHUNK_ENTRIES matrix entries.
    """
    F = a.F
    D = n.dim * a.dim
    if D > HIGMAN_MAX_DIM:
        return None
    X = tensor(dual(n), a)
    pres, K = _hom_solution(X, X)
    s = K.shape[1]
    if s == 0:
        return False
    da = a.dim
    rng = np.random.default_rng([seed, 0x419])
    for _ in range(HIGMAN_RANDOM_TRIES):
        y = F.matmul(K, rng.integers(0, F.q, size=(s, 1)))
        u = _partial_trace(F, _maps_from_solutions(X, X, pres, y), n.dim, da)[0]
        if F.rank(u) == da:
            return True
    chunk = max(1, HIGMAN_CHUNK_ENTRIES // (D * D))
    R = np.zeros((0, da * da), dtype=np.int64)
    for lo in range(0, s, chunk):
        maps = _maps_from_solutions(X, X, pres, K[:, lo : lo + chunk])
        tr = _partial_trace(F, maps, n.dim, da).reshape(-1, da * da)
        R = F.row_basis(np.concatenate([R, tr], axis=0))
    target = np.eye(da, dtype=np.int64).reshape(1, -1)
    return F.rank(np.concatenate([R, target], axis=0)) == R.shape[0]


@dataclass
class RelProjResult:
    verdict: bool | None
    reason: str


def _rel_proj_indec(a: GModule, m_parts: Sequence[GModule], seed: int) -> RelProjResult:
    if is_projective(a):
        return RelProjResult(True, "projective")
    g = a.group
    cyc = g.cyclic_subgroups()
    a_free = {i: _cyclic_free(a, c[0]) for i, c in enumerate(cyc)}
    undetermined = False
    for nmod in sorted(m_parts, key=lambda x: x.dim):
        if is_projective(nmod):
            continue  # a is not projective, so it is not a summand of X (x) free
        if any(_cyclic_free(nmod, c[0]) and not a_free[i] for i, c in enumerate(cyc)):
            continue
        if nmod.dim == a.dim and is_isomorphic(a, nmod, seed).verdict == "yes":
            return RelProjResult(True, f"isomorphic to {nmod.label}")
        h = _higman_trace(a, nmod, seed)
        if h is None:
            undetermined = True
        elif h:
            return RelProjResult(True, f"Higman trace relative to {nmod.label}")
    if undetermined:
        return RelProjResult(None, "size budget exceeded")
    return RelProjResult(False, "no summand of M certifies relative projectivity")


def _m_parts(m: GModule, seed: int) -> list[GModule]:
    if "mparts" not in m._cache:
        rep = decompose(m, seed)
        m._cache["mparts"] = list(rep.leaves)
    return m._cache["mparts"]


def is_rel_projective(a: GModule, m: GModule, seed: int = 0) -> bool | None:
    """Is every indecomposable summand of a projective relative to m?"""
    _check_group(a, m)
    parts = _m_parts(m, seed)
    verdicts = [_rel_proj_indec(leaf, parts, seed).verdict for leaf in decompose(a, seed).leaves]
    if any(v is False for v in verdicts):
        return False
    if any(v is None for v in verdicts):
        return None
    return True


# -- projectivity relative to subgroups


def _coset_reps(group: GroupSpec, H: np.ndarray) -> list[np.ndarray]:
    Fp = FieldSpec(group.p).arith
    rows = H.copy()
    comp = []
    rank = H.shape[0]
    for i in range(group.n):
        e = np.zeros((1, group.n), dtype=np.int64)
        e[0, i] = 1
        trial = np.concatenate([rows, e]) if rows.size else e
        if Fp.rank(trial) > rank:
            comp.append(e[0])
            rows = trial
            rank += 1
    C = np.array(comp, dtype=np.int64).reshape(-1, group.n)
    return [(np.array(c, dtype=np.int64) @ C) % group.p for c in itertools.product(range(group.p), repeat=C.shape[0])]


def _relative_trace_image(a: GModule, H: np.ndarray) -> np.ndarray:
    """Tr_H^G applied to a basis of End_H(a): shape (s, d, d)."""
    F = a.F
    if H.shape[0] == a.group.n:
        return np.eye(a.dim, dtype=np.int64)[None]
    if H.shape[0] == 0:
        basis = np.eye(a.dim * a.dim, dtype=np.int64).reshape(-1, a.dim, a.dim)
    else:
        ra = restrict(a, H)
        basis = hom_space(ra, ra).basis
    s = basis.shape[0]
    acc = np.zeros_like(basis)
    for c in _coset_reps(a.group, H):
        g = a.element(c)
        gi = a.element((-c) % a.group.p)
        # g f g^{-1} for all f
        left = F.matmul(g, basis.transpose(1, 0, 2).reshape(a.dim, s * a.dim)).reshape(a.dim, s, a.dim).transpose(1, 0, 2)
        conj = F.matmul(left.reshape(s * a.dim, a.dim), gi).reshape(s, a.dim, a.dim)
        acc = F.add_t[acc, conj]
    return acc


def _chi_indec(a: GModule, chi: Sequence[np.ndarray]) -> bool:
    F = a.F
    if is_projective(a):
        return True
    target = np.eye(a.dim, dtype=np.int64).reshape(-1)
    for H in sorted(chi, key=lambda h: -h.shape[0]):
        if H.shape[0] == a.group.n:
            return True
        if H.shape[0] == 0:
            continue  # a is not projective
        # restriction to any cyclic subgroup meeting H trivially must be free
        tr = _relative_trace_image(a, H)
        if F.solve(tr.reshape(tr.shape[0], -1).T, target) is not None:
            return True
    return False


def _normalise_chi(group: GroupSpec, chi) -> list[np.ndarray]:
    Fp = FieldSpec(group.p).arith
    out = []
    for H in chi:
        B = np.asarray(H, dtype=np.int64).reshape(-1, group.n) % group.p
        if B.shape[0] and Fp.rank(B) != B.shape[0]:
            raise ValueError("subgroup generators must be independent")
        out.append(Fp.row_basis(B) if B.shape[0] else B)
    return out


def is_rel_projective_subgroups(a: GModule, chi, seed: int = 0) -> bool:
    """Is a a summand of sum_H Ind_H^G Res_H a over H in chi?"""
    chi = _normalise_chi(a.group, chi)
    return all(_chi_indec(leaf, chi) for leaf in decompose(a, seed).leaves)


# -- cores and stable isomorphism


@dataclass
class CoreReport:
    input: str
    core: list[tuple[str, GModule]]
    stripped: list[str]
    undetermined: int
    seed: int

    def labels(self) -> Counter:
        return Counter(lab for lab, _ in self.core)

    def __str__(self):
        if not self.core:
            return "0"
        c = self.labels()
        return " + ".join(lab if k == 1 else f"{k}x{lab}" for lab, k in sorted(c.items(), key=_label_order))

    def to_dict(self):
        return {"input": self.input, "core": sorted(self.labels().elements()), "stripped": self.stripped}


def _label_order(item):
    lab = item[0]
    return (len(lab), lab)


def _core(a: GModule, test, seed: int) -> CoreReport:
    rep = decompose(a, seed)
    core, stripped = [], []
    und = rep.undetermined
    for lab, leaf in zip(rep.leaf_labels, rep.leaves):
        v = test(leaf)
        if v is True:
            stripped.append(lab)
        else:
            if v is None:
                und += 1
            core.append((lab, leaf))
    return CoreReport(a.label, core, stripped, und, seed)


def m_core(a: GModule, m: GModule, seed: int = 0) -> CoreReport:
    parts = _m_parts(m, seed)
    return _core(a, lambda leaf: _rel_proj_indec(leaf, parts, seed).verdict, seed)


def m_core_parts(parts: Sequence[GModule], m: GModule, seed: int = 0, label: str | None = None) -> CoreReport:
    """Core of a direct sum given by its parts; Krull-Schmidt lets each part be cored alone."""
    core, stripped, und = [], [], 0
    for part in parts:
        rep = m_core(part, m, seed)
        core.extend(rep.core)
        stripped.extend(rep.stripped)
        und += rep.undetermined
    lab = label or "+".join(x.label for x in parts) or "0"
    return CoreReport(lab, core, stripped, und, seed)


def stable_iso_parts(
    lhs: Sequence[GModule], rhs: Sequence[GModule], m: GModule, seed: int = 0
) -> StableReport:
    """stable_iso for modules presented as lists of direct summands."""
    ca = m_core_parts(lhs, m, seed)
    cb = m_core_parts(rhs, m, seed)
    return _stable_reports(ca, cb, m.label, seed)


def chi_core(a: GModule, chi, seed: int = 0) -> CoreReport:
    chi = _normalise_chi(a.group, chi)
    return _core(a, lambda leaf: _chi_indec(leaf, chi), seed)


@dataclass
class StableReport:
    lhs: str
    rhs: str
    M: str
    lhs_core: CoreReport
    rhs_core: CoreReport
    verdict: str  # stably_isomorphic | not | undetermined
    seed: int

    @property
    def stripped(self):
        return {"lhs": self.lhs_core.stripped, "rhs": self.rhs_core.stripped}

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "M": self.M,
            "cores": {"lhs": str(self.lhs_core), "rhs": str(self.rhs_core)},
            "stripped": self.stripped,
            "verdict": self.verdict,
            "seed": self.seed,
        }


def match_cores(x: list[tuple[str, GModule]], y: list[tuple[str, GModule]], seed: int = 0) -> bool:
    """Multiset match of core summands up to isomorphism."""
    pool = list(y)
    for lab, mod in x:
        for j, (lab2, mod2) in enumerate(pool):
            if lab == lab2 and not lab.startswith("X"):
                pool.pop(j)
                break
            if lab.startswith("X") and mod.dim == mod2.dim and is_isomorphic(mod, mod2, seed).verdict == "yes":
                pool.pop(j)
                break
        else:
            return False
    return not pool


def _stable_reports(ca: CoreReport, cb: CoreReport, mlabel: str, seed: int) -> StableReport:
    if ca.undetermined or cb.undetermined:
        verdict = "undetermined"
    else:
        verdict = "stably_isomorphic" if match_cores(ca.core, cb.core, seed) else "not"
    return StableReport(ca.input, cb.input, mlabel, ca, cb, verdict, seed)


def stable_iso(a: GModule, b: GModule, m: GModule, seed: int = 0) -> StableReport:
    _check_group(a, b)
    return _stable_reports(m_core(a, m, seed), m_core(b, m, seed), m.label, seed)


def stable_iso_chi(a: GModule, b: GModule, chi, seed: int = 0) -> StableReport:
    _check_group(a, b)
    return _stable_reports(chi_core(a, chi, seed), chi_core(b, chi, seed), "chi", seed)


# -- laws


@dataclass
class LawCheck:
    law: str
    module: str
    passed: bool
    detail: str = ""


def law_checks_single(a: GModule, seed: int = 0) -> list[LawCheck]:
    """(ii) duality swaps the two shifts; (iii) the shifts are mutually inverse up to projectives."""
    reg = regular_module(a.group)
    r2 = is_isomorphic(dual(heller(a)), coheller(dual(a)), seed)
    s1 = stable_iso(a, heller(coheller(a)), reg, seed)
    s2 = stable_iso(a, coheller(heller(a)), reg, seed)
    return [
        LawCheck("ii", a.label, r2.verdict == "yes", r2.certificate),
        LawCheck("iii", a.label, s1.verdict == s2.verdict == "stably_isomorphic", f"{s1.verdict}/{s2.verdict}"),
    ]


def law_checks_pair(a: GModule, b: GModule, seed: int = 0) -> list[LawCheck]:
    """(i) both shifts are additive; (iv) Omega(a) (x) b is stably Omega(a (x) b)."""
    reg = regular_module(a.group)
    s = dsum(a, b)
    r1 = is_isomorphic(heller(s), dsum(heller(a), heller(b)), seed)
    r1b = is_isomorphic(coheller(s), dsum(coheller(a), coheller(b)), seed)
    st = stable_iso(tensor(heller(a), b), heller(tensor(a, b)), reg, seed)
    return [
        LawCheck("i", s.label, r1.verdict == r1b.verdict == "yes", f"{r1.verdict}/{r1b.verdict}"),
        LawCheck("iv", f"{a.label};{b.label}", st.verdict == "stably_isomorphic", st.verdict),
    ]


def check_omega_laws(corpus: Sequence[GModule], seed: int = 0, pairs: int | None = None) -> list[LawCheck]:
    """Laws (ii), (iii) for every module and (i), (iv) for the first ``pairs`` pairs."""
    out: list[LawCheck] = []
    for a in corpus:
        out.extend(law_checks_single(a, seed))
    combos = list(itertools.combinations(range(len(corpus)), 2))
    if pairs is not None:
        combos = combos[:pairs]
    for i, j in combos:
        out.extend(law_checks_pair(corpus[i], corpus[j], seed))
    return out
