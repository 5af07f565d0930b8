"""Hom spaces, endomorphism algebras, indecomposability certificates,
Krull-Schmidt decomposition and isomorphism testing.

Hom spaces are computed from a presentation of the source module: a choice
of top generators gives a surjection from a free module, whose kernel is
generated (as a module) by a small set of relations.  A homomorphism is
then the same thing as an image tuple for the generators that satisfies
those relations, which keeps the linear systems small.

Indecomposability is certified by showing the endomorphism algebra is local:
its commutator ideal is nilpotent and the map x -> x^Q on the commutative
quotient fixes only the scalars.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactmath import Field
from .modcore import (
    GModule,
    GroupSpec,
    ModuleMap,
    _check_group,
    _mk,
    build_V,
    build_V_dual,
    dual,
    fixed_points,
    radical,
    radical_layers,
    socle_layers,
    submodule,
)

log = logging.getLogger(__name__)

__all__ = [
    "HomSpace",
    "Fingerprint",
    "IsoResult",
    "Summand",
    "DecompositionReport",
    "hom_space",
    "end_basis",
    "hom_dim",
    "random_homs",
    "fingerprint",
    "fitting_split",
    "is_indecomposable",
    "is_isomorphic",
    "decompose",
    "split_free",
    "free_module",
    "presentation",
    "catalogue_for",
]

MAX_TRIALS = 64
END_ALGEBRA_LIMIT = 600
DIRECT_ISO_DIM = 64
NILPOTENT_CHUNK_ENTRIES = 4_000_000
MAPS_CHUNK_ENTRIES = 4_000_000


# ---------------------------------------------------------------------------
# presentations and Hom


@dataclass
class Presentation:
    """Surjection Phi: kG^t -> A given on basis e_(h,k) -> rho(h) g_k.

    Column index of e_(h,k) is h*t + k with h in ``group.all_coords()`` order.
    """

    top: np.ndarray  # d x t generator columns
    phi: np.ndarray  # d x (q t)
    pivots: np.ndarray  # d pivot columns of phi
    phi_p_inv: np.ndarray  # inverse of phi[:, pivots]
    kernel: np.ndarray  # (q t) x r basis of ker phi
    relations: np.ndarray  # (q t) x s minimal module generators of ker phi


def _shift_perms(group: GroupSpec) -> list[np.ndarray]:
    coords = group.all_coords()
    w = group.p ** np.arange(group.n - 1, -1, -1, dtype=np.int64)
    perms = []
    for i in range(group.n):
        sh = coords.copy()
        sh[:, i] = (sh[:, i] + 1) % group.p
        perms.append(sh @ w)
    return perms


def free_action(group: GroupSpec, t: int) -> list[np.ndarray]:
    """Generator matrices of kG^t on the basis e_(h,k) (index h*t + k)."""
    q = group.q
    gens = []
    for perm in _shift_perms(group):
        mat = np.zeros((q * t, q * t), dtype=np.int64)
        src = np.arange(q * t)
        dst = perm[src // t] * t + src % t
        mat[dst, src] = 1
        gens.append(mat)
    return gens


def free_module(group: GroupSpec, t: int = 1) -> GModule:
    return _mk(group, free_action(group, t), "reg" if t == 1 else f"reg^{t}", group.q * t)


def _apply_shift(perm: np.ndarray, X: np.ndarray, t: int) -> np.ndarray:
    src = np.arange(X.shape[0])
    dst = perm[src // t] * t + src % t
    out = np.empty_like(X)
    out[dst] = X[src]
    return out


def top_generators(a: GModule) -> np.ndarray:
    """Unit vectors spanning a complement of the radical."""
    F = a.F
    R = radical(a)
    if R.shape[1]:
        _, piv = F.rref(R.T)
    else:
        piv = np.zeros(0, dtype=np.int64)
    free = np.setdiff1d(np.arange(a.dim), piv)
    T = np.zeros((a.dim, len(free)), dtype=np.int64)
    T[free, np.arange(len(free))] = 1
    return T


def presentation(a: GModule) -> Presentation:
    if "pres" in a._cache:
        return a._cache["pres"]
    F = a.F
    g = a.group
    T = top_generators(a)
    t = T.shape[1]
    orb = a.orbit_vectors(T)  # q x d x t
    phi = np.ascontiguousarray(orb.transpose(1, 0, 2).reshape(a.dim, g.q * t))
    R, piv = F.rref(phi)
    P = phi[:, piv]
    pinv = F.inverse(P) if a.dim else np.zeros((0, 0), dtype=np.int64)
    K = F.kernel(phi) if a.dim else np.zeros((0, 0), dtype=np.int64)
    if K.shape[1]:
        shifted = [F.sub_mat(_apply_shift(perm, K, t), K) for perm in _shift_perms(g)]
        radK = F.image(np.concatenate(shifted, axis=1)) if shifted else np.zeros((K.shape[0], 0), dtype=np.int64)
        M = np.concatenate([radK, K], axis=1)
        _, cp = F.rref(M)
        rel_idx = cp[cp >= radK.shape[1]] - radK.shape[1]
        rels = K[:, rel_idx]
    else:
        rels = np.zeros((g.q * t, 0), dtype=np.int64)
    pres = Presentation(T, phi, piv, pinv, K, rels)
    a._cache["pres"] = pres
    return pres


def all_elements(a: GModule) -> np.ndarray:
    """rho(h) for every h in all_coords order, shape (q, d, d)."""
    if "allel" not in a._cache:
        a._cache["allel"] = a.orbit_vectors(np.eye(a.dim, dtype=np.int64))
    return a._cache["allel"]


@dataclass
class HomSpace:
    source: GModule
    target: GModule
    basis: np.ndarray  # (s, d_target, d_source)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def maps(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, m) for m in self.basis]

    def combine(self, coeffs) -> np.ndarray:
        F = self.source.F
        if self.dim == 0:
            return np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        return F.lincomb(np.asarray(coeffs, dtype=np.int64), self.basis)


def _solve_relations(F: Field, b: GModule, pres: Presentation, q: int, t: int) -> np.ndarray:
    """Basis (t*dB x s) of generator-image tuples satisfying every relation."""
    dB = b.dim
    n = t * dB
    R = np.zeros((0, n), dtype=np.int64)
    if pres.relations.shape[1]:
        B_all = all_elements(b)
        for ri in range(pres.relations.shape[1]):
            r = pres.relations[:, ri].reshape(q, t)
            Ts = F.lincomb(r.T, B_all)  # t x dB x dB
            C = np.concatenate(list(Ts), axis=1)  # dB x t dB
            # keep only a row basis of the constraints seen so far; its size is
            # bounded by the codimension of the solution space
            R = F.row_basis(np.concatenate([R, C], axis=0))
            if R.shape[0] == n:
                return np.zeros((n, 0), dtype=np.int64)
    K = F.kernel(R)
    return K


def _hom_solution(a: GModule, b: GModule):
    """(presentation of a, kernel K) with Hom(a, b) parametrised by the columns of K."""
    g = _check_group(a, b)
    pres = presentation(a)
    return pres, _solve_relations(a.F, b, pres, g.q, pres.top.shape[1])


def _maps_from_solutions(a: GModule, b: GModule, pres: Presentation, K: np.ndarray) -> np.ndarray:
    """The module maps (s x dB x dA) whose generator images are the columns of K.

    Columns are processed in chunks of at most MAPS_CHUNK_ENTRIES matrix
    entries so that only the result is held at full size.
    """
    s = K.shape[1]
    step = max(1, MAPS_CHUNK_ENTRIES // max(1, a.dim * b.dim))
    if s <= step:
        return _maps_chunk(a, b, pres, K)
    out = np.empty((s, b.dim, a.dim), dtype=np.int64)
    for lo in range(0, s, step):
        out[lo : lo + step] = _maps_chunk(a, b, pres, K[:, lo : lo + step])
    return out


def _maps_chunk(a: GModule, b: GModule, pres: Presentation, K: np.ndarray) -> np.ndarray:
    g = a.group
    F = a.F
    t = pres.top.shape[1]
    s = K.shape[1]
    Y = K.reshape(t, b.dim, s)
    piv = pres.pivots
    hs, ks = piv // t, piv % t
    Psi = np.zeros((b.dim, a.dim, s), dtype=np.int64)  # column j of each map's image
    B_all = all_elements(b) if g.q > 1 else np.eye(b.dim, dtype=np.int64)[None]
    for h in np.unique(hs):
        cols = np.nonzero(hs == h)[0]
        img = F.matmul(B_all[h], Y[ks[cols]].transpose(1, 0, 2).reshape(b.dim, -1))
        Psi[:, cols, :] = img.reshape(b.dim, len(cols), s)
    flat = Psi.transpose(2, 0, 1).reshape(s * b.dim, a.dim)
    return F.matmul(flat, pres.phi_p_inv).reshape(s, b.dim, a.dim)


def hom_space(a: GModule, b: GModule) -> HomSpace:
    """All module maps a -> b."""
    _check_group(a, b)
    if a.dim == 0 or b.dim == 0:
        return HomSpace(a, b, np.zeros((0, b.dim, a.dim), dtype=np.int64))
    pres, K = _hom_solution(a, b)
    if K.shape[1] == 0:
        return HomSpace(a, b, np.zeros((0, b.dim, a.dim), dtype=np.int64))
    return HomSpace(a, b, _maps_from_solutions(a, b, pres, K))


def hom_dim(a: GModule, b: GModule) -> int:
    """dim Hom(a, b) without building the maps."""
    _check_group(a, b)
    if a.dim == 0 or b.dim == 0:
        return 0
    if a is b:
        if "end" in a._cache:
            return a._cache["end"].shape[0]
        if "end_dim" not in a._cache:
            a._cache["end_dim"] = _hom_solution(a, a)[1].shape[1]
        return a._cache["end_dim"]
    return _hom_solution(a, b)[1].shape[1]


def random_homs(a: GModule, b: GModule, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniformly random module maps a -> b (count x dB x dA)."""
    _check_group(a, b)
    if a.dim == 0 or b.dim == 0:
        return np.zeros((count, b.dim, a.dim), dtype=np.int64)
    pres, K = _hom_solution(a, b)
    if K.shape[1] == 0:
        return np.zeros((count, b.dim, a.dim), dtype=np.int64)
    C = rng.integers(0, a.F.q, size=(K.shape[1], count))
    return _maps_from_solutions(a, b, pres, a.F.matmul(K, C))


def end_basis(a: GModule) -> np.ndarray:
    if "end" not in a._cache:
        a._cache["end"] = hom_space(a, a).basis
    return a._cache["end"]


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    fixed_dims: tuple[int, ...]
    radical_layers: tuple[int, ...]
    socle_layers: tuple[int, ...]
    end_dim: int

    def digest(self) -> str:
        return hashlib.sha1(repr(self).encode()).hexdigest()[:10]

    def differences(self, other: "Fingerprint") -> list[str]:
        out = []
        for name in ("dim", "fixed_dims", "radical_layers", "socle_layers", "end_dim"):
            if getattr(self, name) != getattr(other, name):
                out.append(f"{name}: {getattr(self, name)} vs {getattr(other, name)}")
        return out


def subgroup_fixed_dims(a: GModule) -> tuple[int, ...]:
    F = a.F
    out = []
    eye = np.eye(a.dim, dtype=np.int64)
    for B in a.group.subgroups():
        if B.shape[0] == 0:
            out.append(a.dim)
            continue
        stack = np.concatenate([F.sub_mat(a.element(row), eye) for row in B], axis=0)
        out.append(a.dim - F.rank(stack))
    return tuple(out)


def fingerprint(a: GModule) -> Fingerprint:
    if "fp" not in a._cache:
        a._cache["fp"] = Fingerprint(
            a.dim,
            subgroup_fixed_dims(a),
            tuple(radical_layers(a)),
            tuple(socle_layers(a)),
            hom_dim(a, a),
        )
    return a._cache["fp"]


# ---------------------------------------------------------------------------
# Fitting splits


def _stable_power(F: Field, f: np.ndarray) -> np.ndarray:
    """f^(2^k) once the rank has stabilised."""
    cur = f
    r = F.rank(cur)
    while True:
        nxt = F.matmul(cur, cur)
        rn = F.rank(nxt)
        if rn == r:
            return nxt
        cur, r = nxt, rn


def fitting_split(a: GModule, f) -> tuple[GModule, GModule] | None:
    """Split a = ker f^N + im f^N; None if one side is zero."""
    mat = f.matrix if isinstance(f, ModuleMap) else np.asarray(f, dtype=np.int64)
    F = a.F
    if mat.shape != (a.dim, a.dim):
        raise ValueError("endomorphism has the wrong shape")
    for g in a.gens:
        if not np.array_equal(F.matmul(mat, g), F.matmul(g, mat)):
            raise ValueError("matrix is not an endomorphism of the module")
    return _fitting(a, mat)


def _fitting(a: GModule, mat: np.ndarray):
    F = a.F
    fN = _stable_power(F, mat)
    K = F.kernel(fN)
    if K.shape[1] == 0 or K.shape[1] == a.dim:
        return None
    I = F.image(fN)
    return submodule(a, K, f"ker({a.label})"), submodule(a, I, f"im({a.label})")


def _roots(F: Field, poly: np.ndarray) -> list[int]:
    xs = np.arange(F.q, dtype=np.int64)
    acc = np.zeros(F.q, dtype=np.int64)
    for c in poly[::-1]:
        acc = F.add_t[F.mul_t[acc, xs], c]
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _try_split_with(a: GModule, f: np.ndarray):
    """Fitting split driven by an eigenvalue in the base field, if any."""
    F = a.F
    roots = _roots(F, F.charpoly(f))
    if len(roots) >= 2:
        return _fitting(a, F.sub_mat(f, F.scale(roots[0], np.eye(a.dim, dtype=np.int64))))
    if len(roots) == 1:
        g = F.sub_mat(f, F.scale(roots[0], np.eye(a.dim, dtype=np.int64)))
        return _fitting(a, g)
    # no eigenvalue in the base field: separate by the Q-power map
    g = F.sub_mat(F.mat_power(f, F.q), f)
    return _fitting(a, g)


# ---------------------------------------------------------------------------
# endomorphism algebra and locality


class EndAlgebra:
    """Structure constants of End(a) in a fixed basis."""

    def __init__(self, a: GModule, basis: np.ndarray):
        F = a.F
        self.F = F
        self.a = a
        self.basis = basis
        s, d, _ = basis.shape
        self.s, self.d = s, d
        flat = basis.reshape(s, d * d)
        _, piv = F.rref(flat)
        self.pos = piv
        self.bp_inv = F.inverse(flat[:, piv])
        rows, cols = piv // d, piv % d
        vals = np.empty((s, s, s), dtype=np.int64)
        for l in range(s):
            vals[:, :, l] = F.matmul(basis[:, rows[l], :], basis[:, :, cols[l]].T)
        self.T = F.matmul(vals.reshape(s * s, s), self.bp_inv).reshape(s, s, s)

    def coords(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        flat = X.reshape(-1, self.d * self.d)[:, self.pos]
        out = self.F.matmul(flat, self.bp_inv)
        return out[0] if X.ndim == 2 else out

    def element(self, c: np.ndarray) -> np.ndarray:
        return self.F.lincomb(np.asarray(c, dtype=np.int64), self.basis)

    def left_mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Products x_a * y_b for row sets X (r1 x s), Y (r2 x s): (r1, r2, s)."""
        F = self.F
        XT = F.matmul(X, self.T.reshape(self.s, self.s * self.s)).reshape(-1, self.s, self.s)
        return np.stack([F.matmul(Y, XT[a]) for a in range(XT.shape[0])])

    def ideal_closure(self, rows: np.ndarray) -> np.ndarray:
        F = self.F
        C = F.row_basis(rows) if rows.shape[0] else rows
        while C.shape[0]:
            parts = [C]
            for i in range(self.s):
                parts.append(F.matmul(C, self.T[i]))  # B_i * c
                parts.append(F.matmul(C, self.T[:, i, :]))  # c * B_i
            N = F.row_basis(np.concatenate(parts))
            if N.shape[0] == C.shape[0]:
                break
            C = N
        return C

    def commutator_ideal(self) -> np.ndarray:
        D = self.F.sub_mat(self.T, self.T.transpose(1, 0, 2)).reshape(self.s * self.s, self.s)
        return self.ideal_closure(D)

    def is_nilpotent_ideal(self, C: np.ndarray) -> bool:
        """C^k = 0 for some k, decided on the module: C^k = 0 iff C^k(a) = 0.

        W_0 = a and W_{k+1} = sum of c(W_k) over a basis of C; C^k(a) = W_k.
        The chain is decreasing, so it either reaches 0 or stalls.
        """
        F = self.F
        if C.shape[0] == 0:
            return True
        d = self.d
        step = max(1, NILPOTENT_CHUNK_ENTRIES // (d * d))
        W = np.eye(d, dtype=np.int64)  # columns span W_0
        while W.shape[1]:
            N = np.zeros((d, 0), dtype=np.int64)
            for lo in range(0, C.shape[0], step):
                mats = F.lincomb(C[lo : lo + step], self.basis)
                imgs = F.matmul(mats.reshape(-1, d), W).reshape(mats.shape[0], d, W.shape[1])
                N = F.image(np.concatenate([N, *imgs], axis=1))
            if N.shape[1] == W.shape[1]:
                return False
            W = N
        return True


@dataclass
class IndecCertificate:
    kind: str
    end_dim: int = 0
    commutator_dim: int = 0
    frobenius_fixed_dim: int = 0

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class SplitWitness:
    dims: tuple[int, int]
    parts: tuple[GModule, GModule] = field(repr=False, default=None)


def _locality(a: GModule, rng: np.random.Generator):
    """Return ("local", cert) | ("split", (A1, A2)) | ("unknown", None)."""
    F = a.F
    E = end_basis(a)
    s = E.shape[0]
    if s == 1:
        return "local", IndecCertificate("local-end", 1, 0, 1)
    if s > END_ALGEBRA_LIMIT:
        return "unknown", None
    alg = EndAlgebra(a, E)
    C = alg.commutator_ideal()
    if C.shape[0] and not alg.is_nilpotent_ideal(C):
        # a non-nilpotent, non-invertible element of C gives a split directly
        for row in C:
            x = alg.element(row)
            r = F.rank(_stable_power(F, x))
            if 0 < r < a.dim:
                return "split", _fitting(a, x)
        return "unknown", None
    # commutative quotient E/C: count local factors with x -> x^Q
    rc = C.shape[0]
    if rc:
        _, piv = F.rref(C)
    else:
        piv = np.zeros(0, dtype=np.int64)
    free = np.setdiff1d(np.arange(s), piv)
    full = np.zeros((s, s), dtype=np.int64)
    full[:rc] = C
    full[rc + np.arange(len(free)), free] = 1
    to_full = F.inverse(full)  # row vector v -> v @ to_full gives coords in [C; U]
    frob = np.zeros((len(free), len(free)), dtype=np.int64)
    for j, i in enumerate(free):
        xq = F.mat_power(E[i], F.q)
        c = alg.coords(xq)
        frob[j] = F.matmul(c[None, :], to_full)[0, rc:]
    M = F.sub_mat(frob, np.eye(len(free), dtype=np.int64))
    fixed = F.kernel(M.T)  # row vectors v with v frob = v
    nfix = fixed.shape[1]
    if nfix == 1:
        return "local", IndecCertificate("local-end", s, rc, 1)
    for k in range(nfix):
        coeffs = np.zeros(s, dtype=np.int64)
        coeffs[free] = fixed[:, k]
        x = alg.element(coeffs)
        roots = _roots(F, F.charpoly(x))
        if len(roots) >= 2:
            eye = np.eye(a.dim, dtype=np.int64)
            return "split", _fitting(a, F.sub_mat(x, F.scale(roots[0], eye)))
    return "unknown", None


def is_indecomposable(a: GModule, seed: int = 0):
    """(True, certificate) or (False, SplitWitness); raises on the zero module."""
    if a.dim == 0:
        raise ValueError("the zero module is neither decomposable nor indecomposable")
    if "indec" in a._cache:
        return a._cache["indec"]
    rng = np.random.default_rng([seed, 0xC0])
    res = _indec(a, rng)
    a._cache["indec"] = res
    return res


def _random_end(a: GModule, E: np.ndarray, rng: np.random.Generator, dense: bool = False) -> np.ndarray:
    """Sparse (4 basis elements) or dense random combination of the End basis.

    Sparse draws are cheap to log and reproduce, but when the radical has
    small codimension they almost always land inside it; dense draws avoid
    that.
    """
    s = E.shape[0]
    k = s if dense else min(s, 4)
    idx = rng.choice(s, size=k, replace=False)
    coeffs = np.zeros(s, dtype=np.int64)
    coeffs[idx] = rng.integers(1, a.F.q, size=k)
    return a.F.lincomb(coeffs, E)


def _indec(a: GModule, rng: np.random.Generator, trials: int = 4):
    F = a.F
    if a.group.n == 1:
        # cyclic group: indecomposable iff a single Jordan block
        u = a.nilpotents()[0]
        r = F.rank(u)
        if r == a.dim - 1:
            return True, IndecCertificate("single-jordan-block", a.dim)
    nfree, _ = _free_count(a)
    if nfree and a.dim == a.group.q:
        return True, IndecCertificate("free-cyclic", a.dim)
    if nfree:
        parts = split_free(a)
        return False, SplitWitness((parts[0].dim, parts[1].dim), parts)
    E = end_basis(a)
    if E.shape[0] == 1:
        return True, IndecCertificate("local-end", 1, 0, 1)
    # cheap random attempts first, then the deterministic certificate
    for i in range(trials):
        f = _random_end(a, E, rng, dense=i % 2 == 1)
        sp = _try_split_with(a, f)
        if sp:
            return False, SplitWitness((sp[0].dim, sp[1].dim), sp)
    status, info = _locality(a, rng)
    if status == "local":
        return True, info
    if status == "split":
        return False, SplitWitness((info[0].dim, info[1].dim), info)
    for i in range(MAX_TRIALS):
        f = _random_end(a, E, rng, dense=i % 2 == 1)
        sp = _try_split_with(a, f)
        if sp:
            return False, SplitWitness((sp[0].dim, sp[1].dim), sp)
    return None, None


# ---------------------------------------------------------------------------
# free summands


def _free_count(a: GModule) -> tuple[int, np.ndarray]:
    """Rank of the norm element prod_i u_i^(p-1) and its matrix."""
    F = a.F
    N = np.eye(a.dim, dtype=np.int64)
    for u in a.nilpotents():
        N = F.matmul(F.mat_power(u, a.group.p - 1), N)
    return F.rank(N), N


def split_free(a: GModule) -> tuple[GModule, GModule]:
    """(free part, complement) with the free part spanned by orbits of generators."""
    F = a.F
    f, N = _free_count(a)
    g = a.group
    if f == 0:
        return _mk(g, [np.zeros((0, 0), dtype=np.int64)] * g.n, "0", 0), a
    _, piv = F.rref(N)  # pivot columns: N e_c independent
    V = np.zeros((a.dim, f), dtype=np.int64)
    V[piv, np.arange(f)] = 1
    S = F.matmul(N, V)  # socle images, d x f
    phi = F.solve(S.T, np.eye(f, dtype=np.int64))  # d x f functionals with phi_k(S_j) = delta
    orb = a.orbit_vectors(V)  # q x d x f
    free_basis = orb.transpose(1, 0, 2).reshape(a.dim, g.q * f)
    # retraction rows: phi_k^T rho(-h) for every h
    orb_dual = dual(a).orbit_vectors(phi)  # q x d x f : rho(h)^{-T} phi_k
    Rmat = orb_dual.transpose(0, 2, 1).reshape(g.q * f, a.dim)
    comp = F.kernel(Rmat)
    free_part = submodule(a, free_basis, "reg" if f == 1 else f"reg^{f}")
    rest = submodule(a, comp, f"cmp({a.label})") if comp.shape[1] else _mk(g, [np.zeros((0, 0), dtype=np.int64)] * g.n, "0", 0)
    return free_part, rest


# ---------------------------------------------------------------------------
# isomorphism


@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "undetermined"
    witness: np.ndarray | None = None
    certificate: str = ""

    def __bool__(self):
        return self.verdict == "yes"


def _invertible_in_hom(a: GModule, b: GModule, H: HomSpace, rng: np.random.Generator) -> np.ndarray | None:
    F = a.F
    for m in H.basis:
        if F.rank(m) == a.dim:
            return m
    for _ in range(8 if H.dim > 1 else 0):
        c = rng.integers(0, F.q, size=H.dim)
        m = H.combine(c)
        if F.rank(m) == a.dim:
            return m
    return None


def _random_invertible(a: GModule, b: GModule, rng: np.random.Generator, tries: int) -> np.ndarray | None:
    F = a.F
    batch = 8
    done = 0
    while done < tries:
        for m in random_homs(a, b, min(batch, tries - done), rng):
            if F.rank(m) == a.dim:
                return m
        done += batch
    return None


def is_isomorphic(a: GModule, b: GModule, seed: int = 0) -> IsoResult:
    """Decide a ≅ b.

    A random intertwiner that happens to be invertible settles "yes".  For an
    indecomposable source End(a) is local, so an isomorphism exists exactly
    when some element of a Hom basis is invertible.  Otherwise both sides are
    decomposed and their certified summands matched up (Krull-Schmidt).
    Modules above DIRECT_ISO_DIM skip the full Hom basis and go straight to
    the decomposition, which is far cheaper for large decomposable modules.
    """
    _check_group(a, b)
    if a.dim != b.dim:
        return IsoResult("no", certificate=f"dim {a.dim} vs {b.dim}")
    if a.dim == 0:
        return IsoResult("yes", np.zeros((0, 0), dtype=np.int64), "zero modules")
    fa, fb = fingerprint(a), fingerprint(b)
    if fa != fb:
        return IsoResult("no", certificate="fingerprint " + "; ".join(fa.differences(fb)))
    rng = np.random.default_rng([seed, 0x150])
    w = _random_invertible(a, b, rng, 8)
    if w is not None:
        return IsoResult("yes", w, "invertible intertwiner")
    if a.dim <= DIRECT_ISO_DIM:
        ok, _ = is_indecomposable(a, seed)
        if ok:
            return _local_basis_test(a, b, rng)
    ra = decompose(a, seed)
    if len(ra.leaves) == 1 and not ra.undetermined:
        return _local_basis_test(a, b, rng)
    rb = decompose(b, seed)
    if ra.undetermined or rb.undetermined:
        return IsoResult("undetermined", certificate="uncertified summands")
    la, lb = ra.label_multiset(), rb.label_multiset()
    if la != lb:
        return IsoResult("no", certificate=f"summands {dict(la)} vs {dict(lb)}")
    # equal catalogue multisets of certified indecomposables: match fingerprint-labelled leaves
    if _leaves_match(ra, rb, seed):
        # Krull-Schmidt: matching indecomposable summands already prove a ≅ b
        w = _witness_search(a, b, seed)
        return IsoResult("yes", w, "matching indecomposable summands")
    return IsoResult("no", certificate="summands pairwise non-isomorphic")


def _local_basis_test(a: GModule, b: GModule, rng: np.random.Generator) -> IsoResult:
    """Source with local End: a ≅ b iff some Hom basis element is invertible."""
    H = hom_space(a, b)
    w = _invertible_in_hom(a, b, H, rng)
    if w is not None:
        return IsoResult("yes", w, "invertible intertwiner")
    return IsoResult("no", certificate="no invertible Hom basis element with End(source) local")


def _leaves_match(ra: "DecompositionReport", rb: "DecompositionReport", seed: int) -> bool:
    pool = list(rb.leaves)
    for x in ra.leaves:
        for j, y in enumerate(pool):
            if x.dim == y.dim and is_isomorphic(x, y, seed).verdict == "yes":
                pool.pop(j)
                break
        else:
            return False
    return True


def _witness_search(a: GModule, b: GModule, seed: int, tries: int = MAX_TRIALS) -> np.ndarray | None:
    """Random intertwiners until one is invertible."""
    return _random_invertible(a, b, np.random.default_rng([seed, 0x151]), tries)


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Summand:
    label: str
    dim: int
    multiplicity: int
    certified: bool
    module: GModule = field(repr=False, default=None)

    def to_dict(self):
        return {"label": self.label, "dim": self.dim, "multiplicity": self.multiplicity, "certified": self.certified}


@dataclass
class DecompositionReport:
    input: str
    summands: list[Summand]
    seed: int
    leaves: list[GModule] = field(repr=False, default_factory=list)
    leaf_labels: list[str] = field(repr=False, default_factory=list)
    module: GModule | None = field(repr=False, default=None)

    @property
    def undetermined(self) -> int:
        return sum(s.multiplicity for s in self.summands if not s.certified)

    def label_multiset(self) -> Counter:
        return Counter({s.label: s.multiplicity for s in self.summands})

    def dims(self) -> list[int]:
        return sorted(x.dim for x in self.leaves)

    def to_dict(self) -> dict:
        return {"input": self.input, "summands": [s.to_dict() for s in self.summands], "seed": self.seed}

    def __str__(self):
        if not self.summands:
            return "0"
        parts = []
        for s in self.summands:
            parts.append(s.label if s.multiplicity == 1 else f"{s.multiplicity}x{s.label}")
        return " + ".join(parts)


class Catalogue:
    """Named reference indecomposables for one group, built lazily per dimension."""

    def __init__(self, group: GroupSpec):
        self.group = group
        self._by_dim: dict[int, list[tuple[str, GModule]]] | None = None

    def _build(self):
        from .stablecat import coheller, heller

        g = self.group
        entries: list[tuple[str, GModule]] = []
        for m in range(1, g.q + 1):
            entries.append((f"V({m})", build_V(m, g)))
        for m in range(1, g.q + 1):
            entries.append((f"Vd({m})", build_V_dual(m, g)))
        if g.n > 1:
            for m in range(1, g.q):
                oi = coheller(build_V(m, g))
                entries.append((f"Oi(V({m}))", oi))
            for m in range(1, g.q):
                o = heller(build_V_dual(m, g))
                entries.append((f"O(Vd({m}))", o))
        by_dim: dict[int, list[tuple[str, GModule]]] = {}
        for lab, mod in entries:
            if mod.dim:
                by_dim.setdefault(mod.dim, []).append((lab, mod.relabel(lab)))
        self._by_dim = by_dim

    def match(self, leaf: GModule, seed: int = 0) -> str | None:
        if self._by_dim is None:
            self._build()
        cands = self._by_dim.get(leaf.dim, [])
        if not cands:
            return None
        fp = fingerprint(leaf)
        for lab, mod in cands:
            if fingerprint(mod) != fp:
                continue
            if is_isomorphic(mod, leaf, seed).verdict == "yes":
                return lab
        return None


_CATALOGUES: dict[GroupSpec, Catalogue] = {}


def catalogue_for(group: GroupSpec) -> Catalogue:
    if group not in _CATALOGUES:
        _CATALOGUES[group] = Catalogue(group)
    return _CATALOGUES[group]


def _jordan_leaves(a: GModule) -> list[tuple[GModule, np.ndarray | None]]:
    F = a.F
    u = a.nilpotents()[0]
    ranks = [a.dim]
    P = np.eye(a.dim, dtype=np.int64)
    while ranks[-1]:
        P = F.matmul(u, P)
        ranks.append(F.rank(P))
    ranks.append(0)
    out = []
    for k in range(1, len(ranks) - 1):
        count = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1])
        for _ in range(count):
            out.append((build_V(k, a.group), None))
    return out


def _decompose_leaves(a: GModule, seed: int, path: tuple[int, ...], out: list, depth: int = 0):
    """Append (leaf module, certified, embedding columns) for every summand."""
    if a.dim == 0:
        return
    if a.group.n == 1:
        for mod, emb in _jordan_leaves(a):
            out.append((mod, True, None))
        return
    nfree, _ = _free_count(a)
    if nfree:
        free_part, rest = split_free(a)
        F = a.F
        g = a.group
        # each free cyclic summand is kG
        for _ in range(nfree):
            out.append((build_V(g.q, g), True, None))
        _decompose_leaves(rest, seed, path + (1,), out, depth + 1)
        return
    rng = np.random.default_rng([seed, *path])
    res = _indec(a, rng)
    ok, info = res
    if ok:
        out.append((a, True, None))
    elif ok is None:
        log.warning("could not certify or split %s (dim %d)", a.label, a.dim)
        out.append((a, False, None))
    else:
        # a split module's End basis is not needed again and can be large
        a._cache.pop("end", None)
        a1, a2 = info.parts
        _decompose_leaves(a1, seed, path + (0,), out, depth + 1)
        _decompose_leaves(a2, seed, path + (1,), out, depth + 1)


def _sort_key(label: str, dim: int):
    return (dim, label)


def decompose(a: GModule, seed: int = 0) -> DecompositionReport:
    """Krull-Schmidt decomposition with catalogue labels."""
    key = ("dec", seed)
    if key in a._cache:
        return a._cache[key]
    leaves: list = []
    _decompose_leaves(a, seed, (), leaves)
    cat = catalogue_for(a.group)
    labelled = []
    for mod, cert, _ in leaves:
        lab = None
        if cert:
            if a.group.n == 1 or mod.label.startswith("V(") and mod.label.endswith(")") and _is_plain_v(mod):
                lab = mod.label
            else:
                lab = cat.match(mod, seed)
        if lab is None:
            lab = f"X{mod.dim}#{fingerprint(mod).digest()}"
        labelled.append((lab, mod, cert))
    counts: dict[tuple[str, bool], list] = {}
    for lab, mod, cert in labelled:
        counts.setdefault((lab, cert), []).append(mod)
    summands = [
        Summand(lab, mods[0].dim, len(mods), cert, mods[0])
        for (lab, cert), mods in sorted(counts.items(), key=lambda kv: (kv[1][0].dim, kv[0][0]))
    ]
    rep = DecompositionReport(
        a.label,
        summands,
        seed,
        leaves=[m for _, m, _ in labelled],
        leaf_labels=[lab for lab, _, _ in labelled],
        module=a,
    )
    a._cache[key] = rep
    return rep


def _is_plain_v(mod: GModule) -> bool:
    """True for modules produced by build_V (label V(m) and matching matrices)."""
    lab = mod.label
    try:
        m = int(lab[2:-1])
    except ValueError:
        return False
    if m != mod.dim or m > mod.group.q:
        return False
    ref = build_V(m, mod.group)
    return all(np.array_equal(x, y) for x, y in zip(ref.gens, mod.gens))
