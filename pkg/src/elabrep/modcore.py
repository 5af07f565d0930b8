"""Modules for an elementary abelian p-group G of order q = p^n.

G is identified with an additive subgroup E of a finite field spanned over
GF(p) by ``omega = (w_1, ..., w_n)``.  A module is stored as the n matrices
by which the basis elements w_i act; every other group element acts by the
corresponding product of generator powers.  Basis vectors are columns, so a
matrix ``g`` sends basis vector ``j`` to column ``g[:, j]``.
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .combinat import binom, binom_mod_p
from .exactmath import Field, FieldSpec, MatrixFF

log = logging.getLogger(__name__)

__all__ = [
    "GroupSpec",
    "GModule",
    "ModuleMap",
    "build_W",
    "build_V",
    "build_V_dual",
    "trivial",
    "tensor",
    "dsum",
    "dsum_all",
    "dual",
    "sym_power",
    "ext_power",
    "truncate",
    "restrict",
    "induce",
    "fixed_points",
    "radical",
    "socle",
    "radical_layers",
    "socle_layers",
    "submodule",
    "quotient_module",
    "module_to_dict",
    "module_from_dict",
]


# ---------------------------------------------------------------------------
# group


@dataclass(frozen=True)
class GroupSpec:
    """Elementary abelian group of order p^n realised inside a field."""

    p: int
    n: int
    field: FieldSpec
    omega: tuple[int, ...]

    def __post_init__(self):
        if self.field.p != self.p:
            raise ValueError("field characteristic differs from p")
        if len(self.omega) != self.n:
            raise ValueError("omega must have n entries")
        if self.n and _gfp_rank(self.field, self.omega) != self.n:
            raise ValueError("omega is not GF(p)-linearly independent")

    @classmethod
    def make(cls, p: int, n: int, field: FieldSpec | None = None, omega: Sequence | None = None) -> "GroupSpec":
        """Default model: field GF(p^n) and omega the polynomial basis."""
        fs = field if field is not None else FieldSpec(p, n)
        if omega is None:
            if fs.e < n:
                raise ValueError("field too small for default omega")
            omega = tuple(p**i for i in range(n))
        else:
            omega = tuple(int(w) if not isinstance(w, (list, tuple)) else fs.element(list(w)).value for w in omega)
        return cls(p, n, fs, omega)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def F(self) -> Field:
        return self.field.arith

    def element_code(self, coords: Sequence[int]) -> int:
        """Field code of sum_i coords[i] * omega[i]."""
        F = self.F
        acc = 0
        for c, w in zip(coords, self.omega):
            acc = int(F.add_t[acc, F.mul_t[int(c) % self.p, w]])
        return acc

    def coords(self, alpha: int) -> np.ndarray | None:
        """GF(p) coordinates of a field element in omega, or None if outside E."""
        F = self.F
        if self.n == 0:
            return np.zeros(0, dtype=np.int64) if alpha == 0 else None
        D = F.digits[list(self.omega)].T  # e x n over GF(p)
        sol = _gfp_solve(self.p, D, F.digits[alpha])
        return sol

    def all_coords(self) -> np.ndarray:
        return np.array(list(itertools.product(range(self.p), repeat=self.n)), dtype=np.int64).reshape(-1, self.n)

    def subgroups(self, max_order: int | None = None) -> list[np.ndarray]:
        """Every subgroup as a reduced-echelon GF(p) coordinate basis (k x n)."""
        out = []
        for k in range(self.n + 1):
            if max_order is not None and self.p**k > max_order:
                break
            out.extend(_echelon_bases(self.p, self.n, k))
        return out

    def cyclic_subgroups(self) -> list[np.ndarray]:
        return _echelon_bases(self.p, self.n, 1)

    def subgroup(self, basis) -> "GroupSpec":
        B = np.asarray(basis, dtype=np.int64).reshape(-1, self.n) % self.p
        if B.shape[0] and _gfp_rank_rows(self.p, B) != B.shape[0]:
            raise ValueError("subgroup generators are GF(p)-dependent")
        omega = tuple(self.element_code(row) for row in B)
        return GroupSpec(self.p, B.shape[0], self.field, omega)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "field": self.field.to_dict(),
            "omega": [self.field._decode(w) for w in self.omega],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        fs = FieldSpec.from_dict(d["field"])
        omega = tuple(fs.element(list(w)).value for w in d["omega"])
        return cls(int(d["p"]), int(d["n"]), fs, omega)

    def __str__(self):
        return f"G(p={self.p}, n={self.n}, {self.field})"


def _gfp_rank_rows(p: int, A: np.ndarray) -> int:
    return FieldSpec(p).arith.rank(np.asarray(A, dtype=np.int64) % p)


def _gfp_rank(fs: FieldSpec, codes: Sequence[int]) -> int:
    D = fs.arith.digits[list(codes)] if fs.order <= 1024 else np.array([fs._decode(c) for c in codes])
    return _gfp_rank_rows(fs.p, D)


def _gfp_solve(p: int, A: np.ndarray, b: np.ndarray):
    return FieldSpec(p).arith.solve(np.asarray(A, dtype=np.int64), np.asarray(b, dtype=np.int64))


@functools.lru_cache(maxsize=None)
def _echelon_bases_cached(p: int, n: int, k: int) -> tuple:
    out = []
    for piv in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(n) if c > piv[r] and c not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            B = np.zeros((k, n), dtype=np.int64)
            for r, c in enumerate(piv):
                B[r, c] = 1
            for (r, c), v in zip(free, vals):
                B[r, c] = v
            B.setflags(write=False)
            out.append(B)
    return tuple(out)


def _echelon_bases(p: int, n: int, k: int) -> list[np.ndarray]:
    return list(_echelon_bases_cached(p, n, k))


# ---------------------------------------------------------------------------
# labels


def _top_op(label: str) -> str | None:
    depth = 0
    seen = None
    for ch in label:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch == "+":
            return "+"
        elif depth == 0 and ch == "*":
            seen = "*"
    return seen


def _tensor_label(a: str, b: str) -> str:
    left = f"({a})" if _top_op(a) == "+" else a
    right = f"({b})" if _top_op(b) is not None else b
    return f"{left}*{right}"


def _sum_label(a: str, b: str) -> str:
    right = f"({b})" if _top_op(b) == "+" else b
    return f"{a}+{right}"


# ---------------------------------------------------------------------------
# modules


class GModule:
    """A kG-module given by the action matrices of the group generators.

    Args:
        group: the acting group.
        gens: n square matrices (field codes) for omega_1..omega_n.
        label: construction expression.
        validate: check commutation and exponent p.
    """

    def __init__(self, group: GroupSpec, gens: Sequence, label: str = "?", validate: bool = True, dim: int | None = None):
        mats = []
        for g in gens:
            arr = g.data if isinstance(g, MatrixFF) else np.array(g, dtype=np.int64)
            arr = np.ascontiguousarray(arr, dtype=np.int64)
            arr.setflags(write=False)
            mats.append(arr)
        if len(mats) != group.n:
            raise ValueError(f"expected {group.n} generator matrices, got {len(mats)}")
        d = mats[0].shape[0] if mats else int(dim or 0)
        for m in mats:
            if m.shape != (d, d):
                raise ValueError("generator matrices must be square of equal size")
        self.group = group
        self.gens = tuple(mats)
        self.dim = d
        self.label = label
        self._cache: dict = {}
        if validate:
            self.validate()

    @property
    def F(self) -> Field:
        return self.group.F

    @property
    def gens_ff(self) -> list[MatrixFF]:
        return [MatrixFF._wrap(self.group.field, g) for g in self.gens]

    def validate(self, samples: int = 2, seed: int = 0) -> None:
        F = self.F
        eye = np.eye(self.dim, dtype=np.int64)
        for i, a in enumerate(self.gens):
            if not np.array_equal(F.mat_power(a, self.group.p), eye):
                raise ValueError(f"generator {i} does not have order dividing p")
            for b in self.gens[i + 1 :]:
                if not np.array_equal(F.matmul(a, b), F.matmul(b, a)):
                    raise ValueError("generators do not commute")
        if self.group.n and self.dim:
            rng = np.random.default_rng(seed)
            for _ in range(samples):
                x = rng.integers(0, self.group.p, self.group.n)
                y = rng.integers(0, self.group.p, self.group.n)
                lhs = F.matmul(self.element(x), self.element(y))
                if not np.array_equal(lhs, self.element((x + y) % self.group.p)):
                    raise ValueError("action is not a homomorphism")

    def element(self, coords: Sequence[int]) -> np.ndarray:
        """Matrix of the group element sum_i coords[i] * omega[i]."""
        F = self.F
        out = np.eye(self.dim, dtype=np.int64)
        for c, g in zip(coords, self.gens):
            c = int(c) % self.group.p
            if c:
                out = F.matmul(out, F.mat_power(g, c))
        return out

    def nilpotents(self) -> list[np.ndarray]:
        """u_i = rho(omega_i) - I."""
        if "nil" not in self._cache:
            eye = np.eye(self.dim, dtype=np.int64)
            self._cache["nil"] = [self.F.sub_mat(g, eye) for g in self.gens]
        return self._cache["nil"]

    def orbit_vectors(self, vecs: np.ndarray) -> np.ndarray:
        """Images g*v for every group element g (all_coords order) and every column v.

        Returns an array of shape (q, dim, k).
        """
        F = self.F
        cur = np.asarray(vecs, dtype=np.int64)[None, :, :]
        d, k = self.dim, cur.shape[2]
        for g in reversed(self.gens):
            layers = [cur]
            for _ in range(self.group.p - 1):
                prev = layers[-1]
                flat = prev.transpose(1, 0, 2).reshape(d, -1)
                nxt = F.matmul(g, flat).reshape(d, prev.shape[0], k).transpose(1, 0, 2)
                layers.append(nxt)
            cur = np.concatenate(layers, axis=0)
        return cur

    def relabel(self, label: str) -> "GModule":
        m = GModule(self.group, self.gens, label, validate=False, dim=self.dim)
        return m

    def __repr__(self):
        return f"GModule({self.label}, dim={self.dim}, {self.group})"


def _mk(group: GroupSpec, gens, label: str, dim: int) -> GModule:
    return GModule(group, gens, label, validate=False, dim=dim)


@dataclass
class ModuleMap:
    source: GModule
    target: GModule
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError("map matrix has wrong shape")

    def intertwines(self) -> bool:
        F = self.source.F
        for gs, gt in zip(self.source.gens, self.target.gens):
            if not np.array_equal(F.matmul(self.matrix, gs), F.matmul(gt, self.matrix)):
                return False
        return True

    def rank(self) -> int:
        return self.source.F.rank(self.matrix)

    def kernel_dim(self) -> int:
        return self.source.dim - self.rank()


# ---------------------------------------------------------------------------
# constructions


def _check_group(*mods: GModule) -> GroupSpec:
    g = mods[0].group
    for m in mods[1:]:
        if m.group != g:
            raise ValueError(f"group mismatch: {g} vs {m.group}")
    return g


def trivial(group: GroupSpec, dim: int = 1) -> GModule:
    eye = np.eye(dim, dtype=np.int64)
    return _mk(group, [eye] * group.n, "V(1)" if dim == 1 else f"V(1)^{dim}", dim)


def build_W(group: GroupSpec) -> GModule:
    gens = [np.array([[1, w], [0, 1]], dtype=np.int64) for w in group.omega]
    return GModule(group, gens, "W")


def _v_matrix(F: Field, p: int, m: int, alpha: int, dual_: bool) -> np.ndarray:
    mat = np.zeros((m, m), dtype=np.int64)
    if dual_:
        powers = [1]
        for _ in range(m):
            powers.append(int(F.mul_t[powers[-1], alpha]))
        for i in range(m):
            for j in range(i + 1):
                c = binom_mod_p(i, j, p)
                if c:
                    mat[i - j, i] = F.mul_t[c, powers[j]]
    else:
        na = int(F.neg_t[alpha])
        powers = [1]
        for _ in range(m):
            powers.append(int(F.mul_t[powers[-1], na]))
        for i in range(m):
            for j in range(m - i):
                c = binom_mod_p(i + j, i, p)
                if c:
                    mat[i + j, i] = F.mul_t[c, powers[j]]
    return mat


def build_V(m: int, group: GroupSpec) -> GModule:
    """V_m: basis x_0..x_{m-1}, alpha*x_i = sum_j C(i+j,i)(-alpha)^j x_{i+j}."""
    if not 1 <= m <= group.q:
        raise ValueError(f"V({m}) needs 1 <= m <= {group.q}")
    gens = [_v_matrix(group.F, group.p, m, w, False) for w in group.omega]
    return _mk(group, gens, f"V({m})", m)


def build_V_dual(m: int, group: GroupSpec) -> GModule:
    """V_m^* = S^{m-1}(W): basis a_0..a_{m-1}, alpha*a_i = sum_j C(i,j) alpha^j a_{i-j}."""
    if not 1 <= m <= group.q:
        raise ValueError(f"Vd({m}) needs 1 <= m <= {group.q}")
    gens = [_v_matrix(group.F, group.p, m, w, True) for w in group.omega]
    return _mk(group, gens, f"Vd({m})", m)


def v_element_matrix(m: int, group: GroupSpec, alpha: int, dual_: bool = False) -> np.ndarray:
    """Closed-form action matrix of an arbitrary field element on V_m or V_m^*."""
    return _v_matrix(group.F, group.p, m, alpha, dual_)


def tensor(a: GModule, b: GModule) -> GModule:
    g = _check_group(a, b)
    F = g.F
    gens = [F.kron(x, y) for x, y in zip(a.gens, b.gens)]
    return _mk(g, gens, _tensor_label(a.label, b.label), a.dim * b.dim)


def dsum(a: GModule, b: GModule) -> GModule:
    g = _check_group(a, b)
    gens = [g.F.block_diag(x, y) for x, y in zip(a.gens, b.gens)]
    return _mk(g, gens, _sum_label(a.label, b.label), a.dim + b.dim)


def dsum_all(mods: Sequence[GModule], label: str | None = None) -> GModule:
    if not mods:
        raise ValueError("empty direct sum")
    g = _check_group(*mods)
    gens = [g.F.block_diag(*[m.gens[i] for m in mods]) for i in range(g.n)]
    lab = label
    if lab is None:
        lab = mods[0].label
        for m in mods[1:]:
            lab = _sum_label(lab, m.label)
    return _mk(g, gens, lab, sum(m.dim for m in mods))


def dual(a: GModule) -> GModule:
    """Contragredient: rho*(g) = transpose(rho(g)^{-1}) = transpose(rho(g)^{p-1})."""
    F = a.F
    gens = [np.ascontiguousarray(F.mat_power(x, a.group.p - 1).T) for x in a.gens]
    return _mk(a.group, gens, f"dual({a.label})", a.dim)


# -- symmetric and exterior powers


@functools.lru_cache(maxsize=256)
def _sym_tables(dim: int, d: int):
    """Monomial bases of degrees 0..d and multiplication-by-variable tables."""
    bases = [list(itertools.combinations_with_replacement(range(dim), k)) for k in range(d + 1)]
    index = [{m: i for i, m in enumerate(b)} for b in bases]
    mul, parent, last = [], [], []
    for k in range(d):
        nxt = index[k + 1]
        t = np.empty((len(bases[k]), dim), dtype=np.int64)
        for i, mono in enumerate(bases[k]):
            for v in range(dim):
                t[i, v] = nxt[tuple(sorted(mono + (v,)))]
        mul.append(t)
        parent.append(np.array([index[k][mono[:-1]] for mono in bases[k + 1]], dtype=np.int64))
        last.append(np.array([mono[-1] for mono in bases[k + 1]], dtype=np.int64))
    return bases, mul, parent, last


@functools.lru_cache(maxsize=256)
def _ext_tables(dim: int, d: int):
    bases = [list(itertools.combinations(range(dim), k)) for k in range(d + 1)]
    index = [{m: i for i, m in enumerate(b)} for b in bases]
    mul, sign, parent, last = [], [], [], []
    for k in range(d):
        nxt = index[k + 1]
        t = np.full((len(bases[k]), dim), -1, dtype=np.int64)
        s = np.zeros((len(bases[k]), dim), dtype=np.int64)
        for i, mono in enumerate(bases[k]):
            for v in range(dim):
                if v in mono:
                    continue
                t[i, v] = nxt[tuple(sorted(mono + (v,)))]
                s[i, v] = sum(1 for x in mono if x > v) % 2
        mul.append(t)
        sign.append(s)
        parent.append(np.array([index[k][mono[:-1]] for mono in bases[k + 1]], dtype=np.int64))
        last.append(np.array([mono[-1] for mono in bases[k + 1]], dtype=np.int64))
    return bases, mul, sign, parent, last


def _scatter_field_sum(F: Field, codes: np.ndarray, rows: np.ndarray, cols: np.ndarray, shape) -> np.ndarray:
    """Field sum of ``codes`` accumulated into out[rows, cols]."""
    flat = rows * shape[1] + cols
    size = shape[0] * shape[1]
    acc = np.zeros((size, F.e), dtype=np.int64)
    for i in range(F.e):
        acc[:, i] = np.bincount(flat, weights=F.digits[codes, i], minlength=size).astype(np.int64)
    return ((acc % F.p) @ F.pow_p).reshape(shape)


def _power_step(F: Field, G_k: np.ndarray, g: np.ndarray, mul: np.ndarray, parent, last, sign=None):
    Nk = G_k.shape[0]
    dim = g.shape[0]
    Nn = len(parent)
    A = G_k[:, parent]  # Nk x Nn
    B = g[:, last]  # dim x Nn
    prod = F.mul_t[A[:, None, :], B[None, :, :]]  # Nk x dim x Nn
    rows = np.broadcast_to(mul[:, :, None], prod.shape)
    cols = np.broadcast_to(np.arange(Nn)[None, None, :], prod.shape)
    if sign is not None:
        sg = np.broadcast_to(sign[:, :, None], prod.shape)
        prod = np.where(sg == 1, F.neg_t[prod], prod)
        keep = (rows >= 0) & (prod != 0)
    else:
        keep = prod != 0
    return _scatter_field_sum(F, prod[keep], rows[keep], cols[keep], (Nn, Nn))


def _sym_matrix(F: Field, g: np.ndarray, d: int) -> np.ndarray:
    dim = g.shape[0]
    bases, mul, parent, last = _sym_tables(dim, d)
    G = np.ones((1, 1), dtype=np.int64)
    for k in range(d):
        G = _power_step(F, G, g, mul[k], parent[k], last[k])
    return G


def _ext_matrix(F: Field, g: np.ndarray, d: int) -> np.ndarray:
    dim = g.shape[0]
    bases, mul, sign, parent, last = _ext_tables(dim, d)
    G = np.ones((1, 1), dtype=np.int64)
    for k in range(d):
        G = _power_step(F, G, g, mul[k], parent[k], last[k], sign[k])
    return G


def sym_power(a: GModule, d: int) -> GModule:
    """S^d(a) on the monomial basis (weakly increasing index tuples, lex order)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    F = a.F
    if a.dim == 0:
        dim = 1 if d == 0 else 0
        gens = [np.eye(dim, dtype=np.int64)] * a.group.n
    else:
        gens = [_sym_matrix(F, g, d) for g in a.gens]
        dim = binom(a.dim + d - 1, d)
    return _mk(a.group, gens, f"S({d},{a.label})", dim)


def ext_power(a: GModule, d: int) -> GModule:
    """Lambda^d(a) on the wedge basis (strictly increasing index tuples, lex order)."""
    if not 0 <= d <= a.dim:
        raise ValueError(f"exterior degree {d} out of range for dim {a.dim}")
    F = a.F
    gens = [_ext_matrix(F, g, d) for g in a.gens]
    return _mk(a.group, gens, f"L({d},{a.label})", binom(a.dim, d))


def sym_basis(dim: int, d: int) -> list[tuple[int, ...]]:
    """Pinned monomial basis order used by sym_power."""
    return list(itertools.combinations_with_replacement(range(dim), d))


def ext_basis(dim: int, d: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(dim), d))


# -- maps, restriction, induction


def truncate(m: int, l: int, group: GroupSpec) -> ModuleMap:
    """pi_{m,l}: V_m -> V_l setting x_l..x_{m-1} to zero."""
    if not 1 <= l <= m <= group.q:
        raise ValueError(f"need 1 <= l <= m <= q, got l={l}, m={m}")
    mat = np.zeros((l, m), dtype=np.int64)
    mat[np.arange(l), np.arange(l)] = 1
    return ModuleMap(build_V(m, group), build_V(l, group), mat)


def _subgroup_text(B: np.ndarray) -> str:
    return "[" + ";".join(",".join(str(int(x)) for x in row) for row in B) + "]"


def restrict(a: GModule, sub) -> GModule:
    """Restriction to the subgroup spanned by the given omega-coordinate vectors."""
    B = np.asarray(sub, dtype=np.int64).reshape(-1, a.group.n)
    if np.any((B < 0) | (B >= a.group.p)):
        raise ValueError("subgroup coordinates must lie in 0..p-1")
    H = a.group.subgroup(B)
    gens = [a.element(row) for row in B]
    return _mk(H, gens, f"res({a.label},{_subgroup_text(B)})", a.dim)


def induce(nmod: GModule, group: GroupSpec) -> GModule:
    """Induction from the subgroup carrying ``nmod`` up to ``group``."""
    H = nmod.group
    if H.p != group.p or H.field != group.field:
        raise ValueError("subgroup and group live over different fields")
    k = H.n
    hb = []
    for w in H.omega:
        c = group.coords(w)
        if c is None:
            raise ValueError("subgroup is not contained in the group")
        hb.append(c % group.p)
    Hb = np.array(hb, dtype=np.int64).reshape(k, group.n)
    Fp = FieldSpec(group.p).arith
    # complement: unit vectors outside the row space of Hb
    comp = []
    cur = Hb.copy()
    rank = k
    for i in range(group.n):
        e = np.zeros((1, group.n), dtype=np.int64)
        e[0, i] = 1
        trial = np.concatenate([cur, e])
        if Fp.rank(trial) > rank:
            comp.append(e[0])
            cur = trial
            rank += 1
    C = np.array(comp, dtype=np.int64).reshape(-1, group.n)
    full = np.concatenate([Hb, C]) if k else C  # basis rows: H then complement
    full_inv_T = Fp.inverse(full.T)  # coordinates of x in this basis: full_inv_T @ x
    reps = list(itertools.product(range(group.p), repeat=C.shape[0]))
    rep_index = {r: i for i, r in enumerate(reps)}
    nc = len(reps)
    d = nmod.dim
    gens = []
    for gi in range(group.n):
        g = np.zeros(group.n, dtype=np.int64)
        g[gi] = 1
        mat = np.zeros((nc * d, nc * d), dtype=np.int64)
        for ci, r in enumerate(reps):
            x = (np.array(r, dtype=np.int64) @ C + g) % group.p
            co = Fp.matmul(full_inv_T, x[:, None])[:, 0]
            h, c2 = co[:k], tuple(int(v) for v in co[k:])
            tj = rep_index[c2]
            mat[tj * d : (tj + 1) * d, ci * d : (ci + 1) * d] = nmod.element(h)
        gens.append(mat)
    return _mk(group, gens, f"ind({nmod.label})", nc * d)


# -- submodule structure


def _stack_nil(a: GModule) -> np.ndarray:
    nil = a.nilpotents()
    if not nil:
        return np.zeros((0, a.dim), dtype=np.int64)
    return np.concatenate(nil, axis=0)


def fixed_points(a: GModule) -> tuple[int, np.ndarray]:
    """Joint kernel of rho(omega_i) - I; basis as columns."""
    K = a.F.kernel(_stack_nil(a))
    return K.shape[1], K


def radical(a: GModule) -> np.ndarray:
    """Span of (rho(omega_i) - I) v; basis as columns."""
    nil = a.nilpotents()
    if not nil or a.dim == 0:
        return np.zeros((a.dim, 0), dtype=np.int64)
    return a.F.image(np.concatenate(nil, axis=1))


def socle(a: GModule) -> np.ndarray:
    return fixed_points(a)[1]


def radical_layers(a: GModule) -> list[int]:
    """Dimensions of rad^k(a) for k = 0, 1, ... until zero."""
    if "radl" in a._cache:
        return a._cache["radl"]
    F = a.F
    nil = a.nilpotents()
    U = np.eye(a.dim, dtype=np.int64)
    dims = [a.dim]
    while U.shape[1] and nil:
        U = F.image(np.concatenate([F.matmul(u, U) for u in nil], axis=1))
        dims.append(U.shape[1])
    a._cache["radl"] = dims
    return dims


def socle_layers(a: GModule) -> list[int]:
    """Dimensions of soc^k(a) for k = 0, 1, ... until the whole module."""
    if "socl" in a._cache:
        return a._cache["socl"]
    F = a.F
    nil = a.nilpotents()
    dims = [0]
    B = np.zeros((a.dim, 0), dtype=np.int64)
    while B.shape[1] < a.dim:
        if not nil:
            B = np.eye(a.dim, dtype=np.int64)
        else:
            L = F.kernel(B.T).T if B.shape[1] else np.eye(a.dim, dtype=np.int64)
            B = F.kernel(np.concatenate([F.matmul(L, u) for u in nil], axis=0))
        dims.append(B.shape[1])
    a._cache["socl"] = dims
    return dims


def submodule(a: GModule, basis: np.ndarray, label: str | None = None, check: bool = True) -> GModule:
    """Induced action on an invariant subspace with the given column basis."""
    F = a.F
    basis = np.asarray(basis, dtype=np.int64)
    gens = []
    for g in a.gens:
        img = F.matmul(g, basis)
        sol = F.solve(basis, img)
        if sol is None:
            raise ValueError("subspace is not invariant")
        gens.append(sol)
    return _mk(a.group, gens, label or f"sub({a.label})", basis.shape[1])


def quotient_module(a: GModule, basis: np.ndarray, label: str | None = None) -> tuple[GModule, np.ndarray]:
    """Action on a / span(basis); returns the module and the projection matrix."""
    F = a.F
    B = F.image(np.asarray(basis, dtype=np.int64).reshape(a.dim, -1))
    r = B.shape[1]
    _, piv = F.rref(B.T)
    free = np.setdiff1d(np.arange(a.dim), piv)
    Cmp = np.zeros((a.dim, len(free)), dtype=np.int64)
    Cmp[free, np.arange(len(free))] = 1
    inv = F.inverse(np.concatenate([B, Cmp], axis=1))
    proj = inv[r:, :]
    gens = [F.matmul(F.matmul(proj, g), Cmp) for g in a.gens]
    return _mk(a.group, gens, label or f"quot({a.label})", len(free)), proj


# -- file format


def module_to_dict(a: GModule) -> dict:
    fs = a.group.field
    return {
        "group": a.group.to_dict(),
        "dim": a.dim,
        "gens": [[[fs._decode(int(x)) for x in row] for row in g] for g in a.gens],
        "label": a.label,
    }


def module_from_dict(d: dict) -> GModule:
    group = GroupSpec.from_dict(d["group"])
    fs = group.field
    dim = int(d["dim"])
    gens = []
    for g in d["gens"]:
        arr = np.array([[fs.element(list(c)).value for c in row] for row in g], dtype=np.int64).reshape(dim, dim)
        gens.append(arr)
    return GModule(group, gens, d.get("label", "?"), validate=True, dim=dim)
