"""Module expressions: parsing, canonical printing and evaluation.

Grammar (whitespace is ignored)::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := '(' expr ')' | atom | call
    atom   := 'W' | 'reg' | 'M'
    call   := 'V(' int ')' | 'Vd(' int ')'
            | 'dual(' expr ')' | 'O(' expr ')' | 'Oi(' expr ')'
            | 'S(' int ',' expr ')' | 'L(' int ',' expr ')'
            | 'res(' expr ',' subgroup ')' | 'ind(' expr [',' subgroup] ')'
    subgroup := '[' row (';' row)* ']'   rows of GF(p) coordinates
             |  '[]'                      the trivial subgroup

``*`` is the tensor product and binds tighter than ``+`` (direct sum).  Both
are left associative.  ``ind(e, H)`` evaluates ``e`` over the subgroup H and
induces the result to the whole group; ``ind(e)`` induces from the trivial
subgroup.  The canonical printer inserts only the parentheses the grammar
needs and agrees with the labels that ``elabrep.modcore`` attaches to
constructed modules.
"""

from __future__ import annotations

import hashlib
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .. import modcore as mc
from .. import stablecat as sc
from ..exactmath import FieldSpec
from ..modcore import GModule, GroupSpec

log = logging.getLogger(__name__)

__all__ = [
    "ExprSyntaxError",
    "Atom",
    "Call",
    "Power",
    "Sub",
    "BinOp",
    "ModuleExpr",
    "Context",
    "parse_expr",
    "to_text",
    "canonical",
    "eval_expr",
]


class ExprSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<<<{text[pos:]}")
        self.pos = pos


# -- syntax tree


@dataclass(frozen=True)
class Atom:
    name: str  # "V", "Vd", "W", "reg", "M"
    m: int | None = None


@dataclass(frozen=True)
class Call:
    op: str  # "dual", "O", "Oi"
    arg: "ModuleExpr"


@dataclass(frozen=True)
class Power:
    op: str  # "S" or "L"
    d: int
    arg: "ModuleExpr"


@dataclass(frozen=True)
class Sub:
    op: str  # "res" or "ind"
    arg: "ModuleExpr"
    basis: tuple[tuple[int, ...], ...] | None  # None: trivial subgroup for ind


@dataclass(frozen=True)
class BinOp:
    op: str  # "*" or "+"
    left: "ModuleExpr"
    right: "ModuleExpr"


ModuleExpr = Union[Atom, Call, Power, Sub, BinOp]


# -- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1

    def ident(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos or self.text[start : self.pos] == "-":
            self.pos = start
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def parse(self) -> ModuleExpr:
        e = self.expr()
        if self.peek():
            self.error("unexpected trailing input")
        return e

    def expr(self) -> ModuleExpr:
        e = self.term()
        while self.peek() == "+":
            self.pos += 1
            e = BinOp("+", e, self.term())
        return e

    def term(self) -> ModuleExpr:
        e = self.factor()
        while self.peek() == "*":
            self.pos += 1
            e = BinOp("*", e, self.factor())
        return e

    def subgroup(self) -> tuple[tuple[int, ...], ...]:
        self.expect("[")
        rows: list[tuple[int, ...]] = []
        if self.peek() == "]":
            self.pos += 1
            return ()
        row = [self.integer()]
        while True:
            ch = self.peek()
            if ch == ",":
                self.pos += 1
                row.append(self.integer())
            elif ch == ";":
                self.pos += 1
                rows.append(tuple(row))
                row = [self.integer()]
            elif ch == "]":
                self.pos += 1
                rows.append(tuple(row))
                break
            else:
                self.error("malformed subgroup basis")
        if len({len(r) for r in rows}) != 1:
            self.error("subgroup rows have different lengths")
        return tuple(rows)

    def factor(self) -> ModuleExpr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        start = self.pos
        name = self.ident()
        if not name:
            self.error("expected a module expression")
        if name in ("W", "reg", "M"):
            return Atom(name)
        if name in ("V", "Vd"):
            self.expect("(")
            m = self.integer()
            self.expect(")")
            return Atom(name, m)
        if name in ("dual", "O", "Oi"):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Call(name, e)
        if name in ("S", "L"):
            self.expect("(")
            d = self.integer()
            self.expect(",")
            e = self.expr()
            self.expect(")")
            return Power(name, d, e)
        if name == "res":
            self.expect("(")
            e = self.expr()
            self.expect(",")
            b = self.subgroup()
            self.expect(")")
            return Sub("res", e, b)
        if name == "ind":
            self.expect("(")
            e = self.expr()
            b = None
            if self.peek() == ",":
                self.pos += 1
                b = self.subgroup()
            self.expect(")")
            return Sub("ind", e, b)
        self.pos = start
        self.error(f"unknown name '{name}'")


def parse_expr(text: str) -> ModuleExpr:
    """Parse a module expression; raises ExprSyntaxError with the position."""
    return _Parser(text).parse()


# -- printer


def _basis_text(b) -> str:
    return "[" + ";".join(",".join(str(x) for x in row) for row in b) + "]"


def to_text(e: ModuleExpr) -> str:
    """Canonical text with the minimal parentheses."""
    if isinstance(e, Atom):
        return e.name if e.m is None else f"{e.name}({e.m})"
    if isinstance(e, Call):
        return f"{e.op}({to_text(e.arg)})"
    if isinstance(e, Power):
        return f"{e.op}({e.d},{to_text(e.arg)})"
    if isinstance(e, Sub):
        if e.op == "ind" and e.basis is None:
            return f"ind({to_text(e.arg)})"
        return f"{e.op}({to_text(e.arg)},{_basis_text(e.basis)})"
    if isinstance(e, BinOp):
        left, right = to_text(e.left), to_text(e.right)
        if e.op == "+":
            if isinstance(e.right, BinOp) and e.right.op == "+":
                right = f"({right})"
            return f"{left}+{right}"
        if isinstance(e.left, BinOp) and e.left.op == "+":
            left = f"({left})"
        if isinstance(e.right, BinOp):
            right = f"({right})"
        return f"{left}*{right}"
    raise TypeError(f"not a module expression: {e!r}")


def canonical(text: str) -> str:
    return to_text(parse_expr(text))


# -- evaluation


@dataclass
class Context:
    """Evaluation context: the group plus run options shared by the suites."""

    p: int
    n: int
    field_poly: tuple[int, ...] | None = None
    seed: int = 0
    max_dim: int = 400
    m_from: int = 1
    cache: object | None = None  # verify.cache.ResultCache
    jobs: int = 1
    _group: GroupSpec | None = field(default=None, repr=False)

    @property
    def group(self) -> GroupSpec:
        if self._group is None:
            fs = None
            if self.field_poly is not None:
                fs = FieldSpec(self.p, len(self.field_poly) - 1, tuple(self.field_poly))
            self._group = GroupSpec.make(self.p, self.n, field=fs)
        return self._group

    @property
    def q(self) -> int:
        return self.p**self.n

    def key(self) -> str:
        """Stable identifier of the group: p, n and the field polynomial."""
        g = self.group
        return f"p{g.p}-n{g.n}-f{','.join(str(c) for c in g.field.poly)}"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "field_poly": list(self.group.field.poly),
            "seed": self.seed,
            "max_dim": self.max_dim,
            "m_from": self.m_from,
        }

    def params(self) -> dict:
        """Picklable keyword arguments that rebuild this context in a worker."""
        return {
            "p": self.p,
            "n": self.n,
            "field_poly": self.field_poly,
            "seed": self.seed,
            "max_dim": self.max_dim,
            "m_from": self.m_from,
        }


def _subgroup_of(group: GroupSpec, basis) -> GroupSpec:
    B = np.array(basis, dtype=np.int64).reshape(-1, group.n)
    return group.subgroup(B)


def _eval(e: ModuleExpr, group: GroupSpec, ctx: Context) -> GModule:
    if isinstance(e, Atom):
        if e.name == "V":
            return mc.build_V(e.m, group)
        if e.name == "Vd":
            return mc.build_V_dual(e.m, group)
        if e.name == "W":
            return mc.build_W(group)
        if e.name == "reg":
            return sc.regular_module(group)
        if e.name == "M":
            return sc.build_M(group, ctx.m_from)
    if isinstance(e, Call):
        a = _eval(e.arg, group, ctx)
        if e.op == "dual":
            return mc.dual(a)
        if e.op == "O":
            return sc.heller(a)
        return sc.coheller(a)
    if isinstance(e, Power):
        a = _eval(e.arg, group, ctx)
        return mc.sym_power(a, e.d) if e.op == "S" else mc.ext_power(a, e.d)
    if isinstance(e, Sub):
        if e.op == "res":
            return mc.restrict(_eval(e.arg, group, ctx), e.basis)
        H = _subgroup_of(group, e.basis or ())
        return mc.induce(_eval(e.arg, H, ctx), group)
    if isinstance(e, BinOp):
        a = _eval(e.left, group, ctx)
        b = _eval(e.right, group, ctx)
        return mc.tensor(a, b) if e.op == "*" else mc.dsum(a, b)
    raise TypeError(f"not a module expression: {e!r}")


def expr_digest(ctx: Context, text: str) -> str:
    return hashlib.sha256(f"{ctx.key()}|m{ctx.m_from}|{text}".encode()).hexdigest()[:24]


_MEMO: "OrderedDict[tuple, GModule]" = OrderedDict()
MEMO_SIZE = 256


def clear_memo() -> None:
    _MEMO.clear()


def eval_expr(e: ModuleExpr | str, ctx: Context) -> GModule:
    """Evaluate in the context group; the module is labelled by its canonical text.

    Evaluated modules are kept in a small in-process memo so that repeated
    evaluations share their computed decompositions.  When the context
    carries a cache, the module matrices are also looked up on disk under
    (context, canonical text) and stored after a fresh evaluation.
    """
    if isinstance(e, str):
        e = parse_expr(e)
    text = to_text(e)
    mkey = (ctx.key(), ctx.m_from, text)
    if mkey in _MEMO:
        _MEMO.move_to_end(mkey)
        return _MEMO[mkey]
    cache = ctx.cache
    mod = cache.get_module(ctx, text) if cache is not None else None
    if mod is None:
        mod = _eval(e, ctx.group, ctx).relabel(text)
        if cache is not None:
            cache.put_module(ctx, text, mod)
    _MEMO[mkey] = mod
    if len(_MEMO) > MEMO_SIZE:
        _MEMO.popitem(last=False)
    return mod
