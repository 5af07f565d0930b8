"""Command-line interface.

    elabrep verify <suite> --p P --n N [options]
    elabrep decompose --expr "V(2)*V(5)" --p 3 --n 2 [--core]
    elabrep table --q 9
    elabrep export --expr "O(V(2))" --p 3 --n 2 --out mod.json
    elabrep import mod.json [--core]

``verify`` exits with status 0 exactly when every non-evidence case passes.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .. import homalg as ha
from .. import modcore as mc
from .. import stablecat as sc
from ..combinat import prime_power_parts
from .cache import ResultCache
from .expr import Context, ExprSyntaxError, eval_expr
from .suites import SUITES, run_suite
from .tables import FORMATS, render

log = logging.getLogger("elabrep")


def _poly(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"field polynomial must be comma-separated integers: {text}") from exc


def _common(ap: argparse.ArgumentParser, group: bool = True) -> None:
    if group:
        ap.add_argument("--p", type=int, required=True, help="characteristic")
        ap.add_argument("--n", type=int, required=True, help="rank of the elementary abelian group")
    ap.add_argument(
        "--field-poly",
        type=_poly,
        default=None,
        help="coefficients c0,c1,...,ce (low to high) of the monic irreducible polynomial defining the field",
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for independent cells")
    ap.add_argument("--max-dim", type=int, default=400, help="skip cells whose modules exceed this dimension")
    ap.add_argument("--cache-dir", default=os.environ.get("ELABREP_CACHE"), help="directory for cached results")
    ap.add_argument("--m-from", type=int, choices=(0, 1), default=1, help="first index r of M = sum V(rp)")
    ap.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="elabrep", description="Exact modular representations of elementary abelian p-groups")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    _common(v)
    v.add_argument("--format", choices=FORMATS, default="md")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")
    v.add_argument("--timing", action="store_true", help="include elapsed time in the report")

    d = sub.add_parser("decompose", help="decompose a module expression")
    d.add_argument("--expr", required=True)
    _common(d)
    d.add_argument("--core", action="store_true", help="also print the core relative to M")
    d.add_argument("--format", choices=("md", "json"), default="md")

    t = sub.add_parser("table", help="core table of V_i (x) V_j for i, j prime to p")
    t.add_argument("--q", type=int, required=True)
    _common(t, group=False)
    t.add_argument("--format", choices=FORMATS, default="md")
    t.add_argument("--out", default=None)
    t.add_argument("--timing", action="store_true")

    e = sub.add_parser("export", help="write an evaluated module to a JSON file")
    e.add_argument("--expr", required=True)
    e.add_argument("--out", required=True)
    _common(e)

    i = sub.add_parser("import", help="read a module file and decompose it")
    i.add_argument("path")
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--core", action="store_true")
    i.add_argument("--m-from", type=int, choices=(0, 1), default=1)
    i.add_argument("-v", "--verbose", action="count", default=0)
    return ap


def _context(args, p: int, n: int) -> Context:
    cache = ResultCache(args.cache_dir) if getattr(args, "cache_dir", None) else None
    return Context(
        p=p,
        n=n,
        field_poly=getattr(args, "field_poly", None),
        seed=args.seed,
        max_dim=getattr(args, "max_dim", 400),
        m_from=args.m_from,
        cache=cache,
        jobs=getattr(args, "jobs", 1),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decomposition_text(mod: mc.GModule, seed: int, core: bool, m_from: int, fmt: str = "md") -> str:
    rep = ha.decompose(mod, seed)
    data = {"input": mod.label, "dim": mod.dim, **rep.to_dict()}
    if core:
        c = sc.m_core(mod, sc.build_M(mod.group, m_from), seed)
        data["core"] = c.to_dict()["core"]
        data["core_undetermined"] = c.undetermined
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    lines = [f"{mod.label}  (dim {mod.dim})", f"  = {rep}"]
    if rep.undetermined:
        lines.append(f"  uncertified summands: {rep.undetermined}")
    if core:
        lines.append(f"  core relative to M: {' + '.join(data['core']) or '0'}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            ctx = _context(args, args.p, args.n)
            res = run_suite(args.suite, ctx)
            _emit(render(res, args.format, args.timing), args.out)
            return 0 if res.passed else 1
        if args.command == "table":
            p, n = prime_power_parts(args.q)
            ctx = _context(args, p, n)
            res = run_suite("table", ctx)
            _emit(render(res, args.format, args.timing), args.out)
            return 0 if res.passed else 1
        if args.command == "decompose":
            ctx = _context(args, args.p, args.n)
            mod = eval_expr(args.expr, ctx)
            sys.stdout.write(_decomposition_text(mod, args.seed, args.core, args.m_from, args.format))
            return 0
        if args.command == "export":
            ctx = _context(args, args.p, args.n)
            mod = eval_expr(args.expr, ctx)
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(mc.module_to_dict(mod), fh)
            sys.stdout.write(f"wrote {mod.label} (dim {mod.dim}) to {args.out}\n")
            return 0
        if args.command == "import":
            with open(args.path, encoding="utf-8") as fh:
                mod = mc.module_from_dict(json.load(fh))
            sys.stdout.write(_decomposition_text(mod, args.seed, args.core, args.m_from))
            return 0
    except (ExprSyntaxError, ValueError) as exc:
        log.error("%s", exc)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
