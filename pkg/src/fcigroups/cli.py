"""
Command-line front end.

Exit status: 0 pass/true, 1 fail/false, 2 undecidable/inconclusive, 3 error.
Every command builds one result dict; ``--format text`` and
``--format machine`` (JSON) render the same fields.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dedekind import is_dedekind
from .errors import FciError, SpecInvalid
from .extension import (
    CyclicExtension,
    centralizer,
    centralizer_index,
    fg_centralizer,
    format_base,
    format_element,
    is_cyclic_normal,
)
from .generic import DEFAULT_CAP, INFINITE, brute_centralizer
from .pauto import enumerate_paut
from .specfile import DEFAULT_LEVEL, classify, element_in, family, load_spec, probes
from .verify import (
    LadderVerdict,
    Status,
    check_bci_bound_thm43,
    check_fci_finite,
    ladder,
)

EXIT_PASS, EXIT_FAIL, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2, 3
_STATUS_EXIT = {Status.PASS: EXIT_PASS, Status.FAIL: EXIT_FAIL, Status.UNDECIDABLE: EXIT_UNDECIDED}
_LADDER_EXIT = {
    LadderVerdict.STABILIZED: EXIT_PASS,
    LadderVerdict.DIVERGING: EXIT_FAIL,
    LadderVerdict.INCONCLUSIVE: EXIT_UNDECIDED,
}


def _num(v):
    return "infinite" if v == INFINITE else v


def _fmt(G, x) -> str:
    if isinstance(G, CyclicExtension):
        return format_element(G, x)
    return format_base(G, x)


def _levels(text: str) -> range:
    a, sep, b = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    lo, hi = int(a), int(b)
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad level range {text!r}")
    return range(lo, hi + 1)


class Context:
    def __init__(self, spec, args):
        self.spec = spec
        self.family = family(spec)
        self.cap = args.cap or spec.get("cap") or DEFAULT_CAP
        self.level = args.level or spec.get("level") or DEFAULT_LEVEL
        if args.levels is not None:
            self.levels = args.levels
        elif spec.get("levels"):
            lo, hi = spec.get("levels")
            self.levels = range(lo, hi + 1)
        else:
            self.levels = range(2, 6)
        self.window = args.window if args.window is not None else spec.get("window", 3)

    def group(self):
        return self.family.materialize(self.level, self.cap)


# commands: each returns (exit code, result dict)


def cmd_build(ctx: Context, args):
    G = ctx.group()
    return EXIT_PASS, {
        "group": str(G),
        "level": ctx.level,
        "order": _num(G.size),
        "generators": [_fmt(G, x) for x in G.generators()],
    }


def cmd_check_dedekind(ctx: Context, args):
    G = ctx.group()
    v = is_dedekind(G, ctx.cap)
    witness = None
    if not v:
        x, g = v.witness
        witness = {"x": _fmt(G, x), "g": _fmt(G, g)}
    return (EXIT_PASS if v else EXIT_FAIL), {"group": str(G), "dedekind": bool(v), "witness": witness}


def _fci(ctx: Context, args, bounded: bool):
    G = ctx.group()
    if G.size != INFINITE:
        rep = check_fci_finite(G, ctx.cap)
        return EXIT_PASS, {
            "group": str(G),
            "order": G.size,
            "mode": "exhaustive",
            "dedekind": rep.dedekind,
            "max_index": rep.max_index,
            "bci_bound": rep.bci_bound,
            "non_normal": [
                {"element": _fmt(G, r.element), "order": r.order, "index": r.index} for r in rep.non_normal
            ],
        }
    if isinstance(G, CyclicExtension) and not G.base.is_periodic:
        rep = check_bci_bound_thm43(G, ctx.window)
        ok = rep.within_bound and rep.infinite_order_normal
        return (EXIT_PASS if ok else EXIT_FAIL), {
            "group": str(G),
            "mode": "window",
            "window": ctx.window,
            "sampled": rep.sampled,
            "non_normal": rep.non_normal,
            "max_centralizer_order": rep.max_order,
            "two_rank": rep.two_rank,
            "bound": rep.bound,
            "within_bound": rep.within_bound,
            "bound_achieved": rep.achieved,
            "infinite_order_normal": rep.infinite_order_normal,
            "witness": None if rep.witness is None else _fmt(G, rep.witness),
        }
    if not isinstance(G, CyclicExtension):
        return EXIT_PASS, {"group": str(G), "mode": "structural", "dedekind": True, "max_index": 0, "bci_bound": 0}
    code, result = cmd_ladder(ctx, args)
    result["mode"] = "ladder"
    if bounded:
        result["bci_bound"] = result["value"]
    return code, result


def cmd_check_fci(ctx: Context, args):
    return _fci(ctx, args, bounded=False)


def cmd_check_bci(ctx: Context, args):
    return _fci(ctx, args, bounded=True)


def cmd_centralizer(ctx: Context, args):
    G = ctx.group()
    x = element_in(G, args.element)
    result = {"group": str(G), "element": _fmt(G, x)}
    if not isinstance(G, CyclicExtension):
        C = sorted(brute_centralizer(G, x))
        result.update(order=len(C), elements=[_fmt(G, y) for y in C])
        return EXIT_PASS, result
    result["normal"] = is_cyclic_normal(G, x)
    if not G.base.is_periodic:
        C = fg_centralizer(G, x)
        result["order"] = "infinite" if C is None else len(C)
        result["elements"] = None if C is None else [_fmt(G, y) for y in sorted(C)]
    else:
        C = centralizer(G, x)
        result["order"] = _num(C.size)
        result["torsion_part_order"] = len(C.torsion_part)
        result["m0"] = C.m0
        result["y0"] = None if C.y0 is None else _fmt(G, C.y0)
        result["elements"] = [_fmt(G, y) for y in sorted(C.elements())] if G.is_finite else None
    result["index"] = _num(centralizer_index(G, x))
    return EXIT_PASS, result


def cmd_paut(ctx: Context, args):
    G = ctx.group()
    B = G.base if isinstance(G, CyclicExtension) else G
    P = enumerate_paut(B, ctx.cap)
    return EXIT_PASS, {
        "base": str(B),
        "count": len(P),
        "abelian": P.is_abelian(),
        "automorphisms": [str(phi) for phi in P],
    }


def cmd_classify(ctx: Context, args):
    if ctx.spec.kind != args.theorem:
        raise SpecInvalid(f"classify {args.theorem} needs a spec of kind {args.theorem}, got {ctx.spec.kind}")
    v = classify(ctx.spec)
    result = {"theorem": args.theorem}
    if args.theorem == "thm36":
        status = v.overall
        for name in ("cond_i", "cond_ii", "cond_iii"):
            c = getattr(v, name)
            result[name] = c.status.value if c.status is Status.PASS else f"{c.status.value}: {c.reason}"
    else:
        status = v.status
    result["status"] = status.value
    result["reasons"] = list(v.reasons)
    return _STATUS_EXIT[status], result


def cmd_ladder(ctx: Context, args):
    ps = probes(ctx.spec)
    if getattr(args, "probe", None):
        ref = args.probe_level or ctx.levels[0]
        H = ctx.family.materialize(ref, ctx.cap)
        ps = [ctx.family.probe(element_in(H, text), ref) for text in args.probe]
    res = ladder(ctx.family, ctx.levels, window=ctx.window, probes=ps or None, cap=ctx.cap)
    Gs = {lv.level: None for lv in res.levels}
    rows = []
    for lv in res.levels:
        witness = None
        if lv.witness is not None:
            Gs[lv.level] = Gs[lv.level] or ctx.family.materialize(lv.level, ctx.cap)
            witness = _fmt(Gs[lv.level], lv.witness)
        rows.append({"level": lv.level, "max_index": _num(lv.max_index), "probed": lv.probed, "witness": witness})
    return _LADDER_EXIT[res.verdict], {
        "mode": "probes" if ps else "window",
        "window": ctx.window,
        "levels": rows,
        "verdict": res.verdict.value,
        "stable_from": res.stable_from,
        "value": _num(res.value) if res.value is not None else None,
    }


def _combine(codes) -> int:
    codes = set(codes)
    for c in (EXIT_ERROR, EXIT_FAIL, EXIT_UNDECIDED):
        if c in codes:
            return c
    return EXIT_PASS


def _report_one(path, args):
    try:
        spec = load_spec(path)
        ctx = Context(spec, args)
        sections = {}
        codes = []
        if spec.kind in ("thm32", "thm36", "thm43"):
            args.theorem = spec.kind
            code, sections["classify"] = cmd_classify(ctx, args)
            codes.append(code)
        code, sections["build"] = cmd_build(ctx, args)
        G = ctx.group()
        if G.size != INFINITE:
            code, sections["check_dedekind"] = cmd_check_dedekind(ctx, args)
        code, sections["check_fci"] = cmd_check_fci(ctx, args)
        codes.append(code)
        status = _combine(codes)
    except FciError as exc:
        return EXIT_ERROR, {"error": f"{type(exc).__name__}: {exc}"}
    return status, {"kind": spec.kind, "exit": status, **sections}


def cmd_report(args):
    target = Path(args.spec)
    paths = sorted(target.glob("*.json")) if target.is_dir() else [target]
    results = {}
    codes = []
    for p in paths:
        code, res = _report_one(p, args)
        codes.append(code)
        results[p.name] = res
    return _combine(codes), {"files": results}


# rendering


def render_text(result, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, value in result.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + (", ".join(str(v) for v in value) if value else "(none)"))
        else:
            lines.append(f"{pad}{key}: {'none' if value is None else str(value).lower() if isinstance(value, bool) else value}")
    return lines


def emit(result: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "machine":
        out.write(json.dumps(result, indent=2) + "\n")
    else:
        out.write("\n".join(render_text(result)) + "\n")


class _Parser(argparse.ArgumentParser):
    # usage errors share the error exit code; 2 is reserved for undecided verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fcigroups", description="Exact FCI/BCI checks on spec-file groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="group spec file (a directory for report)")
    common.add_argument("--level", type=int, help="materialization level for quasicyclic components")
    common.add_argument("--levels", type=_levels, help="ladder levels A..B (inclusive)")
    common.add_argument("--window", type=int, help="|k| bound (and free-coordinate radius) for sampling")
    common.add_argument("--cap", type=int, help=f"largest group order to enumerate (default {DEFAULT_CAP})")
    common.add_argument("--format", choices=("text", "machine"), default="text")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (
        ("build", "materialize the group and describe it"),
        ("check-dedekind", "is every cyclic subgroup normal?"),
        ("check-fci", "centralizer indices of non-normal cyclic subgroups"),
        ("check-bci", "uniform bound on those indices"),
        ("paut", "enumerate the power automorphisms of the base"),
        ("report", "classify and check one spec, or every *.json in a directory"),
    ):
        sub.add_parser(name, parents=[common], help=helptext)
    p = sub.add_parser("centralizer", parents=[common], help="centralizer of one element")
    p.add_argument("--element", required=True, help='e.g. "g^1", "g^2*(1)", "(i;0,1)"')
    p = sub.add_parser("classify", help="check the conditions of a theorem family")
    p.add_argument("theorem", choices=("thm32", "thm36", "thm43"))
    for action in common._actions:
        if action.dest != "help":
            p._add_action(action)
    p = sub.add_parser("ladder", parents=[common], help="centralizer indices across levels")
    p.add_argument("--probe", action="append", help="measure this element (level coordinates) instead of a window")
    p.add_argument("--probe-level", type=int, help="level at which --probe coordinates are read (default: first level)")
    return parser


COMMANDS = {
    "build": cmd_build,
    "check-dedekind": cmd_check_dedekind,
    "check-fci": cmd_check_fci,
    "check-bci": cmd_check_bci,
    "centralizer": cmd_centralizer,
    "paut": cmd_paut,
    "classify": cmd_classify,
    "ladder": cmd_ladder,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            code, result = cmd_report(args)
        else:
            ctx = Context(load_spec(args.spec), args)
            code, result = COMMANDS[args.command](ctx, args)
    except (FciError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    emit(result, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
