"""Command-line front end.

Exit codes: 0 success / verification true; 1 verification false;
2 structural or parse error; 3 budget exceeded.  Output is deterministic
and independent of --workers.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io as gio
from .coh import (apply_gerbe_coboundary, h0_crossed, h1_classify,
                  h1_gerbe_classify, verify_cocycle1, verify_gerbe_pair)
from .cover import tuples
from .errors import CapacityError, StructuralError
from .ext import (build_extension, classify_extensions, cocycle_from_extension,
                  extensions_equivalent, verify_extension_cocycle)
from .gerbe2 import (apply_quadruple_coboundary, are_cohomologous,
                     classify_quadruples, verify_quadruple)
from .grp import automorphisms, group_diagnostic, isomorphic, verify_group
from .torsor import (cocycle_from_sections, contracted_product, glue_torsor,
                     is_bitorsor, is_torsor, opposite, verify_bitorsor_cocycle)
from .xmod import norrie_square, verify_crossed_module, verify_crossed_square


def _emit(args, payload: dict, text_lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _verdict(args, ok: bool, payload: dict, text_lines) -> int:
    _emit(args, payload, text_lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# group

def cmd_group_verify(args) -> int:
    g = gio.load_group(args.file)
    reason = group_diagnostic(g)
    ok = reason is None
    return _verdict(args, ok,
                    {"ok": ok, "order": g.order, "reason": reason},
                    [f"group {g.name}: " + ("true" if ok else f"false ({reason})")])


def cmd_group_aut(args) -> int:
    g = gio.load_group(args.file)
    if group_diagnostic(g) is not None:
        raise StructuralError(f"{args.file}: not a group")
    aut = automorphisms(g)
    tables = [list(h.map) for h in aut.elements]
    return _verdict(args, True,
                    {"ok": True, "order": aut.group.order, "automorphisms": tables},
                    [f"Aut({g.name}) has order {aut.group.order}"] +
                    [f"  {i}: {list(h.map)}" for i, h in enumerate(aut.elements)])


# ---------------------------------------------------------------------------
# xmod

def cmd_xmod_verify(args) -> int:
    cm = gio.load_xmod(args.file)
    ok = verify_crossed_module(cm)
    return _verdict(args, ok, {"ok": ok},
                    [f"crossed module {cm.g.name} -> {cm.pi.name}: "
                     + ("true" if ok else "false")])


def cmd_xmod_norrie(args) -> int:
    cm = gio.load_xmod(args.file)
    if not verify_crossed_module(cm):
        raise StructuralError(f"{args.file}: not a crossed module")
    sq = norrie_square(cm, bound=args.bound, budget=args.budget)
    ok = verify_crossed_square(sq)
    payload = {"ok": ok, "orders": {"l": sq.l.order, "m": sq.m.order,
                                    "n": sq.n.order, "p": sq.p.order},
               "square": gio.square_to_obj(sq)}
    lines = [f"norrie square: L={sq.l.order} M={sq.m.order} "
             f"N={sq.n.order} P={sq.p.order}",
             f"verify_crossed_square: {'true' if ok else 'false'}"]
    return _verdict(args, ok, payload, lines)


# ---------------------------------------------------------------------------
# nerve

def cmd_nerve_show(args) -> int:
    nerve = gio.load_nerve(args.file)
    sizes = {}
    for f in nerve.faces:
        sizes[len(f)] = sizes.get(len(f), 0) + 1
    lines = [f"indices: {nerve.index_count}", f"faces: {len(nerve.faces)}"]
    lines += [f"  size {k}: {sizes[k]}" for k in sorted(sizes)]
    lines += [f"  {list(f)}" for f in nerve.faces]
    payload = {"indices": nerve.index_count,
               "faces": [list(f) for f in nerve.faces],
               "counts": {str(k): sizes[k] for k in sorted(sizes)}}
    return _verdict(args, True, payload, lines)


# ---------------------------------------------------------------------------
# torsor / bitorsor

def cmd_torsor_verify(args) -> int:
    t = gio.load_torsor(args.file)
    ok = is_torsor(t)
    return _verdict(args, ok, {"ok": ok},
                    ["torsor: " + ("true" if ok else "false")])


def cmd_torsor_glue(args) -> int:
    c = gio.load_cochain1(args.cocycle)
    if not verify_cocycle1(c):
        raise StructuralError(f"{args.cocycle}: not a 1-cocycle")
    t = glue_torsor(c.nerve, c, c.group)
    payload = gio.torsor_to_obj(t)
    return _verdict(args, True, payload,
                    [f"glued torsor over {t.base} points, fiber size "
                     f"{t.fiber_sizes[0]}",
                     json.dumps(payload, sort_keys=True)])


def cmd_torsor_cocycle(args) -> int:
    t = gio.load_torsor(args.file)
    c = cocycle_from_sections(t)
    payload = gio.cochain1_to_obj(c)
    lines = [f"g_{i}{j} = {c.value(i, j)}" for (i, j) in c.nerve.otuples(2)]
    return _verdict(args, True, payload, lines)


def cmd_bitorsor_product(args) -> int:
    a = gio.load_bitorsor(args.left)
    b = gio.load_bitorsor(args.right)
    if not (is_bitorsor(a) and is_bitorsor(b)):
        raise StructuralError("inputs must be bitorsors")
    prod = contracted_product(a, b)
    payload = gio.bitorsor_to_obj(prod)
    return _verdict(args, True, payload,
                    [f"contracted product: fibers {list(prod.fiber_sizes)}",
                     json.dumps(payload, sort_keys=True)])


def cmd_bitorsor_opposite(args) -> int:
    a = gio.load_bitorsor(args.file)
    if not is_bitorsor(a):
        raise StructuralError("input must be a bitorsor")
    payload = gio.bitorsor_to_obj(opposite(a))
    return _verdict(args, True, payload, [json.dumps(payload, sort_keys=True)])


def cmd_bitorsor_verify_cocycle(args) -> int:
    bc = gio.bitorsor_cocycle_from_obj(gio._load_json(args.file),
                                       _dir_of(args.file))
    ok = verify_bitorsor_cocycle(bc)
    return _verdict(args, ok, {"ok": ok},
                    ["bitorsor cocycle: " + ("true" if ok else "false")])


def _dir_of(path: str) -> str:
    import os
    return os.path.dirname(path)


# ---------------------------------------------------------------------------
# cohomology

def cmd_h1(args) -> int:
    nerve = gio.load_nerve(args.nerve)
    g = gio.checked_group(gio.load_group(args.group), args.group)
    reps = h1_classify(nerve, g, budget=args.budget, workers=args.workers)
    payload = {"classes": len(reps), "budget": args.budget,
               "representatives": [[[list(t), c.value(*t)]
                                    for t in nerve.itup(2)] for c in reps]}
    lines = [f"H1: {len(reps)} classes (budget {args.budget})"]
    for i, c in enumerate(reps):
        vals = ", ".join(f"g_{t[0]}{t[1]}={c.value(*t)}" for t in nerve.itup(2))
        lines.append(f"  class {i}: {vals}" if vals else f"  class {i}: (empty cover)")
    return _verdict(args, True, payload, lines)


def cmd_h0x(args) -> int:
    nerve = gio.load_nerve(args.nerve)
    cm = gio.load_xmod(args.xmod)
    if not verify_crossed_module(cm):
        raise StructuralError(f"{args.xmod}: not a crossed module")
    group, reps = h0_crossed(nerve, cm, budget=args.budget)
    payload = {"order": group.order, "mul": [list(r) for r in group.mul],
               "budget": args.budget}
    lines = [f"H0 class group has order {group.order} (budget {args.budget})"]
    return _verdict(args, True, payload, lines)


def cmd_gerbe_verify(args) -> int:
    p = gio.load_gerbe_pair(args.file)
    ok = verify_gerbe_pair(p)
    return _verdict(args, ok, {"ok": ok},
                    ["gerbe cocycle pair: " + ("true" if ok else "false")])


def cmd_gerbe_classify(args) -> int:
    nerve = gio.load_nerve(args.nerve)
    g = gio.checked_group(gio.load_group(args.group), args.group)
    reps = h1_gerbe_classify(nerve, g, budget=args.budget,
                             lambda_id_sector=(args.sector == "lambda-id"),
                             workers=args.workers)
    payload = {"classes": len(reps), "budget": args.budget,
               "sector": args.sector or "full",
               "representatives": [
                   {"lambda": [[list(t), p.lam_at(*t)] for t in nerve.itup(2)],
                    "g": [[list(t), p.g_at(*t)] for t in nerve.itup(3)]}
                   for p in reps]}
    lines = [f"gerbe classes: {len(reps)} "
             f"(sector {args.sector or 'full'}, budget {args.budget})"]
    return _verdict(args, True, payload, lines)


def cmd_gerbe_coboundary(args) -> int:
    p = gio.load_gerbe_pair(args.pair)
    if not verify_gerbe_pair(p):
        raise StructuralError(f"{args.pair}: not a gerbe cocycle pair")
    b = gio.gerbe_coboundary_from_obj(gio._load_json(args.coboundary), p,
                                      args.coboundary)
    out = apply_gerbe_coboundary(p, b)
    ok = verify_gerbe_pair(out)
    payload = {"ok": ok, "pair": gio.gerbe_pair_to_obj(out)}
    return _verdict(args, ok, payload,
                    ["acted pair verifies: " + ("true" if ok else "false"),
                     json.dumps(gio.gerbe_pair_to_obj(out), sort_keys=True)])


# ---------------------------------------------------------------------------
# ext

def cmd_ext_classify(args) -> int:
    g = gio.checked_group(gio.load_group(args.g), args.g)
    k = gio.checked_group(gio.load_group(args.k), args.k)
    reps, wits, iso_count = classify_extensions(g, k, budget=args.budget)
    payload = {"classes": len(reps), "iso_types": iso_count,
               "budget": args.budget,
               "representatives": [
                   {"lam": list(c.lam), "gmap": [list(r) for r in c.gmap],
                    "group_order": w.h.order}
                   for c, w in zip(reps, wits)]}
    lines = [f"extension classes: {len(reps)}; distinct middle groups:"
             f" {iso_count} (budget {args.budget})"]
    for i, (c, w) in enumerate(zip(reps, wits)):
        lines.append(f"  class {i}: lam={list(c.lam)} "
                     f"g={[list(r) for r in c.gmap]} -> group of order {w.h.order}")
    return _verdict(args, True, payload, lines)


def cmd_ext_build(args) -> int:
    c = gio.load_ext_cocycle(args.file)
    if not verify_extension_cocycle(c):
        raise StructuralError(f"{args.file}: not an extension cocycle")
    w = build_extension(c)
    payload = {"h": gio.group_to_obj(w.h), "embed": list(w.embed.map),
               "project": list(w.project.map)}
    return _verdict(args, True, payload,
                    [f"middle group of order {w.h.order}",
                     json.dumps(payload, sort_keys=True)])


def cmd_ext_from_extension(args) -> int:
    w, section = gio.witness_from_obj(gio._load_json(args.file), _dir_of(args.file),
                                      args.file)
    if section is None:
        raise StructuralError(f"{args.file}: a 'section' field is required")
    c = cocycle_from_extension(w, section)
    ok = verify_extension_cocycle(c)
    payload = {"ok": ok, "cocycle": gio.ext_cocycle_to_obj(c)}
    return _verdict(args, ok, payload,
                    [f"extracted cocycle verifies: {'true' if ok else 'false'}",
                     f"lam={list(c.lam)} gmap={[list(r) for r in c.gmap]}"])


# ---------------------------------------------------------------------------
# g2

def cmd_g2_verify(args) -> int:
    q = gio.load_quadruple(args.file)
    ok = verify_quadruple(q)
    return _verdict(args, ok, {"ok": ok},
                    ["cocycle quadruple: " + ("true" if ok else "false")])


def cmd_g2_cohomologous(args) -> int:
    q1 = gio.load_quadruple(args.a)
    q2 = gio.load_quadruple(args.b)
    if not verify_quadruple(q1):
        raise StructuralError(f"{args.a}: not a cocycle quadruple")
    if not verify_quadruple(q2):
        raise StructuralError(f"{args.b}: not a cocycle quadruple")
    ok = are_cohomologous(q1, q2, budget=args.budget)
    return _verdict(args, ok, {"ok": ok},
                    ["cohomologous: " + ("true" if ok else "false")])


def cmd_g2_classify(args) -> int:
    nerve = gio.load_nerve(args.nerve)
    sq = gio.load_square(args.square)
    reps = classify_quadruples(nerve, sq, budget=args.budget,
                               workers=args.workers)
    payload = {"classes": len(reps), "budget": args.budget,
               "representatives": [
                   {"lambda": [[list(t), q.lam_at(*t)] for t in nerve.itup(2)],
                    "mtil": [[list(t), q.mtil_at(*t)] for t in nerve.itup(3)],
                    "g": [[list(t), q.g_at(*t)] for t in nerve.itup(3)],
                    "nu": [[list(t), q.nu_at(*t)] for t in nerve.itup(4)]}
                   for q in reps]}
    lines = [f"quadruple classes: {len(reps)} (budget {args.budget})"]
    return _verdict(args, True, payload, lines)


# ---------------------------------------------------------------------------

def _add_common(parser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true",
                        **({"default": d} if suppress else {}),
                        help="machine-readable output")
    parser.add_argument("--budget", type=int,
                        default=argparse.SUPPRESS if suppress else 10_000_000,
                        help="cap on enumeration candidates (default 1e7)")
    parser.add_argument("--workers", type=int,
                        default=argparse.SUPPRESS if suppress else 1,
                        help="worker count for partitioned enumeration")
    parser.add_argument("--seed", type=int,
                        default=argparse.SUPPRESS if suppress else 0,
                        help="seed for randomized property sampling")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gerbecoh",
        description="Exact non-abelian Cech cohomology over finite covers "
                    "and finite groups")
    _add_common(top, suppress=False)
    sub = top.add_subparsers(dest="command", required=True)

    grp = sub.add_parser("group").add_subparsers(dest="sub", required=True)
    p = grp.add_parser("verify"); p.add_argument("file"); p.set_defaults(fn=cmd_group_verify)
    p = grp.add_parser("aut"); p.add_argument("file"); p.set_defaults(fn=cmd_group_aut)

    xm = sub.add_parser("xmod").add_subparsers(dest="sub", required=True)
    p = xm.add_parser("verify"); p.add_argument("file"); p.set_defaults(fn=cmd_xmod_verify)
    p = xm.add_parser("norrie"); p.add_argument("file")
    p.add_argument("--bound", type=int, default=64)
    p.set_defaults(fn=cmd_xmod_norrie)

    nv = sub.add_parser("nerve").add_subparsers(dest="sub", required=True)
    p = nv.add_parser("show"); p.add_argument("file"); p.set_defaults(fn=cmd_nerve_show)

    to = sub.add_parser("torsor").add_subparsers(dest="sub", required=True)
    p = to.add_parser("verify"); p.add_argument("file"); p.set_defaults(fn=cmd_torsor_verify)
    p = to.add_parser("glue"); p.add_argument("cocycle"); p.set_defaults(fn=cmd_torsor_glue)
    p = to.add_parser("cocycle"); p.add_argument("file"); p.set_defaults(fn=cmd_torsor_cocycle)

    bi = sub.add_parser("bitorsor").add_subparsers(dest="sub", required=True)
    p = bi.add_parser("product"); p.add_argument("left"); p.add_argument("right")
    p.set_defaults(fn=cmd_bitorsor_product)
    p = bi.add_parser("opposite"); p.add_argument("file")
    p.set_defaults(fn=cmd_bitorsor_opposite)
    p = bi.add_parser("verify-cocycle"); p.add_argument("file")
    p.set_defaults(fn=cmd_bitorsor_verify_cocycle)

    p = sub.add_parser("h1"); p.add_argument("nerve"); p.add_argument("group")
    p.set_defaults(fn=cmd_h1)
    p = sub.add_parser("h0x"); p.add_argument("nerve"); p.add_argument("xmod")
    p.set_defaults(fn=cmd_h0x)

    ge = sub.add_parser("gerbe").add_subparsers(dest="sub", required=True)
    p = ge.add_parser("verify"); p.add_argument("file"); p.set_defaults(fn=cmd_gerbe_verify)
    p = ge.add_parser("classify"); p.add_argument("nerve"); p.add_argument("group")
    p.add_argument("--sector", choices=["lambda-id"], default=None)
    p.set_defaults(fn=cmd_gerbe_classify)
    p = ge.add_parser("coboundary"); p.add_argument("pair"); p.add_argument("coboundary")
    p.set_defaults(fn=cmd_gerbe_coboundary)

    ex = sub.add_parser("ext").add_subparsers(dest="sub", required=True)
    p = ex.add_parser("classify"); p.add_argument("g"); p.add_argument("k")
    p.set_defaults(fn=cmd_ext_classify)
    p = ex.add_parser("build"); p.add_argument("file"); p.set_defaults(fn=cmd_ext_build)
    p = ex.add_parser("from-extension"); p.add_argument("file")
    p.set_defaults(fn=cmd_ext_from_extension)

    g2 = sub.add_parser("g2").add_subparsers(dest="sub", required=True)
    p = g2.add_parser("verify"); p.add_argument("file"); p.set_defaults(fn=cmd_g2_verify)
    p = g2.add_parser("cohomologous"); p.add_argument("a"); p.add_argument("b")
    p.set_defaults(fn=cmd_g2_cohomologous)
    p = g2.add_parser("classify"); p.add_argument("nerve"); p.add_argument("square")
    p.set_defaults(fn=cmd_g2_classify)

    # accept the global flags after subcommands too (trailing --json etc.)
    def _attach(parser):
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                for child in action.choices.values():
                    if child.get_default("fn") is not None or not any(
                            isinstance(a, argparse._SubParsersAction)
                            for a in child._actions):
                        _add_common(child, suppress=True)
                    _attach(child)
    _attach(top)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget < 1:
        print("error: budget must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except CapacityError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
