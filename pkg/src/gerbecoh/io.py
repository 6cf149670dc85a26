"""Strict JSON readers and writers for the file formats the CLI speaks.

Unknown fields are rejected, cross-file references are resolved relative to
the referring file, and every parsed value passes its structural checks
before anything uses it.
"""

from __future__ import annotations

import json
import os
import sys

from .coh import Cochain1, GerbeCocyclePair, GerbeCoboundary, make_cochain1, \
    make_gerbe_pair
from .cover import Nerve, make_nerve
from .errors import StructuralError
from .ext import ExtensionCocycle, ExtensionWitness
from .gerbe2 import QuadrupleCocycle, QuadrupleCoboundary, quadruple_from_increasing
from .grp import FiniteGroup, GroupHom, automorphisms, make_group, verify_group
from .torsor import Bitorsor, GroupBundle, Torsor, constant_bundle
from .xmod import CrossedModule, CrossedSquare, crossed_module_from_tables


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise StructuralError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}") from None


def _expect_keys(obj: dict, required, optional=(), where: str = "object"):
    if not isinstance(obj, dict):
        raise StructuralError(f"{where}: expected a JSON object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise StructuralError(f"{where}: missing fields {missing}")
    unknown = [k for k in obj if k not in required and k not in optional]
    if unknown:
        raise StructuralError(f"{where}: unknown fields {unknown}")


def _resolve(obj, base_dir: str, loader, where: str):
    """obj is either inline data or {"file": relative-path}."""
    if isinstance(obj, dict) and set(obj.keys()) == {"file"}:
        path = os.path.join(base_dir, obj["file"])
        return loader(path)
    return None


# ---------------------------------------------------------------------------
# Groups

def group_from_obj(obj, base_dir: str = ".", where: str = "group") -> FiniteGroup:
    ref = _resolve(obj, base_dir, load_group, where)
    if ref is not None:
        return ref
    _expect_keys(obj, ("name", "order", "mul"), (), where)
    order = obj["order"]
    mul = obj["mul"]
    if not isinstance(mul, list) or len(mul) != order:
        raise StructuralError(f"{where}: mul table must have {order} rows")
    for i, row in enumerate(mul):
        if not isinstance(row, list) or len(row) != order:
            raise StructuralError(f"{where}: mul row {i} must have {order} entries")
        for v in row:
            if not isinstance(v, int) or not (0 <= v < order):
                raise StructuralError(f"{where}: mul row {i} entry out of range")
    return make_group(str(obj["name"]), mul)


def load_group(path: str) -> FiniteGroup:
    return group_from_obj(_load_json(path), os.path.dirname(path), path)


def group_to_obj(g: FiniteGroup) -> dict:
    return {"name": g.name, "order": g.order, "mul": [list(r) for r in g.mul]}


def checked_group(g: FiniteGroup, where: str) -> FiniteGroup:
    if not verify_group(g):
        raise StructuralError(f"{where}: not a group (axioms fail)")
    return g


# ---------------------------------------------------------------------------
# Nerves

def nerve_from_obj(obj, base_dir: str = ".", where: str = "nerve",
                   notice=None) -> Nerve:
    ref = _resolve(obj, base_dir, load_nerve, where)
    if ref is not None:
        return ref
    _expect_keys(obj, ("indices", "faces"), (), where)
    faces = [tuple(f) for f in obj["faces"]]
    nerve = make_nerve(obj["indices"], faces)
    given = {tuple(sorted(set(f))) for f in faces}
    given.update((i,) for i in range(obj["indices"]))
    if given != set(nerve.faces):
        (notice or (lambda m: print(m, file=sys.stderr)))(
            f"note: {where}: faces closed downward "
            f"({len(nerve.faces) - len(given)} added)")
    return nerve


def load_nerve(path: str) -> Nerve:
    return nerve_from_obj(_load_json(path), os.path.dirname(path), path)


def nerve_to_obj(n: Nerve) -> dict:
    return {"indices": n.index_count, "faces": [list(f) for f in n.faces]}


# ---------------------------------------------------------------------------
# Crossed modules and squares

def xmod_from_obj(obj, base_dir: str = ".", where: str = "xmod") -> CrossedModule:
    _expect_keys(obj, ("g", "pi", "delta", "action"), (), where)
    g = checked_group(group_from_obj(obj["g"], base_dir, f"{where}.g"), f"{where}.g")
    pi = checked_group(group_from_obj(obj["pi"], base_dir, f"{where}.pi"), f"{where}.pi")
    delta = obj["delta"]
    if len(delta) != g.order or any(not (0 <= v < pi.order) for v in delta):
        raise StructuralError(f"{where}: delta must map {g.order} elements into pi")
    action = obj["action"]
    if len(action) != pi.order:
        raise StructuralError(f"{where}: action needs one row per pi element")
    return crossed_module_from_tables(g, pi, delta, action)


def load_xmod(path: str) -> CrossedModule:
    return xmod_from_obj(_load_json(path), os.path.dirname(path), path)


def square_from_obj(obj, base_dir: str = ".", where: str = "square") -> CrossedSquare:
    _expect_keys(obj, ("l", "m", "n", "p", "lm", "ln", "mp", "np",
                       "act_l", "act_m", "act_n", "h"), (), where)
    corners = {}
    for name in ("l", "m", "n", "p"):
        corners[name] = checked_group(
            group_from_obj(obj[name], base_dir, f"{where}.{name}"), f"{where}.{name}")
    l, m, n, p = corners["l"], corners["m"], corners["n"], corners["p"]

    def hom(key, src, tgt):
        table = obj[key]
        if len(table) != src.order or any(not (0 <= v < tgt.order) for v in table):
            raise StructuralError(f"{where}.{key}: bad homomorphism table")
        return GroupHom(src, tgt, tuple(table))

    def act(key, on):
        table = obj[key]
        if len(table) != p.order or any(len(r) != on.order for r in table):
            raise StructuralError(f"{where}.{key}: bad action table")
        return tuple(tuple(r) for r in table)

    h = obj["h"]
    if len(h) != m.order or any(len(r) != n.order for r in h):
        raise StructuralError(f"{where}.h: pairing must be |M| x |N|")
    return CrossedSquare(l, m, n, p, hom("lm", l, m), hom("ln", l, n),
                         hom("mp", m, p), hom("np", n, p),
                         act("act_l", l), act("act_m", m), act("act_n", n),
                         tuple(tuple(r) for r in h))


def load_square(path: str) -> CrossedSquare:
    return square_from_obj(_load_json(path), os.path.dirname(path), path)


def square_to_obj(sq: CrossedSquare) -> dict:
    return {"l": group_to_obj(sq.l), "m": group_to_obj(sq.m),
            "n": group_to_obj(sq.n), "p": group_to_obj(sq.p),
            "lm": list(sq.lm.map), "ln": list(sq.ln.map),
            "mp": list(sq.mp.map), "np": list(sq.np.map),
            "act_l": [list(r) for r in sq.act_l],
            "act_m": [list(r) for r in sq.act_m],
            "act_n": [list(r) for r in sq.act_n],
            "h": [list(r) for r in sq.h]}


# ---------------------------------------------------------------------------
# Cochains and gerbe data

def _tuple_values(entries, where: str) -> dict:
    out = {}
    for item in entries:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise StructuralError(f"{where}: entries must be [[indices...], value]")
        out[tuple(item[0])] = item[1]
    return out


def cochain1_from_obj(obj, base_dir: str = ".", where: str = "cochain") -> Cochain1:
    _expect_keys(obj, ("nerve", "group", "values"), (), where)
    nerve = nerve_from_obj(obj["nerve"], base_dir, f"{where}.nerve")
    group = checked_group(group_from_obj(obj["group"], base_dir, f"{where}.group"),
                          f"{where}.group")
    return make_cochain1(nerve, group, _tuple_values(obj["values"], f"{where}.values"))


def load_cochain1(path: str) -> Cochain1:
    return cochain1_from_obj(_load_json(path), os.path.dirname(path), path)


def cochain1_to_obj(c: Cochain1) -> dict:
    return {"nerve": nerve_to_obj(c.nerve),
            "group": group_to_obj(c.group),
            "values": [[list(t), c.value(*t)] for t in c.nerve.otuples(2)]}


def gerbe_pair_from_obj(obj, base_dir: str = ".", where: str = "pair") -> GerbeCocyclePair:
    _expect_keys(obj, ("nerve", "group", "lambda", "g"), (), where)
    nerve = nerve_from_obj(obj["nerve"], base_dir, f"{where}.nerve")
    group = checked_group(group_from_obj(obj["group"], base_dir, f"{where}.group"),
                          f"{where}.group")
    return make_gerbe_pair(nerve, group,
                           _tuple_values(obj["lambda"], f"{where}.lambda"),
                           _tuple_values(obj["g"], f"{where}.g"))


def load_gerbe_pair(path: str) -> GerbeCocyclePair:
    return gerbe_pair_from_obj(_load_json(path), os.path.dirname(path), path)


def gerbe_pair_to_obj(p: GerbeCocyclePair) -> dict:
    return {"nerve": nerve_to_obj(p.nerve), "group": group_to_obj(p.group),
            "lambda": [[list(t), p.lam_at(*t)] for t in p.nerve.otuples(2)],
            "g": [[list(t), p.g_at(*t)] for t in p.nerve.otuples(3)]}


def gerbe_coboundary_from_obj(obj, pair: GerbeCocyclePair,
                              where: str = "coboundary") -> GerbeCoboundary:
    _expect_keys(obj, ("r", "theta"), (), where)
    r = obj["r"]
    aut_order = pair.aut.group.order
    if len(r) != pair.nerve.index_count or any(not (0 <= v < aut_order) for v in r):
        raise StructuralError(f"{where}.r: need one automorphism index per cover index")
    theta = _tuple_values(obj["theta"], f"{where}.theta")
    pos = pair.nerve.tuple_index(2)
    vec = [0] * len(pos)
    for t, v in theta.items():
        if t not in pos:
            raise StructuralError(f"{where}.theta: {t} is not an ordered pair face")
        if not (0 <= v < pair.group.order):
            raise StructuralError(f"{where}.theta: value out of range at {t}")
        vec[pos[t]] = v
    return GerbeCoboundary(tuple(r), tuple(vec))


# ---------------------------------------------------------------------------
# Torsors and bitorsors

def torsor_from_obj(obj, base_dir: str = ".", where: str = "torsor") -> Torsor:
    _expect_keys(obj, ("group", "base", "cover", "action"), ("atlas",), where)
    g = checked_group(group_from_obj(obj["group"], base_dir, f"{where}.group"),
                      f"{where}.group")
    base = obj["base"]
    cover = tuple(tuple(sorted(u)) for u in obj["cover"])
    action = obj["action"]
    if len(action) != base:
        raise StructuralError(f"{where}.action: need one table per base point")
    action = tuple(tuple(tuple(row) for row in pt) for pt in action)
    sizes = tuple(len(pt[0]) if pt else 0 for pt in action)
    atlas = obj.get("atlas")
    if atlas is not None:
        atlas = tuple(tuple(sec) for sec in atlas)
        if len(atlas) != len(cover):
            raise StructuralError(f"{where}.atlas: one section per cover element")
    return Torsor(constant_bundle(base, g), sizes, action, cover, atlas)


def load_torsor(path: str) -> Torsor:
    return torsor_from_obj(_load_json(path), os.path.dirname(path), path)


def torsor_to_obj(t: Torsor) -> dict:
    out = {"group": group_to_obj(t.bundle.fiber(0)), "base": t.base,
           "cover": [list(u) for u in t.cover],
           "action": [[list(row) for row in pt] for pt in t.action]}
    if t.atlas is not None:
        out["atlas"] = [list(sec) for sec in t.atlas]
    return out


def bitorsor_from_obj(obj, base_dir: str = ".", where: str = "bitorsor") -> Bitorsor:
    _expect_keys(obj, ("left_group", "right_group", "base", "cover",
                       "act_left", "act_right"), ("atlas",), where)
    gl = checked_group(group_from_obj(obj["left_group"], base_dir,
                                      f"{where}.left_group"), f"{where}.left_group")
    gr = checked_group(group_from_obj(obj["right_group"], base_dir,
                                      f"{where}.right_group"), f"{where}.right_group")
    base = obj["base"]
    cover = tuple(tuple(sorted(u)) for u in obj["cover"])
    al = tuple(tuple(tuple(r) for r in pt) for pt in obj["act_left"])
    ar = tuple(tuple(tuple(r) for r in pt) for pt in obj["act_right"])
    if len(al) != base or len(ar) != base:
        raise StructuralError(f"{where}: need one action table per base point")
    sizes = tuple(len(pt[0]) if pt else 0 for pt in al)
    atlas = obj.get("atlas")
    if atlas is not None:
        atlas = tuple(tuple(sec) for sec in atlas)
    return Bitorsor(constant_bundle(base, gl), constant_bundle(base, gr),
                    sizes, al, ar, cover, atlas)


def load_bitorsor(path: str) -> Bitorsor:
    return bitorsor_from_obj(_load_json(path), os.path.dirname(path), path)


def bitorsor_to_obj(b: Bitorsor) -> dict:
    out = {"left_group": group_to_obj(b.left.fiber(0)),
           "right_group": group_to_obj(b.right.fiber(0)),
           "base": b.base, "cover": [list(u) for u in b.cover],
           "act_left": [[list(r) for r in pt] for pt in b.act_left],
           "act_right": [[list(r) for r in pt] for pt in b.act_right]}
    if b.atlas is not None:
        out["atlas"] = [list(sec) for sec in b.atlas]
    return out


def bitorsor_cocycle_from_obj(obj, base_dir: str = "."):
    """Either {"gerbe_pair": {...}} or explicit bitorsors plus psi tables."""
    from .torsor import BitorsorCocycle, gerbe_pair_bitorsor_cocycle
    if isinstance(obj, dict) and "gerbe_pair" in obj:
        _expect_keys(obj, ("gerbe_pair",), (), "bitorsor cocycle")
        return gerbe_pair_bitorsor_cocycle(
            gerbe_pair_from_obj(obj["gerbe_pair"], base_dir, "gerbe_pair"))
    _expect_keys(obj, ("nerve", "group", "bitorsors", "psi"), (), "bitorsor cocycle")
    nerve = nerve_from_obj(obj["nerve"], base_dir, "nerve")
    group = checked_group(group_from_obj(obj["group"], base_dir, "group"), "group")
    bitorsors = {}
    for item in obj["bitorsors"]:
        if not (isinstance(item, list) and len(item) == 2):
            raise StructuralError("bitorsors: entries must be [[i,j], bitorsor]")
        bitorsors[tuple(item[0])] = bitorsor_from_obj(item[1], base_dir, "bitorsor")
    psi = {}
    for item in obj["psi"]:
        if not (isinstance(item, list) and len(item) == 2):
            raise StructuralError("psi: entries must be [[i,j,k], table]")
        psi[tuple(item[0])] = tuple(item[1])
    return BitorsorCocycle(nerve, group, bitorsors, psi)


# ---------------------------------------------------------------------------
# Extensions

def ext_cocycle_from_obj(obj, base_dir: str = ".", where: str = "ext") -> ExtensionCocycle:
    _expect_keys(obj, ("g", "k", "lam", "gmap"), (), where)
    g = checked_group(group_from_obj(obj["g"], base_dir, f"{where}.g"), f"{where}.g")
    k = checked_group(group_from_obj(obj["k"], base_dir, f"{where}.k"), f"{where}.k")
    return ExtensionCocycle(g, k, tuple(obj["lam"]),
                            tuple(tuple(r) for r in obj["gmap"]))


def load_ext_cocycle(path: str) -> ExtensionCocycle:
    return ext_cocycle_from_obj(_load_json(path), os.path.dirname(path), path)


def ext_cocycle_to_obj(c: ExtensionCocycle) -> dict:
    return {"g": group_to_obj(c.g), "k": group_to_obj(c.k),
            "lam": list(c.lam), "gmap": [list(r) for r in c.gmap]}


def witness_from_obj(obj, base_dir: str = ".", where: str = "witness"):
    _expect_keys(obj, ("h", "g", "k", "embed", "project"), ("section",), where)
    h = checked_group(group_from_obj(obj["h"], base_dir, f"{where}.h"), f"{where}.h")
    g = checked_group(group_from_obj(obj["g"], base_dir, f"{where}.g"), f"{where}.g")
    k = checked_group(group_from_obj(obj["k"], base_dir, f"{where}.k"), f"{where}.k")
    w = ExtensionWitness(h, GroupHom(g, h, tuple(obj["embed"])),
                         GroupHom(h, k, tuple(obj["project"])))
    section = tuple(obj["section"]) if "section" in obj else None
    return w, section


# ---------------------------------------------------------------------------
# Quadruples

def quadruple_from_obj(obj, base_dir: str = ".", where: str = "quadruple") -> QuadrupleCocycle:
    _expect_keys(obj, ("nerve", "square", "lambda", "mtil", "g", "nu"), (), where)
    nerve = nerve_from_obj(obj["nerve"], base_dir, f"{where}.nerve")
    sq = (load_square(os.path.join(base_dir, obj["square"]["file"]))
          if isinstance(obj["square"], dict) and set(obj["square"]) == {"file"}
          else square_from_obj(obj["square"], base_dir, f"{where}.square"))
    def inc_values(key, tuples_list, order):
        vals = _tuple_values(obj[key], f"{where}.{key}")
        out = {}
        for t in tuples_list:
            if t not in vals:
                raise StructuralError(f"{where}.{key}: missing value for {t}")
            v = vals[t]
            if not (0 <= v < order):
                raise StructuralError(f"{where}.{key}: value out of range at {t}")
            out[t] = v
        extras = set(vals) - set(tuples_list)
        if extras:
            raise StructuralError(f"{where}.{key}: non-increasing tuples {sorted(extras)}; "
                                  "give increasing tuples only")
        return out
    return quadruple_from_increasing(
        nerve, sq,
        inc_values("lambda", nerve.itup(2), sq.p.order),
        inc_values("mtil", nerve.itup(3), sq.m.order),
        inc_values("g", nerve.itup(3), sq.n.order),
        inc_values("nu", nerve.itup(4), sq.l.order))


def load_quadruple(path: str) -> QuadrupleCocycle:
    return quadruple_from_obj(_load_json(path), os.path.dirname(path), path)


def quadruple_to_obj(q: QuadrupleCocycle) -> dict:
    return {"nerve": nerve_to_obj(q.nerve), "square": square_to_obj(q.square),
            "lambda": [[list(t), q.lam_at(*t)] for t in q.nerve.itup(2)],
            "mtil": [[list(t), q.mtil_at(*t)] for t in q.nerve.itup(3)],
            "g": [[list(t), q.g_at(*t)] for t in q.nerve.itup(3)],
            "nu": [[list(t), q.nu_at(*t)] for t in q.nerve.itup(4)]}


def quadruple_coboundary_from_obj(obj, q: QuadrupleCocycle,
                                  where: str = "coboundary") -> QuadrupleCoboundary:
    _expect_keys(obj, ("r", "ztil", "theta", "b"), (), where)
    sq, nerve = q.square, q.nerve
    def vec(key, tuples_list, order):
        vals = _tuple_values(obj[key], f"{where}.{key}")
        out = []
        for t in tuples_list:
            v = vals.get(t, 0)
            if not (0 <= v < order):
                raise StructuralError(f"{where}.{key}: value out of range at {t}")
            out.append(v)
        return tuple(out)
    r = tuple(obj["r"])
    if len(r) != nerve.index_count or any(not (0 <= v < sq.p.order) for v in r):
        raise StructuralError(f"{where}.r: need one P element per cover index")
    return QuadrupleCoboundary(r, vec("ztil", nerve.itup(2), sq.m.order),
                               vec("theta", nerve.itup(2), sq.n.order),
                               vec("b", nerve.itup(3), sq.l.order))
