"""Cech cochain, cocycle and coboundary engine.

Cochains are normalized: a value is stored for every ordered tuple of
distinct indices whose support is a face, and any tuple with a repeated
index evaluates to the identity.  Cocycle equations are imposed on all
tuples whose support is a face, repeated indices included; the repeated
patterns are what force, e.g., g_ji = g_ij^-1 in degree one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cover import Nerve
from .errors import CapacityError, StructuralError
from .grp import AutGroup, FiniteGroup, automorphisms, inner_conjugation
from .parallel import map_partitions
from .xmod import CrossedModule


def _index_map(tuples_list):
    return {t: i for i, t in enumerate(tuples_list)}


def _check_budget(needed: int, budget: int, what: str):
    if needed > budget:
        raise CapacityError(needed, budget, what)


# ---------------------------------------------------------------------------
# Degree 1, group coefficients

@dataclass(frozen=True)
class Cochain1:
    nerve: Nerve
    group: FiniteGroup
    values: tuple[int, ...]  # aligned with nerve.otuples(2)
    _pos: dict = field(default=None, repr=False, compare=False, hash=False)

    def value(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.values[self._pos[(i, j)]]


def make_cochain1(nerve: Nerve, group: FiniteGroup, assignment) -> Cochain1:
    """assignment: mapping from ordered pair tuples to elements.

    Pairs may be given on increasing tuples only, in which case the reversed
    value is the inverse; explicitly given reversed values are kept.
    """
    pairs = nerve.otuples(2)
    pos = nerve.tuple_index(2)
    vals = [None] * len(pairs)
    for t, v in assignment.items():
        t = tuple(t)
        if t not in pos:
            raise StructuralError(f"{t} is not an ordered pair face")
        if not (0 <= v < group.order):
            raise StructuralError(f"value {v} out of range for {group.name}")
        vals[pos[t]] = v
    for (i, j) in pairs:
        if vals[pos[(i, j)]] is None:
            if j < i and vals[pos[(j, i)]] is not None:
                vals[pos[(i, j)]] = group.inv[vals[pos[(j, i)]]]
            else:
                raise StructuralError(f"missing value for pair {(i, j)}")
    c = Cochain1(nerve, group, tuple(vals))
    object.__setattr__(c, "_pos", pos)
    return c


def verify_cocycle1(c: Cochain1) -> bool:
    """g_ik = g_ij g_jk over every triple whose support is a face."""
    grp = c.group
    for (i, j, k) in c.nerve.support_tuples(3):
        if c.value(i, k) != grp.mul[c.value(i, j)][c.value(j, k)]:
            return False
    return True


def _coboundary1(nerve: Nerve, grp: FiniteGroup, values, pos, cvec):
    out = []
    for (i, j) in nerve.otuples(2):
        out.append(grp.mul[grp.mul[cvec[i]][values[pos[(i, j)]]]][grp.inv[cvec[j]]])
    return tuple(out)


def h1_classify(nerve: Nerve, group: FiniteGroup, budget: int = 10_000_000,
                workers: int = 1):
    """All 1-cocycle classes: representatives (as Cochain1) and count.

    Enumerates assignments on increasing pairs (reversed values are forced)
    and quotients by the pointwise coboundary action.
    """
    inc = nerve.itup(2)
    pairs = nerve.otuples(2)
    pos = nerve.tuple_index(2)
    _check_budget(group.order ** len(inc), budget, "1-cocycle enumeration")

    def full_from_inc(assign):
        vals = [0] * len(pairs)
        for t, v in zip(inc, assign):
            vals[pos[t]] = v
            vals[pos[(t[1], t[0])]] = group.inv[v]
        return tuple(vals)

    triples = [t for t in nerve.otuples(3)]

    def scan(first_values):
        found = []
        rest = len(inc) - 1
        for head in first_values:
            for tail in itertools.product(group.elements(), repeat=rest):
                assign = (head,) + tail if inc else ()
                vals = full_from_inc(assign)
                ok = all(vals[pos[(i, k)]] ==
                         group.mul[vals[pos[(i, j)]]][vals[pos[(j, k)]]]
                         for (i, j, k) in triples)
                if ok:
                    found.append(vals)
        return found

    if not inc:
        cocycles = [()]
    else:
        parts = [[v] for v in group.elements()]
        cocycles = [v for chunk in map_partitions(scan, parts, workers) for v in chunk]

    gens = [(i, x) for i in range(nerve.index_count) for x in range(1, group.order)]
    orbits = _orbit_partition(
        cocycles,
        lambda vals: [_coboundary1(nerve, group, vals, pos,
                                   tuple(x if idx == i else 0
                                         for idx in range(nerve.index_count)))
                      for (i, x) in gens])
    reps = sorted(min(orbit) for orbit in orbits)
    out = []
    for vals in reps:
        c = Cochain1(nerve, group, vals)
        object.__setattr__(c, "_pos", pos)
        out.append(c)
    return out


def _orbit_partition(items, neighbors):
    """Partition items (hashable) into orbits under the neighbor relation."""
    index = {v: i for i, v in enumerate(items)}
    seen = [False] * len(items)
    orbits = []
    for start, v in enumerate(items):
        if seen[start]:
            continue
        orbit = []
        stack = [v]
        seen[start] = True
        while stack:
            cur = stack.pop()
            orbit.append(cur)
            for nxt in neighbors(cur):
                j = index.get(nxt)
                if j is None:
                    raise StructuralError("orbit left the enumerated set")
                if not seen[j]:
                    seen[j] = True
                    stack.append(nxt)
        orbits.append(orbit)
    return orbits


def cohomologous1(c1: Cochain1, c2: Cochain1) -> bool:
    """True iff some 0-cochain (c_i) satisfies c1_ij c_j = c_i c2_ij everywhere."""
    if c1.nerve != c2.nerve or c1.group != c2.group:
        raise StructuralError("cochains live on different nerves or groups")
    grp, nerve = c1.group, c1.nerve
    pairs = nerve.otuples(2)
    for cvec in itertools.product(grp.elements(), repeat=nerve.index_count):
        if all(grp.mul[c1.value(i, j)][cvec[j]] == grp.mul[cvec[i]][c2.value(i, j)]
               for (i, j) in pairs):
            return True
    return False


# ---------------------------------------------------------------------------
# Degree 0, crossed module coefficients

@dataclass(frozen=True)
class CrossedPair0:
    nerve: Nerve
    cm: CrossedModule
    g_values: tuple[int, ...]   # aligned with otuples(2)
    pi_values: tuple[int, ...]  # one per index


def verify_crossed_pair0(c: CrossedPair0) -> bool:
    nerve, cm = c.nerve, c.cm
    pairs = nerve.otuples(2)
    pos = _index_map(pairs)
    g, pi, d = cm.g, cm.pi, cm.delta.map

    def gval(i, j):
        return 0 if i == j else c.g_values[pos[(i, j)]]

    for (i, j, k) in nerve.support_tuples(3):
        if gval(i, k) != g.mul[gval(i, j)][gval(j, k)]:
            return False
    for (i, j) in nerve.support_tuples(2):
        if c.pi_values[i] != pi.mul[d[gval(i, j)]][c.pi_values[j]]:
            return False
    return True


def h0_crossed(nerve: Nerve, cm: CrossedModule, budget: int = 10_000_000):
    """The group of degree-0 classes with the semidirect pair product.

    Returns (group, representatives) where representatives[i] is the
    CrossedPair0 whose class is element i of the group.
    """
    g, pi, d = cm.g, cm.pi, cm.delta.map
    inc = nerve.itup(2)
    pairs = nerve.otuples(2)
    pos = _index_map(pairs)
    n = nerve.index_count
    _check_budget((g.order ** len(inc)) * (pi.order ** n), budget,
                  "degree-0 cocycle enumeration")

    def full_from_inc(assign):
        vals = [0] * len(pairs)
        for t, v in zip(inc, assign):
            vals[pos[t]] = v
            vals[pos[(t[1], t[0])]] = g.inv[v]
        return tuple(vals)

    triples = nerve.otuples(3)
    cocycles = []
    for assign in itertools.product(g.elements(), repeat=len(inc)):
        vals = full_from_inc(assign)
        if not all(vals[pos[(i, k)]] == g.mul[vals[pos[(i, j)]]][vals[pos[(j, k)]]]
                   for (i, j, k) in triples):
            continue
        for pis in itertools.product(pi.elements(), repeat=n):
            if all(pis[i] == pi.mul[d[vals[pos[(i, j)]]]][pis[j]] for (i, j) in pairs):
                cocycles.append((vals, pis))

    def act(state):
        vals, pis = state
        out = []
        for i in range(n):
            for x in range(1, g.order):
                cvec = tuple(x if idx == i else 0 for idx in range(n))
                nv = _coboundary1(nerve, g, vals, pos, cvec)
                np_ = tuple(pi.mul[d[cvec[idx]]][pis[idx]] for idx in range(n))
                out.append((nv, np_))
        return out

    orbits = _orbit_partition(cocycles, act)
    reps = sorted(min(orbit) for orbit in orbits)
    class_of = {}
    for ci, orbit in enumerate(orbits):
        rep = min(orbit)
        for state in orbit:
            class_of[state] = rep
    rep_index = {rep: i for i, rep in enumerate(reps)}

    def product(a, b):
        av, ap = a
        bv, bp = b
        nv = tuple(g.mul[av[t]][cm.action(ap[pairs[t][0]], bv[t])]
                   for t in range(len(pairs)))
        np_ = tuple(pi.mul[ap[i]][bp[i]] for i in range(n))
        return (nv, np_)

    mul = []
    for a in reps:
        row = []
        for b in reps:
            prod = product(a, b)
            if prod not in class_of:
                raise StructuralError("class product left the cocycle set")
            row.append(rep_index[class_of[prod]])
        mul.append(tuple(row))
    from .grp import make_group
    group = make_group(f"H0({cm.g.name}->{cm.pi.name})", tuple(mul))
    rep_objs = [CrossedPair0(nerve, cm, vals, pis) for (vals, pis) in reps]
    return group, rep_objs


# ---------------------------------------------------------------------------
# Degree 1, crossed module G -> Aut(G): gerbe cocycle pairs

@dataclass(frozen=True)
class GerbeCocyclePair:
    nerve: Nerve
    group: FiniteGroup
    lam: tuple[int, ...]  # automorphism indices, aligned with otuples(2)
    g: tuple[int, ...]    # group elements, aligned with otuples(3)
    aut: AutGroup = field(default=None, repr=False, compare=False, hash=False)
    _pos2: dict = field(default=None, repr=False, compare=False, hash=False)
    _pos3: dict = field(default=None, repr=False, compare=False, hash=False)

    def lam_at(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.lam[self._pos2[(i, j)]]

    def g_at(self, i: int, j: int, k: int) -> int:
        if i == j or j == k or i == k:
            return 0
        return self.g[self._pos3[(i, j, k)]]

    def key(self):
        inc2 = self.nerve.itup(2)
        inc3 = self.nerve.itup(3)
        return (tuple(self.lam[self._pos2[t]] for t in inc2),
                tuple(self.g[self._pos3[t]] for t in inc3))


def _attach_gerbe_caches(p: GerbeCocyclePair, aut: AutGroup):
    object.__setattr__(p, "aut", aut)
    object.__setattr__(p, "_pos2", p.nerve.tuple_index(2))
    object.__setattr__(p, "_pos3", p.nerve.tuple_index(3))


def make_gerbe_pair(nerve: Nerve, group: FiniteGroup, lam_assignment,
                    g_assignment, aut: AutGroup = None) -> GerbeCocyclePair:
    """Build a pair from full per-tuple assignments (dicts keyed by tuples)."""
    aut = aut or automorphisms(group)
    pos2 = nerve.tuple_index(2)
    pos3 = nerve.tuple_index(3)
    lam = [None] * len(pos2)
    for t, v in lam_assignment.items():
        t = tuple(t)
        if t not in pos2:
            raise StructuralError(f"{t} is not an ordered pair face")
        if not (0 <= v < aut.group.order):
            raise StructuralError(f"automorphism index {v} out of range")
        lam[pos2[t]] = v
    g = [None] * len(pos3)
    for t, v in g_assignment.items():
        t = tuple(t)
        if t not in pos3:
            raise StructuralError(f"{t} is not an ordered triple face")
        if not (0 <= v < group.order):
            raise StructuralError(f"value {v} out of range")
        g[pos3[t]] = v
    if any(v is None for v in lam) or any(v is None for v in g):
        return gerbe_pair_from_increasing(
            nerve, group,
            {t: v for t, v in lam_assignment.items() if tuple(t) == tuple(sorted(t))},
            {t: v for t, v in g_assignment.items() if tuple(t) == tuple(sorted(t))},
            aut)
    p = GerbeCocyclePair(nerve, group, tuple(lam), tuple(g))
    _attach_gerbe_caches(p, aut)
    return p


def _adjacent_swaps(src: tuple, dst: tuple):
    """Adjacent transposition positions turning src into dst (bubble path)."""
    cur = list(src)
    swaps = []
    for target_pos in range(len(dst)):
        j = cur.index(dst[target_pos])
        while j > target_pos:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            swaps.append(j - 1)
            j -= 1
    return swaps


def gerbe_pair_from_increasing(nerve: Nerve, group: FiniteGroup, lam_inc,
                               g_inc, aut: AutGroup = None) -> GerbeCocyclePair:
    """Extend increasing-tuple data to all orderings by the forced rules.

    lam_ji = lam_ij^-1; swapping the last two triple slots inverts g, and
    swapping the first two applies lam_yx to the inverse.
    """
    aut = aut or automorphisms(group)
    pos2 = nerve.tuple_index(2)
    lam = [0] * len(pos2)
    for (i, j) in nerve.itup(2):
        v = lam_inc[(i, j)]
        lam[pos2[(i, j)]] = v
        lam[pos2[(j, i)]] = aut.invert(v)

    def lam_at(i, j):
        return 0 if i == j else lam[pos2[(i, j)]]

    pos3 = nerve.tuple_index(3)
    g = [0] * len(pos3)
    for t in nerve.otuples(3):
        s = tuple(sorted(t))
        v = g_inc[s]
        cur = list(s)
        for swap in _adjacent_swaps(s, t):
            if swap == 1:       # (x,y,z) -> (x,z,y): invert
                v = group.inv[v]
            else:               # (x,y,z) -> (y,x,z): lam_yx of inverse
                x, y = cur[0], cur[1]
                v = aut.apply(lam_at(y, x), group.inv[v])
            cur[swap], cur[swap + 1] = cur[swap + 1], cur[swap]
        g[pos3[t]] = v
    p = GerbeCocyclePair(nerve, group, tuple(lam), tuple(g))
    _attach_gerbe_caches(p, aut)
    return p


def verify_gerbe_pair(p: GerbeCocyclePair) -> bool:
    """Both cocycle equations over all tuples whose support is a face."""
    aut, grp = p.aut, p.group
    inner = inner_conjugation(grp).map
    amul = aut.group.mul
    for (i, j, k) in p.nerve.support_tuples(3):
        if amul[p.lam_at(i, j)][p.lam_at(j, k)] != amul[inner[p.g_at(i, j, k)]][p.lam_at(i, k)]:
            return False
    for (i, j, k, l) in p.nerve.support_tuples(4):
        lhs = grp.mul[aut.apply(p.lam_at(i, j), p.g_at(j, k, l))][p.g_at(i, j, l)]
        if lhs != grp.mul[p.g_at(i, j, k)][p.g_at(i, k, l)]:
            return False
    return True


@dataclass(frozen=True)
class GerbeCoboundary:
    r: tuple[int, ...]      # automorphism index per cover index
    theta: tuple[int, ...]  # group element per ordered pair (otuples(2) order)


def identity_gerbe_coboundary(nerve: Nerve) -> GerbeCoboundary:
    return GerbeCoboundary((0,) * nerve.index_count, (0,) * len(nerve.otuples(2)))


def apply_gerbe_coboundary(p: GerbeCocyclePair, b: GerbeCoboundary) -> GerbeCocyclePair:
    """lam'_ij = i_(theta_ij) r_i lam_ij r_j^-1;
    g'_ijk = lam'_ij(theta_jk) theta_ij r_i(g_ijk) theta_ik^-1."""
    aut, grp, nerve = p.aut, p.group, p.nerve
    inner = inner_conjugation(grp).map
    amul, ainv = aut.group.mul, aut.group.inv
    pos2 = p._pos2

    def theta_at(i, j):
        return 0 if i == j else b.theta[pos2[(i, j)]]

    lam2 = list(p.lam)
    for t, (i, j) in enumerate(nerve.otuples(2)):
        lam2[t] = amul[amul[inner[theta_at(i, j)]][amul[b.r[i]][p.lam[t]]]][ainv[b.r[j]]]

    def lam2_at(i, j):
        return 0 if i == j else lam2[pos2[(i, j)]]

    g2 = list(p.g)
    for t, (i, j, k) in enumerate(nerve.otuples(3)):
        v = aut.apply(lam2_at(i, j), theta_at(j, k))
        v = grp.mul[v][theta_at(i, j)]
        v = grp.mul[v][aut.apply(b.r[i], p.g[t])]
        g2[t] = grp.mul[v][grp.inv[theta_at(i, k)]]
    out = GerbeCocyclePair(nerve, grp, tuple(lam2), tuple(g2))
    _attach_gerbe_caches(out, aut)
    return out


def normalized_gerbe_coboundary(p: GerbeCocyclePair, r, theta_inc) -> GerbeCoboundary:
    """Fill reversed-pair theta values so the action preserves normalization:
    theta_ji = lam'_ij^-1(theta_ij^-1)."""
    aut, grp = p.aut, p.group
    inner = inner_conjugation(grp).map
    amul, ainv = aut.group.mul, aut.group.inv
    pos2 = p._pos2
    theta = [0] * len(pos2)
    for (i, j) in p.nerve.itup(2):
        v = theta_inc[(i, j)]
        theta[pos2[(i, j)]] = v
        lam2 = amul[amul[inner[v]][amul[r[i]][p.lam[pos2[(i, j)]]]]][ainv[r[j]]]
        theta[pos2[(j, i)]] = aut.apply(ainv[lam2], grp.inv[v])
    return GerbeCoboundary(tuple(r), tuple(theta))


def h1_gerbe_classify(nerve: Nerve, group: FiniteGroup, budget: int = 10_000_000,
                      lambda_id_sector: bool = False, workers: int = 1):
    """Classes of gerbe cocycle pairs; returns sorted representative pairs.

    With lambda_id_sector the enumeration fixes lam = id and the coboundary
    quotient is restricted to r = id with central theta (the coboundaries
    preserving that sector).
    """
    aut = automorphisms(group)
    inc2, inc3 = nerve.itup(2), nerve.itup(3)
    lam_space = 1 if lambda_id_sector else aut.group.order ** len(inc2)
    _check_budget(lam_space * group.order ** len(inc3), budget,
                  "gerbe cocycle enumeration")

    lam_choices = ([{t: 0 for t in inc2}] if lambda_id_sector else
                   [dict(zip(inc2, v)) for v in
                    itertools.product(range(aut.group.order), repeat=len(inc2))])

    def scan(lam_dicts):
        found = []
        for lam_inc in lam_dicts:
            for gv in itertools.product(group.elements(), repeat=len(inc3)):
                pair = gerbe_pair_from_increasing(nerve, group, lam_inc,
                                                  dict(zip(inc3, gv)), aut)
                if verify_gerbe_pair(pair):
                    found.append(pair.key())
        return found

    parts = [[d] for d in lam_choices]
    keys = [k for chunk in map_partitions(scan, parts, workers) for k in chunk]

    def from_key(key):
        lam_k, g_k = key
        return gerbe_pair_from_increasing(nerve, group, dict(zip(inc2, lam_k)),
                                          dict(zip(inc3, g_k)), aut)

    theta_values = (group.center() if lambda_id_sector else range(group.order))
    r_values = () if lambda_id_sector else range(1, aut.group.order)

    def neighbors(key):
        pair = from_key(key)
        out = []
        for pi, t in enumerate(inc2):
            for x in theta_values:
                if x == 0:
                    continue
                theta_inc = {u: (x if u == t else 0) for u in inc2}
                cb = normalized_gerbe_coboundary(pair, (0,) * nerve.index_count,
                                                 theta_inc)
                out.append(apply_gerbe_coboundary(pair, cb).key())
        for i in range(nerve.index_count):
            for a in r_values:
                r = tuple(a if idx == i else 0 for idx in range(nerve.index_count))
                cb = normalized_gerbe_coboundary(pair, r, {u: 0 for u in inc2})
                out.append(apply_gerbe_coboundary(pair, cb).key())
        return out

    orbits = _orbit_partition(keys, neighbors)
    reps = sorted(min(orbit) for orbit in orbits)
    return [from_key(k) for k in reps]
