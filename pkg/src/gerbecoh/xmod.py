"""Crossed modules, their monoidal groupoids, and crossed squares.

A crossed module is a homomorphism delta: G -> Pi with a left Pi-action on
G by automorphisms.  Actions are stored as homomorphisms into the canonical
automorphism group so that action values are stable indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CapacityError, StructuralError
from .grp import (AutGroup, FiniteGroup, GroupHom, automorphisms, identity_hom,
                  inner_conjugation, make_group, trivial_group, verify_group,
                  verify_hom)


@dataclass(frozen=True)
class CrossedModule:
    g: FiniteGroup
    pi: FiniteGroup
    delta: GroupHom              # g -> pi
    act: GroupHom                # pi -> automorphisms(g).group
    aut_g: AutGroup = field(default=None, repr=False, compare=False, hash=False)

    def action(self, p: int, x: int) -> int:
        """The element ^p x of g."""
        return self.aut_g.elements[self.act.map[p]].map[x]

    def action_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.aut_g.elements[self.act.map[p]].map for p in self.pi.elements())


def crossed_module(g: FiniteGroup, pi: FiniteGroup, delta: GroupHom,
                   act: GroupHom) -> CrossedModule:
    aut = automorphisms(g)
    if delta.source != g or delta.target != pi:
        raise StructuralError("delta endpoints do not match g, pi")
    if act.source != pi or act.target != aut.group:
        raise StructuralError("act must map pi into automorphisms(g).group")
    return CrossedModule(g, pi, delta, act, aut)


def crossed_module_from_tables(g: FiniteGroup, pi: FiniteGroup, delta_table,
                               act_table) -> CrossedModule:
    """Build from a delta index list and a |pi| x |g| action value table."""
    aut = automorphisms(g)
    rows = []
    for p, row in enumerate(act_table):
        row = tuple(row)
        try:
            rows.append(aut.index_of(row))
        except KeyError:
            raise StructuralError(f"action row {p} is not an automorphism of g") from None
    return crossed_module(g, pi, GroupHom(g, pi, tuple(delta_table)),
                          GroupHom(pi, aut.group, tuple(rows)))


def inner_crossed_module(g: FiniteGroup) -> CrossedModule:
    """The crossed module G -> Aut(G) with the evaluation action."""
    aut = automorphisms(g)
    return CrossedModule(g, aut.group, inner_conjugation(g),
                         identity_hom(aut.group), aut)


def conjugation_crossed_module(g: FiniteGroup) -> CrossedModule:
    """The identity map G -> G with the conjugation action."""
    aut = automorphisms(g)
    return CrossedModule(g, g, identity_hom(g), inner_conjugation(g), aut)


def trivial_crossed_module(pi: FiniteGroup) -> CrossedModule:
    """1 -> Pi with the only possible action."""
    one = trivial_group()
    aut = automorphisms(one)
    return CrossedModule(one, pi, GroupHom(one, pi, (0,)),
                         GroupHom(pi, aut.group, (0,) * pi.order), aut)


def verify_crossed_module(cm: CrossedModule) -> bool:
    """Equivariance and Peiffer on all pairs; StructuralError on bad shapes."""
    g, pi = cm.g, cm.pi
    if not (verify_group(g) and verify_group(pi)):
        raise StructuralError("crossed module components are not groups")
    if len(cm.delta.map) != g.order or len(cm.act.map) != pi.order:
        raise StructuralError("delta or act table has wrong length")
    if not verify_hom(cm.delta) or not verify_hom(cm.act):
        return False
    d = cm.delta.map
    for p in pi.elements():
        for x in g.elements():
            if d[cm.action(p, x)] != pi.conj(p, d[x]):
                return False
    for y in g.elements():
        for x in g.elements():
            if cm.action(d[y], x) != g.conj(y, x):
                return False
    return True


# ---------------------------------------------------------------------------
# Strict monoidal groupoid of a crossed module

@dataclass(frozen=True)
class MonoidalGroupoid:
    objects: FiniteGroup                 # Pi with its multiplication
    g_order: int                         # arrows are pairs (x, pi), x < g_order
    source: tuple[int, ...]
    target: tuple[int, ...]
    tensor: tuple[tuple[int, ...], ...]
    compose: tuple[tuple[int, ...], ...]  # compose[a2][a1] = a2 after a1, -1 if not composable

    def arrow(self, x: int, p: int) -> int:
        return x * self.objects.order + p

    def decode(self, a: int) -> tuple[int, int]:
        return divmod(a, self.objects.order)

    def arrow_count(self) -> int:
        return self.g_order * self.objects.order


def monoidal_groupoid(cm: CrossedModule) -> MonoidalGroupoid:
    """Objects Pi, arrows G x Pi, with (x,p): p -> delta(x)p."""
    g, pi, d = cm.g, cm.pi, cm.delta.map
    no = pi.order
    count = g.order * no
    src = [0] * count
    tgt = [0] * count
    for x in g.elements():
        for p in pi.elements():
            a = x * no + p
            src[a] = p
            tgt[a] = pi.mul[d[x]][p]
    tensor = [[0] * count for _ in range(count)]
    comp = [[-1] * count for _ in range(count)]
    for x1 in g.elements():
        for p1 in pi.elements():
            a1 = x1 * no + p1
            for x2 in g.elements():
                for p2 in pi.elements():
                    a2 = x2 * no + p2
                    tensor[a1][a2] = g.mul[x1][cm.action(p1, x2)] * no + pi.mul[p1][p2]
                    if src[a2] == tgt[a1]:
                        comp[a2][a1] = g.mul[x2][x1] * no + p1
    return MonoidalGroupoid(pi, g.order, tuple(src), tuple(tgt),
                            tuple(tuple(r) for r in tensor),
                            tuple(tuple(r) for r in comp))


def verify_monoidal_groupoid(mg: MonoidalGroupoid) -> bool:
    """Groupoid + strict monoidal axioms, including the interchange law."""
    n = mg.arrow_count()
    pi = mg.objects
    ids = {p: mg.arrow(0, p) for p in pi.elements()}
    for p, a in ids.items():
        if mg.source[a] != p or mg.target[a] != p:
            return False
    for a in range(n):
        # identities are neutral for composition
        if mg.compose[a][ids[mg.source[a]]] != a or mg.compose[ids[mg.target[a]]][a] != a:
            return False
    for a in range(n):
        for b in range(n):
            c = mg.compose[b][a]
            if c >= 0 and (mg.source[c] != mg.source[a] or mg.target[c] != mg.target[b]):
                return False
            if (c >= 0) != (mg.source[b] == mg.target[a]):
                return False
    # tensor is a monoid on arrows with unit (0, 0), compatible with endpoints
    unit = mg.arrow(0, 0)
    for a in range(n):
        if mg.tensor[unit][a] != a or mg.tensor[a][unit] != a:
            return False
        for b in range(n):
            t = mg.tensor[a][b]
            if mg.source[t] != pi.mul[mg.source[a]][mg.source[b]]:
                return False
            if mg.target[t] != pi.mul[mg.target[a]][mg.target[b]]:
                return False
            for c in range(n):
                if mg.tensor[mg.tensor[a][b]][c] != mg.tensor[a][mg.tensor[b][c]]:
                    return False
    # interchange: (a2∘a1) ⊗ (b2∘b1) = (a2⊗b2) ∘ (a1⊗b1)
    for a1 in range(n):
        for a2 in range(n):
            if mg.compose[a2][a1] < 0:
                continue
            for b1 in range(n):
                for b2 in range(n):
                    if mg.compose[b2][b1] < 0:
                        continue
                    lhs = mg.tensor[mg.compose[a2][a1]][mg.compose[b2][b1]]
                    rhs = mg.compose[mg.tensor[a2][b2]][mg.tensor[a1][b1]]
                    if lhs != rhs:
                        return False
    return True


def crossed_module_from_groupoid(mg: MonoidalGroupoid) -> CrossedModule:
    """The inverse dictionary: identity-sourced arrows with the tensor law."""
    pi = mg.objects
    gens = [a for a in range(mg.arrow_count()) if mg.source[a] == 0]
    if sorted(mg.decode(a)[0] for a in gens) != list(range(mg.g_order)):
        raise StructuralError("identity-sourced arrows do not enumerate G")
    order = len(gens)
    arrow_of = {x: mg.arrow(x, 0) for x in range(order)}
    x_of = {a: x for x, a in arrow_of.items()}
    mul = tuple(tuple(x_of[mg.tensor[arrow_of[x]][arrow_of[y]]] for y in range(order))
                for x in range(order))
    g = make_group("Ar_I", mul)
    delta = GroupHom(g, pi, tuple(mg.target[arrow_of[x]] for x in range(order)))
    aut = automorphisms(g)
    rows = []
    for p in pi.elements():
        up = mg.arrow(0, p)
        down = mg.arrow(0, pi.inv[p])
        row = tuple(x_of[mg.tensor[mg.tensor[up][arrow_of[x]]][down]]
                    for x in range(order))
        rows.append(aut.index_of(row))
    return CrossedModule(g, pi, delta, GroupHom(pi, aut.group, tuple(rows)), aut)


# ---------------------------------------------------------------------------
# Crossed squares

@dataclass(frozen=True)
class CrossedSquare:
    """Square of groups L -> M, L -> N, M -> P, N -> P with pairing h: M x N -> L.

    P acts on L, M, N (tables indexed by P); M and N act on everything else
    through their images in P.
    """
    l: FiniteGroup
    m: FiniteGroup
    n: FiniteGroup
    p: FiniteGroup
    lm: GroupHom
    ln: GroupHom
    mp: GroupHom
    np: GroupHom
    act_l: tuple[tuple[int, ...], ...]
    act_m: tuple[tuple[int, ...], ...]
    act_n: tuple[tuple[int, ...], ...]
    h: tuple[tuple[int, ...], ...]

    def pl(self, p: int, x: int) -> int:
        return self.act_l[p][x]

    def pm(self, p: int, x: int) -> int:
        return self.act_m[p][x]

    def pn(self, p: int, x: int) -> int:
        return self.act_n[p][x]

    def bracket(self, mt: int, x: int) -> int:
        return self.h[mt][x]


def _is_action(group: FiniteGroup, on: FiniteGroup, table) -> bool:
    if len(table) != group.order or any(len(r) != on.order for r in table):
        raise StructuralError("action table has wrong shape")
    for row in table:
        if sorted(row) != list(range(on.order)) or row[0] != 0:
            return False
        if any(row[on.mul[a][b]] != on.mul[row[a]][row[b]]
               for a in range(on.order) for b in range(on.order)):
            return False
    return all(tuple(table[group.mul[a][b]]) == tuple(table[a][table[b][x]] for x in range(on.order))
               for a in range(group.order) for b in range(group.order))


def _crossed_pair(src: FiniteGroup, tgt: FiniteGroup, hom: GroupHom, act) -> bool:
    """Crossed-module axioms for hom with tgt acting on src via act(t, s)."""
    if not verify_hom(hom):
        return False
    d = hom.map
    for t in tgt.elements():
        for s in src.elements():
            if d[act(t, s)] != tgt.conj(t, d[s]):
                return False
    for y in src.elements():
        for x in src.elements():
            if act(d[y], x) != src.conj(y, x):
                return False
    return True


def verify_crossed_square(sq: CrossedSquare) -> bool:
    """Commuting square, four crossed modules, and the Loday pairing axioms."""
    L, M, N, P = sq.l, sq.m, sq.n, sq.p
    for grp_ in (L, M, N, P):
        if not verify_group(grp_):
            raise StructuralError("crossed square corner is not a group")
    for hom, s, t in ((sq.lm, L, M), (sq.ln, L, N), (sq.mp, M, P), (sq.np, N, P)):
        if hom.source != s or hom.target != t or len(hom.map) != s.order:
            raise StructuralError("crossed square map endpoints mismatch")
    if len(sq.h) != M.order or any(len(r) != N.order for r in sq.h):
        raise StructuralError("pairing table has wrong shape")
    if not (_is_action(P, L, sq.act_l) and _is_action(P, M, sq.act_m)
            and _is_action(P, N, sq.act_n)):
        return False
    # square commutes
    if any(sq.mp.map[sq.lm.map[x]] != sq.np.map[sq.ln.map[x]] for x in L.elements()):
        return False
    # top and left maps are P-equivariant
    for p in P.elements():
        for x in L.elements():
            if sq.lm.map[sq.pl(p, x)] != sq.pm(p, sq.lm.map[x]):
                return False
            if sq.ln.map[sq.pl(p, x)] != sq.pn(p, sq.ln.map[x]):
                return False
    # four crossed modules (M and N act on L through P)
    if not _crossed_pair(M, P, sq.mp, sq.pm):
        return False
    if not _crossed_pair(N, P, sq.np, sq.pn):
        return False
    if not _crossed_pair(L, M, sq.lm, lambda mt, x: sq.pl(sq.mp.map[mt], x)):
        return False
    if not _crossed_pair(L, N, sq.ln, lambda nt, x: sq.pl(sq.np.map[nt], x)):
        return False
    # pairing axioms
    h = sq.h
    for mt in M.elements():
        for nt in N.elements():
            hmn = h[mt][nt]
            conj_n_m = sq.pm(sq.np.map[nt], mt)
            conj_m_n = sq.pn(sq.mp.map[mt], nt)
            if sq.lm.map[hmn] != M.mul[mt][M.inv[conj_n_m]]:
                return False
            if sq.ln.map[hmn] != N.mul[conj_m_n][N.inv[nt]]:
                return False
            for mt2 in M.elements():
                if h[M.mul[mt][mt2]][nt] != L.mul[sq.pl(sq.mp.map[mt], h[mt2][nt])][hmn]:
                    return False
            for nt2 in N.elements():
                if h[mt][N.mul[nt][nt2]] != L.mul[hmn][sq.pl(sq.np.map[nt], h[mt][nt2])]:
                    return False
    for x in L.elements():
        for nt in N.elements():
            if h[sq.lm.map[x]][nt] != L.mul[x][L.inv[sq.pl(sq.np.map[nt], x)]]:
                return False
        for mt in M.elements():
            if h[mt][sq.ln.map[x]] != L.mul[sq.pl(sq.mp.map[mt], x)][L.inv[x]]:
                return False
    for p in P.elements():
        for mt in M.elements():
            for nt in N.elements():
                if h[sq.pm(p, mt)][sq.pn(p, nt)] != sq.pl(p, h[mt][nt]):
                    return False
    return True


def abelian_square(a: FiniteGroup) -> CrossedSquare:
    """L = a (abelian), M = N = P trivial: coefficients for abelian reductions."""
    one = trivial_group()
    to_one = GroupHom(a, one, (0,) * a.order)
    one_hom = GroupHom(one, one, (0,))
    return CrossedSquare(a, one, one, one, to_one, to_one, one_hom, one_hom,
                         (tuple(range(a.order)),), ((0,),), ((0,),), ((0,),))


def corner_square(cm: CrossedModule) -> CrossedSquare:
    """L = M = trivial with cm on the bottom edge N -> P."""
    one = trivial_group()
    one_hom = GroupHom(one, one, (0,))
    to_n = GroupHom(one, cm.g, (0,))
    to_p = GroupHom(one, cm.pi, (0,))
    act_n = cm.action_table()
    trivial_rows = tuple((0,) for _ in cm.pi.elements())
    return CrossedSquare(one, one, cm.g, cm.pi, one_hom, to_n, to_p, cm.delta,
                         trivial_rows, trivial_rows, act_n,
                         ((0,) * cm.g.order,))


# ---------------------------------------------------------------------------
# Regular derivations and the Norrie square

def derivations(cm: CrossedModule, budget: int = 10_000_000) -> list[tuple[int, ...]]:
    """All maps d: Pi -> G with d(ab) = d(a) · ^a d(b), as value tuples."""
    g, pi = cm.g, cm.pi
    free = pi.order - 1
    needed = g.order ** free
    if needed > budget:
        raise CapacityError(needed, budget, "derivation enumeration")
    out = []
    for vals in itertools.product(g.elements(), repeat=free):
        d = (0,) + vals
        if all(d[pi.mul[a][b]] == g.mul[d[a]][cm.action(a, d[b])]
               for a in pi.elements() for b in pi.elements()):
            out.append(d)
    return out


def whitehead_product(cm: CrossedModule, d1, d2) -> tuple[int, ...]:
    """(d1 ∘ d2)(a) = d1(delta(d2(a)) a) · d2(a)."""
    g, pi, dmap = cm.g, cm.pi, cm.delta.map
    return tuple(g.mul[d1[pi.mul[dmap[d2[a]]][a]]][d2[a]] for a in pi.elements())


def regular_derivations(cm: CrossedModule, budget: int = 10_000_000):
    """The Whitehead group: units of the derivation monoid, plus its table."""
    ders = derivations(cm, budget)
    index = {d: i for i, d in enumerate(ders)}
    triv = (0,) * cm.pi.order
    table = [[index[whitehead_product(cm, a, b)] for b in ders] for a in ders]
    t = index[triv]
    units = sorted(i for i in range(len(ders))
                   if any(table[i][j] == t and table[j][i] == t for j in range(len(ders))))
    unit_ders = [ders[i] for i in units]
    unit_pos = {old: new for new, old in enumerate(units)}
    mul = tuple(tuple(unit_pos[table[a][b]] for b in units) for a in units)
    group = make_group("Der*", mul)
    return unit_ders, group


def aut_crossed_module(cm: CrossedModule):
    """Pairs (theta, sigma) of compatible automorphisms, as a FiniteGroup.

    Element i is pairs[i] = (index into automorphisms(g), index into
    automorphisms(pi)); the identity pair sits at 0.
    """
    aut_g, aut_pi = cm.aut_g, automorphisms(cm.pi)
    pairs = []
    for ti, theta in enumerate(aut_g.elements):
        for si, sigma in enumerate(aut_pi.elements):
            if any(cm.delta.map[theta.map[x]] != sigma.map[cm.delta.map[x]]
                   for x in cm.g.elements()):
                continue
            if any(theta.map[cm.action(a, x)] != cm.action(sigma.map[a], theta.map[x])
                   for a in cm.pi.elements() for x in cm.g.elements()):
                continue
            pairs.append((ti, si))
    pairs.sort()
    pos = {pr: i for i, pr in enumerate(pairs)}
    mul = tuple(tuple(pos[(aut_g.compose(a[0], b[0]), aut_pi.compose(a[1], b[1]))]
                      for b in pairs) for a in pairs)
    group = make_group(f"Aut({cm.g.name}->{cm.pi.name})", mul)
    return pairs, group, aut_g, aut_pi


def norrie_square(cm: CrossedModule, bound: int = 64,
                  budget: int = 10_000_000) -> CrossedSquare:
    """The actor crossed square of a crossed module.

    Top-right is the Whitehead group of regular derivations, bottom-right the
    automorphism group of cm; the pairing evaluates a derivation on Pi.
    """
    if cm.g.order * cm.pi.order > bound:
        raise CapacityError(cm.g.order * cm.pi.order, bound, "norrie square size")
    g, pi, dmap = cm.g, cm.pi, cm.delta.map
    ders, m_group = regular_derivations(cm, budget)
    der_index = {d: i for i, d in enumerate(ders)}
    pairs, p_group, aut_g, aut_pi = aut_crossed_module(cm)
    pair_index = {pr: i for i, pr in enumerate(pairs)}

    def pair_of(theta_table, sigma_table) -> int:
        key = (aut_g.index_of(tuple(theta_table)), aut_pi.index_of(tuple(sigma_table)))
        if key not in pair_index:
            raise StructuralError("automorphism pair leaves Aut(cm); not a crossed module?")
        return pair_index[key]

    # eta: G -> Der*, g ↦ (a ↦ g · ^a g^-1)
    lm_rows = []
    for x in g.elements():
        d = tuple(g.mul[x][g.inv[cm.action(a, x)]] for a in pi.elements())
        if d not in der_index:
            raise StructuralError("inner derivation is not regular")
        lm_rows.append(der_index[d])
    lm = GroupHom(g, m_group, tuple(lm_rows))
    ln = GroupHom(g, pi, dmap)
    # Delta: Der* -> Aut(cm), d ↦ (theta_d, sigma_d)
    mp_rows = []
    for d in ders:
        theta = tuple(g.mul[d[dmap[x]]][x] for x in g.elements())
        sigma = tuple(pi.mul[dmap[d[a]]][a] for a in pi.elements())
        mp_rows.append(pair_of(theta, sigma))
    mp = GroupHom(m_group, p_group, tuple(mp_rows))
    # alpha: Pi -> Aut(cm), a ↦ (x ↦ ^a x, b ↦ a b a^-1)
    np_rows = []
    for a in pi.elements():
        theta = tuple(cm.action(a, x) for x in g.elements())
        sigma = tuple(pi.conj(a, b) for b in pi.elements())
        np_rows.append(pair_of(theta, sigma))
    np_hom = GroupHom(pi, p_group, tuple(np_rows))

    act_l = tuple(aut_g.elements[pairs[i][0]].map for i in range(p_group.order))
    act_n = tuple(aut_pi.elements[pairs[i][1]].map for i in range(p_group.order))
    act_m_rows = []
    for i in range(p_group.order):
        theta = aut_g.elements[pairs[i][0]].map
        sigma_inv = aut_pi.elements[aut_pi.invert(pairs[i][1])].map
        row = []
        for d in ders:
            nd = tuple(theta[d[sigma_inv[a]]] for a in pi.elements())
            if nd not in der_index:
                raise StructuralError("Aut(cm) action leaves Der*")
            row.append(der_index[nd])
        act_m_rows.append(tuple(row))
    h = tuple(tuple(d[a] for a in pi.elements()) for d in ders)
    return CrossedSquare(g, m_group, pi, p_group, lm, ln, mp, np_hom,
                         act_l, tuple(act_m_rows), act_n, h)
