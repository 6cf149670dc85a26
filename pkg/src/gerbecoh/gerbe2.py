"""Degree-one cocycle quadruples valued in a strict crossed square.

A quadruple (lam, mtil, g, nu) sits in the square's corners (P, M, N, L);
all conjugation expressions route through the square's P-action, with
elements of M and N acting via their structure maps into P.  The two
cocycle equations and the coboundary solving formulas follow the cubical
bookkeeping of the source equations verbatim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cover import Nerve
from .errors import CapacityError, StructuralError
from .xmod import CrossedSquare, verify_crossed_square


def _index_map(tuples_list):
    return {t: i for i, t in enumerate(tuples_list)}


@dataclass(frozen=True)
class QuadrupleCocycle:
    nerve: Nerve
    square: CrossedSquare
    lam: tuple[int, ...]   # P, aligned with otuples(2)
    mtil: tuple[int, ...]  # M, aligned with otuples(3)
    g: tuple[int, ...]     # N, aligned with otuples(3)
    nu: tuple[int, ...]    # L, aligned with otuples(4)
    _pos2: dict = field(default=None, repr=False, compare=False, hash=False)
    _pos3: dict = field(default=None, repr=False, compare=False, hash=False)
    _pos4: dict = field(default=None, repr=False, compare=False, hash=False)

    def lam_at(self, i, j):
        return 0 if i == j else self.lam[self._pos2[(i, j)]]

    def mtil_at(self, i, j, k):
        if i == j or j == k or i == k:
            return 0
        return self.mtil[self._pos3[(i, j, k)]]

    def g_at(self, i, j, k):
        if i == j or j == k or i == k:
            return 0
        return self.g[self._pos3[(i, j, k)]]

    def nu_at(self, i, j, k, l):
        if len({i, j, k, l}) < 4:
            return 0
        return self.nu[self._pos4[(i, j, k, l)]]

    def key(self):
        i2, i3, i4 = self.nerve.itup(2), self.nerve.itup(3), self.nerve.itup(4)
        return (tuple(self.lam[self._pos2[t]] for t in i2),
                tuple(self.mtil[self._pos3[t]] for t in i3),
                tuple(self.g[self._pos3[t]] for t in i3),
                tuple(self.nu[self._pos4[t]] for t in i4))


@dataclass(frozen=True)
class QuadrupleCoboundary:
    """Free coboundary data on increasing tuples; r is per cover index."""
    r: tuple[int, ...]      # P per index
    ztil: tuple[int, ...]   # M per increasing pair
    theta: tuple[int, ...]  # N per increasing pair
    b: tuple[int, ...]      # L per increasing triple


def _attach(q: QuadrupleCocycle):
    object.__setattr__(q, "_pos2", q.nerve.tuple_index(2))
    object.__setattr__(q, "_pos3", q.nerve.tuple_index(3))
    object.__setattr__(q, "_pos4", q.nerve.tuple_index(4))
    return q


_SWAP_CACHE: dict = {}


def _adjacent_swaps(src: tuple, dst: tuple):
    key = (src, dst)
    if key not in _SWAP_CACHE:
        cur = list(src)
        swaps = []
        for target_pos in range(len(dst)):
            j = cur.index(dst[target_pos])
            while j > target_pos:
                cur[j - 1], cur[j] = cur[j], cur[j - 1]
                swaps.append(j - 1)
                j -= 1
        _SWAP_CACHE[key] = swaps
    return _SWAP_CACHE[key]


def _extension_plan(nerve: Nerve):
    """Per-nerve compiled swap recipes for extending increasing data.

    Each entry lists, for one ordered tuple, the swap steps and the vector
    positions of every value the step's rule consults; the recipes depend
    only on the nerve, so they are built once and memoized.
    """
    if "xplan" in nerve._memo:
        return nerve._memo["xplan"]
    pos2, pos3, pos4 = (nerve.tuple_index(2), nerve.tuple_index(3),
                        nerve.tuple_index(4))
    lam_plan = [(pos2[(j, i)], pos2[(i, j)]) for (i, j) in nerve.itup(2)]

    g_plan = []
    for t in nerve.otuples(3):
        s = tuple(sorted(t))
        steps = []
        cur = list(s)
        for swap in _adjacent_swaps(s, t):
            if swap == 1:
                steps.append((0,))
            else:
                steps.append((1, pos2[(cur[1], cur[0])]))
            cur[swap], cur[swap + 1] = cur[swap + 1], cur[swap]
        g_plan.append((pos3[t], s, tuple(steps)))

    mtil_plan = []
    for t in nerve.otuples(3):
        s = tuple(sorted(t))
        steps = []
        cur = list(s)
        for swap in _adjacent_swaps(s, t):
            x, y, z = cur
            if swap == 1:
                steps.append((0, pos3[(x, y, z)]))
            else:
                steps.append((1, pos2[(x, y)], pos3[(y, x, z)], pos2[(y, x)]))
            cur[swap], cur[swap + 1] = cur[swap + 1], cur[swap]
        mtil_plan.append((pos3[t], s, tuple(steps)))

    nu_plan = []
    for t in nerve.otuples(4):
        s = tuple(sorted(t))
        steps = []
        cur = list(s)
        for swap in _adjacent_swaps(s, t):
            x, y, z, w = cur
            if swap == 2:
                steps.append((2, pos2[(x, y)], pos3[(y, z, w)]))
            elif swap == 1:
                steps.append((1, pos2[(x, y)], pos2[(y, z)], pos3[(z, y, w)],
                              pos3[(x, y, z)], pos3[(x, y, z)]))
            else:
                steps.append((0, pos2[(x, y)], pos3[(y, x, z)], pos2[(y, x)]))
            cur[swap], cur[swap + 1] = cur[swap + 1], cur[swap]
        nu_plan.append((pos4[t], s, tuple(steps)))

    plan = (lam_plan, g_plan, mtil_plan, nu_plan)
    nerve._memo["xplan"] = plan
    return plan


def quadruple_from_increasing(nerve: Nerve, sq: CrossedSquare, lam_inc, mtil_inc,
                              g_inc, nu_inc) -> QuadrupleCocycle:
    """Extend increasing data to all orderings by the forced swap rules.

    The rules are the repeated-index instances of the two cocycle equations
    (and of the target compatibilities); only normalized cocycles satisfy
    them, so verification re-checks everything on the extended data.
    """
    L, M, N, P = sq.l, sq.m, sq.n, sq.p
    linv, minv, ninv, pinv = L.inv, M.inv, N.inv, P.inv
    lmul, pmul = L.mul, P.mul
    act_l, act_m, act_n = sq.act_l, sq.act_m, sq.act_n
    npm, h = sq.np.map, sq.h
    lam_plan, g_plan, mtil_plan, nu_plan = _extension_plan(nerve)
    pos2, pos3, pos4 = (nerve.tuple_index(2), nerve.tuple_index(3),
                        nerve.tuple_index(4))

    lam = [0] * len(pos2)
    for (i, j) in nerve.itup(2):
        lam[pos2[(i, j)]] = lam_inc[(i, j)]
    for dst, srcp in lam_plan:
        lam[dst] = pinv[lam[srcp]]

    g = [0] * len(pos3)
    for dst, s, steps in g_plan:
        v = g_inc[s]
        for step in steps:
            if step[0] == 0:
                v = ninv[v]
            else:
                v = act_n[lam[step[1]]][ninv[v]]
        g[dst] = v

    mtil = [0] * len(pos3)
    for dst, s, steps in mtil_plan:
        v = mtil_inc[s]
        for step in steps:
            if step[0] == 0:
                v = act_m[pinv[npm[g[step[1]]]]][minv[v]]
            else:
                conj = npm[act_n[lam[step[1]]][g[step[2]]]]
                v = act_m[lam[step[3]]][act_m[conj][minv[v]]]
        mtil[dst] = v

    nu = [0] * len(pos4)
    for dst, s, steps in nu_plan:
        v = nu_inc[s]
        for step in steps:
            kind = step[0]
            if kind == 2:
                v = act_l[pinv[npm[act_n[lam[step[1]]][g[step[2]]]]]][linv[v]]
            elif kind == 1:
                lam2 = pmul[lam[step[1]]][lam[step[2]]]
                conj = npm[act_n[lam2][g[step[3]]]]
                inner = lmul[linv[act_l[conj][v]]][h[mtil[step[4]]][g[step[3]]]]
                v = act_l[pinv[npm[g[step[5]]]]][inner]
            else:
                conj = npm[act_n[lam[step[1]]][g[step[2]]]]
                v = act_l[lam[step[3]]][act_l[conj][linv[v]]]
        nu[dst] = v

    return _attach(QuadrupleCocycle(nerve, sq, tuple(lam), tuple(mtil),
                                    tuple(g), tuple(nu)))


def trivial_quadruple(nerve: Nerve, sq: CrossedSquare) -> QuadrupleCocycle:
    return quadruple_from_increasing(
        nerve, sq,
        {t: 0 for t in nerve.itup(2)}, {t: 0 for t in nerve.itup(3)},
        {t: 0 for t in nerve.itup(3)}, {t: 0 for t in nerve.itup(4)})


def _verify_equations(q: QuadrupleCocycle) -> bool:
    sq = q.square
    L, M, N, P = sq.l, sq.m, sq.n, sq.p
    npm, mpm, lmm, lnm = sq.np.map, sq.mp.map, sq.lm.map, sq.ln.map
    # target compatibility for mtil: mp(mtil_ijk) = lam_ij lam_jk lam_ik^-1 np(g_ijk)^-1
    for (i, j, k) in q.nerve.support_tuples(3):
        rhs = P.mul[P.mul[P.mul[q.lam_at(i, j)][q.lam_at(j, k)]]
                    [P.inv[q.lam_at(i, k)]]][P.inv[npm[q.g_at(i, j, k)]]]
        if mpm[q.mtil_at(i, j, k)] != rhs:
            return False
    for (i, j, k, l) in q.nerve.support_tuples(4):
        # target compatibility for nu: ln(nu) = g_ijk g_ikl g_ijl^-1 (lam_ij(g_jkl))^-1
        rhs = N.mul[N.mul[N.mul[q.g_at(i, j, k)][q.g_at(i, k, l)]]
                    [N.inv[q.g_at(i, j, l)]]][N.inv[sq.pn(q.lam_at(i, j), q.g_at(j, k, l))]]
        if lnm[q.nu_at(i, j, k, l)] != rhs:
            return False
        # equation 1: mtil_ijk · ^(g_ijk) mtil_ikl · j(nu_ijkl)
        #           = ^(lam_ij) mtil_jkl · ^(lam_ij(g_jkl)) mtil_ijl
        lhs = M.mul[M.mul[q.mtil_at(i, j, k)]
                    [sq.pm(npm[q.g_at(i, j, k)], q.mtil_at(i, k, l))]]
        lhs = lhs[lmm[q.nu_at(i, j, k, l)]]
        rhs = M.mul[sq.pm(q.lam_at(i, j), q.mtil_at(j, k, l))]
        rhs = rhs[sq.pm(npm[sq.pn(q.lam_at(i, j), q.g_at(j, k, l))], q.mtil_at(i, j, l))]
        if lhs != rhs:
            return False
    for (i, j, k, l, m) in q.nerve.support_tuples(5):
        # equation 2 (the twisted 3-cocycle condition):
        # nu_ijkl · ^(lam_ij(g_jkl)) nu_ijlm · lam_ij(nu_jklm)
        #   = ^(g_ijk) nu_iklm · h(mtil_ijk, g_klm)^-1 · ^((lam_ij lam_jk)(g_klm)) nu_ijkm
        lhs = L.mul[q.nu_at(i, j, k, l)]
        lhs = lhs[sq.pl(npm[sq.pn(q.lam_at(i, j), q.g_at(j, k, l))], q.nu_at(i, j, l, m))]
        lhs = L.mul[lhs][sq.pl(q.lam_at(i, j), q.nu_at(j, k, l, m))]
        rhs = L.mul[sq.pl(npm[q.g_at(i, j, k)], q.nu_at(i, k, l, m))]
        rhs = rhs[L.inv[sq.bracket(q.mtil_at(i, j, k), q.g_at(k, l, m))]]
        lam2 = P.mul[q.lam_at(i, j)][q.lam_at(j, k)]
        rhs = L.mul[rhs][sq.pl(npm[sq.pn(lam2, q.g_at(k, l, m))], q.nu_at(i, j, k, m))]
        if lhs != rhs:
            return False
    return True


def verify_quadruple(q: QuadrupleCocycle) -> bool:
    """Target compatibilities plus both cocycle equations, all support tuples."""
    if not verify_crossed_square(q.square):
        raise StructuralError("coefficient square is not a crossed square")
    return _verify_equations(q)


def identity_quadruple_coboundary(nerve: Nerve) -> QuadrupleCoboundary:
    return QuadrupleCoboundary((0,) * nerve.index_count,
                               (0,) * len(nerve.itup(2)),
                               (0,) * len(nerve.itup(2)),
                               (0,) * len(nerve.itup(3)))


def apply_quadruple_coboundary(q: QuadrupleCocycle,
                               c: QuadrupleCoboundary) -> QuadrupleCocycle:
    """Act by (r, ztil, theta, b): primed data solved from the coboundary
    equations on increasing tuples, then extended by the swap rules.

    lam' and g' come from the target-compatibility arrows of ztil and b;
    mtil' and nu' are solved from the two coboundary equations.
    """
    sq = q.square
    L, M, N, P = sq.l, sq.m, sq.n, sq.p
    npm, mpm, lmm, lnm = sq.np.map, sq.mp.map, sq.lm.map, sq.ln.map
    nerve = q.nerve
    i2, i3, i4 = nerve.itup(2), nerve.itup(3), nerve.itup(4)
    p2, p3 = nerve.inc_index(2), nerve.inc_index(3)

    def zt(i, j):
        return c.ztil[p2[(i, j)]]

    def th(i, j):
        return c.theta[p2[(i, j)]]

    def bb(i, j, k):
        return c.b[p3[(i, j, k)]]

    lam2 = {}
    for (i, j) in i2:
        v = P.mul[P.inv[mpm[zt(i, j)]]][npm[th(i, j)]]
        v = P.mul[v][P.mul[c.r[i]][P.mul[q.lam_at(i, j)][P.inv[c.r[j]]]]]
        lam2[(i, j)] = v

    g2 = {}
    for (i, j, k) in i3:
        v = N.mul[N.inv[lnm[bb(i, j, k)]]][sq.pn(lam2[(i, j)], th(j, k))]
        v = N.mul[v][th(i, j)]
        v = N.mul[v][sq.pn(c.r[i], q.g_at(i, j, k))]
        g2[(i, j, k)] = N.mul[v][N.inv[th(i, k)]]

    mtil2 = {}
    for (i, j, k) in i3:
        lam2_th = sq.pn(lam2[(i, j)], th(j, k))          # lam'_ij(theta_jk) in N
        conj_a = npm[lam2_th]
        big_q = P.mul[P.mul[conj_a][npm[th(i, j)]]][c.r[i]]
        v = M.inv[sq.pm(lam2[(i, j)], zt(j, k))]
        v = M.mul[v][M.inv[sq.pm(conj_a, zt(i, j))]]
        v = M.mul[v][sq.pm(big_q, q.mtil_at(i, j, k))]
        v = M.mul[v][lmm[bb(i, j, k)]]
        mtil2[(i, j, k)] = M.mul[v][sq.pm(npm[g2[(i, j, k)]], zt(i, k))]

    nu2 = {}
    for (i, j, k, l) in i4:
        lam2_ij, lam2_jk = lam2[(i, j)], lam2[(j, k)]
        lam2_comp = P.mul[lam2_ij][lam2_jk]
        t_kl = sq.pn(lam2_comp, th(k, l))                # lam'_ij lam'_jk(theta_kl)
        t_jk = sq.pn(lam2_ij, th(j, k))                  # lam'_ij(theta_jk)
        q1 = P.mul[P.mul[P.mul[npm[t_kl]][npm[t_jk]]][npm[th(i, j)]]][c.r[i]]
        q2 = P.mul[npm[t_kl]][npm[t_jk]]
        lhs = sq.pl(q1, q.nu_at(i, j, k, l))
        lhs = L.mul[lhs][sq.pl(q2, L.inv[sq.bracket(zt(i, j), q.g_at(j, k, l))])]
        lhs = L.mul[lhs][sq.pl(lam2_ij, bb(j, k, l))]
        lhs = L.mul[lhs][sq.pl(npm[sq.pn(lam2_ij, g2[(j, k, l)])], bb(i, j, l))]
        v = L.inv[sq.pl(npm[g2[(i, j, k)]], bb(i, k, l))]
        v = L.mul[v][L.inv[sq.bracket(mtil2[(i, j, k)], th(k, l))]]
        v = L.mul[v][L.inv[sq.pl(npm[t_kl], bb(i, j, k))]]
        nu2[(i, j, k, l)] = L.mul[v][lhs]

    return quadruple_from_increasing(nerve, sq, lam2, mtil2, g2, nu2)


def _coboundary_space(nerve: Nerve, sq: CrossedSquare):
    n = nerve.index_count
    p2, p3 = len(nerve.itup(2)), len(nerve.itup(3))
    return (sq.p.order ** n) * (sq.m.order ** p2) * (sq.n.order ** p2) * \
        (sq.l.order ** p3)


def all_coboundaries(nerve: Nerve, sq: CrossedSquare, budget: int = 10_000_000):
    needed = _coboundary_space(nerve, sq)
    if needed > budget:
        raise CapacityError(needed, budget, "coboundary enumeration")
    n = nerve.index_count
    p2, p3 = len(nerve.itup(2)), len(nerve.itup(3))
    for r in itertools.product(sq.p.elements(), repeat=n):
        for ztil in itertools.product(sq.m.elements(), repeat=p2):
            for theta in itertools.product(sq.n.elements(), repeat=p2):
                for b in itertools.product(sq.l.elements(), repeat=p3):
                    yield QuadrupleCoboundary(r, ztil, theta, b)


def are_cohomologous(q1: QuadrupleCocycle, q2: QuadrupleCocycle,
                     budget: int = 10_000_000) -> bool:
    """Brute-force search for a coboundary carrying q1 to q2."""
    if q1.nerve != q2.nerve or q1.square != q2.square:
        raise StructuralError("quadruples have different nerves or coefficients")
    target = q2.key()
    for cb in all_coboundaries(q1.nerve, q1.square, budget):
        if apply_quadruple_coboundary(q1, cb).key() == target:
            return True
    return False


def classify_quadruples(nerve: Nerve, sq: CrossedSquare,
                        budget: int = 10_000_000, workers: int = 1):
    """Enumerate valid quadruples and quotient by all coboundaries."""
    from .parallel import map_partitions
    if not verify_crossed_square(sq):
        raise StructuralError("coefficient square is not a crossed square")
    L, M, N, P = sq.l, sq.m, sq.n, sq.p
    i2, i3, i4 = nerve.itup(2), nerve.itup(3), nerve.itup(4)
    needed = (P.order ** len(i2)) * (M.order ** len(i3)) * \
        (N.order ** len(i3)) * (L.order ** len(i4))
    if needed > budget:
        raise CapacityError(needed, budget, "quadruple enumeration")
    _ = _coboundary_space(nerve, sq)
    if _ > budget:
        raise CapacityError(_, budget, "coboundary enumeration")

    lam_choices = list(itertools.product(P.elements(), repeat=len(i2)))

    def scan(lams):
        found = []
        for lam_v in lams:
            lam_inc = dict(zip(i2, lam_v))
            for mt_v in itertools.product(M.elements(), repeat=len(i3)):
                for g_v in itertools.product(N.elements(), repeat=len(i3)):
                    for nu_v in itertools.product(L.elements(), repeat=len(i4)):
                        q = quadruple_from_increasing(
                            nerve, sq, lam_inc, dict(zip(i3, mt_v)),
                            dict(zip(i3, g_v)), dict(zip(i4, nu_v)))
                        if _verify_equations(q):
                            found.append(q.key())
        return found

    parts = [[v] for v in lam_choices]
    keys = [k for chunk in map_partitions(scan, parts, workers) for k in chunk]
    index = {k: i for i, k in enumerate(keys)}

    def from_key(key):
        lam_k, mt_k, g_k, nu_k = key
        return quadruple_from_increasing(nerve, sq, dict(zip(i2, lam_k)),
                                         dict(zip(i3, mt_k)), dict(zip(i3, g_k)),
                                         dict(zip(i4, nu_k)))

    cobs = list(all_coboundaries(nerve, sq, budget))
    seen = [False] * len(keys)
    classes = []
    for start, key in enumerate(keys):
        if seen[start]:
            continue
        orbit = []
        stack = [key]
        seen[start] = True
        while stack:
            cur = stack.pop()
            orbit.append(cur)
            q = from_key(cur)
            for cb in cobs:
                nxt = apply_quadruple_coboundary(q, cb).key()
                j = index.get(nxt)
                # moves incompatible with the normalization stratum land on
                # invalid data outside the enumerated set; skip them
                if j is not None and not seen[j]:
                    seen[j] = True
                    stack.append(nxt)
        classes.append(min(orbit))
    classes.sort()
    return [from_key(k) for k in classes]


def bracket(sq: CrossedSquare, mt: int, x: int) -> int:
    """The pairing {mt, x} of the coefficient square."""
    if not (0 <= mt < sq.m.order and 0 <= x < sq.n.order):
        raise StructuralError("bracket arguments out of range")
    return sq.bracket(mt, x)
