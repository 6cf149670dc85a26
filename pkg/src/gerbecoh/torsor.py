"""Torsors and bitorsors over covered finite discrete bases.

A covered torsor is a per-point free transitive action together with an
atlas: one distinguished trivializing section per cover element.  The atlas
is what makes isomorphism, global sections and cocycle extraction
meaningful over a discrete base; morphisms are pointwise equivariant
families that carry distinguished sections to constant translates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coh import Cochain1, cohomologous1, make_cochain1, verify_cocycle1
from .cover import Nerve, cover_realization, nerve_from_cover
from .errors import StructuralError
from .grp import FiniteGroup, GroupHom, make_group, verify_hom


def groups_equal(a: FiniteGroup, b: FiniteGroup) -> bool:
    return a.order == b.order and a.mul == b.mul


@dataclass(frozen=True)
class GroupBundle:
    base: int
    fibers: tuple[FiniteGroup, ...]

    def fiber(self, x: int) -> FiniteGroup:
        return self.fibers[x]


def constant_bundle(base: int, g: FiniteGroup) -> GroupBundle:
    return GroupBundle(base, (g,) * base)


def verify_bundle(b: GroupBundle) -> bool:
    from .grp import verify_group
    if b.base != len(b.fibers):
        raise StructuralError("bundle size mismatch")
    return all(verify_group(g) for g in b.fibers)


@dataclass(frozen=True)
class Torsor:
    bundle: GroupBundle
    fiber_sizes: tuple[int, ...]
    action: tuple  # per point: tuple of |G_x| rows, each a tuple over the fiber
    cover: tuple[tuple[int, ...], ...] = None
    atlas: tuple[tuple[int, ...], ...] = None  # atlas[i][x] = s_i(x), -1 off U_i

    @property
    def base(self) -> int:
        return self.bundle.base

    def act(self, x: int, g: int, p: int) -> int:
        return self.action[x][g][p]

    def divide(self, x: int, p: int, q: int) -> int:
        """The unique g with g·q = p at point x."""
        col = [self.action[x][g][q] for g in self.bundle.fiber(x).elements()]
        return col.index(p)


def _check_shape(t: Torsor):
    if len(t.fiber_sizes) != t.base or len(t.action) != t.base:
        raise StructuralError("torsor tables do not match base size")
    for x in range(t.base):
        g = t.bundle.fiber(x)
        if len(t.action[x]) != g.order:
            raise StructuralError(f"action at point {x} has wrong group dimension")
        if any(len(row) != t.fiber_sizes[x] for row in t.action[x]):
            raise StructuralError(f"action at point {x} has wrong fiber dimension")
    if t.cover is not None:
        for i, u in enumerate(t.cover):
            if any(not (0 <= x < t.base) for x in u):
                raise StructuralError(f"cover element {i} out of range")
    if t.atlas is not None:
        if t.cover is None or len(t.atlas) != len(t.cover):
            raise StructuralError("atlas without matching cover")
        for i, sec in enumerate(t.atlas):
            for x in range(t.base):
                inside = x in t.cover[i]
                if inside and not (0 <= sec[x] < t.fiber_sizes[x]):
                    raise StructuralError(f"atlas section {i} invalid at point {x}")


def is_torsor(t: Torsor) -> bool:
    """Per-point freeness and transitivity; empty fibers fail."""
    _check_shape(t)
    for x in range(t.base):
        g = t.bundle.fiber(x)
        n = t.fiber_sizes[x]
        if n == 0 or n != g.order:
            return False
        for p in range(n):
            orbit = [t.action[x][a][p] for a in g.elements()]
            if len(set(orbit)) != n:
                return False
        if t.action[x][0] != tuple(range(n)):
            return False
    return True


def trivial_torsor(cover, g: FiniteGroup, base: int = None) -> Torsor:
    """G acting on itself by left translation at every point."""
    cover = tuple(tuple(sorted(u)) for u in cover)
    if base is None:
        base = max((x for u in cover for x in u), default=-1) + 1
    bundle = constant_bundle(base, g)
    action = tuple(g.mul for _ in range(base))
    atlas = tuple(tuple(0 if x in set(u) else -1 for x in range(base)) for u in cover)
    return Torsor(bundle, (g.order,) * base, action, cover, atlas)


def glue_torsor(nerve: Nerve, c: Cochain1, g: FiniteGroup, base=None) -> Torsor:
    """Build the covered torsor of a 1-cocycle.

    base is an optional (point_count, subsets) cover realizing the nerve;
    the default is the canonical one-point-per-face realization.
    """
    if not verify_cocycle1(c):
        raise StructuralError("cochain does not satisfy the 1-cocycle equation")
    if base is None:
        point_count, subsets = cover_realization(nerve)
    else:
        point_count, subsets = base
        if nerve_from_cover(point_count, subsets) != nerve:
            raise StructuralError("given cover does not realize the nerve")
    cover = tuple(tuple(sorted(u)) for u in subsets)
    home = [min(i for i, u in enumerate(cover) if x in set(u))
            for x in range(point_count)]
    bundle = constant_bundle(point_count, g)
    action = tuple(g.mul for _ in range(point_count))
    atlas = []
    for i, u in enumerate(cover):
        inside = set(u)
        sec = tuple(g.inv[c.value(home[x], i)] if x in inside else -1
                    for x in range(point_count))
        atlas.append(sec)
    return Torsor(bundle, (g.order,) * point_count, action, cover, tuple(atlas))


def canonical_sections(t: Torsor):
    if t.atlas is None:
        raise StructuralError("torsor carries no atlas")
    return t.atlas


def cocycle_from_sections(t: Torsor, sections=None) -> Cochain1:
    """Transition cochain of locally constant sections: s_i = g_ij s_j.

    sections[i][x] is a fiber point for x in cover[i] (-1 elsewhere);
    defaults to the torsor's own atlas.  Raises if a transition fails to be
    constant on an overlap (the sections do not trivialize over the cover).
    """
    if not is_torsor(t):
        raise StructuralError("not a torsor")
    if t.cover is None:
        raise StructuralError("torsor carries no cover")
    sections = t.atlas if sections is None else tuple(tuple(s) for s in sections)
    if sections is None:
        raise StructuralError("no sections given and no atlas present")
    g0 = t.bundle.fiber(0)
    if any(not groups_equal(t.bundle.fiber(x), g0) for x in range(t.base)):
        raise StructuralError("cocycle extraction needs a constant group bundle")
    nerve = nerve_from_cover(t.base, [set(u) for u in t.cover])
    assignment = {}
    for (i, j) in nerve.otuples(2):
        overlap = sorted(set(t.cover[i]) & set(t.cover[j]))
        vals = {t.divide(x, sections[i][x], sections[j][x]) for x in overlap}
        if len(vals) != 1:
            raise StructuralError(f"sections are not locally constant on U_{i}{j}")
        assignment[(i, j)] = vals.pop()
    return make_cochain1(nerve, g0, assignment)


def global_trivialization(t: Torsor):
    """A family (γ_i) gluing the atlas into one global section, or None."""
    if t.atlas is None:
        raise StructuralError("torsor carries no atlas")
    g = t.bundle.fiber(0)
    covers = [set(u) for u in t.cover]
    for gamma in itertools.product(g.elements(), repeat=len(t.cover)):
        good = True
        for i, j in itertools.combinations(range(len(t.cover)), 2):
            for x in covers[i] & covers[j]:
                if t.act(x, gamma[i], t.atlas[i][x]) != t.act(x, gamma[j], t.atlas[j][x]):
                    good = False
                    break
            if not good:
                break
        if good:
            return gamma
    return None


def torsors_isomorphic(t1: Torsor, t2: Torsor) -> bool:
    """Atlas-compatible equivariant isomorphism, by exhaustive search.

    Equivalent to the transition cocycles being cohomologous; the witness is
    the family of chart constants.
    """
    if t1.cover != t2.cover or not groups_equal(t1.bundle.fiber(0), t2.bundle.fiber(0)):
        return False
    return cohomologous1(cocycle_from_sections(t1), cocycle_from_sections(t2))


# ---------------------------------------------------------------------------
# Bitorsors

@dataclass(frozen=True)
class Bitorsor:
    left: GroupBundle
    right: GroupBundle
    fiber_sizes: tuple[int, ...]
    act_left: tuple   # per point: |G_x| x |P_x|
    act_right: tuple  # per point: |P_x| x |H_x|
    cover: tuple[tuple[int, ...], ...] = None
    atlas: tuple[tuple[int, ...], ...] = None
    fiber_labels: tuple = None  # for quotients: per point, the orbit representatives

    @property
    def base(self) -> int:
        return self.left.base

    def lact(self, x: int, g: int, p: int) -> int:
        return self.act_left[x][g][p]

    def ract(self, x: int, p: int, h: int) -> int:
        return self.act_right[x][p][h]

    def left_torsor(self) -> Torsor:
        return Torsor(self.left, self.fiber_sizes, self.act_left,
                      self.cover, self.atlas)

    def divide_left(self, x: int, p: int, q: int) -> int:
        col = [self.act_left[x][g][q] for g in self.left.fiber(x).elements()]
        return col.index(p)


def is_bitorsor(b: Bitorsor) -> bool:
    """Commuting left and right torsor structures on the same fibers."""
    lt = b.left_torsor()
    if not is_torsor(lt):
        return False
    for x in range(b.base):
        h = b.right.fiber(x)
        n = b.fiber_sizes[x]
        if len(b.act_right[x]) != n or any(len(r) != h.order for r in b.act_right[x]):
            raise StructuralError(f"right action at point {x} has wrong shape")
        if n != h.order:
            return False
        for p in range(n):
            orbit = [b.act_right[x][p][a] for a in h.elements()]
            if len(set(orbit)) != n or b.act_right[x][p][0] != p:
                return False
        g = b.left.fiber(x)
        for gg in g.elements():
            for p in range(n):
                for hh in h.elements():
                    if b.ract(x, b.lact(x, gg, p), hh) != b.lact(x, gg, b.ract(x, p, hh)):
                        return False
    return True


def trivial_bitorsor(cover, g: FiniteGroup, base: int = None) -> Bitorsor:
    t = trivial_torsor(cover, g, base)
    act_right = tuple(tuple(tuple(g.mul[p][h] for h in g.elements())
                            for p in g.elements()) for _ in range(t.base))
    return Bitorsor(t.bundle, t.bundle, t.fiber_sizes, t.action, act_right,
                    t.cover, t.atlas)


def glue_bitorsor(nerve: Nerve, c: Cochain1, u_homs, g: FiniteGroup,
                  base=None) -> Bitorsor:
    """Glue a (G,G)-bitorsor from a pair (g_ij, u_i) with u_i = i_(g_ij) u_j.

    u_homs[i] is the local identification H -> G over U_i as a map table.
    """
    t = glue_torsor(nerve, c, g, base)
    home = [min(i for i, uu in enumerate(t.cover) if x in set(uu))
            for x in range(t.base)]
    for (i, j) in nerve.otuples(2):
        gij = c.value(i, j)
        expect = tuple(g.conj(gij, u_homs[j][a]) for a in g.elements())
        if tuple(u_homs[i]) != expect:
            raise StructuralError("u_i != i_(g_ij) u_j: not a bitorsor cocycle pair")
    act_right = tuple(tuple(tuple(g.mul[p][u_homs[home[x]][h]] for h in g.elements())
                            for p in g.elements()) for x in range(t.base))
    return Bitorsor(t.bundle, t.bundle, t.fiber_sizes, t.action, act_right,
                    t.cover, t.atlas)


def bitorsor_cocycle_pair(b: Bitorsor, sections=None):
    """Extract (g_ij, u_i): the left cochain plus local identifications.

    Returns (Cochain1, tuple of GroupHom H_x->G) and checks the transition
    law u_i = i_(g_ij) u_j.
    """
    if not is_bitorsor(b):
        raise StructuralError("not a bitorsor")
    sections = b.atlas if sections is None else tuple(tuple(s) for s in sections)
    if sections is None:
        raise StructuralError("no sections given and no atlas present")
    lt = Torsor(b.left, b.fiber_sizes, b.act_left, b.cover, b.atlas)
    c = cocycle_from_sections(lt, sections)
    g0, h0 = b.left.fiber(0), b.right.fiber(0)
    u_homs = []
    for i, uset in enumerate(b.cover):
        tables = set()
        for x in sorted(set(uset)):
            s = sections[i][x]
            tables.add(tuple(lt.divide(x, b.ract(x, s, h), s) for h in h0.elements()))
        if len(tables) != 1:
            raise StructuralError(f"identification u_{i} is not constant on U_{i}")
        hom = GroupHom(h0, g0, tables.pop())
        if not verify_hom(hom) or not hom.is_bijective():
            raise StructuralError(f"u_{i} is not an isomorphism")
        u_homs.append(hom)
    for (i, j) in c.nerve.otuples(2):
        gij = c.value(i, j)
        if any(u_homs[i].map[a] != g0.conj(gij, u_homs[j].map[a]) for a in h0.elements()):
            raise StructuralError("extracted pair violates u_i = i_(g_ij) u_j")
    return c, tuple(u_homs)


def opposite(b: Bitorsor) -> Bitorsor:
    """Same fibers; actions swapped through inverses."""
    act_left = []
    act_right = []
    for x in range(b.base):
        h = b.right.fiber(x)
        g = b.left.fiber(x)
        n = b.fiber_sizes[x]
        act_left.append(tuple(tuple(b.ract(x, p, h.inv[hh]) for p in range(n))
                              for hh in h.elements()))
        act_right.append(tuple(tuple(b.lact(x, g.inv[gg], p) for gg in g.elements())
                               for p in range(n)))
    return Bitorsor(b.right, b.left, b.fiber_sizes, tuple(act_left),
                    tuple(act_right), b.cover, b.atlas)


def _orbit_rep(b_left_tables, pair, middle: FiniteGroup, ract, lact):
    """Minimal representative of (a, b) under (a·h, b) ~ (a, h·b)."""
    a, c = pair
    return min((ract(a, h), lact(middle.inv[h], c)) for h in middle.elements())


def contracted_product(p: Bitorsor, q: Bitorsor) -> Bitorsor:
    """P ∧^H Q: quotient of the fiberwise product by the middle action."""
    if p.base != q.base:
        raise StructuralError("bitorsors live over different bases")
    for x in range(p.base):
        if not groups_equal(p.right.fiber(x), q.left.fiber(x)):
            raise StructuralError("middle groups do not match")
    if p.cover is not None and q.cover is not None and p.cover != q.cover:
        raise StructuralError("bitorsors carry different covers")
    fibers = []
    sizes = []
    act_left = []
    act_right = []
    atlas = [] if (p.atlas is not None and q.atlas is not None) else None
    for x in range(p.base):
        h = p.right.fiber(x)
        g = p.left.fiber(x)
        k = q.right.fiber(x)

        def rep(a, c):
            return min((p.ract(x, a, hh), q.lact(x, h.inv[hh], c))
                       for hh in h.elements())

        reps = sorted({rep(a, c) for a in range(p.fiber_sizes[x])
                       for c in range(q.fiber_sizes[x])})
        pos = {r: idx for idx, r in enumerate(reps)}
        sizes.append(len(reps))
        fibers.append(reps)
        act_left.append(tuple(tuple(pos[rep(p.lact(x, gg, r[0]), r[1])] for r in reps)
                              for gg in g.elements()))
        act_right.append(tuple(tuple(pos[rep(r[0], q.ract(x, r[1], kk))]
                                     for kk in k.elements()) for r in reps))
    if atlas is not None:
        for i in range(len(p.cover)):
            sec = []
            for x in range(p.base):
                if p.atlas[i][x] < 0:
                    sec.append(-1)
                else:
                    h = p.right.fiber(x)
                    r = min((p.ract(x, p.atlas[i][x], hh),
                             q.lact(x, h.inv[hh], q.atlas[i][x]))
                            for hh in h.elements())
                    sec.append(fibers[x].index(r))
            atlas.append(tuple(sec))
        atlas = tuple(atlas)
    return Bitorsor(p.left, q.right, tuple(sizes), tuple(act_left),
                    tuple(act_right), p.cover, atlas,
                    tuple(tuple(f) for f in fibers))


def morita_apply(q: Bitorsor, m: Torsor) -> Torsor:
    """Φ_Q(M) = Q ∧^H M, a left G-torsor."""
    if q.base != m.base:
        raise StructuralError("base mismatch")
    for x in range(q.base):
        if not groups_equal(q.right.fiber(x), m.bundle.fiber(x)):
            raise StructuralError("middle groups do not match")
    sizes = []
    act_left = []
    fibers = []
    for x in range(q.base):
        h = q.right.fiber(x)
        g = q.left.fiber(x)

        def rep(a, c):
            return min((q.ract(x, a, hh), m.act(x, h.inv[hh], c))
                       for hh in h.elements())

        reps = sorted({rep(a, c) for a in range(q.fiber_sizes[x])
                       for c in range(m.fiber_sizes[x])})
        pos = {r: idx for idx, r in enumerate(reps)}
        sizes.append(len(reps))
        fibers.append(reps)
        act_left.append(tuple(tuple(pos[rep(q.lact(x, gg, r[0]), r[1])] for r in reps)
                              for gg in g.elements()))
    atlas = None
    if q.atlas is not None and m.atlas is not None and q.cover == m.cover:
        atlas = []
        for i in range(len(q.cover)):
            sec = []
            for x in range(q.base):
                if q.atlas[i][x] < 0:
                    sec.append(-1)
                else:
                    h = q.right.fiber(x)
                    r = min((q.ract(x, q.atlas[i][x], hh),
                             m.act(x, h.inv[hh], m.atlas[i][x]))
                            for hh in h.elements())
                    sec.append(fibers[x].index(r))
            atlas.append(tuple(sec))
        atlas = tuple(atlas)
    return Torsor(q.left, tuple(sizes), tuple(act_left), q.cover, atlas)


# ---------------------------------------------------------------------------
# Gauge groups and twists

def gauge_group(t: Torsor) -> GroupBundle:
    """Per-point group of equivariant automorphisms of the fiber."""
    if not is_torsor(t):
        raise StructuralError("not a torsor")
    groups = []
    for x in range(t.base):
        g = t.bundle.fiber(x)
        n = t.fiber_sizes[x]
        perms = []
        for image0 in range(n):
            u = [0] * n
            for a in g.elements():
                u[t.action[x][a][0]] = t.action[x][a][image0]
            perms.append(tuple(u))
        perms.sort()
        pos = {u: i for i, u in enumerate(perms)}
        mul = tuple(tuple(pos[tuple(u[w] for w in v)] for v in perms) for u in perms)
        groups.append(make_group(f"Gauge({x})", mul))
    return GroupBundle(t.base, tuple(groups))


def gauge_permutations(t: Torsor, x: int) -> list[tuple[int, ...]]:
    """The sorted permutation tables underlying gauge_group at point x."""
    g = t.bundle.fiber(x)
    n = t.fiber_sizes[x]
    perms = []
    for image0 in range(n):
        u = [0] * n
        for a in g.elements():
            u[t.action[x][a][0]] = t.action[x][a][image0]
        perms.append(tuple(u))
    return sorted(perms)


def adjoint_bitorsor(t: Torsor) -> Bitorsor:
    """t as a (G, P^ad)-bitorsor: p·u := u^{-1}(p)."""
    bundle = gauge_group(t)
    act_right = []
    for x in range(t.base):
        perms = gauge_permutations(t, x)
        invs = []
        for u in perms:
            iu = [0] * len(u)
            for i, v in enumerate(u):
                iu[v] = i
            invs.append(iu)
        act_right.append(tuple(tuple(invs[ui][p] for ui in range(len(perms)))
                               for p in range(t.fiber_sizes[x])))
    return Bitorsor(t.bundle, bundle, t.fiber_sizes, t.action, tuple(act_right),
                    t.cover, t.atlas)


@dataclass(frozen=True)
class TwistedSpace:
    base: int
    model_size: int
    fibers: tuple            # per point: sorted orbit representatives (y, q)
    charts: tuple            # charts[i][x]: tuple mapping fiber index -> model elt, or None
    cover: tuple


def twist(e_right, p: Torsor) -> TwistedSpace:
    """E ∧^G P for a right G-set E with constant model fiber.

    e_right is the |E| x |G| right action table.  Charts send [y, q] with
    q = γ·s_i(x) to y·γ.
    """
    m = len(e_right)
    g = p.bundle.fiber(0)
    if any(len(row) != g.order for row in e_right):
        raise StructuralError("right action table has wrong shape")
    fibers = []
    charts = None
    for x in range(p.base):
        def rep(y, q):
            return min((e_right[y][gg], p.act(x, g.inv[gg], q)) for gg in g.elements())
        reps = sorted({rep(y, q) for y in range(m) for q in range(p.fiber_sizes[x])})
        fibers.append(tuple(reps))
    if p.atlas is not None:
        charts = []
        for i in range(len(p.cover)):
            chart = []
            for x in range(p.base):
                if p.atlas[i][x] < 0:
                    chart.append(None)
                    continue
                s = p.atlas[i][x]
                out = []
                for (y, q) in fibers[x]:
                    gamma = p.divide(x, q, s)
                    out.append(e_right[y][gamma])
                chart.append(tuple(out))
            charts.append(tuple(chart))
        charts = tuple(charts)
    return TwistedSpace(p.base, m, tuple(fibers),
                        charts, p.cover)


def twist_group_torsor(p: Torsor) -> Torsor:
    """Twist of G (right translation) by p: a left G-torsor."""
    g = p.bundle.fiber(0)
    e_right = g.mul
    tw = twist(e_right, p)
    action = []
    for x in range(p.base):
        reps = tw.fibers[x]
        pos = {r: i for i, r in enumerate(reps)}
        def rep(y, q):
            return min((g.mul[y][gg], p.act(x, g.inv[gg], q)) for gg in g.elements())
        action.append(tuple(tuple(pos[rep(g.mul[gg][r[0]], r[1])] for r in reps)
                            for gg in g.elements()))
    atlas = None
    if tw.charts is not None:
        atlas = []
        for i in range(len(p.cover)):
            sec = []
            for x in range(p.base):
                chart = tw.charts[i][x]
                sec.append(-1 if chart is None else chart.index(0))
            atlas.append(tuple(sec))
        atlas = tuple(atlas)
    return Torsor(p.bundle, tuple(len(f) for f in tw.fibers), tuple(action),
                  p.cover, atlas)


def equivariant_aut_group(e_right, g: FiniteGroup) -> tuple[FiniteGroup, list]:
    """Automorphisms of a right G-set, as a group of permutation tables."""
    m = len(e_right)
    perms = []
    for cand in itertools.permutations(range(m)):
        if all(cand[e_right[y][a]] == e_right[cand[y]][a]
               for y in range(m) for a in g.elements()):
            perms.append(tuple(cand))
    return permutation_group("AutG(E)", perms)


def permutation_group(name: str, perms) -> tuple[FiniteGroup, list]:
    """FiniteGroup structure on a composition-closed list of permutations."""
    perms = sorted(set(tuple(u) for u in perms))
    pos = {u: i for i, u in enumerate(perms)}
    mul = tuple(tuple(pos[tuple(u[w] for w in v)] for v in perms) for u in perms)
    return make_group(name, mul), perms


def right_translation_group(g: FiniteGroup) -> tuple[FiniteGroup, list]:
    """Permutations y ↦ y·a of the underlying set of g."""
    perms = [tuple(g.mul[y][a] for y in g.elements()) for a in g.elements()]
    return permutation_group(f"R({g.name})", perms)


def frame_torsor(tw: TwistedSpace, aut: FiniteGroup, perms):
    """Isom(tw, E) glued from chart transitions: a left torsor under aut.

    aut with its permutation tables is the declared automorphism group of
    the model fiber; every chart transition must be constant on overlaps
    and land in it.
    """
    pos = {tuple(u): i for i, u in enumerate(perms)}
    nerve = nerve_from_cover(tw.base, [set(x for x in range(tw.base)
                                           if tw.charts[i][x] is not None)
                                       for i in range(len(tw.cover))])
    assignment = {}
    for (i, j) in nerve.otuples(2):
        tables = set()
        for x in range(tw.base):
            ci, cj = tw.charts[i][x], tw.charts[j][x]
            if ci is None or cj is None:
                continue
            inv_cj = [0] * tw.model_size
            for idx, v in enumerate(cj):
                inv_cj[v] = idx
            tables.add(tuple(ci[inv_cj[y]] for y in range(tw.model_size)))
        if len(tables) != 1:
            raise StructuralError("chart transition is not constant")
        table = tables.pop()
        if table not in pos:
            raise StructuralError("chart transition leaves the declared automorphisms")
        assignment[(i, j)] = pos[table]
    c = make_cochain1(nerve, aut, assignment)
    return glue_torsor(nerve, c, aut)


# ---------------------------------------------------------------------------
# Bitorsor 1-cocycles (bitorsors P_ij with gluing isomorphisms psi_ijk)

@dataclass(frozen=True)
class BitorsorCocycle:
    nerve: Nerve
    group: FiniteGroup
    bitorsors: dict      # ordered pair tuple -> Bitorsor over a point
    psi: dict            # ordered triple tuple -> tuple mapping product reps -> P_ik


def _find_rep(prod: Bitorsor, a: int, b: int, pleft: Bitorsor, pright: Bitorsor) -> int:
    """Index in prod of the class of the raw pair (a, b)."""
    h = pleft.right.fiber(0)
    r = min((pleft.ract(0, a, hh), pright.lact(0, h.inv[hh], b)) for hh in h.elements())
    return prod.fiber_labels[0].index(r)


def verify_bitorsor_cocycle(bc: BitorsorCocycle) -> bool:
    """Structure plus the coherence square on ordered quadruple faces."""
    nerve, g = bc.nerve, bc.group
    for t in nerve.otuples(2):
        if t not in bc.bitorsors:
            raise StructuralError(f"missing bitorsor for pair {t}")
        if not is_bitorsor(bc.bitorsors[t]):
            return False
    psis = {}
    for t in nerve.otuples(3):
        if t not in bc.psi:
            raise StructuralError(f"missing psi for triple {t}")
        i, j, k = t
        src = contracted_product(bc.bitorsors[(i, j)], bc.bitorsors[(j, k)])
        tgt = bc.bitorsors[(i, k)]
        table = bc.psi[t]
        if len(table) != src.fiber_sizes[0]:
            raise StructuralError(f"psi{t} has wrong length")
        if sorted(table) != list(range(tgt.fiber_sizes[0])):
            return False
        for gg in g.elements():
            for r in range(src.fiber_sizes[0]):
                if table[src.lact(0, gg, r)] != tgt.lact(0, gg, table[r]):
                    return False
                if table[src.ract(0, r, gg)] != tgt.ract(0, table[r], gg):
                    return False
        psis[t] = (src, table)
    for (i, j, k, l) in nerve.otuples(4):
        pij, pjk, pkl = bc.bitorsors[(i, j)], bc.bitorsors[(j, k)], bc.bitorsors[(k, l)]
        src_ijk, psi_ijk = psis[(i, j, k)]
        src_ikl, psi_ikl = psis[(i, k, l)]
        src_jkl, psi_jkl = psis[(j, k, l)]
        src_ijl, psi_ijl = psis[(i, j, l)]
        for a in range(pij.fiber_sizes[0]):
            for b in range(pjk.fiber_sizes[0]):
                u = psi_ijk[_find_rep(src_ijk, a, b, pij, pjk)]
                for c in range(pkl.fiber_sizes[0]):
                    left = psi_ikl[_find_rep(src_ikl, u, c, bc.bitorsors[(i, k)], pkl)]
                    v = psi_jkl[_find_rep(src_jkl, b, c, pjk, pkl)]
                    right = psi_ijl[_find_rep(src_ijl, a, v, pij, bc.bitorsors[(j, l)])]
                    if left != right:
                        return False
    return True


def gerbe_pair_bitorsor_cocycle(pair) -> BitorsorCocycle:
    """The dictionary: P_ij = G twisted by lam_ij, psi [a,b] = a·lam_ij(b)·g_ijk."""
    nerve, g, aut = pair.nerve, pair.group, pair.aut
    cover = ((0,),)

    def twisted(lam_idx) -> Bitorsor:
        t = trivial_torsor(cover, g, base=1)
        lam = aut.elements[lam_idx].map
        act_right = (tuple(tuple(g.mul[p][lam[h]] for h in g.elements())
                           for p in g.elements()),)
        return Bitorsor(t.bundle, t.bundle, t.fiber_sizes, t.action, act_right,
                        t.cover, t.atlas)

    bitorsors = {t: twisted(pair.lam_at(*t)) for t in nerve.otuples(2)}
    psi = {}
    for (i, j, k) in nerve.otuples(3):
        prod = contracted_product(bitorsors[(i, j)], bitorsors[(j, k)])
        lam_ij = aut.elements[pair.lam_at(i, j)].map
        gijk = pair.g_at(i, j, k)
        psi[(i, j, k)] = tuple(g.mul[g.mul[a][lam_ij[b]]][gijk]
                               for (a, b) in prod.fiber_labels[0])
    return BitorsorCocycle(nerve, g, bitorsors, psi)
