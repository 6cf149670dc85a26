"""Schreier classification of group extensions 1 -> G -> H -> K -> 1.

An extension is presented by a normalized pair (lam: K -> Aut(G),
g: K x K -> G) satisfying the twisted cocycle equations; equivalence fixes
G and K pointwise and twists by a map theta: K -> G.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapacityError, StructuralError
from .grp import (AutGroup, FiniteGroup, GroupHom, automorphisms, isomorphic,
                  make_group, verify_group, verify_hom)


@dataclass(frozen=True)
class ExtensionCocycle:
    g: FiniteGroup
    k: FiniteGroup
    lam: tuple[int, ...]            # automorphism index per element of k
    gmap: tuple[tuple[int, ...], ...]  # gmap[a][b] in g

    def key(self):
        return (self.lam, self.gmap)


@dataclass(frozen=True)
class ExtensionWitness:
    h: FiniteGroup
    embed: GroupHom    # g -> h
    project: GroupHom  # h -> k


def _aut(c: ExtensionCocycle) -> AutGroup:
    return automorphisms(c.g)


def verify_extension_cocycle(c: ExtensionCocycle, aut: AutGroup = None) -> bool:
    """Normalization plus the two twisted cocycle equations."""
    g, k = c.g, c.k
    if len(c.lam) != k.order or len(c.gmap) != k.order or \
            any(len(r) != k.order for r in c.gmap):
        raise StructuralError("extension cocycle tables have wrong shape")
    aut = aut or _aut(c)
    if c.lam[0] != 0:
        return False
    for a in k.elements():
        if c.gmap[0][a] != 0 or c.gmap[a][0] != 0:
            return False
    from .grp import inner_conjugation
    inner = inner_conjugation(g).map
    amul = aut.group.mul
    for a in k.elements():
        for b in k.elements():
            if amul[c.lam[a]][c.lam[b]] != amul[inner[c.gmap[a][b]]][c.lam[k.mul[a][b]]]:
                return False
            for cc in k.elements():
                lhs = g.mul[aut.apply(c.lam[a], c.gmap[b][cc])][c.gmap[a][k.mul[b][cc]]]
                rhs = g.mul[c.gmap[a][b]][c.gmap[k.mul[a][b]][cc]]
                if lhs != rhs:
                    return False
    return True


def build_extension(c: ExtensionCocycle, aut: AutGroup = None) -> ExtensionWitness:
    """H on the carrier G x K: (g1,k1)(g2,k2) = (g1·lam(k1)(g2)·g(k1,k2), k1k2)."""
    aut = aut or _aut(c)
    if not verify_extension_cocycle(c, aut):
        raise StructuralError("not an extension cocycle")
    g, k = c.g, c.k
    order = g.order * k.order

    def enc(x, a):
        return x * k.order + a

    mul = [[0] * order for _ in range(order)]
    for x1 in g.elements():
        for a1 in k.elements():
            for x2 in g.elements():
                for a2 in k.elements():
                    val = g.mul[g.mul[x1][aut.apply(c.lam[a1], x2)]][c.gmap[a1][a2]]
                    mul[enc(x1, a1)][enc(x2, a2)] = enc(val, k.mul[a1][a2])
    h = make_group(f"{g.name}.{k.name}", mul)
    if not verify_group(h):
        raise StructuralError("built extension table is not a group")
    embed = GroupHom(g, h, tuple(enc(x, 0) for x in g.elements()))
    project = GroupHom(h, k, tuple(a % k.order for a in range(order)))
    return ExtensionWitness(h, embed, project)


def verify_witness(w: ExtensionWitness) -> bool:
    if not (verify_hom(w.embed) and verify_hom(w.project)):
        return False
    if not w.embed.is_bijective() and len(set(w.embed.map)) != w.embed.source.order:
        return False
    image = set(w.embed.map)
    if len(image) != w.embed.source.order:
        return False
    kernel = {x for x in w.h.elements() if w.project.map[x] == 0}
    if kernel != image:
        return False
    return set(w.project.map) == set(w.project.target.elements())


def cocycle_from_extension(w: ExtensionWitness, section) -> ExtensionCocycle:
    """Extract (lam, g) from a set-theoretic section of project with s(e) = e."""
    g, k, h = w.embed.source, w.project.target, w.h
    section = tuple(section)
    if len(section) != k.order or section[0] != 0:
        raise StructuralError("section must have length |K| and fix the identity")
    for a in k.elements():
        if w.project.map[section[a]] != a:
            raise StructuralError(f"section value at {a} does not project correctly")
    embed_pos = {v: x for x, v in enumerate(w.embed.map)}
    aut = automorphisms(g)

    def unembed(v: int) -> int:
        if v not in embed_pos:
            raise StructuralError("element outside the embedded kernel")
        return embed_pos[v]

    lam = []
    for a in k.elements():
        s = section[a]
        table = tuple(unembed(h.conj(s, w.embed.map[x])) for x in g.elements())
        try:
            lam.append(aut.index_of(table))
        except KeyError:
            raise StructuralError("conjugation by section is not an automorphism") from None
    gmap = tuple(tuple(unembed(h.mul[h.mul[section[a]][section[b]]]
                               [h.inv[section[k.mul[a][b]]]])
                       for b in k.elements()) for a in k.elements())
    return ExtensionCocycle(g, k, tuple(lam), gmap)


def _coboundary(c: ExtensionCocycle, theta, aut: AutGroup) -> ExtensionCocycle:
    """Twist by theta: K -> G with theta(e) = e (Schreier equivalence)."""
    g, k = c.g, c.k
    from .grp import inner_conjugation
    inner = inner_conjugation(g).map
    amul = aut.group.mul
    lam = tuple(amul[inner[theta[a]]][c.lam[a]] for a in k.elements())
    gmap = tuple(tuple(
        g.mul[g.mul[g.mul[theta[a]][aut.apply(c.lam[a], theta[b])]][c.gmap[a][b]]]
             [g.inv[theta[k.mul[a][b]]]]
        for b in k.elements()) for a in k.elements())
    return ExtensionCocycle(g, k, lam, gmap)


def extensions_equivalent(c1: ExtensionCocycle, c2: ExtensionCocycle) -> bool:
    if c1.g != c2.g or c1.k != c2.k:
        raise StructuralError("cocycles have different G or K")
    aut = _aut(c1)
    g, k = c1.g, c1.k
    for theta in itertools.product(g.elements(), repeat=k.order - 1):
        full = (0,) + theta
        if _coboundary(c1, full, aut).key() == c2.key():
            return True
    return False


def classify_extensions(g: FiniteGroup, k: FiniteGroup, budget: int = 10_000_000):
    """All extension classes of K by G, with their built groups.

    Returns (representatives, witnesses, iso_group_count): the class count is
    len(representatives); iso_group_count counts the distinct isomorphism
    types among the built middle groups.
    """
    aut = automorphisms(g)
    free = k.order - 1
    needed = (aut.group.order ** free) * (g.order ** (free * free))
    if needed > budget:
        raise CapacityError(needed, budget, "extension cocycle enumeration")
    nonid = [a for a in k.elements() if a != 0]
    cocycles = []
    for lam_tail in itertools.product(range(aut.group.order), repeat=free):
        lam = (0,) + lam_tail
        for g_flat in itertools.product(g.elements(), repeat=free * free):
            gmap = [[0] * k.order for _ in range(k.order)]
            pos = 0
            for a in nonid:
                for b in nonid:
                    gmap[a][b] = g_flat[pos]
                    pos += 1
            c = ExtensionCocycle(g, k, lam, tuple(tuple(r) for r in gmap))
            if verify_extension_cocycle(c, aut):
                cocycles.append(c.key())
    index = {key: i for i, key in enumerate(cocycles)}
    seen = [False] * len(cocycles)
    classes = []
    for start, key in enumerate(cocycles):
        if seen[start]:
            continue
        orbit = []
        stack = [key]
        seen[start] = True
        while stack:
            cur = stack.pop()
            orbit.append(cur)
            cur_c = ExtensionCocycle(g, k, cur[0], cur[1])
            for theta in itertools.product(g.elements(), repeat=free):
                nxt = _coboundary(cur_c, (0,) + theta, aut).key()
                j = index[nxt]
                if not seen[j]:
                    seen[j] = True
                    stack.append(nxt)
        classes.append(min(orbit))
    classes.sort()
    reps = [ExtensionCocycle(g, k, key[0], key[1]) for key in classes]
    witnesses = [build_extension(c, aut) for c in reps]
    iso_types: list[FiniteGroup] = []
    for w in witnesses:
        if not any(isomorphic(w.h, t) for t in iso_types):
            iso_types.append(w.h)
    return reps, witnesses, len(iso_types)
