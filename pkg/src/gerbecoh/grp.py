"""Exact finite group arithmetic on dense multiplication tables.

Elements of a group of order n are the indices 0..n-1, with the identity
pinned at 0.  All tables are row-major tuples, so every value in this
module is immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import StructuralError


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def invert(self, a: int) -> int:
        return self.inv[a]

    def elements(self) -> range:
        return range(self.order)

    def conj(self, a: int, b: int) -> int:
        """a b a^-1."""
        return self.mul[self.mul[a][b]][self.inv[a]]

    def prod(self, elts) -> int:
        out = 0
        for x in elts:
            out = self.mul[out][x]
        return out

    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(self.order))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul[x][a]
            k += 1
        return k

    def center(self) -> tuple[int, ...]:
        m = self.mul
        return tuple(a for a in range(self.order)
                     if all(m[a][b] == m[b][a] for b in range(self.order)))

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_bijective(self) -> bool:
        return len(set(self.map)) == self.source.order == self.target.order

    def then(self, other: GroupHom) -> GroupHom:
        """self followed by other (other ∘ self)."""
        if other.source is not self.target and other.source != self.target:
            raise StructuralError("composition target/source mismatch")
        return GroupHom(self.source, other.target, tuple(other.map[x] for x in self.map))


def verify_hom(h: GroupHom) -> bool:
    """True iff h.map is a homomorphism sending identity to identity."""
    if len(h.map) != h.source.order:
        raise StructuralError("hom table length does not match source order")
    if any(not (0 <= x < h.target.order) for x in h.map):
        raise StructuralError("hom table entry out of range")
    if h.map[0] != 0:
        return False
    ms, mt, f = h.source.mul, h.target.mul, h.map
    return all(f[ms[a][b]] == mt[f[a]][f[b]]
               for a in range(h.source.order) for b in range(h.source.order))


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, tuple(range(g.order)))


def verify_group(g: FiniteGroup) -> bool:
    """Check all FiniteGroup invariants; raise StructuralError on bad shapes."""
    n = g.order
    if n <= 0:
        raise StructuralError("order must be positive")
    if len(g.mul) != n or any(len(row) != n for row in g.mul):
        raise StructuralError(f"mul table is not {n}x{n}")
    if len(g.inv) != n:
        raise StructuralError("inv table has wrong length")
    if any(not (0 <= x < n) for row in g.mul for x in row):
        raise StructuralError("mul table entry out of range")
    if any(not (0 <= x < n) for x in g.inv):
        raise StructuralError("inv table entry out of range")
    m = g.mul
    full = set(range(n))
    for a in range(n):
        if m[0][a] != a or m[a][0] != a:
            return False
        if m[a][g.inv[a]] != 0:
            return False
        if set(m[a]) != full or {m[b][a] for b in range(n)} != full:
            return False
    return all(m[m[a][b]][c] == m[a][m[b][c]]
               for a in range(n) for b in range(n) for c in range(n))


def group_diagnostic(g: FiniteGroup):
    """None if g is a group, else a line naming the first failing axiom."""
    n = g.order
    m = g.mul
    full = set(range(n))
    for a in range(n):
        if m[0][a] != a or m[a][0] != a:
            return f"identity fails at element {a}"
        if m[a][g.inv[a]] != 0:
            return f"inverse fails at element {a}"
        if set(m[a]) != full:
            return f"row {a} is not a permutation"
        if {m[b][a] for b in range(n)} != full:
            return f"column {a} is not a permutation"
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if m[m[a][b]][c] != m[a][m[b][c]]:
                    return f"associativity fails at triple ({a}, {b}, {c})"
    return None


def make_group(name: str, mul) -> FiniteGroup:
    """Build a FiniteGroup from a mul table, deriving the inverse table."""
    mul = tuple(tuple(row) for row in mul)
    n = len(mul)
    if any(len(row) != n for row in mul):
        raise StructuralError("mul table is not square")
    inv = []
    for a in range(n):
        try:
            inv.append(mul[a].index(0))
        except ValueError:
            raise StructuralError(f"row {a} has no inverse entry") from None
    return FiniteGroup(name, n, mul, tuple(inv))


def cyclic(n: int) -> FiniteGroup:
    mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    return FiniteGroup(f"Z{n}", n, mul, inv)


def trivial_group() -> FiniteGroup:
    return FiniteGroup("1", 1, ((0,),), (0,))


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    n = a.order * b.order
    def enc(x, y):
        return x * b.order + y
    mul = [[0] * n for _ in range(n)]
    inv = [0] * n
    for x1 in a.elements():
        for y1 in b.elements():
            inv[enc(x1, y1)] = enc(a.inv[x1], b.inv[y1])
            for x2 in a.elements():
                for y2 in b.elements():
                    mul[enc(x1, y1)][enc(x2, y2)] = enc(a.mul[x1][x2], b.mul[y1][y2])
    return FiniteGroup(f"{a.name}x{b.name}", n,
                       tuple(tuple(r) for r in mul), tuple(inv))


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n letters; elements are permutations in lex order."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    def compose(p, q):  # apply q, then p
        return tuple(p[q[i]] for i in range(n))
    mul = tuple(tuple(index[compose(p, q)] for q in perms) for p in perms)
    inv = []
    for p in perms:
        ip = [0] * n
        for i, x in enumerate(p):
            ip[x] = i
        inv.append(index[tuple(ip)])
    return FiniteGroup(f"S{n}", len(perms), mul, tuple(inv))


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: elements r^a s^e encoded as a + n*e."""
    order = 2 * n
    def enc(a, e):
        return a + n * e
    mul = [[0] * order for _ in range(order)]
    for a in range(n):
        for e in range(2):
            for b in range(n):
                for f in range(2):
                    # (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e+f)
                    c = (a + (b if e == 0 else -b)) % n
                    mul[enc(a, e)][enc(b, f)] = enc(c, (e + f) % 2)
    return make_group(f"D{n}", mul)


def minimal_generating_set(g: FiniteGroup) -> tuple[int, ...]:
    """Greedy deterministic generating set (empty for the trivial group)."""
    gens: list[int] = []
    closure = {0}
    while len(closure) < g.order:
        for x in g.elements():
            if x not in closure:
                gens.append(x)
                closure = _generated(g, gens)
                break
    return tuple(gens)


def _generated(g: FiniteGroup, gens) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        a = frontier.pop()
        for x in gens:
            for b in (g.mul[a][x], g.mul[x][a]):
                if b not in seen:
                    seen.add(b)
                    frontier.append(b)
    return seen


def _extend_hom(g: FiniteGroup, h: FiniteGroup, gens, images):
    """Extend gens→images to a homomorphism table, or None on conflict.

    Walks the subgroup generated by gens, multiplying image words in h
    alongside; any disagreement between two routes to the same element
    kills the candidate.
    """
    table: dict[int, int] = {0: 0}
    frontier = [0]
    while frontier:
        a = frontier.pop()
        fa = table[a]
        for x, fx in zip(gens, images):
            b = g.mul[a][x]
            fb = h.mul[fa][fx]
            known = table.get(b)
            if known is None:
                table[b] = fb
                frontier.append(b)
            elif known != fb:
                return None
    if len(table) != g.order:
        return None  # gens do not generate g
    out = [table[a] for a in range(g.order)]
    # the walk only checks products against generators; confirm fully
    for a in range(g.order):
        for b in range(g.order):
            if out[g.mul[a][b]] != h.mul[out[a]][out[b]]:
                return None
    return tuple(out)


def _isomorphism_images(g: FiniteGroup, h: FiniteGroup):
    """Yield all bijective homomorphism tables g → h, by generator backtracking."""
    if g.order != h.order:
        return
    gens = minimal_generating_set(g)
    if not gens:
        yield (0,)
        return
    orders_h: dict[int, list[int]] = {}
    for x in h.elements():
        orders_h.setdefault(h.element_order(x), []).append(x)
    candidates = [orders_h.get(g.element_order(x), []) for x in gens]
    for images in itertools.product(*candidates):
        table = _extend_hom(g, h, gens, images)
        if table is not None and len(set(table)) == g.order:
            yield table


@dataclass(frozen=True)
class AutGroup:
    base: FiniteGroup
    elements: tuple[GroupHom, ...]
    group: FiniteGroup
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def index_of(self, table: tuple[int, ...]) -> int:
        return self._index[table]

    def apply(self, i: int, x: int) -> int:
        return self.elements[i].map[x]

    def compose(self, i: int, j: int) -> int:
        """Index of elements[i] ∘ elements[j]."""
        return self.group.mul[i][j]

    def invert(self, i: int) -> int:
        return self.group.inv[i]


def automorphisms(g: FiniteGroup) -> AutGroup:
    """All automorphisms of g, lexicographically ordered by map table.

    Identity lands at index 0: every automorphism fixes 0, and an easy
    induction shows the identity table is the lexicographic minimum.
    """
    tables = sorted(_isomorphism_images(g, g))
    index = {t: i for i, t in enumerate(tables)}
    n = len(tables)
    mul = tuple(tuple(index[tuple(f[x] for x in t2)] for t2 in tables) for f in tables)
    aut_grp = make_group(f"Aut({g.name})", mul)
    homs = tuple(GroupHom(g, g, t) for t in tables)
    out = AutGroup(g, homs, aut_grp)
    object.__setattr__(out, "_index", index)
    return out


def inner_conjugation(g: FiniteGroup) -> GroupHom:
    """The map x ↦ (γ ↦ x γ x^-1), valued in automorphisms(g).group."""
    aut = automorphisms(g)
    table = tuple(aut.index_of(tuple(g.conj(x, c) for c in g.elements()))
                  for x in g.elements())
    return GroupHom(g, aut.group, table)


def semidirect_product(n: FiniteGroup, h: FiniteGroup, act: GroupHom) -> FiniteGroup:
    """n ⋊ h for act: h → automorphisms(n).group; pairs (a, x) ↦ a*|h| + x."""
    aut = automorphisms(n)
    if act.source != h or act.target != aut.group or not verify_hom(act):
        raise StructuralError("act is not a homomorphism h -> Aut(n)")
    order = n.order * h.order
    def enc(a, x):
        return a * h.order + x
    mul = [[0] * order for _ in range(order)]
    for a in n.elements():
        for x in h.elements():
            ax = aut.elements[act.map[x]].map
            for b in n.elements():
                for y in h.elements():
                    mul[enc(a, x)][enc(b, y)] = enc(n.mul[a][ax[b]], h.mul[x][y])
    return make_group(f"{n.name}:{h.name}", mul)


def isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    """True iff a bijective homomorphism a → b exists."""
    if a.order != b.order:
        return False
    if sorted(map(a.element_order, a.elements())) != sorted(map(b.element_order, b.elements())):
        return False
    return next(_isomorphism_images(a, b), None) is not None
