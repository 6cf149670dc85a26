"""Independent oracles for the test suite.

Everything here recomputes expected values by a route disjoint from the
library code it checks: full bijection searches, Smith normal forms of the
simplicial cochain complex, raw Cayley-table enumeration.
"""

from __future__ import annotations

import itertools
from math import gcd

import sympy
from sympy.matrices.normalforms import smith_normal_form

from gerbecoh.grp import FiniteGroup, make_group


def brute_force_automorphisms(g: FiniteGroup) -> list[tuple[int, ...]]:
    """All automorphism tables by filtering every bijection fixing 0."""
    out = []
    for perm in itertools.permutations(range(1, g.order)):
        table = (0,) + perm
        if all(table[g.mul[a][b]] == g.mul[table[a]][table[b]]
               for a in range(g.order) for b in range(g.order)):
            out.append(table)
    return sorted(out)


def conjugacy_class_count(g: FiniteGroup) -> int:
    seen = set()
    count = 0
    for x in g.elements():
        if x in seen:
            continue
        count += 1
        for a in g.elements():
            seen.add(g.conj(a, x))
    return count


def coboundary_matrix(nerve, k: int) -> sympy.Matrix:
    """Integer matrix of d^k: C^k -> C^(k+1) on the alternating complex.

    C^k has one generator per (k+1)-element face, in the nerve's face order.
    """
    rows = nerve.faces_of_size(k + 2)
    cols = nerve.faces_of_size(k + 1)
    col_index = {f: i for i, f in enumerate(cols)}
    mat = sympy.zeros(len(rows), len(cols))
    for r, face in enumerate(rows):
        for drop in range(len(face)):
            sub = face[:drop] + face[drop + 1:]
            mat[r, col_index[sub]] += (-1) ** drop
    return mat


def _mod_kernel_size(mat: sympy.Matrix, n: int) -> int:
    """Number of solutions of mat @ x = 0 over Z/n."""
    cols = mat.shape[1]
    if cols == 0:
        return 1
    if mat.shape[0] == 0 or mat.is_zero_matrix:
        return n ** cols
    d = smith_normal_form(mat)
    diag = [d[i, i] for i in range(min(d.shape)) if d[i, i] != 0]
    size = n ** (cols - len(diag))
    for v in diag:
        size *= gcd(int(abs(v)), n)
    return size


def homology_order(nerve, k: int, n: int) -> int:
    """|H^k(nerve; Z/n)| from Smith normal forms of the cochain complex."""
    dk = coboundary_matrix(nerve, k)
    ker = _mod_kernel_size(dk, n)
    if k == 0:
        im_prev = 1
    else:
        dprev = coboundary_matrix(nerve, k - 1)
        cols_prev = dprev.shape[1]
        im_prev = (n ** cols_prev) // _mod_kernel_size(dprev, n)
    assert ker % im_prev == 0
    return ker // im_prev


def all_groups_of_order(n: int) -> list[FiniteGroup]:
    """Every group on {0..n-1} with identity 0, up to isomorphism.

    Backtracking over Latin squares with an associativity filter; honest but
    only sensible for n <= 6.
    """
    from gerbecoh.grp import isomorphic
    tables = []
    grid = [[-1] * n for _ in range(n)]
    for i in range(n):
        grid[0][i] = i
        grid[i][0] = i

    def assoc_ok(a, b):
        # check triples whose entries are all known
        for x in range(n):
            ab = grid[a][b]
            if grid[b][x] != -1 and grid[ab][x] != -1 and grid[a][grid[b][x]] != -1:
                if grid[ab][x] != grid[a][grid[b][x]]:
                    return False
            if grid[x][a] != -1 and grid[grid[x][a]][b] != -1 and grid[x][ab] != -1:
                if grid[grid[x][a]][b] != grid[x][ab]:
                    return False
        return True

    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def fill(pos):
        if pos == len(cells):
            tables.append(tuple(tuple(row) for row in grid))
            return
        i, j = cells[pos]
        used_row = {grid[i][c] for c in range(n) if grid[i][c] != -1}
        used_col = {grid[r][j] for r in range(n) if grid[r][j] != -1}
        for v in range(n):
            if v in used_row or v in used_col:
                continue
            grid[i][j] = v
            if assoc_ok(i, j):
                fill(pos + 1)
            grid[i][j] = -1

    fill(0)
    groups = []
    for t in tables:
        g = make_group(f"ord{n}", t)
        # full associativity (the incremental filter is partial)
        if any(g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]]
               for a in range(n) for b in range(n) for c in range(n)):
            continue
        if not any(isomorphic(g, h) for h in groups):
            groups.append(g)
    return groups


def quotient_group(g: FiniteGroup, normal: frozenset) -> FiniteGroup:
    """Quotient of g by a normal subgroup given as a set of elements."""
    cosets = []
    elt_to_coset = {}
    for x in g.elements():
        if x in elt_to_coset:
            continue
        coset = frozenset(g.mul[x][h] for h in normal)
        idx = len(cosets)
        cosets.append(coset)
        for y in coset:
            elt_to_coset[y] = idx
    # identity coset first
    id_idx = elt_to_coset[0]
    if id_idx != 0:
        cosets[0], cosets[id_idx] = cosets[id_idx], cosets[0]
        elt_to_coset = {y: i for i, c in enumerate(cosets) for y in c}
    reps = [min(c) for c in cosets]
    mul = tuple(tuple(elt_to_coset[g.mul[reps[a]][reps[b]]]
                      for b in range(len(cosets))) for a in range(len(cosets)))
    return make_group(f"{g.name}/N", mul)


def subgroups(g: FiniteGroup) -> list[frozenset]:
    """All subgroups as element sets (order <= 12 scale)."""
    found = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        h = frontier.pop()
        for x in g.elements():
            if x in h:
                continue
            new = _closure(g, h | {x})
            if new not in found:
                found.add(new)
                frontier.append(new)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _closure(g: FiniteGroup, seed) -> frozenset:
    seen = set(seed) | {0}
    frontier = list(seen)
    while frontier:
        a = frontier.pop()
        for b in list(seen):
            for c in (g.mul[a][b], g.mul[b][a], g.inv[a]):
                if c not in seen:
                    seen.add(c)
                    frontier.append(c)
    return frozenset(seen)


def is_normal(g: FiniteGroup, sub: frozenset) -> bool:
    return all(g.conj(a, x) in sub for a in g.elements() for x in sub)
