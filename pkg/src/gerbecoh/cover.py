"""Combinatorial nerves of finite covers.

A Nerve records which index sets have nonempty common intersection.  All
intersections are treated as connected, so a cochain carries one value per
ordered tuple; tuples with a repeated index are never stored and always
evaluate to the identity (normalized cochains).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import StructuralError


@dataclass(frozen=True)
class Nerve:
    index_count: int
    faces: tuple[tuple[int, ...], ...]  # sorted tuples, downward closed
    _face_set: frozenset = field(default=None, repr=False, compare=False, hash=False)
    _memo: dict = field(default=None, repr=False, compare=False, hash=False)

    def has_face(self, indices) -> bool:
        return tuple(sorted(set(indices))) in self._face_set

    def faces_of_size(self, k: int) -> list[tuple[int, ...]]:
        return [f for f in self.faces if len(f) == k]

    def otuples(self, k: int) -> list[tuple[int, ...]]:
        """Ordered k-tuples of distinct indices whose underlying set is a face."""
        key = ("o", k)
        if key not in self._memo:
            out = []
            for f in self.faces_of_size(k):
                out.extend(itertools.permutations(f))
            out.sort()
            self._memo[key] = out
        return self._memo[key]

    def itup(self, k: int) -> list[tuple[int, ...]]:
        """Increasing k-tuples (one per k-element face)."""
        return self.faces_of_size(k)

    def tuple_index(self, k: int) -> dict:
        key = ("i", k)
        if key not in self._memo:
            self._memo[key] = {t: i for i, t in enumerate(self.otuples(k))}
        return self._memo[key]

    def inc_index(self, k: int) -> dict:
        key = ("ii", k)
        if key not in self._memo:
            self._memo[key] = {t: i for i, t in enumerate(self.itup(k))}
        return self._memo[key]

    def support_tuples(self, k: int) -> list[tuple[int, ...]]:
        """All k-tuples, repeats allowed, whose support set is a face."""
        key = ("s", k)
        if key not in self._memo:
            self._memo[key] = [
                t for t in itertools.product(range(self.index_count), repeat=k)
                if tuple(sorted(set(t))) in self._face_set]
        return self._memo[key]

    def max_face_size(self) -> int:
        return max(len(f) for f in self.faces)


def _close_downward(faces) -> set[tuple[int, ...]]:
    closed = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        for k in range(1, len(f) + 1):
            closed.update(itertools.combinations(f, k))
    return closed


def make_nerve(index_count: int, faces) -> Nerve:
    """Normalize a face family: dedupe, sort, close downward, add singletons."""
    if index_count <= 0:
        raise StructuralError("nerve needs at least one index")
    closed = _close_downward(faces)
    closed.update((i,) for i in range(index_count))
    for f in closed:
        if any(not (0 <= i < index_count) for i in f):
            raise StructuralError(f"face {f} out of range")
    ordered = tuple(sorted(closed, key=lambda f: (len(f), f)))
    n = Nerve(index_count, ordered)
    object.__setattr__(n, "_face_set", frozenset(ordered))
    object.__setattr__(n, "_memo", {})
    return n


def nerve_from_cover(point_count: int, subsets) -> Nerve:
    """Nerve of a cover of {0..point_count-1}: faces = tuples with common points."""
    sets = [frozenset(s) for s in subsets]
    for s in sets:
        if any(not (0 <= x < point_count) for x in s):
            raise StructuralError("cover subset out of range")
    union = frozenset().union(*sets) if sets else frozenset()
    if union != frozenset(range(point_count)):
        raise StructuralError("subsets do not cover the base set")
    faces = []
    for k in range(1, len(sets) + 1):
        layer = []
        for combo in itertools.combinations(range(len(sets)), k):
            inter = sets[combo[0]]
            for i in combo[1:]:
                inter = inter & sets[i]
            if inter:
                layer.append(combo)
        if not layer:
            break  # larger intersections are also empty
        faces.extend(layer)
    return make_nerve(len(sets), faces)


def standard_nerve(kind: str, m: int = 0) -> Nerve:
    """Builtin nerves: circle(m), simplex(m), sphere2, sphere(d)."""
    if kind == "circle":
        if m < 3:
            raise StructuralError("circle(m) needs m >= 3")
        pairs = [(i, (i + 1) % m) for i in range(m)]
        return make_nerve(m, pairs)
    if kind == "simplex":
        if m < 1:
            raise StructuralError("simplex(m) needs m >= 1")
        return make_nerve(m, [tuple(range(m))])
    if kind == "sphere2":
        return standard_nerve("sphere", 2)
    if kind == "sphere":
        # boundary of the (d+1)-simplex: proper nonempty subsets of d+2 indices
        if m < 1:
            raise StructuralError("sphere(d) needs d >= 1")
        n = m + 2
        faces = itertools.combinations(range(n), n - 1)
        return make_nerve(n, faces)
    raise StructuralError(f"unknown standard nerve kind {kind!r}")


def tuples(nerve: Nerve, k: int) -> list[tuple[int, ...]]:
    """Ordered k-tuples of distinct indices carried by the nerve, lex order."""
    if k < 1:
        raise StructuralError("tuple length must be >= 1")
    return nerve.otuples(k)


def cover_realization(nerve: Nerve):
    """A canonical finite cover with this nerve: one base point per face.

    Returns (point_count, subsets) with subsets[i] = points of faces containing i.
    """
    points = {f: x for x, f in enumerate(nerve.faces)}
    subsets = [frozenset(x for f, x in points.items() if i in f)
               for i in range(nerve.index_count)]
    return len(nerve.faces), subsets
