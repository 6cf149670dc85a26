import itertools

import pytest

from gerbecoh.errors import CapacityError, StructuralError
from gerbecoh.ext import (ExtensionCocycle, ExtensionWitness, build_extension,
                          classify_extensions, cocycle_from_extension,
                          extensions_equivalent, verify_extension_cocycle,
                          verify_witness)
from gerbecoh.grp import (GroupHom, automorphisms, cyclic, direct_product,
                          isomorphic, symmetric, trivial_group)
from oracles import all_groups_of_order, is_normal, quotient_group, subgroups

Z2, Z3, Z4 = cyclic(2), cyclic(3), cyclic(4)


def test_verify_examples():
    trivial = ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 0)))
    assert verify_extension_cocycle(trivial)
    z4_coc = ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 1)))
    assert verify_extension_cocycle(z4_coc)
    corrupt = ExtensionCocycle(Z2, Z2, (0, 0), ((0, 1), (0, 1)))
    assert not verify_extension_cocycle(corrupt)  # breaks normalization


def test_verify_rejects_unnormalized_lam():
    assert not verify_extension_cocycle(
        ExtensionCocycle(Z3, Z2, (1, 0), ((0, 0), (0, 0))))


def test_build_extension_examples():
    # trivial cocycle -> direct product
    w = build_extension(ExtensionCocycle(Z3, Z2, (0, 0), ((0, 0), (0, 0))))
    assert isomorphic(w.h, direct_product(Z3, Z2))
    assert verify_witness(w)
    # (Z2, Z2, trivial lam, g(1,1)=1) -> Z4
    w2 = build_extension(ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 1))))
    assert isomorphic(w2.h, Z4)
    # (Z3, Z2, lam = inversion, g = e) -> S3
    w3 = build_extension(ExtensionCocycle(Z3, Z2, (0, 1), ((0, 0), (0, 0))))
    assert isomorphic(w3.h, symmetric(3))


def test_classify_z2_z2():
    reps, wits, iso_count = classify_extensions(Z2, Z2)
    assert len(reps) == 2 and iso_count == 2
    built = [w.h for w in wits]
    assert any(isomorphic(h, Z4) for h in built)
    assert any(isomorphic(h, direct_product(Z2, Z2)) for h in built)


def test_classify_z3_z2():
    reps, wits, iso_count = classify_extensions(Z3, Z2)
    assert len(reps) == 2 and iso_count == 2
    built = [w.h for w in wits]
    assert any(isomorphic(h, cyclic(6)) for h in built)
    assert any(isomorphic(h, symmetric(3)) for h in built)


def test_classify_trivial_k():
    reps, wits, iso_count = classify_extensions(symmetric(3), trivial_group())
    assert len(reps) == 1 and iso_count == 1
    assert isomorphic(wits[0].h, symmetric(3))


@pytest.mark.parametrize("g,k,order", [(Z2, Z2, 4), (Z3, Z2, 6)])
def test_classify_against_group_catalog_oracle(g, k, order):
    """Every group of the right order with a normal copy of G and quotient K
    must appear among the built groups, and vice versa."""
    _, wits, _ = classify_extensions(g, k)
    built_types = []
    for w in wits:
        if not any(isomorphic(w.h, t) for t in built_types):
            built_types.append(w.h)
    oracle_types = []
    for h in all_groups_of_order(order):
        fits = False
        for sub in subgroups(h):
            if len(sub) != g.order or not is_normal(h, sub):
                continue
            sub_group = _subgroup_table(h, sub)
            if isomorphic(sub_group, g) and isomorphic(quotient_group(h, sub), k):
                fits = True
                break
        if fits:
            oracle_types.append(h)
    assert len(built_types) == len(oracle_types)
    for t in oracle_types:
        assert any(isomorphic(t, b) for b in built_types)


def _subgroup_table(h, sub):
    from gerbecoh.grp import make_group
    elems = sorted(sub)
    if elems[0] != 0:
        raise AssertionError("subgroup must contain the identity")
    pos = {e: i for i, e in enumerate(elems)}
    mul = tuple(tuple(pos[h.mul[a][b]] for b in elems) for a in elems)
    return make_group("sub", mul)


def test_cocycle_from_extension_z4():
    w = build_extension(ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 1))))
    # sections of project with s(0) = 0: odd elements project to 1
    odd = [x for x in range(4) if w.project.map[x] == 1]
    for s1 in odd:
        c = cocycle_from_extension(w, (0, s1))
        assert verify_extension_cocycle(c)
        assert c.gmap[1][1] != 0  # nonsplit: nontrivial value
    c1 = cocycle_from_extension(w, (0, odd[0]))
    c2 = cocycle_from_extension(w, (0, odd[1]))
    assert extensions_equivalent(c1, c2)


def test_cocycle_from_extension_split():
    dp = direct_product(Z3, Z2)
    embed = GroupHom(Z3, dp, tuple(x * 2 for x in range(3)))
    project = GroupHom(dp, Z2, tuple(a % 2 for a in range(6)))
    w = ExtensionWitness(dp, embed, project)
    assert verify_witness(w)
    c = cocycle_from_extension(w, (0, 1))  # homomorphic section
    assert all(v == 0 for row in c.gmap for v in row)


def test_cocycle_from_extension_invalid_section():
    w = build_extension(ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 1))))
    with pytest.raises(StructuralError):
        cocycle_from_extension(w, (0, 2))  # projects to 0, not 1
    with pytest.raises(StructuralError):
        cocycle_from_extension(w, (1, 1))  # does not fix the identity


@pytest.mark.parametrize("g,k", [(Z2, Z2), (Z3, Z2), (Z4, Z2), (Z2, Z4),
                                 (Z2, direct_product(Z2, Z2))])
def test_roundtrip_all_cocycles(g, k):
    """build then re-extract lands in the same class, |G|*|K| <= 16."""
    assert g.order * k.order <= 16
    aut = automorphisms(g)
    free = k.order - 1
    nonid = [a for a in k.elements() if a != 0]
    count = 0
    for lam_tail in itertools.product(range(aut.group.order), repeat=free):
        lam = (0,) + lam_tail
        for flat in itertools.product(g.elements(), repeat=free * free):
            gmap = [[0] * k.order for _ in range(k.order)]
            pos = 0
            for a in nonid:
                for b in nonid:
                    gmap[a][b] = flat[pos]
                    pos += 1
            c = ExtensionCocycle(g, k, lam, tuple(tuple(r) for r in gmap))
            if not verify_extension_cocycle(c, aut):
                continue
            count += 1
            w = build_extension(c, aut)
            assert verify_witness(w)
            back = cocycle_from_extension(w, tuple(range(0, g.order * k.order,
                                                         1))[:k.order])
            # canonical section: s(a) = enc(0, a) = a
            assert extensions_equivalent(c, back)
    assert count >= 1


def test_witness_normal_subgroup_property():
    for c in (ExtensionCocycle(Z2, Z2, (0, 0), ((0, 0), (0, 1))),
              ExtensionCocycle(Z3, Z2, (0, 1), ((0, 0), (0, 0)))):
        w = build_extension(c)
        image = frozenset(w.embed.map)
        assert is_normal(w.h, image)
        assert isomorphic(quotient_group(w.h, image), c.k)


def test_classify_deterministic():
    a = classify_extensions(Z3, Z2)
    b = classify_extensions(Z3, Z2)
    assert [r.key() for r in a[0]] == [r.key() for r in b[0]]


def test_budget():
    with pytest.raises(CapacityError):
        classify_extensions(symmetric(3), cyclic(4), budget=100)
