import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gerbecoh.errors import StructuralError
from gerbecoh.grp import (FiniteGroup, GroupHom, automorphisms, cyclic, dihedral,
                          direct_product, group_diagnostic, identity_hom,
                          inner_conjugation, isomorphic, make_group,
                          minimal_generating_set, semidirect_product,
                          symmetric, trivial_group, verify_group, verify_hom)
from oracles import brute_force_automorphisms

CATALOG = [trivial_group(), cyclic(2), cyclic(3), cyclic(4), cyclic(5),
           cyclic(6), cyclic(7), cyclic(8),
           direct_product(cyclic(2), cyclic(2)),
           direct_product(cyclic(2), cyclic(4)),
           direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2))),
           symmetric(3), dihedral(4), direct_product(cyclic(2), cyclic(6)),
           dihedral(6), cyclic(12)]


def test_verify_group_examples():
    assert verify_group(cyclic(4))
    assert verify_group(trivial_group())
    # mutate one entry of the Z4 table: some axiom must fail
    mul = [list(r) for r in cyclic(4).mul]
    mul[1][2] = 0
    broken = FiniteGroup("bad", 4, tuple(tuple(r) for r in mul), cyclic(4).inv)
    assert not verify_group(broken)
    assert group_diagnostic(broken) is not None


def test_verify_group_structural_errors():
    with pytest.raises(StructuralError):
        verify_group(FiniteGroup("bad", 2, ((0, 1),), (0, 1)))
    with pytest.raises(StructuralError):
        verify_group(FiniteGroup("bad", 2, ((0, 1), (1, 5)), (0, 1)))


def test_associativity_mutation_found_by_diagnostic():
    mul = [list(r) for r in cyclic(4).mul]
    mul[2][3] = 2  # still identity-respecting rows? row 2 loses a value
    g = FiniteGroup("mut", 4, tuple(tuple(r) for r in mul), cyclic(4).inv)
    assert not verify_group(g)


def test_automorphism_counts():
    assert automorphisms(cyclic(3)).group.order == 2
    assert automorphisms(trivial_group()).group.order == 1
    a = automorphisms(symmetric(3))
    assert a.group.order == 6
    assert isomorphic(a.group, symmetric(3))
    assert automorphisms(cyclic(8)).group.order == 4


@pytest.mark.parametrize("g", [g for g in CATALOG if g.order <= 8])
def test_automorphisms_match_brute_force(g):
    ours = sorted(h.map for h in automorphisms(g).elements)
    assert ours == brute_force_automorphisms(g)


def test_automorphism_listing_identity_first_and_sorted():
    a = automorphisms(direct_product(cyclic(2), cyclic(2)))
    maps = [h.map for h in a.elements]
    assert maps[0] == tuple(range(4))
    assert maps == sorted(maps)
    assert a.group.order == 6  # GL(2, F2)


def test_aut_cyclic_prime():
    for p in (2, 3, 5, 7):
        assert automorphisms(cyclic(p)).group.order == p - 1


def test_inner_conjugation():
    s3 = symmetric(3)
    inn = inner_conjugation(s3)
    assert verify_hom(inn)
    assert len(set(inn.map)) == 6
    for g in (cyclic(4), direct_product(cyclic(2), cyclic(2))):
        assert len(set(inner_conjugation(g).map)) == 1


@pytest.mark.parametrize("g", [g for g in CATALOG if g.order <= 12])
def test_inner_image_times_center(g):
    inn = inner_conjugation(g)
    assert len(set(inn.map)) * len(g.center()) == g.order


def test_semidirect_products():
    z3, z2 = cyclic(3), cyclic(2)
    aut3 = automorphisms(z3)
    trivial_act = GroupHom(z2, aut3.group, (0, 0))
    dp = semidirect_product(z3, z2, trivial_act)
    assert verify_group(dp)
    assert isomorphic(dp, direct_product(z3, z2))
    inversion = GroupHom(z2, aut3.group, (0, 1))
    sd = semidirect_product(z3, z2, inversion)
    assert verify_group(sd)
    assert isomorphic(sd, symmetric(3))
    # G x| Aut(G) for G = Z3 has order 6
    holo = semidirect_product(z3, aut3.group, identity_hom(aut3.group))
    assert holo.order == 6
    assert verify_group(holo)


def test_semidirect_bad_action_rejected():
    z3, z2 = cyclic(3), cyclic(2)
    aut3 = automorphisms(z3)
    with pytest.raises(StructuralError):
        semidirect_product(z3, z2, GroupHom(z2, aut3.group, (1, 1)))


def test_semidirect_trivial_action_swaps():
    z3, z4 = cyclic(3), cyclic(4)
    a3, a4 = automorphisms(z3), automorphisms(z4)
    sd1 = semidirect_product(z3, z4, GroupHom(z4, a3.group, (0,) * 4))
    sd2 = semidirect_product(z4, z3, GroupHom(z3, a4.group, (0,) * 3))
    assert isomorphic(sd1, sd2)


def test_isomorphic():
    assert not isomorphic(cyclic(4), direct_product(cyclic(2), cyclic(2)))
    for g in CATALOG:
        assert isomorphic(g, g)
    assert not isomorphic(symmetric(3), cyclic(6))


def test_minimal_generating_set():
    for g in CATALOG:
        gens = minimal_generating_set(g)
        closure = {0}
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for x in gens:
                for b in (g.mul[a][x], g.mul[x][a]):
                    if b not in closure:
                        closure.add(b)
                        frontier.append(b)
        assert len(closure) == g.order


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([g for g in CATALOG if g.order > 1]), st.data())
def test_group_element_properties(g, data):
    a = data.draw(st.integers(0, g.order - 1))
    b = data.draw(st.integers(0, g.order - 1))
    assert g.inv[g.inv[a]] == a
    assert g.element_order(a) in [d for d in range(1, g.order + 1)
                                  if g.order % d == 0]
    assert g.element_order(g.conj(b, a)) == g.element_order(a)


def test_make_group_requires_inverses():
    with pytest.raises(StructuralError):
        make_group("bad", [[0, 1], [1, 1]])
